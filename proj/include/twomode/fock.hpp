// fock.hpp: Truncated two-mode Fock space, the (1,2) <-> (+,-) mode rotation,
// and partial transposition with respect to mode 1.
//
// Truncation is by total quanta n1 + n2 <= M. States are enumerated
// lexicographically by (total, n1), so the basis splits into contiguous
// blocks of fixed total quanta N, each of size N + 1.

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace twomode {

using Index = Eigen::Index;
using cplx = std::complex<double>;

// Occupation numbers of a two-mode Fock state. The same type labels both the
// physical modes (n1, n2) and the rotated modes (n+, n-); a BasisTag says which.
struct FockIndex {
    int n1{0};
    int n2{0};

    constexpr int total() const noexcept { return n1 + n2; }
    friend constexpr bool operator==(const FockIndex&, const FockIndex&) = default;
};

enum class BasisTag { Modes12, ModesPM };

inline BasisTag opposite(BasisTag tag) noexcept {
    return tag == BasisTag::Modes12 ? BasisTag::ModesPM : BasisTag::Modes12;
}

inline const char* to_string(BasisTag tag) noexcept {
    return tag == BasisTag::Modes12 ? "modes12" : "modes+-";
}

struct TruncationPolicy {
    int max_total_quanta{0};
    double tail_tolerance{1e-8};

    void validate() const {
        if (max_total_quanta < 0) {
            throw std::invalid_argument("TruncationPolicy: max_total_quanta must be >= 0");
        }
        if (!(tail_tolerance >= 0.0 && tail_tolerance <= 1.0)) {
            throw std::invalid_argument("TruncationPolicy: tail_tolerance must lie in [0, 1]");
        }
    }
};

inline constexpr Index fock_dimension(int max_total_quanta) noexcept {
    return static_cast<Index>(max_total_quanta + 1) * (max_total_quanta + 2) / 2;
}

inline constexpr Index block_offset(int total) noexcept {
    return static_cast<Index>(total) * (total + 1) / 2;
}

inline constexpr Index fock_index(FockIndex s) noexcept {
    return block_offset(s.total()) + s.n1;
}

namespace detail {

using int128 = __int128;

// Largest total quanta for which the rotation coefficients are computed from
// exact 128-bit binomial sums. C(130, 65) < 2^127, and the signed sums are
// bounded by C(n, k), so 120 leaves margin.
inline constexpr int kExactQuanta = 120;

inline const std::vector<std::vector<int128>>& binomial_table() {
    static const std::vector<std::vector<int128>> table = [] {
        std::vector<std::vector<int128>> t(kExactQuanta + 1);
        for (int n = 0; n <= kExactQuanta; ++n) {
            t[n].assign(n + 1, 1);
            for (int k = 1; k < n; ++k) t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
        }
        return t;
    }();
    return table;
}

inline long double to_long_double(int128 v) {
    const bool neg = v < 0;
    if (neg) v = -v;
    const auto hi = static_cast<std::uint64_t>(v >> 64);
    const auto lo = static_cast<std::uint64_t>(v);
    long double r = static_cast<long double>(hi) * 18446744073709551616.0L +
                    static_cast<long double>(lo);
    return neg ? -r : r;
}

// Block of fixed total quanta N via exact binomial sums:
//   a_{k, N-k}(n1, n2) = S_k sqrt(C(N, n1) / C(N, k)) / 2^{N/2},
//   S_k = sum_{i+j=k} C(n1, i) C(n2, j) (-1)^{n2-j},
// with b1† = (b+† + b-†)/√2 and b2† = (b+† - b-†)/√2.
inline Eigen::MatrixXd rotation_block_exact(int total) {
    const auto& C = binomial_table();
    const int N = total;
    Eigen::MatrixXd block(N + 1, N + 1);
    const long double scale = std::pow(0.5L, 0.5L * N);
    for (int n1 = 0; n1 <= N; ++n1) {
        const int n2 = N - n1;
        for (int k = 0; k <= N; ++k) {
            int128 sum = 0;
            const int i_lo = std::max(0, k - n2);
            const int i_hi = std::min(n1, k);
            for (int i = i_lo; i <= i_hi; ++i) {
                const int j = k - i;
                const int128 term = C[n1][i] * C[n2][j];
                sum += ((n2 - j) % 2 == 0) ? term : -term;
            }
            const long double ratio = to_long_double(C[N][n1]) / to_long_double(C[N][k]);
            block(k, n1) = static_cast<double>(to_long_double(sum) * std::sqrt(ratio) * scale);
        }
    }
    return block;
}

// Same block as exp(π/4 X) with X = b-†b+ - b+†b- restricted to total N,
// followed by the (-1)^{n2} reflection. Used beyond the exact range.
inline Eigen::MatrixXd rotation_block_generator(int total) {
    const int N = total;
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(N + 1, N + 1);
    for (int k = 0; k <= N; ++k) {
        if (k > 0) X(k - 1, k) += std::sqrt(static_cast<double>(k) * (N - k + 1));
        if (k < N) X(k + 1, k) -= std::sqrt(static_cast<double>(k + 1) * (N - k));
    }
    Eigen::MatrixXd block = (0.25 * std::numbers::pi * X).exp();
    for (int n1 = 0; n1 <= N; ++n1) {
        if ((N - n1) % 2 != 0) block.col(n1) *= -1.0;
    }
    return block;
}

inline Eigen::MatrixXd rotation_block(int total) {
    return total <= kExactQuanta ? rotation_block_exact(total) : rotation_block_generator(total);
}

}  // namespace detail

// Expansion of |n1, n2>_{12} over |n+, n->_{±}. Only n+ + n- = n1 + n2 appear.
inline std::vector<std::pair<FockIndex, double>> pm_coefficients(int n1, int n2) {
    if (n1 < 0 || n2 < 0) throw std::invalid_argument("pm_coefficients: occupations must be >= 0");
    const int N = n1 + n2;
    const Eigen::MatrixXd block = detail::rotation_block(N);
    std::vector<std::pair<FockIndex, double>> out;
    out.reserve(N + 1);
    for (int k = N; k >= 0; --k) out.push_back({FockIndex{k, N - k}, block(k, n1)});
    return out;
}

// Enumerated basis and cached rotation blocks for one truncation level.
// Immutable after construction; shared through FockBasis::get.
class FockBasis {
public:
    explicit FockBasis(int max_total_quanta) : max_quanta_(max_total_quanta) {
        if (max_total_quanta < 0) throw std::invalid_argument("FockBasis: negative truncation");
        states_.reserve(static_cast<std::size_t>(fock_dimension(max_total_quanta)));
        blocks_.reserve(static_cast<std::size_t>(max_total_quanta + 1));
        for (int N = 0; N <= max_total_quanta; ++N) {
            for (int n1 = 0; n1 <= N; ++n1) states_.push_back({n1, N - n1});
            blocks_.push_back(detail::rotation_block(N));
        }
    }

    static std::shared_ptr<const FockBasis> get(int max_total_quanta) {
        static std::mutex mutex;
        static std::map<int, std::shared_ptr<const FockBasis>> cache;
        std::lock_guard lock(mutex);
        auto& slot = cache[max_total_quanta];
        if (!slot) slot = std::make_shared<const FockBasis>(max_total_quanta);
        return slot;
    }

    int max_quanta() const noexcept { return max_quanta_; }
    Index dimension() const noexcept { return static_cast<Index>(states_.size()); }
    const std::vector<FockIndex>& states() const noexcept { return states_; }
    FockIndex state(Index i) const { return states_.at(static_cast<std::size_t>(i)); }

    Index index(FockIndex s) const {
        if (s.n1 < 0 || s.n2 < 0 || s.total() > max_quanta_) {
            throw std::out_of_range("FockBasis: state (" + std::to_string(s.n1) + "," +
                                    std::to_string(s.n2) + ") outside truncation");
        }
        return fock_index(s);
    }

    bool contains(FockIndex s) const noexcept {
        return s.n1 >= 0 && s.n2 >= 0 && s.total() <= max_quanta_;
    }

    // Real orthogonal (N+1)x(N+1) block; symmetric and involutive, so it maps
    // in either direction. Entry (k, n1) is a_{k, N-k}(n1, N-n1).
    const Eigen::MatrixXd& rotation(int total) const { return blocks_.at(static_cast<std::size_t>(total)); }

    // Full D x D rotation, block diagonal by total quanta.
    Eigen::MatrixXd rotation_matrix() const {
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(dimension(), dimension());
        for (int N = 0; N <= max_quanta_; ++N) T.block(block_offset(N), block_offset(N), N + 1, N + 1) = blocks_[N];
        return T;
    }

private:
    int max_quanta_;
    std::vector<FockIndex> states_;
    std::vector<Eigen::MatrixXd> blocks_;
};

// Truncated two-mode density matrix over the enumerated basis.
class TwoModeDensity {
public:
    TwoModeDensity(TruncationPolicy policy, BasisTag basis, Eigen::MatrixXcd matrix)
        : policy_(policy), basis_(basis), fock_(FockBasis::get(policy.max_total_quanta)) {
        policy_.validate();
        const Index d = fock_->dimension();
        if (matrix.rows() != d || matrix.cols() != d) {
            throw std::invalid_argument("TwoModeDensity: matrix is " + std::to_string(matrix.rows()) + "x" +
                                        std::to_string(matrix.cols()) + ", basis needs " + std::to_string(d));
        }
        // Hermitian by construction.
        matrix_ = 0.5 * (matrix + matrix.adjoint());
    }

    static TwoModeDensity projector(TruncationPolicy policy, BasisTag basis, const Eigen::VectorXcd& psi) {
        return TwoModeDensity(policy, basis, psi * psi.adjoint());
    }

    const TruncationPolicy& policy() const noexcept { return policy_; }
    BasisTag basis() const noexcept { return basis_; }
    const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
    const FockBasis& fock() const noexcept { return *fock_; }
    Index dimension() const noexcept { return matrix_.rows(); }

    cplx entry(FockIndex row, FockIndex col) const { return matrix_(fock_->index(row), fock_->index(col)); }
    double trace() const { return matrix_.trace().real(); }

    // True when no coherence links different total-quanta blocks.
    bool is_block_diagonal() const {
        const int M = policy_.max_total_quanta;
        for (int N = 0; N <= M; ++N) {
            for (int K = 0; K <= M; ++K) {
                if (K == N) continue;
                if (!matrix_.block(block_offset(N), block_offset(K), N + 1, K + 1).isZero(0.0)) return false;
            }
        }
        return true;
    }

private:
    TruncationPolicy policy_;
    BasisTag basis_;
    std::shared_ptr<const FockBasis> fock_;
    Eigen::MatrixXcd matrix_;
};

// Conjugation by the mode rotation; the tag flips. The rotation is its own
// inverse, so the same map serves both directions.
inline TwoModeDensity change_basis(const TwoModeDensity& rho) {
    const FockBasis& fb = rho.fock();
    const int M = fb.max_quanta();
    const Eigen::MatrixXcd& in = rho.matrix();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(in.rows(), in.cols());
    for (int N = 0; N <= M; ++N) {
        const Eigen::MatrixXd& TN = fb.rotation(N);
        for (int K = 0; K <= M; ++K) {
            const auto blk = in.block(block_offset(N), block_offset(K), N + 1, K + 1);
            if (blk.isZero(0.0)) continue;
            const Eigen::MatrixXd& TK = fb.rotation(K);
            out.block(block_offset(N), block_offset(K), N + 1, K + 1) =
                TN.cast<cplx>() * blk * TK.transpose().cast<cplx>();
        }
    }
    return TwoModeDensity(rho.policy(), opposite(rho.basis()), std::move(out));
}

// Operator on the full product space {0..M} x {0..M}. The partial transpose of
// a triangle-truncated state generally has support outside the triangle, so it
// lives here. Index of (n1, n2) is n1 * (M + 1) + n2.
struct ProductOperator {
    int max_quanta{0};
    Eigen::MatrixXcd matrix;

    Index side() const noexcept { return max_quanta + 1; }
    Index index(int n1, int n2) const noexcept { return static_cast<Index>(n1) * side() + n2; }
};

inline ProductOperator embed_product(const TwoModeDensity& rho) {
    if (rho.basis() != BasisTag::Modes12) {
        throw std::invalid_argument("embed_product: density must be in the Modes12 basis");
    }
    const int M = rho.policy().max_total_quanta;
    ProductOperator op{M, Eigen::MatrixXcd::Zero((M + 1) * (M + 1), (M + 1) * (M + 1))};
    const auto& states = rho.fock().states();
    for (Index i = 0; i < rho.dimension(); ++i) {
        for (Index j = 0; j < rho.dimension(); ++j) {
            const FockIndex a = states[static_cast<std::size_t>(i)];
            const FockIndex b = states[static_cast<std::size_t>(j)];
            op.matrix(op.index(a.n1, a.n2), op.index(b.n1, b.n2)) = rho.matrix()(i, j);
        }
    }
    return op;
}

// out((a1,a2),(b1,b2)) = in((b1,a2),(a1,b2))
inline ProductOperator partial_transpose(const ProductOperator& in) {
    const int S = in.max_quanta + 1;
    ProductOperator out{in.max_quanta, Eigen::MatrixXcd::Zero(in.matrix.rows(), in.matrix.cols())};
    for (int a1 = 0; a1 < S; ++a1)
        for (int a2 = 0; a2 < S; ++a2)
            for (int b1 = 0; b1 < S; ++b1)
                for (int b2 = 0; b2 < S; ++b2)
                    out.matrix(out.index(a1, a2), out.index(b1, b2)) = in.matrix(in.index(b1, a2), in.index(a1, b2));
    return out;
}

// Partial transpose with respect to mode 1. Rejects ± input: the transpose is
// only local in the physical-mode factorization.
inline ProductOperator partial_transpose(const TwoModeDensity& rho) {
    if (rho.basis() != BasisTag::Modes12) {
        throw std::invalid_argument("partial_transpose: density is tagged modes+-, transpose needs modes12");
    }
    return partial_transpose(embed_product(rho));
}

}  // namespace twomode
