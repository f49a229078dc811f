// entanglement.hpp: Negativity and linear entropy of the two-mode state.
//
// Negativity is the sum of |λ| over eigenvalues λ < -1e-12 of the partial
// transpose (no factor 2), so a Bell-like state scores ½.
//
// The partial transpose of a state with no coherence between different total
// quanta is block diagonal in the difference d = n1 - n2. Both the dense path
// and the ensemble path below exploit that; the ensemble path never builds the
// full matrix.

#pragma once

#include "twomode/dynamics.hpp"
#include "twomode/parallel.hpp"

#include <algorithm>
#include <numeric>
#include <variant>
#include <vector>

namespace twomode {

inline constexpr double kNegativeEigenvalueThreshold = 1e-12;

struct NegativityResult {
    double value{0.0};
    std::vector<double> negative_eigenvalues;
    Index dimension{0};
};

namespace detail {

inline void collect_negative(const Eigen::VectorXd& eigenvalues, NegativityResult& out, int multiplicity = 1) {
    for (Index k = 0; k < eigenvalues.size(); ++k) {
        const double lam = eigenvalues(k);
        if (lam < -kNegativeEigenvalueThreshold) {
            for (int m = 0; m < multiplicity; ++m) out.negative_eigenvalues.push_back(lam);
        }
    }
}

template <typename Matrix>
Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian eigensolver did not converge");
    return solver.eigenvalues();
}

inline void finish(NegativityResult& out) {
    std::sort(out.negative_eigenvalues.begin(), out.negative_eigenvalues.end());
    // Sum from the smallest magnitude up for a reproducible total.
    out.value = 0.0;
    for (auto it = out.negative_eigenvalues.rbegin(); it != out.negative_eigenvalues.rend(); ++it) out.value -= *it;
}

}  // namespace detail

// Negativity of the (M+1)² product-space operator given as a partial transpose.
inline NegativityResult negativity_of_transpose(const ProductOperator& pt) {
    NegativityResult out;
    out.dimension = pt.matrix.rows();
    detail::collect_negative(detail::hermitian_eigenvalues(pt.matrix), out);
    detail::finish(out);
    return out;
}

inline NegativityResult negativity(const TwoModeDensity& input) {
    const TwoModeDensity rho = input.basis() == BasisTag::Modes12 ? input : change_basis(input);
    const ProductOperator pt = partial_transpose(rho);
    if (!rho.is_block_diagonal()) return negativity_of_transpose(pt);

    NegativityResult out;
    out.dimension = pt.matrix.rows();
    const int M = pt.max_quanta;
    for (int d = -M; d <= M; ++d) {
        const int size = M + 1 - std::abs(d);
        std::vector<Index> rows;
        rows.reserve(static_cast<std::size_t>(size));
        for (int r = 0; r < size; ++r) {
            rows.push_back(d >= 0 ? pt.index(r + d, r) : pt.index(r, r - d));
        }
        Eigen::MatrixXcd blk(size, size);
        for (int i = 0; i < size; ++i)
            for (int j = 0; j < size; ++j) blk(i, j) = pt.matrix(rows[i], rows[j]);
        detail::collect_negative(detail::hermitian_eigenvalues(blk), out);
    }
    detail::finish(out);
    return out;
}

// Ensemble diagonal in the ± basis with weights w over the enumerated basis.
// In the physical basis such a state is real, block diagonal by total quanta
// and symmetric under the mode swap; the d and -d blocks of its partial
// transpose are then identical matrices.
class PlusDiagonalNegativity {
public:
    explicit PlusDiagonalNegativity(int max_total_quanta)
        : fock_(FockBasis::get(max_total_quanta)) {}

    NegativityResult operator()(const Eigen::VectorXd& weights) const {
        const FockBasis& fb = *fock_;
        const int M = fb.max_quanta();
        if (weights.size() != fb.dimension()) throw std::invalid_argument("PlusDiagonalNegativity: weight size mismatch");

        // Physical-basis blocks rho_N[n1][m1].
        std::vector<Eigen::MatrixXd> rho(static_cast<std::size_t>(M + 1));
        for (int N = 0; N <= M; ++N) {
            const Eigen::MatrixXd& T = fb.rotation(N);
            const auto w = weights.segment(block_offset(N), N + 1);
            rho[N].noalias() = T.transpose() * w.asDiagonal() * T;
        }

        NegativityResult out;
        out.dimension = static_cast<Index>(M + 1) * (M + 1);
        for (int d = 0; d <= M; ++d) {
            const int size = M + 1 - d;
            // Entry (r, r') = rho_N[r' + d][r + d] with N = r + r' + d; zero when N > M.
            Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(size, size);
            for (int r = 0; r < size; ++r)
                for (int rp = 0; rp + r + d <= M; ++rp) blk(r, rp) = rho[r + rp + d](rp + d, r + d);
            detail::collect_negative(detail::hermitian_eigenvalues(blk), out, d == 0 ? 1 : 2);
        }
        detail::finish(out);
        return out;
    }

private:
    std::shared_ptr<const FockBasis> fock_;
};

// Closed form for the resonant vacuum: |½c² - ½√(c⁴ + s⁴)|, c = cos γt, s = sin γt.
inline double vacuum_negativity_closed(double t, const JCParams& p) {
    if (!p.resonant()) throw std::invalid_argument("vacuum_negativity_closed: requires delta == 0");
    const double c2 = std::pow(std::cos(p.gamma * t), 2);
    const double s2 = std::pow(std::sin(p.gamma * t), 2);
    return std::abs(0.5 * c2 - 0.5 * std::sqrt(c2 * c2 + s2 * s2));
}

// 1 - Tr(ρ₁²) with ρ₁ = Tr₂ ρ.
inline double linear_entropy(const TwoModeDensity& rho) {
    if (rho.basis() != BasisTag::Modes12) throw std::invalid_argument("linear_entropy: density must be in modes12");
    const int M = rho.policy().max_total_quanta;
    Eigen::MatrixXcd reduced = Eigen::MatrixXcd::Zero(M + 1, M + 1);
    for (int a1 = 0; a1 <= M; ++a1)
        for (int b1 = 0; b1 <= M; ++b1)
            for (int n2 = 0; n2 + std::max(a1, b1) <= M; ++n2)
                reduced(a1, b1) += rho.entry({a1, n2}, {b1, n2});
    return 1.0 - (reduced * reduced).trace().real();
}

// Trace distance ½ Σ|λ(ρ - σ)|.
inline double trace_distance(const TwoModeDensity& a, const TwoModeDensity& b) {
    if (a.policy().max_total_quanta != b.policy().max_total_quanta) {
        throw std::invalid_argument("trace_distance: truncation mismatch");
    }
    const TwoModeDensity bb = a.basis() == b.basis() ? b : change_basis(b);
    const Eigen::VectorXd lam = detail::hermitian_eigenvalues(Eigen::MatrixXcd(a.matrix() - bb.matrix()));
    return 0.5 * lam.cwiseAbs().sum();
}

// ------------------------------------------------------------ time series --

struct Vacuum {};
using InitialState = std::variant<Vacuum, ThermalSpec>;

struct SeriesPoint {
    double t{0.0};
    double negativity{0.0};
    std::optional<double> linear_entropy;
};

// Reduced two-mode state of the evolved vacuum (qubit excited), physical basis.
inline TwoModeDensity evolved_vacuum(double t, const JCParams& p) {
    const TruncationPolicy policy{1, 0.0};
    return change_basis(reduced_boson_state(evolve_excited_basis(0, 0, t, p, policy)));
}

// Negativity at one instant; the thermal route stays blockwise.
class NegativityEvaluator {
public:
    NegativityEvaluator(InitialState initial, JCParams params)
        : initial_(std::move(initial)), params_(params) {
        params_.validate();
        if (const auto* spec = std::get_if<ThermalSpec>(&initial_)) {
            spec->validate();
            ensemble_.emplace(spec->policy.max_total_quanta);
        }
    }

    bool pure() const noexcept { return std::holds_alternative<Vacuum>(initial_); }
    const JCParams& params() const noexcept { return params_; }

    SeriesPoint operator()(double t) const {
        if (pure()) {
            const TwoModeDensity rho = evolved_vacuum(t, params_);
            return SeriesPoint{t, negativity(rho).value, linear_entropy(rho)};
        }
        const auto& spec = std::get<ThermalSpec>(initial_);
        return SeriesPoint{t, (*ensemble_)(evolve_thermal_weights(spec, t, params_)).value, std::nullopt};
    }

private:
    InitialState initial_;
    JCParams params_;
    std::optional<PlusDiagonalNegativity> ensemble_;
};

inline std::vector<double> uniform_grid(double t_max, int steps) {
    if (steps < 1 || !(t_max > 0.0)) throw std::invalid_argument("uniform_grid: need steps >= 1 and t_max > 0");
    std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k) grid[k] = t_max * k / steps;
    return grid;
}

inline void validate_grid(const std::vector<double>& grid, const char* who) {
    if (grid.empty()) throw std::invalid_argument(std::string(who) + ": grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument(std::string(who) + ": grid must be ascending");
    }
}

// Evolve -> reduce (or ensemble) -> negativity at every grid time. S_L is
// reported for the pure vacuum run only.
inline std::vector<SeriesPoint> negativity_timeseries(const InitialState& initial, const JCParams& p,
                                                      const std::vector<double>& grid,
                                                      unsigned threads = default_threads()) {
    validate_grid(grid, "negativity_timeseries");
    const NegativityEvaluator eval(initial, p);
    return parallel_map(grid.size(), [&](std::size_t i) { return eval(grid[i]); }, threads);
}

// Index of the first interior local maximum reaching min_height, or nullopt.
// A positive min_height skips bumps at the level of the truncated tail mass.
inline std::optional<std::size_t> first_peak(const std::vector<SeriesPoint>& series, double min_height = 0.0) {
    for (std::size_t i = 1; i + 1 < series.size(); ++i) {
        const double v = series[i].negativity;
        if (v >= min_height && v > series[i - 1].negativity && v >= series[i + 1].negativity) return i;
    }
    return std::nullopt;
}

// Angular frequency 2π / (mean spacing) of the instants where a nonnegative
// series touches zero: sampled local minima below zero_level.
inline double oscillation_frequency_from_zeros(const std::vector<SeriesPoint>& series, double zero_level = 1e-6) {
    std::vector<double> zeros;
    for (std::size_t i = 1; i + 1 < series.size(); ++i) {
        const double v = series[i].negativity;
        if (v <= zero_level && v <= series[i - 1].negativity && v < series[i + 1].negativity) {
            zeros.push_back(series[i].t);
        }
    }
    if (zeros.size() < 2) throw std::runtime_error("oscillation_frequency_from_zeros: fewer than two zeros");
    const double spacing = (zeros.back() - zeros.front()) / static_cast<double>(zeros.size() - 1);
    return 2.0 * std::numbers::pi / spacing;
}

}  // namespace twomode
