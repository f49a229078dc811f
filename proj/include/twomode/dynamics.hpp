// dynamics.hpp: Two-mode Jaynes–Cummings evolution.
//
// Only the bright mode b+ = (b1 + b2)/√2 couples to the qubit. Within each
// excitation block {|e, n+, n->, |g, n+ + 1, n->} the evolution is a two-level
// Rabi rotation with half frequency Ω_n = ½√(Δ² + 4γ²(n+1)), n = n+.
//
// Phase conventions (only phase-invariant quantities are compared against the
// exact propagator):
//   Δ = 0:  |e,n> -> c_n |e,n> - i s_n |g,n+1>,  c_n = cos Ω_n t,  s_n = sin Ω_n t
//   Δ ≠ 0:  |e,n> -> c_n |e,n> +   s_n |g,n+1>,  with the detuned c_n, s_n below.
// Stationary components |g, 0, n-> carry no phase.

#pragma once

#include "twomode/fock.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace twomode {

// ħ = 1. epsilon is the qubit splitting, omega the common mode frequency.
struct JCParams {
    double gamma{1.0};
    double delta{0.0};
    double omega{1.0};
    double epsilon{1.0};

    static JCParams make(double gamma, double delta, double omega = 1.0) {
        JCParams p{gamma, delta, omega, omega + delta};
        p.validate();
        return p;
    }

    // Frame co-rotating with the modes: the conserved ω(n1 + n2 + σz/2) term is dropped.
    JCParams rotating() const { return JCParams{gamma, delta, 0.0, delta}; }

    bool resonant() const noexcept { return delta == 0.0; }

    void validate() const {
        if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("JCParams: gamma must be > 0");
        if (!std::isfinite(delta) || !std::isfinite(omega) || !std::isfinite(epsilon)) {
            throw std::invalid_argument("JCParams: parameters must be finite");
        }
        const double scale = std::max({1.0, std::abs(epsilon), std::abs(omega)});
        if (std::abs(delta - (epsilon - omega)) > 1e-12 * scale) {
            throw std::invalid_argument("JCParams: delta != epsilon - omega");
        }
    }
};

inline double rabi_frequency(int n, const JCParams& p) {
    if (n < 0) throw std::invalid_argument("rabi_frequency: level must be >= 0");
    return 0.5 * std::sqrt(p.delta * p.delta + 4.0 * p.gamma * p.gamma * (n + 1));
}

struct Amplitudes {
    int n{0};
    double t{0.0};
    cplx c{1.0, 0.0};
    cplx s{0.0, 0.0};
};

inline Amplitudes amplitudes(int n, double t, const JCParams& p) {
    if (t < 0.0) throw std::invalid_argument("amplitudes: time must be >= 0");
    const double W = rabi_frequency(n, p);
    const double cw = std::cos(W * t);
    const double sw = std::sin(W * t);
    if (p.resonant()) return Amplitudes{n, t, cplx(cw, 0.0), cplx(sw, 0.0)};
    const cplx frame = std::polar(1.0, 0.5 * p.delta * t);
    const cplx c = cplx(cw, -p.delta / (2.0 * W) * sw) * frame;
    const cplx s = cplx(0.0, p.gamma * std::sqrt(n + 1.0) / W * sw) * frame;
    return Amplitudes{n, t, c, s};
}

// Factor multiplying s_n on the transferred component.
inline cplx transfer_factor(const JCParams& p) noexcept {
    return p.resonant() ? cplx(0.0, -1.0) : cplx(1.0, 0.0);
}

// Qubit ⊗ two-mode state. Index q * D + i with q = 0 for g and q = 1 for e.
class QubitBosonState {
public:
    QubitBosonState(TruncationPolicy policy, BasisTag basis, Eigen::VectorXcd amps)
        : policy_(policy), basis_(basis), fock_(FockBasis::get(policy.max_total_quanta)), amps_(std::move(amps)) {
        if (amps_.size() != 2 * fock_->dimension()) {
            throw std::invalid_argument("QubitBosonState: amplitude vector has wrong length");
        }
    }

    static QubitBosonState zero(TruncationPolicy policy, BasisTag basis) {
        const Index d = fock_dimension(policy.max_total_quanta);
        return QubitBosonState(policy, basis, Eigen::VectorXcd::Zero(2 * d));
    }

    static QubitBosonState basis_state(TruncationPolicy policy, BasisTag basis, bool excited, FockIndex s) {
        auto psi = zero(policy, basis);
        psi.at(excited, s) = 1.0;
        return psi;
    }

    const TruncationPolicy& policy() const noexcept { return policy_; }
    BasisTag basis() const noexcept { return basis_; }
    const FockBasis& fock() const noexcept { return *fock_; }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }
    Eigen::VectorXcd& amplitudes() noexcept { return amps_; }
    Index fock_dim() const noexcept { return fock_->dimension(); }

    cplx& at(bool excited, FockIndex s) { return amps_((excited ? fock_dim() : 0) + fock_->index(s)); }
    cplx at(bool excited, FockIndex s) const { return amps_((excited ? fock_dim() : 0) + fock_->index(s)); }

    auto sector(bool excited) const { return amps_.segment(excited ? fock_dim() : 0, fock_dim()); }

    double norm() const { return amps_.norm(); }

private:
    TruncationPolicy policy_;
    BasisTag basis_;
    std::shared_ptr<const FockBasis> fock_;
    Eigen::VectorXcd amps_;
};

inline QubitBosonState change_basis(const QubitBosonState& psi) {
    const Eigen::MatrixXd T = psi.fock().rotation_matrix();
    Eigen::VectorXcd out(psi.amplitudes().size());
    const Index d = psi.fock_dim();
    out.head(d) = T.cast<cplx>() * psi.sector(false);
    out.tail(d) = T.cast<cplx>() * psi.sector(true);
    return QubitBosonState(psi.policy(), opposite(psi.basis()), std::move(out));
}

inline void require_headroom(int n1, int n2, const TruncationPolicy& policy, const char* who) {
    policy.validate();
    if (n1 < 0 || n2 < 0) throw std::invalid_argument(std::string(who) + ": occupations must be >= 0");
    if (n1 + n2 + 1 > policy.max_total_quanta) {
        throw std::invalid_argument(std::string(who) + ": n1 + n2 + 1 exceeds max_total_quanta " +
                                    std::to_string(policy.max_total_quanta));
    }
}

// |e, n1, n2>_{12} evolved for time t, returned in the ± basis.
inline QubitBosonState evolve_excited_basis(int n1, int n2, double t, const JCParams& p,
                                            const TruncationPolicy& policy) {
    require_headroom(n1, n2, policy, "evolve_excited_basis");
    auto psi = QubitBosonState::zero(policy, BasisTag::ModesPM);
    const cplx factor = transfer_factor(p);
    for (const auto& [pm, a] : pm_coefficients(n1, n2)) {
        if (a == 0.0) continue;
        const Amplitudes amp = amplitudes(pm.n1, t, p);
        psi.at(true, pm) += a * amp.c;
        psi.at(false, FockIndex{pm.n1 + 1, pm.n2}) += a * factor * amp.s;
    }
    return psi;
}

// |g, n1, n2>_{12} evolved for time t, returned in the ± basis. Components
// with n+ >= 1 rotate in the block of level n+ - 1; |g, 0, n-> is stationary.
inline QubitBosonState evolve_ground_basis(int n1, int n2, double t, const JCParams& p,
                                           const TruncationPolicy& policy) {
    require_headroom(n1, n2, policy, "evolve_ground_basis");
    auto psi = QubitBosonState::zero(policy, BasisTag::ModesPM);
    const cplx factor = transfer_factor(p);
    const cplx frame = std::polar(1.0, p.delta * t);
    for (const auto& [pm, a] : pm_coefficients(n1, n2)) {
        if (a == 0.0) continue;
        if (pm.n1 == 0) {
            psi.at(false, pm) += a;
            continue;
        }
        const Amplitudes amp = amplitudes(pm.n1 - 1, t, p);
        psi.at(false, pm) += a * std::conj(amp.c) * frame;
        psi.at(true, FockIndex{pm.n1 - 1, pm.n2}) += a * factor * amp.s;
    }
    return psi;
}

// Partial trace over the qubit.
inline TwoModeDensity reduced_boson_state(const QubitBosonState& psi) {
    const Eigen::VectorXcd g = psi.sector(false);
    const Eigen::VectorXcd e = psi.sector(true);
    return TwoModeDensity(psi.policy(), psi.basis(), g * g.adjoint() + e * e.adjoint());
}

// Partial trace over the qubit of a joint density (2D x 2D, same indexing).
inline TwoModeDensity reduced_boson_state(const Eigen::MatrixXcd& joint, const TruncationPolicy& policy,
                                          BasisTag basis) {
    const Index d = fock_dimension(policy.max_total_quanta);
    if (joint.rows() != 2 * d || joint.cols() != 2 * d) {
        throw std::invalid_argument("reduced_boson_state: joint density has wrong size");
    }
    return TwoModeDensity(policy, basis, joint.topLeftCorner(d, d) + joint.bottomRightCorner(d, d));
}

// ---------------------------------------------------------------- thermal --

class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, int required) : std::runtime_error(what), required_(required) {}
    int required_quanta() const noexcept { return required_; }

private:
    int required_;
};

// Bose–Einstein occupation of one mode at k_B T / ħω = eta_inv.
inline double mean_occupation(double eta_inv) {
    if (eta_inv < 0.0 || !std::isfinite(eta_inv)) throw std::invalid_argument("mean_occupation: eta_inv must be >= 0");
    if (eta_inv == 0.0) return 0.0;
    return 1.0 / std::expm1(1.0 / eta_inv);
}

// p_n = <n>^n / (1 + <n>)^{n+1}
inline double occupation_probability(int n, double mean_n) {
    if (mean_n == 0.0) return n == 0 ? 1.0 : 0.0;
    const double x = mean_n / (1.0 + mean_n);
    return std::pow(x, n) / (1.0 + mean_n);
}

// Thermal mass of the two-mode product state inside n1 + n2 <= M.
inline double retained_mass(double mean_n, int max_total_quanta) {
    if (mean_n == 0.0) return 1.0;
    const double x = mean_n / (1.0 + mean_n);
    const double q = 1.0 / (1.0 + mean_n);
    double mass = 0.0;
    double xn = 1.0;
    for (int N = 0; N <= max_total_quanta; ++N, xn *= x) mass += (N + 1) * q * q * xn;
    return mass;
}

inline int required_quanta(double mean_n, double tail_tolerance) {
    int M = 0;
    while (retained_mass(mean_n, M) < 1.0 - tail_tolerance) {
        if (++M > 100000) throw TruncationError("required_quanta: tail tolerance unreachable", M);
    }
    return M;
}

struct ThermalSpec {
    double eta_inv{0.0};
    double mean_n{0.0};
    TruncationPolicy policy{};

    // Smallest M meeting the tail tolerance, plus one quantum for the
    // population the qubit deposits into the bright mode.
    static ThermalSpec make(double eta_inv, double tail_tolerance = 1e-8) {
        const double n = mean_occupation(eta_inv);
        return ThermalSpec{eta_inv, n, TruncationPolicy{required_quanta(n, tail_tolerance) + 1, tail_tolerance}};
    }

    static ThermalSpec with_policy(double eta_inv, TruncationPolicy policy) {
        return ThermalSpec{eta_inv, mean_occupation(eta_inv), policy};
    }

    double probability(int n) const { return occupation_probability(n, mean_n); }

    void validate() const {
        policy.validate();
        const double mass = retained_mass(mean_n, policy.max_total_quanta);
        if (mass < 1.0 - policy.tail_tolerance) {
            const int need = required_quanta(mean_n, policy.tail_tolerance);
            throw TruncationError("thermal state needs max_total_quanta >= " + std::to_string(need) +
                                      " for tail tolerance " + std::to_string(policy.tail_tolerance),
                                  need);
        }
    }
};

// Product of two thermal modes; depends on n1 + n2 only, hence the same matrix in either basis.
inline Eigen::VectorXd thermal_weights(const ThermalSpec& spec) {
    spec.validate();
    const auto& states = FockBasis::get(spec.policy.max_total_quanta)->states();
    Eigen::VectorXd w(static_cast<Index>(states.size()));
    for (std::size_t i = 0; i < states.size(); ++i) {
        w(static_cast<Index>(i)) = spec.probability(states[i].n1) * spec.probability(states[i].n2);
    }
    return w;
}

inline TwoModeDensity thermal_density(const ThermalSpec& spec, BasisTag basis = BasisTag::Modes12) {
    const Eigen::VectorXd w = thermal_weights(spec);
    return TwoModeDensity(spec.policy, basis, w.cast<cplx>().asDiagonal());
}

// Diagonal weights over the ± basis of the evolved ensemble (qubit initially
// excited, traced out). The transferred population of the top layer
// n+ + n- = M leaves the truncation and is dropped.
inline Eigen::VectorXd evolve_thermal_weights(const ThermalSpec& spec, double t, const JCParams& p) {
    const Eigen::VectorXd p0 = thermal_weights(spec);
    const FockBasis& fb = *FockBasis::get(spec.policy.max_total_quanta);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(p0.size());
    const int M = fb.max_quanta();
    std::vector<double> c2(static_cast<std::size_t>(M + 1)), s2(static_cast<std::size_t>(M + 1));
    for (int n = 0; n <= M; ++n) {
        const Amplitudes a = amplitudes(n, t, p);
        c2[n] = std::norm(a.c);
        s2[n] = std::norm(a.s);
    }
    for (Index i = 0; i < p0.size(); ++i) {
        const FockIndex s = fb.state(i);
        w(i) += p0(i) * c2[s.n1];
        const FockIndex up{s.n1 + 1, s.n2};
        if (fb.contains(up)) w(fb.index(up)) += p0(i) * s2[s.n1];
    }
    return w;
}

inline TwoModeDensity evolve_thermal(const ThermalSpec& spec, double t, const JCParams& p) {
    const Eigen::VectorXd w = evolve_thermal_weights(spec, t, p);
    return TwoModeDensity(spec.policy, BasisTag::ModesPM, w.cast<cplx>().asDiagonal());
}

// ------------------------------------------------------- exact propagator --

// Lab-frame Hamiltonian on {g, e} x {n1 + n2 <= M} in the physical-mode basis:
//   H = (ε/2) σz + ω (n1 + n2) + (γ/√2) Σ_i (σ- b_i† + σ+ b_i).
// The 1/√2 makes γ the bright-mode coupling, so Ω_n = ½√(Δ² + 4γ²(n+1)).
// Excited states in the top layer have no partner and are left uncoupled.
inline Eigen::MatrixXcd jc_hamiltonian(const JCParams& p, const TruncationPolicy& policy) {
    p.validate();
    policy.validate();
    const FockBasis& fb = *FockBasis::get(policy.max_total_quanta);
    const Index D = fb.dimension();
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2 * D, 2 * D);
    const double g = p.gamma / std::sqrt(2.0);
    for (Index i = 0; i < D; ++i) {
        const FockIndex s = fb.state(i);
        H(i, i) = -0.5 * p.epsilon + p.omega * s.total();
        H(D + i, D + i) = 0.5 * p.epsilon + p.omega * s.total();
        const FockIndex up1{s.n1 + 1, s.n2};
        const FockIndex up2{s.n1, s.n2 + 1};
        if (fb.contains(up1)) {
            const Index j = fb.index(up1);
            H(j, D + i) = g * std::sqrt(s.n1 + 1.0);
            H(D + i, j) = H(j, D + i);
        }
        if (fb.contains(up2)) {
            const Index j = fb.index(up2);
            H(j, D + i) = g * std::sqrt(s.n2 + 1.0);
            H(D + i, j) = H(j, D + i);
        }
    }
    return H;
}

// Eigendecomposition of the truncated Hamiltonian, reusable across times.
class Propagator {
public:
    Propagator(const JCParams& p, const TruncationPolicy& policy) : policy_(policy) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(jc_hamiltonian(p, policy));
        if (solver.info() != Eigen::Success) throw std::runtime_error("Propagator: eigendecomposition failed");
        energies_ = solver.eigenvalues();
        vectors_ = solver.eigenvectors();
    }

    const TruncationPolicy& policy() const noexcept { return policy_; }
    const Eigen::VectorXd& energies() const noexcept { return energies_; }

    Eigen::MatrixXcd at(double t) const {
        if (t < 0.0) throw std::invalid_argument("Propagator: time must be >= 0");
        Eigen::VectorXcd phases(energies_.size());
        for (Index k = 0; k < energies_.size(); ++k) phases(k) = std::polar(1.0, -energies_(k) * t);
        return vectors_ * phases.asDiagonal() * vectors_.adjoint();
    }

    QubitBosonState apply(const QubitBosonState& psi, double t) const {
        const QubitBosonState in = psi.basis() == BasisTag::Modes12 ? psi : change_basis(psi);
        return QubitBosonState(policy_, BasisTag::Modes12, at(t) * in.amplitudes());
    }

private:
    TruncationPolicy policy_;
    Eigen::VectorXd energies_;
    Eigen::MatrixXcd vectors_;
};

inline Eigen::MatrixXcd exact_propagator(const JCParams& p, const TruncationPolicy& policy, double t) {
    return Propagator(p, policy).at(t);
}

struct EffectiveFrequency {
    double exact{0.0};   // 2Ω_0
    double approx{0.0};  // Δ + 2γ²/Δ
};

inline EffectiveFrequency effective_frequency(const JCParams& p) {
    if (!(p.delta > 0.0)) {
        throw std::invalid_argument("effective_frequency: large-detuning estimate needs delta > 0");
    }
    return EffectiveFrequency{2.0 * rabi_frequency(0, p), p.delta + 2.0 * p.gamma * p.gamma / p.delta};
}

}  // namespace twomode
