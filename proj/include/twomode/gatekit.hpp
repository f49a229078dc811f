// gatekit.hpp: Two-qubit gates encoded in the two bosonic modes.
//
// With the qubit parked in |g>, a time t_g at which the n+ = 1 block completes
// an odd number of half turns (cos Ω_0 t = -1) and the n+ = 2 block an even
// number (cos Ω_1 t = 1) returns every logical state to the code space. Given
// q0 = 2Ω_0 and q1 = 2Ω_1 the coupling and detuning follow as
//   γ = ½√(q1² - q0²),   Δ = √(2q0² - q1²).

#pragma once

#include "twomode/dynamics.hpp"
#include "twomode/rational.hpp"

#include <array>
#include <numbers>

namespace twomode {

class GateSolveError : public std::invalid_argument {
public:
    enum class Reason { NonPositive, GammaNotReal, DeltaNotReal, NoCongruentTime };

    GateSolveError(Reason reason, const std::string& what) : std::invalid_argument(what), reason_(reason) {}
    Reason reason() const noexcept { return reason_; }

private:
    Reason reason_;
};

struct GateSolution {
    Rational q0;
    Rational q1;
    Rational gamma_squared;  // (q1² - q0²) / 4
    Rational delta_squared;  // 2q0² - q1²
    double gamma{0.0};
    double delta{0.0};
    Rational t_gate_over_pi;
    double t_gate{0.0};
    std::int64_t N{0};  // Ω_0 t_g = (2N + 1)π
    std::int64_t M{0};  // Ω_1 t_g = 2Mπ

    JCParams params() const { return JCParams::make(gamma, delta); }
};

// Smallest t_g > 0 with Ω_0 t_g / π odd and Ω_1 t_g / π even. Writing
// u = t / 2π, the conditions are q0 u odd and q1 u even. After clearing
// denominators (q0 = A/L, q1 = C/L) and dividing out g = gcd(A, C), every
// admissible u is an odd multiple of L/g, and one exists iff C/g is even.
inline GateSolution solve_gate_params(const Rational& q0, const Rational& q1) {
    using R = GateSolveError::Reason;
    if (q0 <= Rational(0) || q1 <= Rational(0)) {
        throw GateSolveError(R::NonPositive, "solve_gate_params: q0 and q1 must be positive");
    }
    if (q1 <= q0) {
        throw GateSolveError(R::GammaNotReal, "solve_gate_params: need q1 > q0 for a real, nonzero gamma (got q0=" +
                                                  q0.str() + ", q1=" + q1.str() + ")");
    }
    const Rational delta_sq = Rational(2) * q0 * q0 - q1 * q1;
    if (delta_sq < Rational(0)) {
        throw GateSolveError(R::DeltaNotReal, "solve_gate_params: 2 q0^2 - q1^2 = " + delta_sq.str() +
                                                  " < 0, delta would not be real");
    }
    const std::int64_t L = std::lcm(q0.den(), q1.den());
    const std::int64_t A = q0.num() * (L / q0.den());
    const std::int64_t C = q1.num() * (L / q1.den());
    const std::int64_t g = std::gcd(A, C);
    const std::int64_t Ar = A / g;
    const std::int64_t Cr = C / g;
    if (Cr % 2 != 0) {
        throw GateSolveError(R::NoCongruentTime,
                             "solve_gate_params: q0/q1 = " + (q0 / q1).str() +
                                 (Ar % 2 == 0 ? " forces Omega_0 t / pi to be even whenever Omega_1 t / pi is an integer"
                                              : " forces Omega_1 t / pi to be odd whenever Omega_0 t / pi is odd"));
    }
    GateSolution sol;
    sol.q0 = q0;
    sol.q1 = q1;
    sol.gamma_squared = (q1 * q1 - q0 * q0) / Rational(4);
    sol.delta_squared = delta_sq;
    sol.gamma = std::sqrt(sol.gamma_squared.value());
    sol.delta = std::sqrt(sol.delta_squared.value());
    sol.t_gate_over_pi = Rational(2 * L, g);
    sol.t_gate = std::numbers::pi * sol.t_gate_over_pi.value();
    sol.N = (Ar - 1) / 2;
    sol.M = Cr / 2;
    return sol;
}

// Ω_n t / π for n = 0, 1 at t = sol.t_gate, exactly.
inline std::pair<Rational, Rational> congruence_witness(const GateSolution& sol) {
    const Rational half(1, 2);
    return {half * sol.q0 * sol.t_gate_over_pi, half * sol.q1 * sol.t_gate_over_pi};
}

// Rabi amplitudes of the two code-space blocks at an arbitrary candidate time.
struct CandidateTimeCheck {
    double t{0.0};
    double cos0{0.0}, sin0{0.0};  // cos/sin Ω_0 t
    double cos1{0.0}, sin1{0.0};  // cos/sin Ω_1 t
    double s0{0.0}, s1{0.0};      // |s_0(t)|, |s_1(t)|
    bool realizes_gate{false};
};

inline CandidateTimeCheck check_candidate_time(const GateSolution& sol, double t, double tol = 1e-9) {
    const JCParams p = sol.params();
    const double w0 = rabi_frequency(0, p);
    const double w1 = rabi_frequency(1, p);
    CandidateTimeCheck c;
    c.t = t;
    c.cos0 = std::cos(w0 * t);
    c.sin0 = std::sin(w0 * t);
    c.cos1 = std::cos(w1 * t);
    c.sin1 = std::sin(w1 * t);
    c.s0 = std::abs(amplitudes(0, t, p).s);
    c.s1 = std::abs(amplitudes(1, t, p).s);
    c.realizes_gate = c.s0 <= tol && c.s1 <= tol && std::abs(c.cos0 + 1.0) <= tol && std::abs(c.cos1 - 1.0) <= tol;
    return c;
}

// --------------------------------------------------------------- encodings --

enum class LogicalEncoding { Direct12, BellVirtual };

inline const char* to_string(LogicalEncoding e) noexcept {
    return e == LogicalEncoding::Direct12 ? "direct" : "bell";
}

// Logical basis vectors as ground-qubit states in the physical-mode basis.
// Direct12 order:    |g,0,0>, |g,1,0>, |g,0,1>, |g,1,1>.
// BellVirtual order: (|g,0,0> ± |g,1,1>)/√2, (|g,0,1> ± |g,1,0>)/√2.
inline std::array<QubitBosonState, 4> encoded_basis(LogicalEncoding enc, const TruncationPolicy& policy) {
    auto ket = [&](int n1, int n2) {
        return QubitBosonState::basis_state(policy, BasisTag::Modes12, false, FockIndex{n1, n2}).amplitudes();
    };
    auto make = [&](const Eigen::VectorXcd& v) { return QubitBosonState(policy, BasisTag::Modes12, v); };
    if (enc == LogicalEncoding::Direct12) return {make(ket(0, 0)), make(ket(1, 0)), make(ket(0, 1)), make(ket(1, 1))};
    const double r = 1.0 / std::sqrt(2.0);
    return {make(r * (ket(0, 0) + ket(1, 1))), make(r * (ket(0, 0) - ket(1, 1))), make(r * (ket(0, 1) + ket(1, 0))),
            make(r * (ket(0, 1) - ket(1, 0)))};
}

struct LogicalGate {
    Eigen::Matrix4cd matrix;        // <L_i| U(t) |L_j>, not renormalized
    Eigen::Vector4d column_leakage; // 1 - Σ_i |matrix(i, j)|²
    double leakage{0.0};            // max over columns
    double t{0.0};
};

// Propagates each logical state with the exact propagator in the frame
// co-rotating with the modes and projects back onto the code space.
inline LogicalGate logical_gate_matrix(const GateSolution& sol, LogicalEncoding enc, const TruncationPolicy& policy,
                                       std::optional<double> time = std::nullopt) {
    if (policy.max_total_quanta < 2) throw std::invalid_argument("logical_gate_matrix: need max_total_quanta >= 2");
    const double t = time.value_or(sol.t_gate);
    const Propagator prop(sol.params().rotating(), policy);
    const Eigen::MatrixXcd U = prop.at(t);
    const auto basis = encoded_basis(enc, policy);
    LogicalGate gate;
    gate.t = t;
    for (int j = 0; j < 4; ++j) {
        const Eigen::VectorXcd out = U * basis[j].amplitudes();
        for (int i = 0; i < 4; ++i) gate.matrix(i, j) = basis[i].amplitudes().dot(out);
        gate.column_leakage(j) = std::max(0.0, 1.0 - gate.matrix.col(j).squaredNorm());
    }
    gate.leakage = gate.column_leakage.maxCoeff();
    return gate;
}

// ------------------------------------------------------------------ targets --

enum class GateTarget { SwapPhase, ControlledPhase };

inline Eigen::Matrix4cd target_matrix(GateTarget target) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    if (target == GateTarget::SwapPhase) {
        m(0, 0) = 1.0;
        m(1, 2) = -1.0;
        m(2, 1) = -1.0;
        m(3, 3) = 1.0;
    } else {
        m.diagonal() << 1.0, 1.0, 1.0, -1.0;
    }
    return m;
}

inline double wrap_phase(double phi) {
    phi = std::remainder(phi, 2.0 * std::numbers::pi);
    return phi <= -std::numbers::pi ? phi + 2.0 * std::numbers::pi : phi;
}

struct GateReport {
    double fidelity{0.0};       // |Tr(T† m)| / 4
    double global_phase{0.0};   // arg Tr(T† m)
    std::array<double, 4> phase_profile{};  // per column, after removing the global phase
    std::array<double, 4> relative_phases{};  // arg m(i_j, j) - arg m(i_0, 0), target not removed
    bool leakage_flagged{false};
};

inline GateReport gate_fidelity(const Eigen::Matrix4cd& m, GateTarget target, double leakage = 0.0,
                                double leakage_threshold = 1e-6) {
    const Eigen::Matrix4cd T = target_matrix(target);
    const cplx overlap = (T.adjoint() * m).trace();
    GateReport r;
    r.fidelity = std::abs(overlap) / 4.0;
    r.global_phase = std::arg(overlap);
    double reference = 0.0;
    for (int j = 0; j < 4; ++j) {
        Index i = 0;
        T.col(j).cwiseAbs().maxCoeff(&i);
        r.phase_profile[j] = wrap_phase(std::arg(m(i, j)) - std::arg(T(i, j)) - r.global_phase);
        if (j == 0) reference = std::arg(m(i, j));
        r.relative_phases[j] = wrap_phase(std::arg(m(i, j)) - reference);
    }
    r.leakage_flagged = leakage > leakage_threshold;
    return r;
}

// ----------------------------------------------------------------- W state --

// n iso-spectral modes, each coupled with γ/√2 (the two-mode normalization),
// so the bright mode n^{-1/2} Σ b_i couples with γ√(n/2).
struct WState {
    int n_modes{0};
    double t{0.0};
    cplx excited;                   // amplitude of |e, 0, ..., 0>
    std::vector<cplx> modes;        // amplitude of |g, 1_i>
};

inline double w_bright_coupling(int n_modes, double gamma) { return gamma * std::sqrt(0.5 * n_modes); }

inline double w_full_transfer_time(int n_modes, double gamma) {
    if (n_modes < 2) throw std::invalid_argument("w_state: need at least two modes");
    return 0.5 * std::numbers::pi / w_bright_coupling(n_modes, gamma);
}

// |e, 0, ..., 0> evolved at resonance; only the single-excitation sector is reached.
inline WState w_state(int n_modes, double t, double gamma) {
    if (n_modes < 2) throw std::invalid_argument("w_state: need at least two modes");
    if (!(gamma > 0.0)) throw std::invalid_argument("w_state: gamma must be > 0");
    const double G = w_bright_coupling(n_modes, gamma);
    const cplx per_mode = cplx(0.0, -std::sin(G * t)) / std::sqrt(static_cast<double>(n_modes));
    return WState{n_modes, t, cplx(std::cos(G * t), 0.0), std::vector<cplx>(static_cast<std::size_t>(n_modes), per_mode)};
}

// |<g, W_n | ψ>|²
inline double w_fidelity(const WState& s) {
    cplx overlap = 0.0;
    for (const cplx& a : s.modes) overlap += a;
    return std::norm(overlap) / s.n_modes;
}

}  // namespace twomode
