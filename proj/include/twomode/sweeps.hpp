// sweeps.hpp: Entangling power: supremum of the negativity over a time
// window, and sweeps of it over temperature and detuning.

#pragma once

#include "twomode/entanglement.hpp"

#include <optional>

namespace twomode {

struct TimeWindow {
    double t_max{0.0};
    int coarse_samples{2000};
    bool refine{true};

    void validate() const {
        if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("TimeWindow: t_max must be > 0");
        if (coarse_samples < 2) throw std::invalid_argument("TimeWindow: coarse_samples must be >= 2");
    }
};

// Twenty periods of the slowest Rabi frequency Ω_0 (every populated level
// rotates at least this fast).
inline TimeWindow default_window(const JCParams& p, int coarse_samples = 2000) {
    return TimeWindow{20.0 * std::numbers::pi / rabi_frequency(0, p), coarse_samples, true};
}

namespace detail {

// Golden-section search for a maximum of f on [a, b].
template <typename F>
std::pair<double, double> golden_maximize(F&& f, double a, double b, double rel_tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > rel_tol * std::max(1.0, std::abs(0.5 * (a + b)))) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace detail

struct PowerEstimate {
    double value{0.0};
    double t_at_max{0.0};
};

inline PowerEstimate entangling_power_at(const NegativityEvaluator& eval, const TimeWindow& w) {
    w.validate();
    const int n = w.coarse_samples;
    const double dt = w.t_max / (n - 1);
    int best = 0;
    double best_value = -1.0;
    for (int k = 0; k < n; ++k) {
        const double v = eval(dt * k).negativity;
        if (v > best_value) {
            best_value = v;
            best = k;
        }
    }
    PowerEstimate est{best_value, dt * best};
    if (!w.refine) return est;
    const double lo = dt * std::max(0, best - 1);
    const double hi = dt * std::min(n - 1, best + 1);
    const auto [t_ref, v_ref] =
        detail::golden_maximize([&](double t) { return eval(t).negativity; }, lo, hi, 1e-6);
    if (v_ref > est.value) est = PowerEstimate{v_ref, t_ref};
    return est;
}

inline double entangling_power(const InitialState& initial, const JCParams& p,
                               std::optional<TimeWindow> window = std::nullopt) {
    const NegativityEvaluator eval(initial, p);
    return entangling_power_at(eval, window.value_or(default_window(p))).value;
}

// Thermal reference state at each 1/η.
inline std::vector<double> ep_vs_temperature(const std::vector<double>& eta_inv, const JCParams& p,
                                             std::optional<TimeWindow> window = std::nullopt,
                                             double tail_tolerance = 1e-8, unsigned threads = default_threads()) {
    validate_grid(eta_inv, "ep_vs_temperature");
    return parallel_map(
        eta_inv.size(),
        [&](std::size_t i) { return entangling_power(ThermalSpec::make(eta_inv[i], tail_tolerance), p, window); },
        threads);
}

// Vacuum reference state at each Δ.
inline std::vector<double> ep_vs_detuning(const std::vector<double>& delta, double gamma,
                                          std::optional<TimeWindow> window = std::nullopt,
                                          unsigned threads = default_threads()) {
    validate_grid(delta, "ep_vs_detuning");
    return parallel_map(
        delta.size(), [&](std::size_t i) { return entangling_power(Vacuum{}, JCParams::make(gamma, delta[i]), window); },
        threads);
}

struct EPSurface {
    std::vector<double> eta_inv;  // rows
    std::vector<double> delta;    // columns
    Eigen::MatrixXd values;
};

inline EPSurface ep_surface(const std::vector<double>& eta_inv, const std::vector<double>& delta, double gamma,
                            std::optional<TimeWindow> window = std::nullopt, double tail_tolerance = 1e-8,
                            unsigned threads = default_threads()) {
    validate_grid(eta_inv, "ep_surface");
    validate_grid(delta, "ep_surface");
    const std::size_t cols = delta.size();
    // Hottest rows first so the slowest items start early.
    const std::size_t count = eta_inv.size() * cols;
    const auto flat = parallel_map(
        count,
        [&](std::size_t k) {
            const std::size_t item = count - 1 - k;
            const std::size_t i = item / cols;
            const std::size_t j = item % cols;
            return entangling_power(ThermalSpec::make(eta_inv[i], tail_tolerance), JCParams::make(gamma, delta[j]),
                                    window);
        },
        threads);
    EPSurface s{eta_inv, delta, Eigen::MatrixXd(static_cast<Index>(eta_inv.size()), static_cast<Index>(cols))};
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t item = count - 1 - k;
        s.values(static_cast<Index>(item / cols), static_cast<Index>(item % cols)) = flat[k];
    }
    return s;
}

}  // namespace twomode
