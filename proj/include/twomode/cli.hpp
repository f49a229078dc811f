// cli.hpp: Scenario runner behind the twomode command-line tool.
//
// CSV schemas:
//   vacuum                 t,negativity,linear_entropy
//   thermal                t,negativity
//   epower-T, epower-delta x,ep
//   epower-surface         eta_inv,delta,ep        (row-major: eta_inv outer)
//   gate                   row,col,re,im,abs
//   wstate                 component,re,im
// Multi-series figures use a long format whose first column names the series
// parameter (eta_inv or delta). All numbers are printed with 12 significant
// digits and nothing depends on thread scheduling, so reruns are byte-identical.

#pragma once

#include "twomode/gatekit.hpp"
#include "twomode/sweeps.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

namespace twomode::cli {

enum class ExitCode : int { Ok = 0, InvalidConfig = 2, NumericalFailure = 3 };

struct Grid {
    double lo{0.0};
    double hi{0.0};
    int points{1};

    std::vector<double> values() const {
        if (points < 1) throw std::invalid_argument("grid needs at least one point");
        if (points > 1 && !(hi > lo)) throw std::invalid_argument("grid needs hi > lo");
        std::vector<double> v(static_cast<std::size_t>(points));
        for (int k = 0; k < points; ++k) v[k] = points == 1 ? lo : lo + (hi - lo) * k / (points - 1);
        return v;
    }
};

struct RunConfig {
    std::string scenario;
    std::string figure;  // repro only
    double gamma{1.0};
    double delta{0.0};
    double eta_inv{0.0};
    std::optional<double> t_max;
    std::optional<int> steps;
    std::optional<int> max_quanta;
    double tail_tolerance{1e-8};
    std::string format{"csv"};
    std::string output;  // empty: stdout
    unsigned threads{default_threads()};
    std::optional<Grid> eta_grid;
    std::optional<Grid> delta_grid;
    std::string q0{"3"};
    std::string q1{"4"};
    std::string encoding{"direct"};
    int modes{2};
    std::optional<double> t;
    bool report_frequency{false};
};

inline const std::vector<std::string>& scenarios() {
    static const std::vector<std::string> s{"vacuum", "thermal", "epower-T", "epower-delta",
                                            "epower-surface", "gate", "wstate", "repro"};
    return s;
}

inline const std::vector<std::string>& figures() {
    static const std::vector<std::string> f{"tz", "negav", "det0", "detvar", "enpow", "epdet", "ep3d"};
    return f;
}

inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);  // no "-0"
    return buf;
}

// A double carrying only the 12 printed digits, so JSON matches CSV precision.
inline double round12(double x) { return std::stod(fmt(x)); }

namespace detail {

using nlohmann::json;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::string csv() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
        os << '\n';
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << fmt(r[i]);
            os << '\n';
        }
        return os.str();
    }

    json to_json() const {
        json cols = json::object();
        for (std::size_t c = 0; c < header.size(); ++c) {
            json col = json::array();
            for (const auto& r : rows) col.push_back(round12(r[c]));
            cols[header[c]] = std::move(col);
        }
        return cols;
    }
};

struct Result {
    Table table;
    json meta = json::object();
};

inline ThermalSpec thermal_spec(const RunConfig& cfg, double eta_inv) {
    if (cfg.max_quanta) return ThermalSpec::with_policy(eta_inv, TruncationPolicy{*cfg.max_quanta, cfg.tail_tolerance});
    return ThermalSpec::make(eta_inv, cfg.tail_tolerance);
}

inline InitialState initial_for(const RunConfig& cfg, double eta_inv) {
    if (eta_inv == 0.0 && !cfg.max_quanta) return Vacuum{};
    return thermal_spec(cfg, eta_inv);
}

inline std::vector<double> time_grid(const RunConfig& cfg, double default_t_max) {
    return uniform_grid(cfg.t_max.value_or(default_t_max), cfg.steps.value_or(1000));
}

inline Result series(const RunConfig& cfg, const InitialState& init, const JCParams& p, double default_t_max) {
    const auto pts = negativity_timeseries(init, p, time_grid(cfg, default_t_max), cfg.threads);
    Result res;
    const bool with_sl = std::holds_alternative<Vacuum>(init);
    res.table.header = with_sl ? std::vector<std::string>{"t", "negativity", "linear_entropy"}
                               : std::vector<std::string>{"t", "negativity"};
    for (const auto& s : pts) {
        if (with_sl) {
            res.table.rows.push_back({s.t, s.negativity, s.linear_entropy.value()});
        } else {
            res.table.rows.push_back({s.t, s.negativity});
        }
    }
    if (const auto* spec = std::get_if<ThermalSpec>(&init)) {
        res.meta["eta_inv"] = spec->eta_inv;
        res.meta["max_quanta"] = spec->policy.max_total_quanta;
    }
    if (cfg.report_frequency) {
        const EffectiveFrequency f = effective_frequency(p);
        json freq{{"exact", round12(f.exact)}, {"approx", round12(f.approx)}};
        try {
            freq["measured"] = round12(oscillation_frequency_from_zeros(pts));
        } catch (const std::runtime_error&) {
            freq["measured"] = nullptr;
        }
        res.meta["effective_frequency"] = freq;
    }
    return res;
}

// Several series stacked in long format under a leading parameter column.
inline Result long_series(const RunConfig& cfg, const std::string& key, const std::vector<double>& values,
                          const std::function<std::pair<InitialState, JCParams>(double)>& make,
                          double default_t_max) {
    Result res;
    res.table.header = {key, "t", "negativity"};
    for (double v : values) {
        const auto [init, p] = make(v);
        const auto pts = negativity_timeseries(init, p, time_grid(cfg, default_t_max), cfg.threads);
        for (const auto& s : pts) res.table.rows.push_back({v, s.t, s.negativity});
    }
    return res;
}

inline Result sweep_table(const std::vector<double>& x, const std::vector<double>& ep) {
    Result res;
    res.table.header = {"x", "ep"};
    for (std::size_t i = 0; i < x.size(); ++i) res.table.rows.push_back({x[i], ep[i]});
    return res;
}

inline std::optional<TimeWindow> sweep_window(const RunConfig& cfg) {
    if (!cfg.t_max && !cfg.steps) return std::nullopt;
    if (!cfg.t_max) throw std::invalid_argument("--steps for a sweep also needs --t-max");
    return TimeWindow{*cfg.t_max, cfg.steps.value_or(2000), true};
}

inline Result epower_T(const RunConfig& cfg, const Grid& grid) {
    const auto eta = grid.values();
    const auto ep = ep_vs_temperature(eta, JCParams::make(cfg.gamma, cfg.delta), sweep_window(cfg),
                                      cfg.tail_tolerance, cfg.threads);
    return sweep_table(eta, ep);
}

inline Result epower_delta(const RunConfig& cfg, const Grid& grid) {
    const auto delta = grid.values();
    return sweep_table(delta, ep_vs_detuning(delta, cfg.gamma, sweep_window(cfg), cfg.threads));
}

inline Result epower_surface(const RunConfig& cfg, const Grid& eta_grid, const Grid& delta_grid) {
    const EPSurface s = ep_surface(eta_grid.values(), delta_grid.values(), cfg.gamma, sweep_window(cfg),
                                   cfg.tail_tolerance, cfg.threads);
    Result res;
    res.table.header = {"eta_inv", "delta", "ep"};
    for (std::size_t i = 0; i < s.eta_inv.size(); ++i)
        for (std::size_t j = 0; j < s.delta.size(); ++j)
            res.table.rows.push_back({s.eta_inv[i], s.delta[j], s.values(static_cast<Index>(i), static_cast<Index>(j))});
    return res;
}

inline Result gate(const RunConfig& cfg) {
    LogicalEncoding enc;
    if (cfg.encoding == "direct") {
        enc = LogicalEncoding::Direct12;
    } else if (cfg.encoding == "bell") {
        enc = LogicalEncoding::BellVirtual;
    } else {
        throw std::invalid_argument("--encoding must be direct or bell");
    }
    const GateSolution sol = solve_gate_params(Rational::parse(cfg.q0), Rational::parse(cfg.q1));
    const TruncationPolicy policy{cfg.max_quanta.value_or(3), cfg.tail_tolerance};
    const LogicalGate g = logical_gate_matrix(sol, enc, policy, cfg.t);
    const GateTarget target = enc == LogicalEncoding::Direct12 ? GateTarget::SwapPhase : GateTarget::ControlledPhase;
    const GateReport rep = gate_fidelity(g.matrix, target, g.leakage);

    Result res;
    res.table.header = {"row", "col", "re", "im", "abs"};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            res.table.rows.push_back({double(i), double(j), g.matrix(i, j).real(), g.matrix(i, j).imag(),
                                      std::abs(g.matrix(i, j))});

    const auto [w0, w1] = congruence_witness(sol);
    const auto at_pi = check_candidate_time(sol, std::numbers::pi);
    auto phases = [](const std::array<double, 4>& a) {
        json arr = json::array();
        for (double x : a) arr.push_back(round12(x));
        return arr;
    };
    res.meta = json{
        {"q0", sol.q0.str()},
        {"q1", sol.q1.str()},
        {"encoding", to_string(enc)},
        {"target", target == GateTarget::SwapPhase ? "swap_phase" : "controlled_phase"},
        {"gamma_squared", sol.gamma_squared.str()},
        {"delta_squared", sol.delta_squared.str()},
        {"gamma", round12(sol.gamma)},
        {"delta", round12(sol.delta)},
        {"t_g", round12(sol.t_gate)},
        {"t_g_over_pi", sol.t_gate_over_pi.str()},
        {"t", round12(g.t)},
        {"N", sol.N},
        {"M", sol.M},
        {"omega0_t_over_pi", w0.str()},
        {"omega1_t_over_pi", w1.str()},
        {"fidelity", round12(rep.fidelity)},
        {"global_phase", round12(rep.global_phase)},
        {"phase_profile", phases(rep.phase_profile)},
        {"relative_phases", phases(rep.relative_phases)},
        {"sector_phase", round12(wrap_phase(0.5 * sol.delta * g.t))},
        {"leakage", round12(g.leakage)},
        {"leakage_flagged", rep.leakage_flagged},
        {"t_pi_check", json{{"s0", round12(at_pi.s0)}, {"s1", round12(at_pi.s1)},
                            {"realizes_gate", at_pi.realizes_gate}}},
    };
    return res;
}

inline Result wstate(const RunConfig& cfg) {
    const double t = cfg.t.value_or(w_full_transfer_time(cfg.modes, cfg.gamma));
    const WState s = w_state(cfg.modes, t, cfg.gamma);
    Result res;
    res.table.header = {"component", "re", "im"};
    res.table.rows.push_back({0.0, s.excited.real(), s.excited.imag()});
    for (int i = 0; i < s.n_modes; ++i) res.table.rows.push_back({i + 1.0, s.modes[i].real(), s.modes[i].imag()});
    res.meta = json{{"n_modes", s.n_modes}, {"t", round12(t)}, {"fidelity", round12(w_fidelity(s))}};
    return res;
}

inline Result repro(const RunConfig& cfg) {
    const std::vector<double> temps{0.0, 0.5, 1.0, 5.0};
    const auto& f = cfg.figure;
    if (f == "tz") return series(cfg, Vacuum{}, JCParams::make(1.0, 0.0), 2.0 * std::numbers::pi);
    if (f == "negav") {
        return long_series(cfg, "eta_inv", temps,
                           [&](double e) { return std::pair{initial_for(cfg, e), JCParams::make(1.0, 0.0)}; },
                           4.0 * std::numbers::pi);
    }
    if (f == "det0") {
        return long_series(cfg, "delta", {0.0, 1.0, 2.0},
                           [&](double d) { return std::pair{InitialState{Vacuum{}}, JCParams::make(1.0, d)}; },
                           4.0 * std::numbers::pi);
    }
    if (f == "detvar") {
        return long_series(cfg, "eta_inv", temps,
                           [&](double e) { return std::pair{initial_for(cfg, e), JCParams::make(1.0, 1.0)}; },
                           4.0 * std::numbers::pi);
    }
    RunConfig c = cfg;
    c.gamma = 1.0;
    if (f == "enpow") {
        c.delta = 0.0;
        return epower_T(c, cfg.eta_grid.value_or(Grid{0.0, 10.0, 21}));
    }
    if (f == "epdet") return epower_delta(c, cfg.delta_grid.value_or(Grid{0.0, 10.0, 21}));
    if (f == "ep3d") {
        return epower_surface(c, cfg.eta_grid.value_or(Grid{0.0, 5.0, 6}), cfg.delta_grid.value_or(Grid{0.0, 5.0, 6}));
    }
    throw std::invalid_argument("unknown figure '" + f + "'");
}

inline Result dispatch(const RunConfig& cfg) {
    const auto& s = cfg.scenario;
    if (s == "vacuum") return series(cfg, Vacuum{}, JCParams::make(cfg.gamma, cfg.delta), 2.0 * std::numbers::pi);
    if (s == "thermal") {
        return series(cfg, thermal_spec(cfg, cfg.eta_inv), JCParams::make(cfg.gamma, cfg.delta), 4.0 * std::numbers::pi);
    }
    if (s == "epower-T") return epower_T(cfg, cfg.eta_grid.value_or(Grid{0.0, 10.0, 21}));
    if (s == "epower-delta") return epower_delta(cfg, cfg.delta_grid.value_or(Grid{0.0, 10.0, 21}));
    if (s == "epower-surface") {
        return epower_surface(cfg, cfg.eta_grid.value_or(Grid{0.0, 5.0, 6}), cfg.delta_grid.value_or(Grid{0.0, 5.0, 6}));
    }
    if (s == "gate") return gate(cfg);
    if (s == "wstate") return wstate(cfg);
    if (s == "repro") return repro(cfg);
    throw std::invalid_argument("unknown scenario '" + s + "'");
}

inline std::string render(const RunConfig& cfg, const Result& res) {
    if (cfg.format == "csv") return res.table.csv();
    json doc = res.meta;
    doc["scenario"] = cfg.scenario;
    if (!cfg.figure.empty()) doc["figure"] = cfg.figure;
    doc["data"] = res.table.to_json();
    return doc.dump(2) + "\n";
}

}  // namespace detail

// Runs one scenario and writes its dataset to cfg.output (or `out` when empty).
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::string text;
    try {
        if (cfg.format != "csv" && cfg.format != "json") throw std::invalid_argument("--format must be csv or json");
        if (cfg.threads == 0) throw std::invalid_argument("--threads must be >= 1");
        if (cfg.report_frequency && cfg.scenario != "vacuum" && cfg.scenario != "thermal") {
            throw std::invalid_argument("--report-frequency applies to vacuum and thermal runs");
        }
        const detail::Result res = detail::dispatch(cfg);
        text = detail::render(cfg, res);
        if (cfg.report_frequency && cfg.format == "csv") {
            const auto& f = res.meta["effective_frequency"];
            err << "effective_frequency exact=" << f["exact"] << " approx=" << f["approx"]
                << " measured=" << f["measured"] << '\n';
        }
    } catch (const TruncationError& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::InvalidConfig);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::InvalidConfig);
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::InvalidConfig);
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return static_cast<int>(ExitCode::NumericalFailure);
    }
    if (cfg.output.empty()) {
        out << text;
        return static_cast<int>(ExitCode::Ok);
    }
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file || !(file << text)) {
        err << "error: cannot write " << cfg.output << '\n';
        return static_cast<int>(ExitCode::InvalidConfig);
    }
    return static_cast<int>(ExitCode::Ok);
}

// Registers every subcommand and flag; the chosen subcommand lands in cfg.scenario.
inline void configure(CLI::App& app, RunConfig& cfg) {
    app.require_subcommand(1);
    auto grid_option = [](CLI::App* sub, const std::string& name, std::optional<Grid>& target,
                          const std::string& help) {
        sub->add_option_function<std::vector<double>>(
               name,
               [&target](const std::vector<double>& v) {
                   if (v[2] < 1 || v[2] != std::floor(v[2])) throw CLI::ValidationError("grid point count must be a positive integer");
                   target = Grid{v[0], v[1], static_cast<int>(v[2])};
               },
               help)
            ->expected(3);
    };
    static const std::map<std::string, std::string> about{
        {"vacuum", "negativity and linear entropy from the vacuum"},
        {"thermal", "negativity from a thermal two-mode state"},
        {"epower-T", "entangling power over a temperature grid"},
        {"epower-delta", "entangling power over a detuning grid (vacuum reference)"},
        {"epower-surface", "entangling power over a temperature x detuning grid"},
        {"gate", "solve gate parameters and extract the logical 4x4 matrix"},
        {"wstate", "single-excitation transfer into n modes"},
        {"repro", "regenerate a named figure dataset"}};
    for (const auto& name : scenarios()) {
        CLI::App* sub = app.add_subcommand(name, about.at(name));
        sub->callback([&cfg, name] { cfg.scenario = name; });
        sub->add_option("--gamma", cfg.gamma, "coupling (default 1)");
        sub->add_option("--delta", cfg.delta, "detuning (default 0)");
        sub->add_option("--eta-inv", cfg.eta_inv, "temperature k_B T / hbar omega (default 0)")->check(CLI::NonNegativeNumber);
        sub->add_option("--t-max", cfg.t_max, "end of the time grid or search window")->check(CLI::PositiveNumber);
        sub->add_option("--steps", cfg.steps, "time steps (series) or coarse samples (sweeps)")->check(CLI::PositiveNumber);
        sub->add_option("--max-quanta", cfg.max_quanta, "fixed truncation n1 + n2 <= M")->check(CLI::NonNegativeNumber);
        sub->add_option("--tail-tolerance", cfg.tail_tolerance, "thermal mass allowed outside the truncation")
            ->check(CLI::Range(1e-15, 0.5));
        sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--output,-o", cfg.output, "output file (default stdout)");
        sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
        grid_option(sub, "--eta-grid", cfg.eta_grid, "temperature grid: lo hi points");
        grid_option(sub, "--delta-grid", cfg.delta_grid, "detuning grid: lo hi points");
        sub->add_option("--q0", cfg.q0, "2 Omega_0 as p, p/q or decimal");
        sub->add_option("--q1", cfg.q1, "2 Omega_1 as p, p/q or decimal");
        sub->add_option("--encoding", cfg.encoding, "direct or bell")->check(CLI::IsMember({"direct", "bell"}));
        sub->add_option("--modes", cfg.modes, "number of modes for wstate")->check(CLI::Range(2, 1000000));
        sub->add_option("--t", cfg.t, "evaluation time for gate or wstate")->check(CLI::NonNegativeNumber);
        sub->add_flag("--report-frequency", cfg.report_frequency, "report the detuned oscillation frequency");
        if (name == "repro") {
            sub->add_option("--figure", cfg.figure, "figure dataset")->required()->check(CLI::IsMember(figures()));
        }
    }
}

// Full command line: parse, run, map errors to exit codes.
inline int main_entry(int argc, const char* const* argv, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
    CLI::App app{"Two-mode Jaynes-Cummings entanglement, sweeps and gates", "twomode"};
    RunConfig cfg;
    configure(app, cfg);
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return static_cast<int>(ExitCode::InvalidConfig);
    }
    return run(cfg, out, err);
}

}  // namespace twomode::cli
