// sweep.hpp — Parameter sweeps over (g_c, Omega/omega) grids: JSON
// configuration with named presets, fail-soft parallel execution, finite
// difference series, and deterministic CSV + run.meta emission.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "rabicrit/dynamics.hpp"
#include "rabicrit/version.hpp"

namespace rabicrit {

using json = nlohmann::json;

// ------------------------------ Sweep specification --------------------------

enum class Quantity { nbar0, dnbar0, c2k, nmax, phi_out_ss, dphi_out_ss };

inline const char* quantity_name(Quantity q) {
    switch (q) {
        case Quantity::nbar0: return "nbar0";
        case Quantity::dnbar0: return "dnbar0";
        case Quantity::c2k: return "c2k";
        case Quantity::nmax: return "nmax";
        case Quantity::phi_out_ss: return "phi_out_ss";
        default: return "dphi_out_ss";
    }
}

inline Quantity quantity_from(const std::string& s) {
    for (Quantity q : {Quantity::nbar0, Quantity::dnbar0, Quantity::c2k,
                       Quantity::nmax, Quantity::phi_out_ss, Quantity::dphi_out_ss})
        if (s == quantity_name(q)) return q;
    throw config_error("sweep.quantity: unknown quantity '" + s + "'");
}

struct SteadyPolicy {
    double rtol_np = 1e-6;
    double rtol_sp = 1e-8;
    double zero_floor = 1e-7;
    double max_horizon_np = 1.2e5;
    double max_horizon_sp = 6.0e5;
    double flat_tol = 1e-3;
    double window_factor = 10.0;
};

struct SweepSpec {
    Quantity quantity = Quantity::nbar0;
    std::vector<double> gc_grid;     // strictly increasing, >= 0
    std::vector<double> ratios;      // frequency ratios Omega/omega
    int l = 2;
    int n_d = 0;                     // 0: n_d = 2 + l
    double pump_frac = 0.005;
    double stokes_ratio = 2.0;
    DissipationParams dissipation;
    int k_max = 4;                   // c2k quantity
    int n_fock = 0;                  // 0: automatic
    int max_nfock = 4096;
    int dressed_m = 60;
    double delta = 0.0;              // dnbar0 step; 0: automatic
    double time_cap = default_time_cap;
    double rtol_coherent = 1e-8;
    bool check_truncation = true;
    bool analytic_only = false;      // nmax: skip dynamics, use nmax_e
    SteadyPolicy steady;
    int jobs = 1;

    void validate() const {
        if (gc_grid.empty()) throw config_error("sweep.gc: empty grid");
        for (double g : gc_grid)
            if (!(g >= 0.0)) throw config_error("sweep.gc: values must be >= 0");
        for (size_t i = 1; i < gc_grid.size(); ++i)
            if (!(gc_grid[i] > gc_grid[i - 1]))
                throw config_error("sweep.gc: grid must be strictly increasing");
        if (ratios.empty()) throw config_error("sweep.ratios: empty list");
        for (double r : ratios)
            if (!(r > 0.0)) throw config_error("sweep.ratios: must be > 0");
        if (l < 1) throw config_error("drive.l: must be >= 1");
        if (n_d != 0 && n_d < l) throw config_error("drive.n_d: must be >= l");
        if (jobs < 1) throw config_error("numerics.jobs: must be >= 1");
        if (k_max < 0 || k_max > 64) throw config_error("sweep.k_max: out of range");
        dissipation.validate();
    }
};

// ------------------------------ Grid helpers ---------------------------------

inline std::vector<double> grid_range(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo)) throw config_error("grid range: bad bounds");
    std::vector<double> out;
    const long n = std::lround((hi - lo) / step);
    for (long i = 0; i <= n; ++i) {
        const double v = lo + i * step;
        if (v <= hi + 1e-12 * std::max(1.0, std::abs(hi))) out.push_back(v);
    }
    return out;
}

// Sorted union with a tolerance, so refinement windows overlay coarse grids.
inline std::vector<double> grid_union(std::vector<double> a,
                                      const std::vector<double>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    std::vector<double> out;
    for (double v : a)
        if (out.empty() || v - out.back() > 1e-12 * std::max(1.0, std::abs(v)))
            out.push_back(v);
    return out;
}

// ------------------------------ Config parsing -------------------------------

namespace detail {

inline void reject_unknown(const json& block, const char* path,
                           std::initializer_list<const char*> allowed) {
    for (auto it = block.begin(); it != block.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok)
            throw config_error(std::string("config: unknown key '") + path + "." +
                               it.key() + "'");
    }
}

inline std::vector<double> parse_gc_block(const json& g) {
    if (g.is_array()) return g.get<std::vector<double>>();
    reject_unknown(g, "sweep.gc", {"list", "lo", "hi", "step", "refine"});
    std::vector<double> grid;
    if (g.contains("list")) grid = g.at("list").get<std::vector<double>>();
    else if (g.contains("lo"))
        grid = grid_range(g.at("lo").get<double>(), g.at("hi").get<double>(),
                          g.at("step").get<double>());
    if (g.contains("refine")) {
        const json& r = g.at("refine");
        reject_unknown(r, "sweep.gc.refine", {"lo", "hi", "step"});
        const auto fine = grid_range(r.at("lo").get<double>(),
                                     r.at("hi").get<double>(),
                                     r.at("step").get<double>());
        if (!grid.empty() &&
            (fine.front() < grid.front() - 1e-12 || fine.back() > grid.back() + 1e-12))
            throw config_error("sweep.gc.refine: window outside the coarse range");
        grid = grid_union(std::move(grid), fine);
    }
    return grid;
}

} // namespace detail

// Parses the JSON configuration document into a validated SweepSpec.
// Top-level blocks: model, drive, dissipation, sweep, numerics.
inline SweepSpec parse_config_json(const json& doc) {
    detail::reject_unknown(doc, "$",
                           {"model", "drive", "dissipation", "sweep", "numerics"});
    SweepSpec spec;

    if (doc.contains("model")) {
        const json& m = doc.at("model");
        detail::reject_unknown(m, "model", {"ratio", "ratios", "omega"});
        if (m.contains("omega") && m.at("omega").get<double>() != 1.0)
            throw config_error("model.omega: only the omega = 1 convention is supported");
        if (m.contains("ratio")) spec.ratios = {m.at("ratio").get<double>()};
        if (m.contains("ratios")) spec.ratios = m.at("ratios").get<std::vector<double>>();
    }
    if (doc.contains("drive")) {
        const json& d = doc.at("drive");
        detail::reject_unknown(d, "drive",
                               {"l", "n_d", "pump_frac", "stokes_ratio"});
        if (d.contains("l")) spec.l = d.at("l").get<int>();
        if (d.contains("n_d")) spec.n_d = d.at("n_d").get<int>();
        if (d.contains("pump_frac")) spec.pump_frac = d.at("pump_frac").get<double>();
        if (d.contains("stokes_ratio"))
            spec.stokes_ratio = d.at("stokes_ratio").get<double>();
    }
    if (doc.contains("dissipation")) {
        const json& k = doc.at("dissipation");
        detail::reject_unknown(k, "dissipation", {"kappa", "gamma1", "gamma2"});
        if (k.contains("kappa")) spec.dissipation.kappa = k.at("kappa").get<double>();
        if (k.contains("gamma1")) spec.dissipation.gamma1 = k.at("gamma1").get<double>();
        if (k.contains("gamma2")) spec.dissipation.gamma2 = k.at("gamma2").get<double>();
    }
    if (doc.contains("sweep")) {
        const json& s = doc.at("sweep");
        detail::reject_unknown(s, "sweep", {"quantity", "gc", "ratios", "k_max"});
        if (s.contains("quantity"))
            spec.quantity = quantity_from(s.at("quantity").get<std::string>());
        if (s.contains("gc")) spec.gc_grid = detail::parse_gc_block(s.at("gc"));
        if (s.contains("ratios"))
            spec.ratios = s.at("ratios").get<std::vector<double>>();
        if (s.contains("k_max")) spec.k_max = s.at("k_max").get<int>();
    }
    if (doc.contains("numerics")) {
        const json& n = doc.at("numerics");
        detail::reject_unknown(
            n, "numerics",
            {"nfock", "max_nfock", "dressed_m", "delta", "time_cap",
             "rtol_coherent", "check_truncation", "analytic_only", "jobs",
             "steady"});
        if (n.contains("nfock")) spec.n_fock = n.at("nfock").get<int>();
        if (n.contains("max_nfock")) spec.max_nfock = n.at("max_nfock").get<int>();
        if (n.contains("dressed_m")) spec.dressed_m = n.at("dressed_m").get<int>();
        if (n.contains("delta")) spec.delta = n.at("delta").get<double>();
        if (n.contains("time_cap")) spec.time_cap = n.at("time_cap").get<double>();
        if (n.contains("rtol_coherent"))
            spec.rtol_coherent = n.at("rtol_coherent").get<double>();
        if (n.contains("check_truncation"))
            spec.check_truncation = n.at("check_truncation").get<bool>();
        if (n.contains("analytic_only"))
            spec.analytic_only = n.at("analytic_only").get<bool>();
        if (n.contains("jobs")) spec.jobs = n.at("jobs").get<int>();
        if (n.contains("steady")) {
            const json& st = n.at("steady");
            detail::reject_unknown(st, "numerics.steady",
                                   {"rtol_np", "rtol_sp", "zero_floor",
                                    "max_horizon_np", "max_horizon_sp",
                                    "flat_tol", "window_factor"});
            auto& sp = spec.steady;
            if (st.contains("rtol_np")) sp.rtol_np = st.at("rtol_np").get<double>();
            if (st.contains("rtol_sp")) sp.rtol_sp = st.at("rtol_sp").get<double>();
            if (st.contains("zero_floor"))
                sp.zero_floor = st.at("zero_floor").get<double>();
            if (st.contains("max_horizon_np"))
                sp.max_horizon_np = st.at("max_horizon_np").get<double>();
            if (st.contains("max_horizon_sp"))
                sp.max_horizon_sp = st.at("max_horizon_sp").get<double>();
            if (st.contains("flat_tol")) sp.flat_tol = st.at("flat_tol").get<double>();
            if (st.contains("window_factor"))
                sp.window_factor = st.at("window_factor").get<double>();
        }
    }
    try {
        spec.validate();
    } catch (const config_error&) {
        throw;
    }
    return spec;
}

inline SweepSpec parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw config_error(std::string("config: invalid JSON: ") + e.what());
    }
    return parse_config_json(doc);
}

inline SweepSpec parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

// ------------------------------ Presets --------------------------------------

// Caption parameter sets.  fig3/fig4: weak drives 0.005 (E2-E0), ratio 1e6,
// n_d = 2 + l.  fig5: kappa = gamma1 = gamma2 = 0.01, drives 0.05 (E2-E0).
inline const std::map<std::string, const char*>& preset_table() {
    static const std::map<std::string, const char*> table = {
        {"fig2a", R"({
  "sweep": {"quantity": "dnbar0",
            "gc": {"lo": 0.0, "hi": 1.2, "step": 0.02,
                   "refine": {"lo": 0.99, "hi": 1.01, "step": 0.001}}},
  "model": {"ratios": [100.0, 10000.0, 1000000.0]}
})"},
        {"fig2b", R"({
  "sweep": {"quantity": "c2k", "k_max": 4,
            "gc": {"lo": 0.5, "hi": 1.2, "step": 0.02,
                   "refine": {"lo": 0.99, "hi": 1.01, "step": 0.001}}},
  "model": {"ratios": [1000000.0]}
})"},
        {"fig3", R"({
  "sweep": {"quantity": "nmax",
            "gc": {"lo": 0.9, "hi": 1.1, "step": 0.002,
                   "refine": {"lo": 0.99, "hi": 1.01, "step": 0.0002}}},
  "model": {"ratios": [1000000.0]},
  "drive": {"l": 2, "pump_frac": 0.005, "stokes_ratio": 2.0},
  "numerics": {"analytic_only": true}
})"},
        {"fig4", R"({
  "sweep": {"quantity": "nmax",
            "gc": {"lo": 0.95, "hi": 1.05, "step": 0.005,
                   "refine": {"lo": 0.995, "hi": 1.005, "step": 0.0005}}},
  "model": {"ratios": [1000000.0]},
  "drive": {"l": 2, "pump_frac": 0.005, "stokes_ratio": 2.0},
  "numerics": {"dressed_m": 60}
})"},
        {"fig5a", R"({
  "sweep": {"quantity": "phi_out_ss",
            "gc": {"list": [0.95, 0.96, 0.97, 0.98,
                            0.99, 0.991, 0.992, 0.993, 0.994, 0.995,
                            0.996, 0.997, 0.998, 0.999,
                            1.0005, 1.001, 1.0015, 1.002, 1.0025,
                            1.005, 1.0075, 1.01,
                            1.02, 1.03, 1.04, 1.05]}},
  "model": {"ratios": [100.0, 10000.0]},
  "drive": {"l": 2, "pump_frac": 0.05, "stokes_ratio": 2.0},
  "dissipation": {"kappa": 0.01, "gamma1": 0.01, "gamma2": 0.01},
  "numerics": {"dressed_m": 32}
})"},
        {"fig5b", R"({
  "sweep": {"quantity": "dphi_out_ss",
            "gc": {"list": [0.95, 0.96, 0.97, 0.98,
                            0.99, 0.991, 0.992, 0.993, 0.994, 0.995,
                            0.996, 0.997, 0.998, 0.999,
                            1.0005, 1.001, 1.0015, 1.002, 1.0025,
                            1.005, 1.0075, 1.01,
                            1.02, 1.03, 1.04, 1.05]}},
  "model": {"ratios": [100.0, 10000.0]},
  "drive": {"l": 2, "pump_frac": 0.05, "stokes_ratio": 2.0},
  "dissipation": {"kappa": 0.01, "gamma1": 0.01, "gamma2": 0.01},
  "numerics": {"dressed_m": 32}
})"},
    };
    return table;
}

// Preset document, optionally merged with user overrides (user wins).
inline json preset_document(const std::string& name) {
    auto& table = preset_table();
    auto it = table.find(name == "fig5" ? "fig5a" : name);
    if (it == table.end()) {
        std::string known;
        for (const auto& [k, v] : table) known += (known.empty() ? "" : ", ") + k;
        throw config_error("unknown preset '" + name + "' (available: " + known + ")");
    }
    return json::parse(it->second);
}

inline json merge_config(json base, const json& overlay) {
    base.merge_patch(overlay);
    return base;
}

// ------------------------------ Sweep execution ------------------------------

struct SweepRecord {
    double g_c = 0;
    double ratio = 0;
    double value = std::numeric_limits<double>::quiet_NaN();
    bool ok = false;
    std::string error;
    std::vector<std::pair<std::string, double>> diag;  // fixed per-quantity order
    double wall_ms = 0;  // in-memory diagnostic; never emitted to CSV

    double diag_value(const std::string& key, double fallback = 0.0) const {
        for (const auto& [k, v] : diag)
            if (k == key) return v;
        return fallback;
    }
};

struct SweepResult {
    Quantity quantity = Quantity::nbar0;
    std::vector<SweepRecord> records;  // ordered by (ratio, g_c)
    int failed = 0;
};

namespace detail {

inline int effective_nfock(const SweepSpec& spec, double gc, double ratio) {
    const int wanted =
        spec.n_fock > 0 ? spec.n_fock : recommended_nfock(gc, ratio);
    if (wanted > spec.max_nfock)
        throw truncation_error("required n_fock=" + std::to_string(wanted) +
                               " exceeds max_nfock=" + std::to_string(spec.max_nfock));
    return wanted;
}

inline double auto_delta(double gc) {
    return std::abs(gc - 1.0) < 1e-2 ? 1e-4 : 1e-3;
}

inline SweepRecord eval_point(const SweepSpec& spec, double gc, double ratio) {
    SweepRecord rec;
    rec.g_c = gc;
    rec.ratio = ratio;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        switch (spec.quantity) {
            case Quantity::nbar0: {
                const int nf = effective_nfock(spec, gc, ratio);
                const ModelParams p = ModelParams::from_gc(gc, ratio);
                rec.value = nbar0(p, HilbertConfig(nf, 2), spec.check_truncation);
                rec.diag = {{"nfock", double(nf)},
                            {"converged", spec.check_truncation ? 1.0 : 0.0}};
                break;
            }
            case Quantity::dnbar0: {
                const int nf = effective_nfock(spec, gc, ratio);
                const double d = spec.delta > 0 ? spec.delta : auto_delta(gc);
                const ModelParams p = ModelParams::from_gc(gc, ratio);
                const NbarDerivative der =
                    dnbar0_dgc(p, HilbertConfig(nf, 2), d, spec.check_truncation);
                rec.value = der.value;
                rec.diag = {{"delta", d},
                            {"straddles", der.straddles ? 1.0 : 0.0},
                            {"left", der.left},
                            {"right", der.right},
                            {"nfock", double(nf)}};
                break;
            }
            case Quantity::c2k: {
                const int nf = effective_nfock(spec, gc, ratio);
                const ModelParams p = ModelParams::from_gc(gc, ratio);
                const HilbertConfig cfg(nf, 2);
                std::vector<double> mags;
                for (int k = 0; k <= spec.k_max; ++k)
                    mags.push_back(std::abs(ck_numeric(p, cfg, 2 * k)));
                rec.value = spec.k_max >= 1 ? mags[1] : mags[0];
                for (int k = 0; k <= spec.k_max; ++k)
                    rec.diag.push_back({"c2k_" + std::to_string(k), mags[k]});
                rec.diag.push_back({"nfock", double(nf)});
                break;
            }
            case Quantity::nmax: {
                const int nf = effective_nfock(spec, gc, ratio);
                PointConfig pc;
                pc.g_c = gc;
                pc.freq_ratio = ratio;
                pc.l = spec.l;
                pc.n_d = spec.n_d;
                pc.pump_frac = spec.pump_frac;
                pc.stokes_ratio = spec.stokes_ratio;
                pc.n_fock = nf;
                pc.dressed_m = spec.dressed_m;
                pc.time_cap = spec.time_cap;
                const DrivenSystem sys = make_point(pc);
                const double xi = sys.triple.xi();
                const double nmaxe = nmax_e(sys.triple, spec.l, spec.time_cap);
                double horizon = coherent_horizon(sys, spec.time_cap);
                if (spec.analytic_only) {
                    rec.value = nmaxe;
                } else {
                    CoherentOptions co;
                    co.rtol = spec.rtol_coherent;
                    const EvolutionRecord evo = evolve_coherent(sys, horizon, co);
                    rec.value = nbar_max(
                        evo, std::min(xi > 0 ? M_PI / xi : spec.time_cap,
                                      spec.time_cap));
                }
                rec.diag = {{"nmax_e", nmaxe},
                            {"xi", xi},
                            {"horizon", horizon},
                            {"nfock", double(nf)},
                            {"dressed_m", double(spec.dressed_m)},
                            {"analytic", spec.analytic_only ? 1.0 : 0.0}};
                break;
            }
            case Quantity::phi_out_ss:
            case Quantity::dphi_out_ss: {
                const int nf = effective_nfock(spec, gc, ratio);
                PointConfig pc;
                pc.g_c = gc;
                pc.freq_ratio = ratio;
                pc.l = spec.l;
                pc.n_d = spec.n_d;
                pc.pump_frac = spec.pump_frac;
                pc.stokes_ratio = spec.stokes_ratio;
                pc.n_fock = nf;
                pc.dressed_m = spec.dressed_m;
                const DrivenSystem sys = make_point(pc);
                SteadyOptions so;
                const bool sp_side = gc > 1.0;
                so.rtol = sp_side ? spec.steady.rtol_sp : spec.steady.rtol_np;
                so.zero_floor = spec.steady.zero_floor;
                so.max_horizon = sp_side ? spec.steady.max_horizon_sp
                                         : spec.steady.max_horizon_np;
                so.flat_tol = spec.steady.flat_tol;
                so.window_factor = spec.steady.window_factor;
                const SteadyResult res = steady_state(sys, spec.dissipation, so);
                rec.value = res.phi;
                rec.diag = {{"t_reached", res.t_reached},
                            {"converged", res.converged ? 1.0 : 0.0},
                            {"nfock", double(nf)},
                            {"dressed_m", double(spec.dressed_m)}};
                break;
            }
        }
        rec.ok = true;
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return rec;
}

} // namespace detail

// Evaluates every (ratio, g_c) point; per-point failures are recorded without
// aborting the sweep.  Throws only if every point failed.
inline SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    SweepResult result;
    result.quantity = spec.quantity;

    struct Task { double ratio, gc; };
    std::vector<Task> tasks;
    for (double ratio : spec.ratios)
        for (double gc : spec.gc_grid) tasks.push_back({ratio, gc});
    result.records.resize(tasks.size());

    std::atomic<size_t> next{0};
    auto worker = [&] {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            result.records[i] = detail::eval_point(spec, tasks[i].gc, tasks[i].ratio);
        }
    };
    const int jobs = std::max(1, spec.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (const auto& r : result.records)
        if (!r.ok) ++result.failed;
    if (result.failed == static_cast<int>(result.records.size()))
        throw convergence_error("run_sweep: every grid point failed; first error: " +
                                result.records.front().error);

    if (spec.quantity == Quantity::dphi_out_ss) {
        // differentiate the phi series in place
        SweepResult base = result;
        base.quantity = Quantity::phi_out_ss;
        return derivative_series(base);
    }
    return result;
}

// ----------------------------- Finite differences ----------------------------

// Central differences on the interior of each uniform segment, one-sided at
// segment ends.  Segment boundaries: a change of ratio, a step change, or the
// g_c = 1 critical point (never differenced across).
inline SweepResult derivative_series(const SweepResult& base);

inline SweepResult derivative_series(const SweepResult& base, bool);

inline SweepResult derivative_series(const SweepResult& base) {
    SweepResult out;
    out.quantity = base.quantity == Quantity::phi_out_ss ? Quantity::dphi_out_ss
                                                         : base.quantity;

    // split into (ratio, uniform-step, same-side-of-1) segments
    size_t i = 0;
    const auto& rs = base.records;
    while (i < rs.size()) {
        size_t j = i + 1;
        const double ratio = rs[i].ratio;
        std::optional<double> step;
        while (j < rs.size() && rs[j].ratio == ratio) {
            const double h = rs[j].g_c - rs[j - 1].g_c;
            const bool crosses = (rs[j - 1].g_c < 1.0) != (rs[j].g_c < 1.0) &&
                                 rs[j - 1].g_c != 1.0;
            if (crosses) break;
            if (step && std::abs(h - *step) > 1e-9 * std::max(1.0, std::abs(*step)))
                break;
            step = h;
            ++j;
        }
        const size_t n = j - i;
        if (n < 3)
            throw contract_error(
                "derivative_series: segment with fewer than 3 points at g_c=" +
                std::to_string(rs[i].g_c));
        const double h = *step;
        for (size_t k = i; k < j; ++k) {
            SweepRecord d;
            d.g_c = rs[k].g_c;
            d.ratio = ratio;
            d.ok = rs[k].ok;
            d.error = rs[k].error;
            const auto& f = rs;
            auto val = [&](size_t idx) { return f[idx].value; };
            bool usable = rs[k].ok;
            if (k == i)
                usable = usable && f[k + 1].ok,
                d.value = usable ? (val(k + 1) - val(k)) / h : d.value;
            else if (k == j - 1)
                usable = usable && f[k - 1].ok,
                d.value = usable ? (val(k) - val(k - 1)) / h : d.value;
            else
                usable = usable && f[k - 1].ok && f[k + 1].ok,
                d.value = usable ? (val(k + 1) - val(k - 1)) / (2.0 * h) : d.value;
            d.ok = usable;
            if (!usable && d.error.empty())
                d.error = "derivative: neighbouring point failed";
            d.diag = {{"phi", rs[k].value}, {"step", h}};
            out.records.push_back(std::move(d));
        }
        i = j;
    }
    for (const auto& r : out.records)
        if (!r.ok) ++out.failed;
    return out;
}

// ------------------------------ CSV / meta emission ---------------------------

namespace detail {

inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace detail

// One CSV per quantity: header row, 12 significant digits, rows ordered by
// (ratio, g_c).  Wall-clock diagnostics never enter the file, so repeated
// runs are byte-identical.
inline std::filesystem::path emit_csv(const SweepResult& result,
                                      const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto path =
        out_dir / (std::string(quantity_name(result.quantity)) + ".csv");
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw config_error("emit_csv: cannot write " + path.string());

    std::vector<std::string> diag_cols;
    for (const auto& r : result.records) {
        if (!r.ok) continue;
        for (const auto& [k, v] : r.diag) diag_cols.push_back(k);
        break;
    }
    out << "gc,ratio,value";
    for (const auto& c : diag_cols) out << "," << c;
    out << ",ok,error\n";
    for (const auto& r : result.records) {
        out << detail::fmt12(r.g_c) << "," << detail::fmt12(r.ratio) << ","
            << detail::fmt12(r.value);
        for (const auto& c : diag_cols) out << "," << detail::fmt12(r.diag_value(c));
        std::string msg = r.error;
        for (char& ch : msg)
            if (ch == ',' || ch == '\n') ch = ';';
        out << "," << (r.ok ? 1 : 0) << "," << msg << "\n";
    }
    if (!out.good()) throw config_error("emit_csv: write failed for " + path.string());
    return path;
}

// Sidecar metadata: resolved parameters, per-point convergence flags, version.
inline std::filesystem::path emit_meta(const SweepSpec& spec,
                                       const SweepResult& result,
                                       const json& resolved_config,
                                       const std::filesystem::path& out_dir,
                                       double wall_ms_total) {
    std::filesystem::create_directories(out_dir);
    json meta;
    meta["tool"] = std::string("rabicrit ") + version_string;
    meta["quantity"] = quantity_name(result.quantity);
    meta["resolved_config"] = resolved_config;
    meta["jobs"] = spec.jobs;
    meta["failed_points"] = result.failed;
    meta["wall_ms_total"] = wall_ms_total;
    json points = json::array();
    for (const auto& r : result.records) {
        json p;
        p["gc"] = r.g_c;
        p["ratio"] = r.ratio;
        p["ok"] = r.ok;
        if (!r.error.empty()) p["error"] = r.error;
        for (const auto& [k, v] : r.diag) p[k] = v;
        points.push_back(std::move(p));
    }
    meta["points"] = std::move(points);
    const auto path = out_dir / "run.meta";
    std::ofstream out(path, std::ios::trunc);
    out << meta.dump(2) << "\n";
    if (!out.good())
        throw config_error("emit_meta: write failed for " + path.string());
    return path;
}

} // namespace rabicrit
