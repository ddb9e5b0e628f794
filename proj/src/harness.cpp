#include "causal/harness.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "causal/electric.hpp"
#include "causal/error.hpp"
#include "causal/explore.hpp"
#include "causal/lazy_map.hpp"
#include "causal/metric.hpp"
#include "causal/offspring.hpp"
#include "causal/stats.hpp"
#include "causal/tree.hpp"
#include "causal/walk.hpp"

#ifndef CAUSAL_VERSION
#define CAUSAL_VERSION "0.1.0"
#endif

namespace causal {

using nlohmann::json;

namespace {

constexpr std::pair<Experiment, const char*> kNames[] = {
    {Experiment::Speed, "speed"},       {Experiment::Regen, "regen"},
    {Experiment::Hyperbolicity, "hyperbolicity"}, {Experiment::Resistance, "resistance"},
    {Experiment::Explore, "explore"},   {Experiment::Kbad, "kbad"},
    {Experiment::Boundary, "boundary"}, {Experiment::Escape, "escape"},
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(Errc::ConfigInvalid, what);
}

}  // namespace

const char* experiment_name(Experiment e) {
    for (auto [k, n] : kNames)
        if (k == e) return n;
    return "?";
}

Experiment parse_experiment(const std::string& s) {
    for (auto [k, n] : kNames)
        if (s == n) return k;
    if (s == "hyper") return Experiment::Hyperbolicity;
    if (s == "resist") return Experiment::Resistance;
    throw Error(Errc::ConfigInvalid, "unknown experiment '" + s + "'");
}

std::string version_string() { return CAUSAL_VERSION; }

double Summary::get(const std::string& key) const {
    for (const auto& [k, v] : values)
        if (k == key) return v;
    throw Error(Errc::OutOfDomain, "no summary value '" + key + "'");
}

void validate(const ExperimentConfig& cfg) {
    require(cfg.trials > 0, "trials must be positive");
    require(cfg.depth_cap > 0, "depth must be positive");
    require(cfg.n_steps > 0, "steps must be positive");
    require(cfg.k >= 1, "k must be >= 1");
    require(cfg.lambda > 0.0, "lambda must be positive");
    OffspringDistribution mu;
    try {
        mu = parse_offspring(cfg.offspring);
    } catch (const Error& e) {
        throw Error(Errc::ConfigInvalid, std::string("offspring: ") + e.what());
    }
    switch (cfg.experiment) {
        case Experiment::Explore:
        case Experiment::Kbad:
            require(mu.weight(0) == 0.0, "the half-plane experiments need mu(0) = 0");
            break;
        case Experiment::Hyperbolicity:
        case Experiment::Resistance:
        case Experiment::Boundary:
        case Experiment::Escape:
            require(mu.mean() > 1.0, "offspring law must be supercritical");
            break;
        case Experiment::Speed:
        case Experiment::Regen:
            require(mu.weight(0) == 0.0 || mu.mean() > 1.0, "offspring law must be supercritical");
            break;
    }
}

namespace {

// Walk on the half-plane when mu(0) = 0, on the causal map otherwise.
WalkTrace speed_walk(const ExperimentConfig& cfg, const OffspringDistribution& mu, std::uint64_t seed) {
    Rng rng(mix64(seed, 1));
    if (mu.weight(0) == 0.0) {
        LazyMap m = LazyMap::halfplane(mu, seed);
        return run_walk(m, m.root(), cfg.n_steps, cfg.lambda, rng);
    }
    LazyMap m = LazyMap::causal(derive_laws(mu), seed);
    return run_walk(m, m.root(), cfg.n_steps, cfg.lambda, rng);
}

json trial_record(const ExperimentConfig& cfg, const OffspringDistribution& mu, std::size_t i) {
    const std::uint64_t seed = trial_seed(cfg.master_seed, i);
    json r;
    r["trial"] = i;
    switch (cfg.experiment) {
        case Experiment::Speed: {
            WalkTrace t = speed_walk(cfg, mu, seed);
            r["H_n"] = t.heights.back();
            r["v"] = static_cast<double>(t.heights.back()) / static_cast<double>(t.steps());
            r["descent_max"] = descent_max(t);
            break;
        }
        case Experiment::Regen: {
            WalkTrace t = speed_walk(cfg, mu, seed);
            RegenReport rep = regeneration_times(t, default_regen_buffer(t.heights.size()));
            std::vector<int> dtau, dh;
            for (std::size_t j = 1; j < rep.times.size(); ++j) {
                dtau.push_back(rep.times[j] - rep.times[j - 1]);
                dh.push_back(t.heights[rep.times[j]] - t.heights[rep.times[j - 1]]);
            }
            r["tau1"] = rep.times.empty() ? -1 : rep.times.front();
            r["regenerations"] = rep.times.size();
            r["d_tau"] = dtau;
            r["d_h"] = dh;
            break;
        }
        case Experiment::Hyperbolicity: {
            Rng rng(seed);
            PlaneTree t = sample_gw_survived(mu, cfg.depth_cap, rng);
            CausalMap m = build_causal(t);
            ProbeStats st = hyperbolicity_probe(m, static_cast<int>(cfg.n_steps), rng);
            r["radius"] = cfg.depth_cap;
            r["triples"] = st.triples;
            r["surrounding"] = st.d_root_triangle.size();
            r["d_root_triangle"] = st.max();
            break;
        }
        case Experiment::Resistance: {
            Rng rng(seed);
            PlaneTree t = sample_gw_survived(mu, cfg.depth_cap, rng);
            CausalMap s = build_slice(t);
            SpineDecomposition d = spine_walk(t, rng);
            GroundedSolver solver(slice_boundary_network(s));
            std::vector<double> res;
            for (std::size_t n = 0; n < d.spine.size(); ++n) res.push_back(solver.resistance(s.from_tree(d.spine[n])));
            std::vector<double> xs(res.size());
            for (std::size_t n = 0; n < xs.size(); ++n) xs[n] = static_cast<double>(n);
            bool mono = true;
            for (std::size_t n = 1; n < res.size(); ++n) mono = mono && res[n] >= res[n - 1] - 1e-9;
            r["vertices"] = s.num_vertices();
            r["resistance"] = res;
            r["slope"] = ls_slope(xs, res);
            r["monotone"] = mono;
            break;
        }
        case Experiment::Explore: {
            LazyMap m = LazyMap::halfplane(mu, seed);
            Exploration ex(m, cfg.k, Rng(mix64(seed, 1)));
            ex.run_walk_steps(cfg.n_steps);
            long worst = 0;
            bool phi_ok = true;
            for (long n = 0; n < cfg.n_steps; ++n) {
                long gap = ex.phi(n + 1) - ex.phi(n);
                worst = std::max(worst, gap);
                phi_ok = phi_ok && gap <= 7L * cfg.k * (n + 1);
            }
            bool free_ok = true;
            for (const auto& ev : ex.log())
                if (ev.kind == StepKind::Explore && ev.free_left < cfg.k && ev.free_right < cfg.k) free_ok = false;
            r["clock"] = ex.clock();
            r["explored"] = ex.explored_vertices().size();
            r["max_phi_gap"] = worst;
            r["phi_bound_ok"] = phi_ok;
            r["kfree_ok"] = free_ok;
            r["stable"] = ex.is_stable();
            break;
        }
        case Experiment::Kbad: {
            LazyMap m = LazyMap::halfplane(mu, seed);
            r["kbad"] = kbad(m, m.root(), cfg.k);
            break;
        }
        case Experiment::Boundary: {
            LazyMap m = LazyMap::causal(derive_laws(mu), seed);
            Rng r1(mix64(seed, 1)), r2(mix64(seed, 2));
            const int h = cfg.depth_cap;
            auto stop = [&](int v) { return m.height(v) >= 3 * h + 10; };
            WalkTrace a = run_walk_until(m, m.root(), cfg.n_steps, cfg.lambda, r1, stop);
            WalkTrace b = run_walk_until(m, m.root(), cfg.n_steps, cfg.lambda, r2, stop);
            try {
                int ma = boundary_marker(m, a, h), mb = boundary_marker(m, b, h);
                r["valid"] = true;
                r["differ"] = ma != mb;
            } catch (const Error& e) {
                if (e.code() != Errc::TailNotAboveH) throw;
                r["valid"] = false;
                r["differ"] = false;
            }
            break;
        }
        case Experiment::Escape: {
            Rng rng(seed);
            EscapeOutcome o =
                escape_count(backbone_offspring(mu), cfg.k, escape_u_linear(cfg.depth_cap), cfg.depth_cap, rng);
            r["survived"] = o.survived;
            r["killed_at"] = o.killed_at;
            break;
        }
    }
    return r;
}

Summary summarize(const ExperimentConfig& cfg, const OffspringDistribution& mu, const std::vector<json>& recs) {
    Summary s;
    s.experiment = experiment_name(cfg.experiment);
    s.trials = static_cast<long>(recs.size());
    auto add = [&](const char* k, double v) { s.values.emplace_back(k, v); };
    auto proportion = [&](const char* key) {
        long hits = 0;
        for (const auto& r : recs) hits += r[key].get<bool>() ? 1 : 0;
        Interval ci = wilson(hits, s.trials);
        add("successes", static_cast<double>(hits));
        add("p", static_cast<double>(hits) / static_cast<double>(s.trials));
        add("ci_lo", ci.lo);
        add("ci_hi", ci.hi);
    };
    switch (cfg.experiment) {
        case Experiment::Speed: {
            std::vector<double> v;
            for (const auto& r : recs) v.push_back(r["v"].get<double>());
            MeanCI ci = mean_ci(v);
            add("v_hat", ci.mean);
            add("ci_lo", ci.lo);
            add("ci_hi", ci.hi);
            break;
        }
        case Experiment::Regen: {
            std::vector<double> dtau, tau1;
            long sum_tau = 0, sum_h = 0;
            for (const auto& r : recs) {
                for (int x : r["d_tau"]) {
                    dtau.push_back(x);
                    sum_tau += x;
                }
                for (int x : r["d_h"]) sum_h += x;
                if (r["tau1"].get<int>() >= 0) tau1.push_back(r["tau1"].get<int>());
            }
            std::vector<double> a(dtau.begin(), dtau.begin() + static_cast<long>(dtau.size() / 2));
            std::vector<double> b(dtau.begin() + static_cast<long>(dtau.size() / 2), dtau.end());
            TestResult ks = (a.empty() || b.empty()) ? TestResult{} : ks_two_sample(a, b);
            add("increments", static_cast<double>(dtau.size()));
            add("v_regen", sum_tau > 0 ? static_cast<double>(sum_h) / static_cast<double>(sum_tau) : 0.0);
            add("mean_tau1", mean_ci(tau1).mean);
            add("ks_p", ks.p_value);
            break;
        }
        case Experiment::Hyperbolicity: {
            double mx = -1, tot = 0;
            long cnt = 0;
            for (const auto& r : recs) {
                mx = std::max(mx, r["d_root_triangle"].get<double>());
                cnt += r["surrounding"].get<long>();
                tot += r["d_root_triangle"].get<double>();
            }
            add("max_d_root_triangle", mx);
            add("mean_trial_max", tot / static_cast<double>(s.trials));
            add("surrounding", static_cast<double>(cnt));
            break;
        }
        case Experiment::Resistance: {
            std::vector<double> slopes;
            long mono = 0;
            for (const auto& r : recs) {
                slopes.push_back(r["slope"].get<double>());
                mono += r["monotone"].get<bool>() ? 1 : 0;
            }
            MeanCI ci = mean_ci(slopes);
            add("mean_slope", ci.mean);
            add("ci_lo", ci.lo);
            add("ci_hi", ci.hi);
            add("monotone_fraction", static_cast<double>(mono) / static_cast<double>(s.trials));
            break;
        }
        case Experiment::Explore: {
            long ok = 0;
            double gap = 0;
            for (const auto& r : recs) {
                ok += (r["phi_bound_ok"].get<bool>() && r["kfree_ok"].get<bool>() && r["stable"].get<bool>()) ? 1 : 0;
                gap = std::max(gap, r["max_phi_gap"].get<double>());
            }
            add("runs_ok", static_cast<double>(ok));
            add("max_phi_gap", gap);
            break;
        }
        case Experiment::Kbad:
            proportion("kbad");
            add("exact", std::pow(mu.weight(1), (cfg.k + 1) * (2 * cfg.k + 1)));
            break;
        case Experiment::Boundary: {
            long valid = 0, differ = 0;
            for (const auto& r : recs) {
                valid += r["valid"].get<bool>() ? 1 : 0;
                differ += r["differ"].get<bool>() ? 1 : 0;
            }
            add("valid", static_cast<double>(valid));
            add("differ_fraction", valid > 0 ? static_cast<double>(differ) / static_cast<double>(valid) : 0.0);
            break;
        }
        case Experiment::Escape:
            proportion("survived");
            break;
    }
    return s;
}

}  // namespace

Summary run_experiment(const ExperimentConfig& cfg, std::vector<std::string>& records) {
    validate(cfg);
    const OffspringDistribution mu = parse_offspring(cfg.offspring);
    auto recs = run_trials(
        static_cast<std::size_t>(cfg.trials), [&](std::size_t i) { return trial_record(cfg, mu, i); }, cfg.exec);
    records.clear();
    for (const auto& r : recs) records.push_back(r.dump());
    return summarize(cfg, mu, recs);
}

std::string summary_csv(const Summary& s) {
    std::ostringstream os;
    os << "experiment,trials";
    for (const auto& [k, v] : s.values) os << ',' << k;
    os << '\n' << s.experiment << ',' << s.trials;
    os.precision(17);
    for (const auto& [k, v] : s.values) os << ',' << v;
    os << '\n';
    return os.str();
}

Summary run_experiment(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> records;
    Summary s = run_experiment(cfg, records);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw Error(Errc::IoError, "cannot create " + cfg.out_dir + ": " + ec.message());
    const std::string base = (fs::path(cfg.out_dir) / s.experiment).string();
    auto write = [](const std::string& path, const std::string& text) {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw Error(Errc::IoError, "cannot write " + path);
        f << text;
        if (!f) throw Error(Errc::IoError, "write failed: " + path);
    };
    std::string jsonl;
    for (const auto& r : records) jsonl += r + '\n';
    write(base + ".jsonl", jsonl);
    write(base + "_summary.csv", summary_csv(s));
    json man;
    man["schema"] = 1;
    man["version"] = version_string();
    man["config"] = {{"offspring", cfg.offspring},  {"experiment", s.experiment}, {"depth", cfg.depth_cap},
                     {"steps", cfg.n_steps},        {"trials", cfg.trials},       {"k", cfg.k},
                     {"lambda", cfg.lambda},        {"seed", cfg.master_seed},    {"out", cfg.out_dir}};
    man["wall_seconds"] = wall;
    write((fs::path(cfg.out_dir) / "manifest.json").string(), man.dump(2) + '\n');
    return s;
}

std::string render_svg(const CausalMap& m) {
    const int n = m.num_vertices();
    std::vector<double> x(n), y(n);
    const bool radial = m.kind() == MapKind::Causal;
    const double unit = 40.0;
    int widest = 1;
    for (const auto& lvl : m.levels()) widest = std::max(widest, static_cast<int>(lvl.size()));
    const int H = m.max_height();
    double size;
    if (radial) {
        size = 2.0 * unit * (H + 2);
        for (int v = 0; v < n; ++v) {
            const auto& vx = m.vertex(v);
            const double r = unit * (vx.height + 1);
            const double a = 2.0 * std::numbers::pi * vx.level_index / static_cast<double>(m.level(vx.height).size());
            x[v] = size / 2 + r * std::cos(a);
            y[v] = size / 2 - r * std::sin(a);
        }
    } else {
        size = 0;
        for (int v = 0; v < n; ++v) {
            const auto& vx = m.vertex(v);
            const double w = static_cast<double>(m.level(vx.height).size());
            x[v] = unit * (0.5 + (vx.level_index + 0.5) * widest / w);
            y[v] = unit * (H - vx.height + 1);
        }
    }
    const double width = radial ? size : unit * (widest + 1);
    const double height = radial ? size : unit * (H - m.min_height() + 2);
    std::ostringstream os;
    os.precision(6);
    os << std::fixed;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<g stroke=\"#444\" stroke-width=\"1\" fill=\"none\">\n";
    for (const auto& e : m.edges()) {
        const bool arc = radial && (e.kind == EdgeKind::Horizontal || e.kind == EdgeKind::Wrap);
        if (arc && m.level(m.height(e.u)).size() > 1) {
            const double r = unit * (m.height(e.u) + 1);
            int a = e.u, b = e.v;
            // counter-clockwise from the lower rank to the next one
            if (e.kind == EdgeKind::Wrap ? m.vertex(a).level_index == 0
                                         : m.vertex(a).level_index > m.vertex(b).level_index)
                std::swap(a, b);
            os << "<path class=\"" << edge_kind_name(e.kind) << "\" d=\"M " << x[a] << ' ' << y[a] << " A " << r << ' '
               << r << " 0 0 0 " << x[b] << ' ' << y[b] << "\"/>\n";
        } else {
            os << "<line class=\"" << edge_kind_name(e.kind) << "\" x1=\"" << x[e.u] << "\" y1=\"" << y[e.u]
               << "\" x2=\"" << x[e.v] << "\" y2=\"" << y[e.v] << "\"/>\n";
        }
    }
    os << "</g>\n<g fill=\"#c0392b\">\n";
    for (int v = 0; v < n; ++v)
        os << "<circle id=\"v" << v << "\" cx=\"" << x[v] << "\" cy=\"" << y[v] << "\" r=\"3\""
           << (m.vertex(v).stub ? " fill=\"#888\"" : "") << "/>\n";
    os << "</g>\n</svg>\n";
    return os.str();
}

void render_svg(const CausalMap& m, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error(Errc::IoError, "cannot write " + path);
    f << render_svg(m);
    if (!f) throw Error(Errc::IoError, "write failed: " + path);
}

}  // namespace causal
