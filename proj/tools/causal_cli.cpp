#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "causal/cmap.hpp"
#include "causal/error.hpp"
#include "causal/harness.hpp"
#include "causal/lazy_map.hpp"
#include "causal/offspring.hpp"
#include "causal/tree.hpp"
#include "causal/walk.hpp"

using namespace causal;

namespace {

std::ostream& open_out(const std::string& path, std::ofstream& f) {
    if (path.empty() || path == "-") return std::cout;
    f.open(path);
    if (!f) throw Error(Errc::IoError, "cannot write " + path);
    return f;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Supercritical causal maps: sampling, walks, explorations and resistances"};
    app.set_version_flag("--version", version_string());
    app.set_config("--config", "", "TOML file with the same keys as the flags");
    app.fallthrough();
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string out;
    std::string kind = "causal";
    bool serial = false;
    app.add_option("--mu", cfg.offspring, "offspring law, e.g. 0:1/4,2:3/4")->capture_default_str();
    app.add_option("--depth", cfg.depth_cap, "depth cap / marker height")->capture_default_str();
    app.add_option("--steps", cfg.n_steps, "walk steps (probe triples for hyper)")->capture_default_str();
    app.add_option("--trials", cfg.trials, "independent trials")->capture_default_str();
    app.add_option("--k", cfg.k, "k for kbad / explore / escape start")->capture_default_str();
    app.add_option("--lambda", cfg.lambda, "walk bias (1 = simple walk)")->capture_default_str();
    app.add_option("--seed", cfg.master_seed, "master seed")->capture_default_str();
    app.add_option("--out", out, "output directory (experiments) or file");
    app.add_option("--kind", kind, "map kind for sample/walk/render: causal, slice, halfplane")
        ->check(CLI::IsMember({"causal", "slice", "halfplane"}));
    app.add_flag("--serial", serial, "run trials on one thread");

    auto* sample = app.add_subcommand("sample", "sample a tree conditioned to survive and print it");
    auto* walk = app.add_subcommand("walk", "run one walk and print `n vertex H_n` lines");
    auto* render = app.add_subcommand("render", "render a sampled map as SVG");
    struct Exp {
        const char* cmd;
        Experiment e;
        const char* help;
    };
    const Exp exps[] = {
        {"speed", Experiment::Speed, "walk speed estimate"},
        {"regen", Experiment::Regen, "regeneration increments"},
        {"hyper", Experiment::Hyperbolicity, "geodesic triangle probe"},
        {"resist", Experiment::Resistance, "R(x_n <-> boundary) along the spine"},
        {"explore", Experiment::Explore, "exploration bounds"},
        {"kbad", Experiment::Kbad, "probability that the root is k-bad"},
        {"boundary", Experiment::Boundary, "paired boundary markers"},
        {"escape", Experiment::Escape, "escaping sequences survival"},
    };
    std::vector<std::pair<CLI::App*, Experiment>> exp_cmds;
    for (const auto& x : exps) exp_cmds.emplace_back(app.add_subcommand(x.cmd, x.help), x.e);

    CLI11_PARSE(app, argc, argv);
    cfg.exec = serial ? Exec::Serial : Exec::Parallel;

    try {
        for (auto [cmd, e] : exp_cmds) {
            if (!cmd->parsed()) continue;
            cfg.experiment = e;
            if (!out.empty()) cfg.out_dir = out;
            Summary s = run_experiment(cfg);
            std::cout << summary_csv(s);
            return 0;
        }
        const OffspringDistribution mu = parse_offspring(cfg.offspring);
        std::ofstream f;
        if (sample->parsed()) {
            Rng rng(trial_seed(cfg.master_seed, 0));
            PlaneTree t = sample_gw_survived(mu, cfg.depth_cap, rng);
            write_tree(t, open_out(out, f));
        } else if (walk->parsed()) {
            Rng rng(mix64(cfg.master_seed, 1));
            LazyMap m = kind == "halfplane" ? LazyMap::halfplane(mu, cfg.master_seed)
                        : kind == "slice"   ? LazyMap::slice(derive_laws(mu), cfg.master_seed)
                                            : LazyMap::causal(derive_laws(mu), cfg.master_seed);
            WalkTrace t = run_walk(m, m.root(), cfg.n_steps, cfg.lambda, rng);
            std::ostream& os = open_out(out, f);
            for (std::size_t n = 0; n < t.positions.size(); ++n)
                os << n << ' ' << t.positions[n] << ' ' << t.heights[n] << '\n';
        } else if (render->parsed()) {
            CausalMap m;
            if (kind == "halfplane") {
                LazyMap lm = LazyMap::halfplane(mu, cfg.master_seed);
                m = lm.snapshot(-2, 2, cfg.depth_cap);
            } else {
                Rng rng(trial_seed(cfg.master_seed, 0));
                PlaneTree t = sample_gw_survived(mu, cfg.depth_cap, rng);
                m = kind == "slice" ? build_slice(t) : build_causal(t);
            }
            open_out(out, f) << render_svg(m);
        }
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    return 0;
}
