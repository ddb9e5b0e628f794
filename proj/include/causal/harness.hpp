#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "causal/cmap.hpp"
#include "causal/parallel.hpp"

namespace causal {

enum class Experiment { Speed, Regen, Hyperbolicity, Resistance, Explore, Kbad, Boundary, Escape };

const char* experiment_name(Experiment e);
Experiment parse_experiment(const std::string& s);

struct ExperimentConfig {
    std::string offspring = "0:1/4,2:3/4";
    Experiment experiment = Experiment::Speed;
    int depth_cap = 12;
    long n_steps = 1000;
    long trials = 10;
    int k = 1;
    double lambda = 1.0;
    std::uint64_t master_seed = 1;
    std::string out_dir = "out";
    Exec exec = Exec::Parallel;
};

// Throws ConfigInvalid on the first violated requirement.
void validate(const ExperimentConfig& cfg);

struct Summary {
    std::string experiment;
    long trials = 0;
    std::vector<std::pair<std::string, double>> values;  // fixed column order per experiment
    double get(const std::string& key) const;
};

// Runs the trials with seeds trial_seed(master_seed, i) and writes
// <out_dir>/<name>.jsonl, <name>_summary.csv and manifest.json.
Summary run_experiment(const ExperimentConfig& cfg);
// Same without touching the file system; per-trial records as JSON lines.
Summary run_experiment(const ExperimentConfig& cfg, std::vector<std::string>& records);

std::string summary_csv(const Summary& s);

// Concentric layout (radius = height + 1, angle = rank / level size) for
// causal maps, Cartesian grid for slices and half-plane windows.
std::string render_svg(const CausalMap& m);
void render_svg(const CausalMap& m, const std::string& path);

std::string version_string();

}  // namespace causal
