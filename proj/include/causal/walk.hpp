#pragma once

#include <cstdint>
#include <vector>

#include "causal/cmap.hpp"
#include "causal/lazy_map.hpp"
#include "causal/rng.hpp"

namespace causal {

struct WalkTrace {
    std::vector<int> positions;
    std::vector<int> heights;
    double lambda = 1.0;
    std::uint64_t seed = 0;
    std::size_t steps() const { return positions.empty() ? 0 : positions.size() - 1; }
};

struct RegenReport {
    std::vector<int> times;
    int censored_after = -1;
};

// One biased step: child edges weight 1, parent/horizontal/wrap weight lambda.
int step(const CausalMap& m, int v, double lambda, Rng& rng);
int step(LazyMap& m, int v, double lambda, Rng& rng);
// Rotation slot chosen by a step from v (used by the exploration coupling).
int choose_slot(const std::vector<LazyMap::Inc>& inc, double lambda, Rng& rng);

WalkTrace run_walk(const CausalMap& m, int start, long n_steps, double lambda, Rng& rng);
WalkTrace run_walk(LazyMap& m, int start, long n_steps, double lambda, Rng& rng);

// Walks until stop(vertex) or max_steps; returns the trace.
template <class Stop>
WalkTrace run_walk_until(LazyMap& m, int start, long max_steps, double lambda, Rng& rng, Stop stop) {
    WalkTrace t;
    t.lambda = lambda;
    int v = start;
    t.positions.push_back(v);
    t.heights.push_back(m.height(v));
    for (long i = 0; i < max_steps && !stop(v); ++i) {
        v = step(m, v, lambda, rng);
        t.positions.push_back(v);
        t.heights.push_back(m.height(v));
    }
    return t;
}

int descent_max(const std::vector<int>& heights);
inline int descent_max(const WalkTrace& t) { return descent_max(t.heights); }

RegenReport regeneration_times(const std::vector<int>& heights, int buffer);
inline RegenReport regeneration_times(const WalkTrace& t, int buffer) { return regeneration_times(t.heights, buffer); }
int default_regen_buffer(std::size_t length);

struct SpeedEstimate {
    double v_hat = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;
    double v_regen = 0.0;
    bool has_regen = false;
    bool disagree = false;
    long increments = 0;
    // pooled (delta tau, delta H) for j >= 1
    std::vector<int> d_tau, d_h;
};
SpeedEstimate speed_estimate(const std::vector<WalkTrace>& traces, double z = 1.959963984540054);
// Same from height sequences only.
SpeedEstimate speed_estimate_heights(const std::vector<std::vector<int>>& heights, double z = 1.959963984540054);

// k-bad: every descendant of x_{-k}..x_k within heights h..h+k has one child.
bool kbad(LazyMap& m, int v, int k);
std::vector<bool> kbad_scan(const CausalMap& m, int k, const std::vector<int>& vs);

int boundary_marker(LazyMap& m, const WalkTrace& t, int h);
int boundary_marker(const CausalMap& m, const WalkTrace& t, int h);

struct EscapeEstimate {
    long successes = 0;
    long trials = 0;
    double p = 0.0;
    double lo = 0.0, hi = 0.0;
};
// Trial t walks with stream trial_seed(rng(), t): equal rng states give
// nested success events as depth_stop grows.
EscapeEstimate slice_escape_prob(LazyMap& s, int x, int depth_stop, long trials, Rng& rng,
                                 long max_steps = 1'000'000);

// Spine of a lazy slice: x_0 = root, x_{n+1} uniform among backbone children.
std::vector<int> lazy_spine(LazyMap& s, int n, Rng& rng);

}  // namespace causal
