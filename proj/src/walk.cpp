#include "causal/walk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "causal/error.hpp"
#include "causal/stats.hpp"

namespace causal {

int choose_slot(const std::vector<LazyMap::Inc>& inc, double lambda, Rng& rng) {
    double total = 0.0;
    for (const auto& e : inc) total += e.to_child ? 1.0 : lambda;
    double u = rng.uniform() * total;
    for (std::size_t i = 0; i < inc.size(); ++i) {
        u -= inc[i].to_child ? 1.0 : lambda;
        if (u < 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(inc.size()) - 1;
}

int step(const CausalMap& m, int v, double lambda, Rng& rng) {
    auto nb = m.neighbors(v);
    if (nb.empty()) throw Error(Errc::IsolatedVertex, "vertex " + std::to_string(v) + " has no neighbours");
    const int hv = m.height(v);
    double total = 0.0;
    for (const auto& e : nb) total += m.height(e.other) > hv ? 1.0 : lambda;
    double u = rng.uniform() * total;
    for (const auto& e : nb) {
        u -= m.height(e.other) > hv ? 1.0 : lambda;
        if (u < 0.0) return e.other;
    }
    return nb.back().other;
}

namespace {
thread_local std::vector<LazyMap::Inc> tl_inc;
}

int step(LazyMap& m, int v, double lambda, Rng& rng) {
    m.incidences(v, tl_inc);
    if (tl_inc.empty()) throw Error(Errc::IsolatedVertex, "vertex " + std::to_string(v) + " has no neighbours");
    return tl_inc[choose_slot(tl_inc, lambda, rng)].other;
}

namespace {

template <class Map>
WalkTrace run_impl(Map& m, int start, long n_steps, double lambda, Rng& rng) {
    if (n_steps < 0) throw Error(Errc::OutOfDomain, "n_steps must be >= 0");
    if (!(lambda > 0.0)) throw Error(Errc::OutOfDomain, "lambda must be > 0");
    WalkTrace t;
    t.lambda = lambda;
    t.seed = rng.state();
    t.positions.reserve(static_cast<std::size_t>(n_steps) + 1);
    t.heights.reserve(static_cast<std::size_t>(n_steps) + 1);
    int v = start;
    t.positions.push_back(v);
    t.heights.push_back(m.height(v));
    for (long i = 0; i < n_steps; ++i) {
        v = step(m, v, lambda, rng);
        t.positions.push_back(v);
        t.heights.push_back(m.height(v));
    }
    return t;
}

}  // namespace

WalkTrace run_walk(const CausalMap& m, int start, long n_steps, double lambda, Rng& rng) {
    m.vertex(start);
    return run_impl(m, start, n_steps, lambda, rng);
}

WalkTrace run_walk(LazyMap& m, int start, long n_steps, double lambda, Rng& rng) {
    if (start < 0 || start >= m.size()) throw Error(Errc::UnknownVertex, std::to_string(start));
    return run_impl(m, start, n_steps, lambda, rng);
}

int descent_max(const std::vector<int>& heights) {
    int best = 0;
    int run_max = heights.empty() ? 0 : heights[0];
    for (int h : heights) {
        run_max = std::max(run_max, h);
        best = std::max(best, run_max - h);
    }
    return best;
}

int default_regen_buffer(std::size_t length) { return static_cast<int>(length / 10); }

RegenReport regeneration_times(const std::vector<int>& heights, int buffer) {
    const int L = static_cast<int>(heights.size());
    if (buffer < 0 || (L > 0 && buffer >= L)) throw Error(Errc::OutOfDomain, "buffer must lie in [0, length)");
    RegenReport r;
    r.censored_after = L - 1;
    if (L == 0) return r;
    std::vector<int> suffix_min(L);
    suffix_min[L - 1] = heights[L - 1];
    for (int i = L - 2; i >= 0; --i) suffix_min[i] = std::min(heights[i], suffix_min[i + 1]);
    int past_max = heights[0];
    for (int n = 1; n < L - buffer; ++n) {
        if (past_max < heights[n] && suffix_min[n] >= heights[n]) r.times.push_back(n);
        past_max = std::max(past_max, heights[n]);
    }
    return r;
}

SpeedEstimate speed_estimate_heights(const std::vector<std::vector<int>>& hs, double z) {
    if (hs.empty()) throw Error(Errc::OutOfDomain, "no traces");
    SpeedEstimate s;
    std::vector<double> terminal;
    long sum_tau = 0, sum_h = 0;
    for (const auto& h : hs) {
        if (h.size() < 2) throw Error(Errc::OutOfDomain, "trace too short");
        if (h.size() != hs.front().size()) throw Error(Errc::OutOfDomain, "traces must have equal length");
        const double n = static_cast<double>(h.size() - 1);
        terminal.push_back(static_cast<double>(h.back() - h.front()) / n);
        auto r = regeneration_times(h, default_regen_buffer(h.size()));
        for (std::size_t j = 1; j < r.times.size(); ++j) {
            int dt = r.times[j] - r.times[j - 1];
            int dh = h[r.times[j]] - h[r.times[j - 1]];
            s.d_tau.push_back(dt);
            s.d_h.push_back(dh);
            sum_tau += dt;
            sum_h += dh;
        }
    }
    MeanCI ci = mean_ci(terminal, z);
    s.v_hat = ci.mean;
    s.ci_lo = ci.lo;
    s.ci_hi = ci.hi;
    s.increments = static_cast<long>(s.d_tau.size());
    if (sum_tau > 0) {
        s.has_regen = true;
        s.v_regen = static_cast<double>(sum_h) / static_cast<double>(sum_tau);
        s.disagree = std::abs(s.v_regen - s.v_hat) > 0.05 * std::abs(s.v_hat);
    }
    return s;
}

SpeedEstimate speed_estimate(const std::vector<WalkTrace>& traces, double z) {
    std::vector<std::vector<int>> hs;
    hs.reserve(traces.size());
    for (const auto& t : traces) hs.push_back(t.heights);
    return speed_estimate_heights(hs, z);
}

bool kbad(LazyMap& m, int v, int k) {
    if (k < 0) throw Error(Errc::OutOfDomain, "k must be >= 0");
    std::vector<int> front{v};
    int l = v, r = v;
    for (int i = 0; i < k; ++i) {
        l = m.left(l);
        r = m.right(r);
        if (l < 0 || r < 0) return false;
        front.insert(front.begin(), l);
        front.push_back(r);
    }
    for (int g = 0; g <= k; ++g) {
        for (int& x : front) {
            if (m.num_tree_children(x) != 1) return false;
            x = m.tree_child(x, 0);
        }
    }
    return true;
}

std::vector<bool> kbad_scan(const CausalMap& m, int k, const std::vector<int>& vs) {
    if (k < 0) throw Error(Errc::OutOfDomain, "k must be >= 0");
    std::vector<bool> out;
    out.reserve(vs.size());
    const bool wrap = m.kind() == MapKind::Causal;
    for (int v : vs) {
        const auto& vx = m.vertex(v);
        if (vx.height + k + 1 > m.max_height())
            throw Error(Errc::InsufficientMaterialization, "need level " + std::to_string(vx.height + k + 1));
        const auto& lvl = m.level(vx.height);
        const int n = static_cast<int>(lvl.size());
        std::vector<int> front;
        bool ok = true;
        for (int d = -k; d <= k; ++d) {
            int idx = vx.level_index + d;
            if (wrap) {
                if (2 * k + 1 > n) {
                    ok = false;
                    break;
                }
                idx = ((idx % n) + n) % n;
            } else if (idx < 0 || idx >= n) {
                throw Error(Errc::InsufficientMaterialization, "level neighbour out of window");
            }
            front.push_back(lvl[idx]);
        }
        for (int g = 0; ok && g <= k; ++g) {
            for (int& x : front) {
                auto ch = m.children(x);
                if (ch.size() != 1) {
                    ok = false;
                    break;
                }
                x = ch[0];
            }
        }
        out.push_back(ok);
    }
    return out;
}

namespace {

void check_tail(const WalkTrace& t, int h) {
    if (t.heights.empty()) throw Error(Errc::TailNotAboveH, "empty trace");
    const std::size_t tail = std::max<std::size_t>(1, t.heights.size() / 10);
    for (std::size_t i = t.heights.size() - tail; i < t.heights.size(); ++i)
        if (t.heights[i] <= h)
            throw Error(Errc::TailNotAboveH, "trace tail returns to height " + std::to_string(t.heights[i]));
}

}  // namespace

int boundary_marker(LazyMap& m, const WalkTrace& t, int h) {
    check_tail(t, h);
    return m.ancestor(t.positions.back(), h);
}

int boundary_marker(const CausalMap& m, const WalkTrace& t, int h) {
    check_tail(t, h);
    int v = t.positions.back();
    while (m.height(v) > h) v = m.parent(v);
    return v;
}

EscapeEstimate slice_escape_prob(LazyMap& s, int x, int depth_stop, long trials, Rng& rng, long max_steps) {
    if (s.kind() != MapKind::Slice) throw Error(Errc::NotASlice, "slice_escape_prob needs a slice");
    EscapeEstimate e;
    e.trials = trials;
    if (!s.on_boundary(x)) {
        std::vector<LazyMap::Inc> inc;
        const std::uint64_t base = rng();
        for (long t = 0; t < trials; ++t) {
            Rng tr(trial_seed(base, static_cast<std::uint64_t>(t)));
            int v = x;
            for (long i = 0; i < max_steps; ++i) {
                s.incidences(v, inc);
                v = inc[choose_slot(inc, 1.0, tr)].other;
                if (s.on_boundary(v)) break;
                if (s.height(v) >= depth_stop) {
                    ++e.successes;
                    break;
                }
            }
        }
    }
    e.p = trials > 0 ? static_cast<double>(e.successes) / static_cast<double>(trials) : 0.0;
    Interval ci = wilson(e.successes, trials);
    e.lo = ci.lo;
    e.hi = ci.hi;
    return e;
}

std::vector<int> lazy_spine(LazyMap& s, int n, Rng& rng) {
    std::vector<int> spine{s.root()};
    std::vector<int> bb;
    for (int i = 0; i < n; ++i) {
        int v = spine.back();
        bb.clear();
        const int c = s.num_tree_children(v);
        for (int j = 0; j < c; ++j) {
            int ch = s.tree_child(v, j);
            if (s.on_backbone(ch)) bb.push_back(ch);
        }
        if (bb.empty()) throw Error(Errc::NoBackbone, "spine vertex without backbone child");
        spine.push_back(bb[rng.below(bb.size())]);
    }
    return spine;
}

}  // namespace causal
