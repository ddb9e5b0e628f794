#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "causal/error.hpp"
#include "causal/explore.hpp"
#include "causal/stats.hpp"

using namespace causal;

namespace {

// every vertex has two children except those listed
LazyMap scripted(int root1_children) {
    return LazyMap::halfplane_scripted([root1_children](std::int64_t tree, const std::vector<int>& path) {
        if (tree == 1 && path.empty()) return root1_children;
        return 2;
    });
}

void check_run(Exploration& ex, long steps) {
    LazyMap& m = ex.map();
    std::size_t prev_size = ex.explored_vertices().size();
    long walks_seen = 0;
    while (ex.walk_steps_done() < steps) {
        const ExploreEvent ev = ex.advance();
        const std::size_t sz = ex.explored_vertices().size();
        const std::size_t added = sz - prev_size;
        prev_size = sz;
        ASSERT_LE(added, 2u);
        if (added == 2) ASSERT_EQ(m.height(ex.explored_vertices()[sz - 2]), -1);
        ASSERT_TRUE(ex.is_stable());
        if (ev.kind == StepKind::Walk) {
            ++walks_seen;
            ASSERT_EQ(added, 0u);
            ASSERT_TRUE(ex.is_k_flat());
            for (int x : ex.walk_positions()) ASSERT_TRUE(ex.explored(x));
        } else {
            ASSERT_GE(m.height(ev.vertex), 0);
            ASSERT_NO_THROW(ex.kfree_witness(ev.clock));
        }
    }
    ASSERT_EQ(walks_seen, steps);
    ASSERT_EQ(ex.phi(0), 0);
    for (long n = 0; n < steps; ++n) {
        ASSERT_LT(ex.phi(n), ex.phi(n + 1));
        ASSERT_LE(ex.phi(n + 1) - ex.phi(n), 7L * ex.k() * (n + 1));
    }
}

}  // namespace

TEST(Explore, Initialization) {
    auto m = LazyMap::halfplane(mk_offspring({{1, 0.5}, {3, 0.5}}), 3);
    Exploration ex(m, 1, Rng(4));
    EXPECT_EQ(ex.explored_vertices().size(), 2u);
    EXPECT_TRUE(ex.explored(m.root()));
    EXPECT_TRUE(ex.explored(m.parent(m.root())));
    EXPECT_EQ(ex.marked().first, m.root());
    EXPECT_EQ(ex.phi(0), 0);
    EXPECT_THROW(ex.phi(1), Error);
    auto m2 = LazyMap::halfplane(mk_offspring({{1, 0.5}, {3, 0.5}}), 3);
    Exploration ex2(m2, 1, Rng(4));
    EXPECT_EQ(m.label(ex.marked().second), m2.label(ex2.marked().second));
    EXPECT_THROW(Exploration(m, 0, Rng(1)), Error);
}

TEST(Explore, ScriptedWidthThreePit) {
    auto m = scripted(4);
    Exploration ex(m, 1, Rng(1));
    const int r0 = m.root();
    const int r1 = m.tree_root(1);
    ex.add_vertex(r1);
    ex.add_vertex(m.tree_child(r0, 1));
    ex.add_vertex(m.tree_child(r1, 3));
    EXPECT_TRUE(ex.is_stable());
    auto pits = ex.pits();
    ASSERT_EQ(pits.size(), 1u);
    EXPECT_EQ(pits[0].width, 3);
    EXPECT_EQ(pits[0].height, 0);
    EXPECT_EQ(pits[0].leftmost.to, m.tree_child(r1, 0));
    EXPECT_TRUE(ex.is_k_flat(1));
    EXPECT_FALSE(ex.is_k_flat(2));
    // the boundary crosses every half-edge once
    auto b = ex.boundary();
    std::set<std::pair<int, int>> seen;
    for (const auto& e : b) EXPECT_TRUE(seen.insert({e.from, e.to}).second);
}

TEST(Explore, FlatFrontierHasNoPits) {
    auto m = scripted(2);
    Exploration ex(m, 1, Rng(1));
    EXPECT_TRUE(ex.pits().empty());
    for (int k = 1; k < 5; ++k) EXPECT_TRUE(ex.is_k_flat(k));
}

TEST(Explore, NarrowPitFilledBeforeWalking) {
    auto m = scripted(3);
    Exploration ex(m, 1, Rng(2));
    const int r0 = m.root();
    const int r1 = m.tree_root(1);
    ex.add_vertex(r1);
    ex.add_vertex(m.tree_child(r0, 1));
    ex.add_vertex(m.tree_child(r1, 2));
    auto pits = ex.pits();
    ASSERT_EQ(pits.size(), 1u);
    EXPECT_EQ(pits[0].width, 2);
    EXPECT_FALSE(ex.is_k_flat());
    bool rule3 = false;
    for (;;) {
        const auto& ev = ex.advance();
        if (ev.kind == StepKind::Walk) break;
        rule3 |= ev.rule == 3;
    }
    EXPECT_TRUE(rule3);
    EXPECT_TRUE(ex.explored(m.tree_child(r1, 0)));
}

TEST(Explore, RuleTwoExploresEndpoint) {
    auto m = scripted(2);
    const int r0 = m.root();
    WalkTrace t;
    t.positions = {r0, m.tree_child(r0, 1), r0};
    t.heights = {0, 1, 0};
    Exploration ex(m, 2, t);
    const auto& ev = ex.advance();
    EXPECT_EQ(ev.kind, StepKind::Explore);
    EXPECT_EQ(ev.rule, 2);
    EXPECT_EQ(ev.vertex, m.tree_child(r0, 1));
    // the explored vertex is 2-free on the right (its right neighbours lie in tree 1)
    auto w = ex.kfree_witness(1);
    EXPECT_EQ(w.side, KFreeWitness::Right);
    EXPECT_GE(w.witness_count, 2);
    EXPECT_GE(ev.free_left, 2);
    const auto& walk = ex.advance();
    EXPECT_EQ(walk.kind, StepKind::Walk);
    EXPECT_EQ(ex.phi(1), 2);
    EXPECT_THROW(ex.kfree_witness(2), Error);
    EXPECT_THROW(ex.advance(), Error);  // trace exhausted
}

TEST(Explore, HardBoundsOnSeededRuns) {
    auto mu = mk_offspring({{1, 0.5}, {2, 0.25}, {3, 0.25}});
    for (int k = 1; k <= 3; ++k)
        for (int seed = 0; seed < 20; ++seed) {
            auto m = LazyMap::halfplane(mu, trial_seed(100 + k, seed));
            Exploration ex(m, k, Rng(trial_seed(200 + k, seed)));
            check_run(ex, 200);
            if (HasFatalFailure()) return;
        }
}

TEST(Explore, PitsAreDisjoint) {
    auto mu = mk_offspring({{1, 0.5}, {3, 0.5}});
    for (int seed = 0; seed < 10; ++seed) {
        auto m = LazyMap::halfplane(mu, trial_seed(300, seed));
        Exploration ex(m, 2, Rng(trial_seed(301, seed)));
        for (int i = 0; i < 400; ++i) {
            ex.advance();
            auto pits = ex.pits();
            for (std::size_t a = 1; a < pits.size(); ++a)
                ASSERT_GT(pits[a].first, pits[a - 1].first + static_cast<std::size_t>(pits[a - 1].width));
            for (const auto& p : pits) ASSERT_GE(p.width, 1);
        }
    }
}

TEST(Explore, OnlineAndTraceLogsAgree) {
    auto mu = mk_offspring({{1, 0.5}, {3, 0.5}});
    for (int seed = 0; seed < 5; ++seed) {
        auto m1 = LazyMap::halfplane(mu, trial_seed(400, seed));
        Exploration online(m1, 2, Rng(trial_seed(401, seed)));
        online.run_walk_steps(150);

        auto m2 = LazyMap::halfplane(mu, trial_seed(400, seed));
        Rng wr(trial_seed(401, seed));
        auto trace = run_walk(m2, m2.root(), 151, 1.0, wr);
        Exploration replay(m2, 2, trace);
        replay.run_walk_steps(150);

        std::ostringstream a, b;
        online.write_log_jsonl(a);
        replay.write_log_jsonl(b);
        EXPECT_EQ(a.str(), b.str());
    }
}

TEST(Explore, RevealedCountsFollowMu) {
    auto mu = mk_offspring({{1, 0.5}, {2, 0.25}, {3, 0.25}});
    std::vector<long> counts(4, 0);
    long total = 0;
    for (int seed = 0; total < 10'000; ++seed) {
        auto m = LazyMap::halfplane(mu, trial_seed(500, seed));
        Exploration ex(m, 1, Rng(trial_seed(501, seed)));
        ex.run_walk_steps(100);
        for (const auto& ev : ex.log())
            if (ev.kind == StepKind::Explore) {
                ++counts[ev.children];
                ++total;
            }
    }
    EXPECT_GT(chi2_gof(counts, mu.weights()).p_value, 1e-3);
}

TEST(Explore, BadPointBoundDirection) {
    auto mu = mk_offspring({{1, 0.5}, {3, 0.5}});
    for (auto [n, k] : {std::pair{50, 2}, std::pair{100, 3}}) {
        const int runs = 200;
        int hit = 0;
        for (int seed = 0; seed < runs; ++seed) {
            auto m = LazyMap::halfplane(mu, trial_seed(600 + k, seed));
            Rng rng(trial_seed(700 + k, seed));
            auto t = run_walk(m, m.root(), n, 1.0, rng);
            bool any = false;
            for (int x : t.positions)
                if (!m.is_stub(x) && kbad(m, x, k)) {
                    any = true;
                    break;
                }
            hit += any;
        }
        const double bound = 3.0 * 7 * k * std::pow(n + 1, 2) * std::pow(0.5, k * k);
        EXPECT_LE(static_cast<double>(hit) / runs, bound);
    }
}
