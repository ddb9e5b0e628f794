#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

#include "causal/cmap.hpp"
#include "causal/error.hpp"
#include "causal/lazy_map.hpp"
#include "causal/metric.hpp"
#include "fixtures.hpp"

using namespace causal;
using causal::fixture::map_id;
using causal::fixture::TStar;

namespace {

int count_to(const CausalMap& m, int v, int w) {
    int n = 0;
    for (const auto& inc : m.neighbors(v)) n += inc.other == w;
    return n;
}

void check_common(const CausalMap& m) {
    for (const auto& e : m.edges()) {
        if (e.kind == EdgeKind::Horizontal || e.kind == EdgeKind::Wrap) EXPECT_EQ(m.height(e.u), m.height(e.v));
        else EXPECT_EQ(std::abs(m.height(e.u) - m.height(e.v)), 1);
    }
    EXPECT_EQ(count_crossings(m), 0);
    long ends = 0;
    for (int v = 0; v < m.num_vertices(); ++v) {
        ends += m.degree(v);
        for (int p = 0; p < m.degree(v); ++p) {
            const auto& inc = m.neighbors(v)[p];
            const auto& back = m.neighbors(inc.other)[inc.mate];
            EXPECT_EQ(back.edge, inc.edge);
            EXPECT_EQ(back.other, v);
        }
    }
    EXPECT_EQ(ends, 2L * m.num_edges());
    // connected planar embedding: V - E + F = 2
    auto f = trace_faces(m);
    EXPECT_EQ(m.num_vertices() - m.num_edges() + static_cast<int>(f.corners.size()), 2);
}

}  // namespace

TEST(CausalMap, TStarDegrees) {
    auto t = TStar::tree();
    auto m = build_causal(t);
    check_common(m);
    EXPECT_EQ(m.degree(map_id(m, TStar::b)), 5);
    EXPECT_EQ(m.degree(map_id(m, TStar::rho)), 2);
    EXPECT_EQ(m.degree(map_id(m, TStar::c)), 3);
    EXPECT_EQ(m.neighbors(map_id(m, TStar::b)).size(), 5u);
    EXPECT_EQ(count_to(m, map_id(m, TStar::b), map_id(m, TStar::a)), 2);
    EXPECT_EQ(count_to(m, map_id(m, TStar::c), map_id(m, TStar::e)), 1);
}

TEST(CausalMap, TStarSlice) {
    auto s = build_slice(TStar::tree());
    check_common(s);
    EXPECT_EQ(s.num_vertices(), 6);
    EXPECT_EQ(s.degree(map_id(s, TStar::c)), 2);
    std::set<std::pair<int, int>> level2;
    for (const auto& e : s.edges())
        if (s.height(e.u) == 2 && s.height(e.v) == 2)
            level2.insert({std::min(s.vertex(e.u).tree_vertex, s.vertex(e.v).tree_vertex),
                           std::max(s.vertex(e.u).tree_vertex, s.vertex(e.v).tree_vertex)});
    EXPECT_EQ(level2, (std::set<std::pair<int, int>>{{TStar::c, TStar::d}, {TStar::d, TStar::e}}));
    std::vector<int> gl, gr;
    for (int v : s.left_ray()) gl.push_back(s.vertex(v).tree_vertex);
    for (int v : s.right_ray()) gr.push_back(s.vertex(v).tree_vertex);
    EXPECT_EQ(gl, (std::vector<int>{TStar::rho, TStar::a, TStar::c}));
    EXPECT_EQ(gr, (std::vector<int>{TStar::rho, TStar::b, TStar::e}));
}

TEST(CausalMap, PathTree) {
    auto t = fixture::path_tree(3);
    auto m = build_causal(t);
    EXPECT_EQ(m.num_edges(), 3);
    for (int v = 0; v < m.num_vertices(); ++v) EXPECT_LE(m.degree(v), 2);
    auto s = build_slice(t);
    EXPECT_EQ(s.left_ray(), s.right_ray());
    EXPECT_EQ(s.num_edges(), 3);
}

TEST(CausalMap, CompleteBinarySliceDropsOnlyWraps) {
    auto t = fixture::complete_tree(2, 4);
    auto m = build_causal(t);
    auto s = build_slice(t);
    int wraps = 0;
    for (const auto& e : m.edges()) wraps += e.kind == EdgeKind::Wrap;
    EXPECT_EQ(s.num_vertices(), m.num_vertices());
    EXPECT_EQ(s.num_edges(), m.num_edges() - wraps);
    for (const auto& e : s.edges()) EXPECT_NE(e.kind, EdgeKind::Wrap);
}

TEST(CausalMap, DegreeFormulaOnSamples) {
    Rng rng(5);
    auto d = mk_offspring({{0, 0.25}, {2, 0.75}});
    for (int i = 0; i < 10; ++i) {
        auto t = sample_gw_survived(d, 12, rng);
        auto m = build_causal(t);
        check_common(m);
        for (int v = 0; v < m.num_vertices(); ++v) {
            if (v == m.root() || m.height(v) == m.max_height()) continue;
            if (m.level(m.height(v)).size() < 2) continue;
            EXPECT_EQ(m.degree(v), t.num_children(m.vertex(v).tree_vertex) + 3);
        }
        EXPECT_EQ(m.degree(m.root()), t.num_children(0));
    }
}

TEST(CausalMap, SliceBoundaryAndPaths) {
    Rng rng(6);
    auto d = mk_offspring({{0, 0.25}, {2, 0.75}});
    for (int i = 0; i < 10; ++i) {
        auto s = build_slice(sample_gw_survived(d, 10, rng));
        check_common(s);
        for (int h = 0; h <= s.max_height(); ++h) {
            EXPECT_EQ(s.level(h).front(), s.left_ray()[h]);
            EXPECT_EQ(s.level(h).back(), s.right_ray()[h]);
            int horiz = 0;
            for (int v : s.level(h))
                for (const auto& inc : s.neighbors(v)) horiz += s.height(inc.other) == h;
            EXPECT_EQ(horiz, 2 * (static_cast<int>(s.level(h).size()) - 1));
        }
    }
}

TEST(CausalMap, NoBackbone) {
    auto t = tree_from_child_counts({1, 0}, 2);
    try {
        build_slice(t);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NoBackbone);
    }
}

TEST(CausalMap, HeightLipschitz) {
    Rng rng(9);
    auto m = build_causal(sample_gw_survived(mk_offspring({{0, 0.25}, {2, 0.75}}), 10, rng));
    for (int i = 0; i < 1000; ++i) {
        int u = static_cast<int>(rng.below(m.num_vertices()));
        int v = static_cast<int>(rng.below(m.num_vertices()));
        EXPECT_LE(std::abs(m.height(u) - m.height(v)), distance(m, u, v));
    }
}

TEST(CausalMap, Determinism) {
    Rng a(3), b(3);
    auto d = mk_offspring({{0, 0.25}, {2, 0.75}});
    std::ostringstream x, y;
    write_map(build_causal(sample_gw_survived(d, 8, a)), x);
    write_map(build_causal(sample_gw_survived(d, 8, b)), y);
    EXPECT_EQ(x.str(), y.str());
}

TEST(LazyMap, HalfPlaneDegreesPointMass) {
    auto h = LazyMap::halfplane(mk_offspring({{2, 1.0}}), 12);
    auto m = h.snapshot(-4, 4, 5);
    check_common(m);
    for (int v = 0; v < m.num_vertices(); ++v) {
        if (m.vertex(v).stub) {
            EXPECT_EQ(m.degree(v), 1);
            continue;
        }
        if (m.height(v) == m.max_height()) continue;
        if (v == m.level(m.height(v)).front() || v == m.level(m.height(v)).back()) continue;
        EXPECT_EQ(m.degree(v), 5);
    }
    int r = h.root();
    EXPECT_EQ(h.degree(r), 5);
    EXPECT_EQ(h.degree(h.parent(r)), 1);
}

TEST(LazyMap, Mu0Rejected) {
    try {
        LazyMap::halfplane(mk_offspring({{0, 0.25}, {2, 0.75}}), 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::Mu0Positive);
    }
}

TEST(LazyMap, OrderIndependentRealization) {
    auto mu = mk_offspring({{1, 0.5}, {3, 0.5}});
    auto a = LazyMap::halfplane(mu, 77);
    auto b = LazyMap::halfplane(mu, 77);
    // reveal b in a different order first
    for (int i = 0; i < 30; ++i) {
        int v = b.root();
        for (int j = 0; j < i % 7; ++j) v = b.right(v);
        b.num_tree_children(v);
        b.left(b.tree_child(v, 0));
    }
    std::ostringstream x, y;
    write_map(a.snapshot(-3, 3, 6), x);
    write_map(b.snapshot(-3, 3, 6), y);
    EXPECT_EQ(x.str(), y.str());
}

TEST(LazyMap, MatchesFiniteBuild) {
    auto laws = derive_laws(mk_offspring({{0, 0.25}, {2, 0.75}}));
    auto lm = LazyMap::causal(laws, 5);
    std::vector<int> ids;
    auto t = lm.materialize(8, &ids);
    auto m = build_causal(t);
    for (int v = 0; v < m.num_vertices(); ++v) {
        if (m.height(v) >= 8) continue;
        int x = ids[m.vertex(v).tree_vertex];
        EXPECT_EQ(lm.degree(x), m.degree(v));
    }
    auto ls = LazyMap::slice(laws, 5);
    auto ts = ls.materialize(8, &ids);
    auto s = build_slice(ts);
    for (int v = 0; v < s.num_vertices(); ++v) {
        if (s.height(v) >= 8) continue;
        int x = ids[s.vertex(v).tree_vertex];
        EXPECT_EQ(ls.degree(x), s.degree(v)) << v;
        EXPECT_EQ(ls.on_boundary(x), s.on_boundary(v));
    }
}

TEST(LazyMap, ScriptedOracle) {
    auto m = LazyMap::halfplane_scripted([](std::int64_t tree, const std::vector<int>& path) {
        return tree == 0 && path.empty() ? 3 : 1;
    });
    EXPECT_EQ(m.num_tree_children(m.root()), 3);
    int r1 = m.right(m.root());
    EXPECT_EQ(m.tree_index(r1), 1);
    EXPECT_EQ(m.num_tree_children(r1), 1);
    EXPECT_EQ(m.right(m.tree_child(m.root(), 2)), m.tree_child(r1, 0));
}
