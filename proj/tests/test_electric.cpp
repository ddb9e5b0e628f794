#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "causal/electric.hpp"
#include "causal/error.hpp"
#include "causal/stats.hpp"
#include "fixtures.hpp"

using namespace causal;

namespace {

ResistanceNetwork random_net(Rng& rng, int nodes, int edges) {
    ResistanceNetwork net;
    net.num_nodes = nodes;
    // spanning path keeps terminals connected
    for (int v = 1; v < nodes; ++v) net.add_edge(static_cast<int>(rng.below(v)), v, 0.5 + rng.uniform());
    while (static_cast<int>(net.edges.size()) < edges) {
        int u = static_cast<int>(rng.below(nodes)), v = static_cast<int>(rng.below(nodes));
        if (u != v) net.add_edge(u, v, 0.5 + rng.uniform());
    }
    net.sources = {0};
    net.sinks = {nodes - 1};
    if (rng.below(2)) net.sinks.push_back(nodes - 2);
    return net;
}

int tree_distance(const DualTree& t, int i, int j) {
    auto depth = [&](int x) {
        int d = 0;
        while (t.parent[x] >= 0) x = t.parent[x], ++d;
        return d;
    };
    int di = depth(i), dj = depth(j), d = 0;
    while (di > dj) i = t.parent[i], --di, ++d;
    while (dj > di) j = t.parent[j], --dj, ++d;
    while (i != j) i = t.parent[i], j = t.parent[j], d += 2;
    return d;
}

}  // namespace

TEST(Electric, SeriesAndTriangle) {
    ResistanceNetwork path;
    path.num_nodes = 3;
    path.add_edge(0, 1);
    path.add_edge(1, 2);
    path.sources = {0};
    path.sinks = {2};
    EXPECT_NEAR(effective_resistance(path), 2.0, 1e-12);
    ResistanceNetwork tri;
    tri.num_nodes = 3;
    tri.add_edge(0, 1);
    tri.add_edge(1, 2);
    tri.add_edge(2, 0);
    tri.sources = {0};
    tri.sinks = {1};
    EXPECT_NEAR(effective_resistance(tri), 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(effective_resistance_bruteforce(tri), 2.0 / 3.0, 1e-12);
    ResistanceNetwork one;
    one.num_nodes = 2;
    one.add_edge(0, 1);
    one.sources = {0};
    one.sinks = {1};
    EXPECT_NEAR(effective_resistance_bruteforce(one), 1.0, 1e-15);
}

TEST(Electric, Errors) {
    ResistanceNetwork net;
    net.num_nodes = 4;
    net.add_edge(0, 1);
    net.add_edge(2, 3);
    net.sources = {0};
    net.sinks = {3};
    try {
        effective_resistance(net);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DisconnectedTerminals);
    }
    EXPECT_THROW(net.add_edge(0, 1, 0.0), Error);
    Rng rng(1);
    auto big = random_net(rng, 8, 13);
    try {
        effective_resistance_bruteforce(big);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::TooLarge);
    }
}

TEST(Electric, SolverMatchesKirchhoff) {
    Rng rng(2);
    for (int i = 0; i < 100; ++i) {
        int nodes = 3 + static_cast<int>(rng.below(4));
        int edges = nodes - 1 + static_cast<int>(rng.below(11 - nodes + 1));
        auto net = random_net(rng, nodes, std::min(edges, 10));
        double bf = effective_resistance_bruteforce(net);
        EXPECT_NEAR(effective_resistance(net), bf, 1e-9);
        SolverOptions cg;
        cg.dense_limit = 0;
        EXPECT_NEAR(effective_resistance(net, cg), bf, 1e-9);
    }
}

TEST(Electric, RayleighMonotonicity) {
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        auto net = random_net(rng, 8, 12);
        double r0 = effective_resistance(net);
        int u = static_cast<int>(rng.below(8)), v = static_cast<int>(rng.below(8));
        if (u == v) continue;
        net.add_edge(u, v, 1.0);
        EXPECT_LE(effective_resistance(net), r0 + 1e-12);
    }
}

TEST(Electric, MergedAndIo) {
    auto m = build_causal(fixture::TStar::tree());
    auto net = ResistanceNetwork::from_map(m);
    double tot = 0.0;
    for (const auto& e : net.edges) tot += e.c;
    EXPECT_DOUBLE_EQ(tot, m.num_edges());
    bool two = false;
    for (const auto& e : net.edges) two |= e.c == 2.0;
    EXPECT_TRUE(two);
    net.sources = {0};
    net.sinks = {4, 5};
    std::ostringstream os;
    net.write(os);
    std::istringstream is(os.str());
    auto back = ResistanceNetwork::read(is);
    EXPECT_EQ(back.num_nodes, net.num_nodes);
    EXPECT_EQ(back.sources, net.sources);
    EXPECT_EQ(back.sinks, net.sinks);
    EXPECT_NEAR(effective_resistance(back), effective_resistance(net), 1e-12);
}

TEST(Electric, SerialParallelKernelsAgree) {
    Rng rng(4);
    auto s = build_slice(sample_gw_survived(mk_offspring({{0, 0.25}, {2, 0.75}}), 14, rng));
    auto net = slice_boundary_network(s);
    net.sources = {s.level(s.max_height())[s.level(s.max_height()).size() / 2]};
    SolverOptions a, b;
    a.dense_limit = 0;
    b.dense_limit = 0;
    b.exec = Exec::Parallel;
    SolverOptions dense;
    dense.dense_limit = 1 << 30;
    double ra = effective_resistance(net, a), rb = effective_resistance(net, b), rd = effective_resistance(net, dense);
    EXPECT_NEAR(ra, rd, 1e-8 * rd);
    EXPECT_NEAR(rb, rd, 1e-8 * rd);
    GroundedSolver g(net);
    EXPECT_NEAR(g.resistance(net.sources[0]), rd, 1e-8 * rd);
}

TEST(Electric, DualityGrid) {
    // 2x1 grid
    auto pm = fixture::planar_from_coords({{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}},
                                          {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {0, 3}, {1, 4}, {2, 5}});
    auto faces = planar_faces(pm);
    EXPECT_EQ(faces.corners.size(), 3u);
    ResistanceNetwork primal;
    primal.num_nodes = 6;
    for (const auto& [u, v] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {3, 4}, {4, 5}, {0, 3}, {1, 4}, {2, 5}})
        primal.add_edge(u, v);
    primal.sources = {0};
    primal.sinks = {5};
    auto dual = dual_network(pm, 0, 5);
    EXPECT_NEAR(effective_resistance(primal) * effective_resistance(dual.net), 1.0, 1e-9);

    PlanarMap edge;
    edge.add_vertex();
    edge.add_vertex();
    edge.add_edge(0, 1);
    auto de = dual_network(edge, 0, 1);
    EXPECT_NEAR(effective_resistance(de.net), 1.0, 1e-12);
}

TEST(Electric, DualityOnSlices) {
    Rng rng(5);
    for (int i = 0; i < 10; ++i) {
        auto s = build_slice(sample_gw_survived(mk_offspring({{0, 0.25}, {2, 0.75}}), 6 + i % 4, rng));
        const auto& top = s.level(s.max_height());
        int z = top[rng.below(top.size())];
        auto primal = ResistanceNetwork::from_map(s);
        primal.sources = {s.root()};
        primal.sinks = {z};
        auto dual = dual_network(s, s.root(), z);
        EXPECT_NEAR(effective_resistance(primal) * effective_resistance(dual.net), 1.0, 1e-9);
    }
}

TEST(Electric, TerminalsNotOuter) {
    auto m = build_causal(fixture::complete_tree(2, 3));
    // root and a leaf share no face
    try {
        dual_network(m, m.root(), m.level(3)[3]);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::TerminalsNotOuter);
    }
}

TEST(Electric, CutHeightsExample) {
    auto ch = cut_heights({0, 1, 0, 0, 0, 1, 0}, {0, 1, 0, 1, 0, 0, 1});
    EXPECT_EQ(ch, (std::vector<std::pair<int, int>>{{1, 3}, {5, 6}}));
}

TEST(Electric, SpineLaw) {
    auto laws = derive_laws(mk_offspring({{0, 0.25}, {2, 0.75}}));
    Rng rng(6);
    std::vector<long> counts(3, 0);  // (0,0), (0,1), (1,0)
    long steps = 0;
    while (steps < 100'000) {
        auto t = sample_gw_survived(laws, 20, rng);
        auto d = spine_walk(t, rng);
        for (std::size_t n = 0; n < d.left_counts.size(); ++n) {
            int l = d.left_counts[n], r = d.right_counts[n];
            ASSERT_LE(l + r, 1);
            ++counts[l == 0 && r == 0 ? 0 : (l == 0 ? 1 : 2)];
            ++steps;
        }
        for (std::size_t n = 0; n + 1 < d.spine.size(); ++n) EXPECT_EQ(t.parent(d.spine[n + 1]), d.spine[n]);
    }
    EXPECT_GT(chi2_gof(counts, {0.5, 0.25, 0.25}).p_value, 1e-3);
}

TEST(Electric, CutsetsAndLowerBound) {
    auto laws = derive_laws(mk_offspring({{0, 0.25}, {2, 0.75}}));
    Rng rng(7);
    int checked = 0;
    for (int it = 0; it < 10; ++it) {
        auto t = sample_gw_survived(laws, 24, rng);
        auto d = spine_walk(t, rng);
        for (std::size_t k = 1; k < d.cut_heights.size(); ++k) {
            EXPECT_LT(d.cut_heights[k - 1].first, d.cut_heights[k - 1].second);
            EXPECT_LT(d.cut_heights[k - 1].second, d.cut_heights[k].first);
        }
        std::set<int> seen;
        for (const auto& a : d.cutsets)
            for (int v : a) EXPECT_TRUE(seen.insert(v).second);
        auto s = build_slice(t);
        try {
            auto b = cutset_lower_bound(s, d, 20);
            EXPECT_LE(b.lower, b.direct + 1e-8);
            ++checked;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::TooFewCutsets);
        }
    }
    EXPECT_GT(checked, 0);
}

TEST(Electric, ResistanceAlongSpineIsMonotone) {
    auto laws = derive_laws(mk_offspring({{0, 0.25}, {2, 0.75}}));
    Rng rng(8);
    auto t = sample_gw_survived(laws, 18, rng);
    auto d = spine_walk(t, rng);
    auto s = build_slice(t);
    GroundedSolver g(slice_boundary_network(s));
    double prev = 0.0;
    for (int n = 0; n <= 12; ++n) {
        int x = s.from_tree(d.spine[n]);
        double r = s.on_boundary(x) ? 0.0 : g.resistance(x);
        EXPECT_GE(r, prev - 1e-9);
        prev = r;
    }
}

TEST(Electric, DualTreeStructure) {
    auto d = mk_offspring({{3, 1.0}});
    Rng rng(9);
    auto s = build_slice(sample_gw_survived(d, 8, rng));
    int v0 = s.level(1)[1];
    auto t = dual_tree(s, v0, 3);
    EXPECT_TRUE(t.is_tree());
    EXPECT_EQ(static_cast<int>(t.vertices.size()), t.distinct_faces);
    int expect = 0;
    for (int h = 1; h <= 8; ++h) expect += static_cast<int>(std::pow(3, h - 1));
    EXPECT_EQ(static_cast<int>(t.vertices.size()), expect);
    // face-walk oracle: the face of node u runs through u, its left neighbour and their parents
    auto f = trace_faces(s);
    for (std::size_t i = 0; i < t.vertices.size(); ++i) {
        int u = t.vertices[i];
        int left = s.level(s.height(u))[s.vertex(u).level_index - 1];
        int face = f.dart_face[global_slot(s, u, 1)];
        std::set<int> vs;
        for (auto [v, p] : f.corners[face]) vs.insert(v);
        EXPECT_TRUE(vs.count(u) && vs.count(left) && vs.count(s.parent(u)));
    }
    Rng pick(10);
    for (int it = 0; it < 500; ++it) {
        int i = static_cast<int>(pick.below(t.vertices.size())), j = static_cast<int>(pick.below(t.vertices.size()));
        int dt = tree_distance(t, i, j);
        EXPECT_LE(t.distances_from(i)[j], (1 + 3) * dt);
    }
}

TEST(Electric, DualTreeTruncationDies) {
    auto s = build_slice(fixture::complete_tree(5, 3));
    try {
        dual_tree(s, s.level(1)[1], 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::TruncationDies);
    }
}

TEST(Electric, FrontierResistanceGrowsWithDepth) {
    // path: R(x <-> frontier) is the number of edges to the top
    auto p = fixture::path_tree(10);
    auto r = frontier_resistance(p, 0, 5);
    EXPECT_NEAR(r.shallow, 5.0, 1e-9);
    EXPECT_NEAR(r.deep, 10.0, 1e-9);
    EXPECT_FALSE(r.converged);
    Rng rng(78);
    for (int i = 0; i < 5; ++i) {
        auto t = sample_gw_survived(mk_offspring({{0, 0.25}, {2, 0.75}}), 12, rng);
        auto f = frontier_resistance(t, 0, 8);
        EXPECT_GE(f.deep, f.shallow - 1e-9);
        EXPECT_EQ(f.converged, f.rel_change < 0.05);
    }
    EXPECT_THROW(frontier_resistance(p, 0, 11), Error);
}
