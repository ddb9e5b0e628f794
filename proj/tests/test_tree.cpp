#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "causal/error.hpp"
#include "causal/stats.hpp"
#include "causal/tree.hpp"
#include "fixtures.hpp"

using namespace causal;
using causal::fixture::TStar;

TEST(Tree, CompleteBinary) {
    Rng rng(1);
    auto t = sample_gw(mk_offspring({{2, 1.0}}), 3, rng);
    EXPECT_EQ(level_sizes(t), (std::vector<int>{1, 2, 4, 8}));
    t.validate();
    EXPECT_EQ(static_cast<int>(backbone_to_cap(t).size()), t.size());
    auto t4 = fixture::complete_tree(2, 4);
    EXPECT_EQ(level_sizes(t4), (std::vector<int>{1, 2, 4, 8, 16}));
}

TEST(Tree, DeadTree) {
    Rng rng(1);
    auto t = sample_gw(mk_offspring({{0, 1.0}}), 5, rng);
    EXPECT_EQ(level_sizes(t), std::vector<int>{1});
    EXPECT_TRUE(backbone_to_cap(t).empty());
    auto one = tree_from_child_counts({1, 0}, 2);  // root with a childless child
    EXPECT_TRUE(backbone_to_cap(one).empty());
    EXPECT_EQ(level_sizes(tree_from_child_counts({0}, 0)), std::vector<int>{1});
}

TEST(Tree, TStar) {
    auto t = TStar::tree();
    t.validate();
    EXPECT_EQ(level_sizes(t), (std::vector<int>{1, 2, 3}));
    EXPECT_EQ(backbone_to_cap(t).size(), 6u);
    EXPECT_EQ(t.parent(TStar::c), TStar::a);
    EXPECT_EQ(t.children(TStar::b), (std::vector<int>{TStar::d, TStar::e}));
}

TEST(Tree, MeanGrowth) {
    Rng rng(11);
    auto d = mk_offspring({{0, 0.25}, {2, 0.75}});
    const int n = 100'000, depth = 10;
    std::vector<double> z(n);
    for (int i = 0; i < n; ++i) {
        auto t = sample_gw(d, depth, rng);
        auto zs = level_sizes(t);
        z[i] = zs.size() > static_cast<std::size_t>(depth) ? zs[depth] : 0;
    }
    auto ci = mean_ci(z);
    EXPECT_NEAR(ci.mean, std::pow(1.5, depth), 3 * ci.sd / std::sqrt(n));
}

TEST(Tree, Determinism) {
    auto d = mk_offspring({{0, 0.25}, {2, 0.75}});
    Rng a(99), b(99);
    auto t1 = sample_gw_survived(d, 10, a);
    auto t2 = sample_gw_survived(d, 10, b);
    std::ostringstream s1, s2;
    write_tree(t1, s1);
    write_tree(t2, s2);
    EXPECT_EQ(s1.str(), s2.str());
}

TEST(Tree, SurvivedInvariants) {
    Rng rng(3);
    auto d = mk_offspring({{0, 0.25}, {2, 0.75}});
    for (int i = 0; i < 50; ++i) {
        auto t = sample_gw_survived(d, 12, rng);
        t.validate();
        EXPECT_EQ(static_cast<int>(level_sizes(t).size()), 13);
        for (int v = 0; v < t.size(); ++v) {
            if (t.on_backbone(v) && v != t.root()) EXPECT_TRUE(t.on_backbone(t.parent(v)));
            if (t.on_backbone(v) && t.height(v) < 12) {
                int nb = 0;
                for (int c : t.children(v)) nb += t.on_backbone(c);
                EXPECT_GE(nb, 1);
            }
        }
        // flagged backbone is contained in the vertices reaching the cap
        auto reach = backbone_to_cap(t);
        std::vector<char> in(t.size(), 0);
        for (int v : reach) in[v] = 1;
        for (int v = 0; v < t.size(); ++v)
            if (t.on_backbone(v)) EXPECT_TRUE(in[v]);
    }
}

TEST(Tree, PointMassSurvivedIsComplete) {
    Rng rng(3);
    auto t = sample_gw_survived(mk_offspring({{2, 1.0}}), 4, rng);
    EXPECT_EQ(level_sizes(t), (std::vector<int>{1, 2, 4, 8, 16}));
}

TEST(Tree, RootMarginalUnderSurvival) {
    // P(c(root) = k) = mu(k)(1 - q^k)/(1 - q)
    auto d = mk_offspring({{0, 0.2}, {1, 0.3}, {3, 0.5}});
    auto laws = derive_laws(d);
    const double q = laws.q;
    std::vector<double> p(4);
    for (int k = 0; k <= 3; ++k) p[k] = d.weight(k) * (1 - std::pow(q, k)) / (1 - q);
    Rng rng(17);
    std::vector<long> counts(4, 0);
    for (int i = 0; i < 10'000; ++i) ++counts[sample_gw_survived(laws, 1, rng).num_children(0)];
    EXPECT_GT(chi2_gof(counts, p).p_value, 1e-3);
}

TEST(Tree, BackboneCountsFollowBoldMu) {
    auto d = mk_offspring({{1, 0.5}, {3, 0.5}});
    auto laws = derive_laws(d);
    Rng rng(23);
    std::vector<long> root_counts(4, 0), pooled(4, 0);
    for (int i = 0; i < 10'000; ++i) {
        auto t = sample_gw_survived(laws, 3, rng);
        for (int v = 0; v < t.size(); ++v) {
            if (!t.on_backbone(v) || t.height(v) >= 3) continue;
            int nb = 0;
            for (int c : t.children(v)) nb += t.on_backbone(c);
            ++pooled[nb];
            if (v == 0) ++root_counts[nb];
        }
    }
    EXPECT_GT(chi2_gof(root_counts, laws.backbone.weights()).p_value, 1e-3);
    EXPECT_GT(chi2_gof(pooled, laws.backbone.weights()).p_value, 1e-3);
}

TEST(Tree, SerializationRoundTrip) {
    Rng rng(8);
    auto t = sample_gw_survived(mk_offspring({{0, 0.25}, {2, 0.75}}), 8, rng);
    std::ostringstream os;
    write_tree(t, os);
    std::istringstream is(os.str());
    auto u = read_tree(is);
    std::ostringstream os2;
    write_tree(u, os2);
    EXPECT_EQ(os.str(), os2.str());
    std::istringstream bad("0 0 0 0\n");
    EXPECT_THROW(read_tree(bad), Error);
}

TEST(Tree, ExtendKeepsPrefix) {
    auto laws = derive_laws(mk_offspring({{0, 0.25}, {2, 0.75}}));
    Rng rng(4);
    auto t = sample_gw_survived(laws, 5, rng);
    const int before = t.size();
    auto z5 = level_sizes(t);
    t.extend(laws, 8, rng);
    t.validate();
    auto z8 = level_sizes(t);
    EXPECT_GE(t.size(), before);
    for (int h = 0; h <= 5; ++h) EXPECT_EQ(z5[h], z8[h]);
}

TEST(Tree, SizeLimit) {
    Rng rng(1);
    try {
        sample_gw(mk_offspring({{3, 1.0}}), 20, rng, 1000);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::SizeLimit);
    }
}

TEST(Tree, TruncateKeepsPrefix) {
    Rng rng(77);
    auto t = sample_gw_survived(mk_offspring({{0, 0.25}, {2, 0.75}}), 9, rng);
    std::vector<int> old;
    auto c = truncate(t, 5, &old);
    c.validate();
    EXPECT_EQ(c.depth_cap(), 5);
    auto a = level_sizes(t), b = level_sizes(c);
    ASSERT_EQ(b.size(), 6u);
    for (int h = 0; h <= 5; ++h) EXPECT_EQ(a[h], b[h]);
    for (int v = 0; v < c.size(); ++v) {
        EXPECT_EQ(c.height(v), t.height(old[v]));
        EXPECT_EQ(c.on_backbone(v), t.on_backbone(old[v]));
        if (c.height(v) < 5) EXPECT_EQ(c.num_children(v), t.num_children(old[v]));
        if (v > 0) EXPECT_EQ(old[c.parent(v)], t.parent(old[v]));
    }
}
