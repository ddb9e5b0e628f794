#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "causal/cmap.hpp"
#include "causal/electric.hpp"
#include "causal/tree.hpp"

namespace causal::fixture {

// rho -> {a, b}; a -> {c}; b -> {d, e}; ids in breadth-first order.
struct TStar {
    enum { rho = 0, a = 1, b = 2, c = 3, d = 4, e = 5 };
    static PlaneTree tree() { return tree_from_child_counts({2, 1, 2, 0, 0, 0}, 2); }
};

inline int map_id(const CausalMap& m, int tree_vertex) { return m.from_tree(tree_vertex); }

inline PlaneTree complete_tree(int arity, int depth) {
    std::vector<int> counts;
    int level = 1;
    for (int h = 0; h <= depth; ++h) {
        for (int i = 0; i < level; ++i) counts.push_back(h < depth ? arity : 0);
        level *= arity;
    }
    return tree_from_child_counts(counts, depth);
}

inline PlaneTree path_tree(int depth) {
    std::vector<int> counts(depth + 1, 1);
    counts.back() = 0;
    return tree_from_child_counts(counts, depth);
}

// Planar map from straight-line coordinates: rotations sorted clockwise.
inline PlanarMap planar_from_coords(const std::vector<std::pair<double, double>>& xy,
                                    const std::vector<std::pair<int, int>>& edges) {
    PlanarMap pm;
    for (std::size_t i = 0; i < xy.size(); ++i) pm.add_vertex();
    for (auto [u, v] : edges) pm.add_edge(u, v);
    for (std::size_t v = 0; v < xy.size(); ++v) {
        auto ang = [&](const std::pair<int, int>& inc) {
            return std::atan2(xy[inc.first].second - xy[v].second, xy[inc.first].first - xy[v].first);
        };
        std::stable_sort(pm.rot[v].begin(), pm.rot[v].end(),
                         [&](const auto& x, const auto& y) { return ang(x) > ang(y); });
    }
    return pm;
}

}  // namespace causal::fixture
