#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "causal/cmap.hpp"
#include "causal/offspring.hpp"
#include "causal/tree.hpp"

namespace causal {

// Infinite causal map, slice or half-plane generated on demand. Every
// vertex draws its children from a stream keyed by (seed, tree index,
// path from the root), so the realized map does not depend on the order in
// which a walk or an exploration happens to reveal it.
class LazyMap {
public:
    static constexpr int kNone = -1;

    static LazyMap causal(const DerivedLaws& laws, std::uint64_t seed);
    static LazyMap slice(const DerivedLaws& laws, std::uint64_t seed);
    // mu(0) must vanish
    static LazyMap halfplane(const OffspringDistribution& mu, std::uint64_t seed);

    // Half-plane with prescribed child counts: oracle(tree index, ranks along
    // the path from the root) -> number of children (>= 1).
    using ChildOracle = std::function<int(std::int64_t, const std::vector<int>&)>;
    static LazyMap halfplane_scripted(ChildOracle oracle);

    MapKind kind() const { return kind_; }
    int root() const { return root_; }
    int size() const { return static_cast<int>(n_.size()); }
    void set_size_limit(std::size_t lim) { size_limit_ = lim; }

    int height(int v) const { return n_[v].height; }
    int parent(int v) const { return n_[v].parent; }  // stub below half-plane roots
    int rank(int v) const { return n_[v].rank; }
    bool is_stub(int v) const { return n_[v].flags & kStub; }
    bool on_backbone(int v) const { return n_[v].kind == VertexKind::Backbone; }
    bool on_left_ray(int v) const { return n_[v].flags & kLeftRay; }
    bool on_right_ray(int v) const { return n_[v].flags & kRightRay; }
    bool on_boundary(int v) const { return kind_ == MapKind::Slice && (n_[v].flags & (kLeftRay | kRightRay)); }
    std::int64_t tree_index(int v) const { return n_[v].tree; }
    // Creation-order independent name of a vertex.
    std::uint64_t label(int v) const { return n_[v].key; }

    // Tree children in the full tree (draws them if needed).
    int num_tree_children(int v);
    int tree_child(int v, int i);
    // Children that belong to the map (slice-restricted on the rays).
    int child_lo(int v);
    int child_hi(int v);

    // Horizontal neighbours in the map, kNone when absent. In the causal map
    // the leftmost and rightmost vertices of a level see each other.
    int left(int v);
    int right(int v);
    // Level order ignoring wrap and slice restrictions.
    int next_in_level(int v);
    int prev_in_level(int v);

    int degree(int v);
    // Incidences in rotation order: parent, left, children, right.
    struct Inc {
        int other;
        EdgeKind kind;
        bool to_child;
    };
    void incidences(int v, std::vector<Inc>& out);

    // Half-plane roots; creates the tree on first use.
    int tree_root(std::int64_t index);

    // Height-h ancestor of v (h <= height(v)).
    int ancestor(int v, int h) const;

    // Materializes the tree up to depth (causal/slice modes) and returns it
    // with the lazy id of every tree vertex.
    PlaneTree materialize(int depth, std::vector<int>* lazy_ids = nullptr);
    // Finite half-plane window: trees lo..hi, heights -1..depth.
    CausalMap snapshot(std::int64_t lo, std::int64_t hi, int depth, std::vector<int>* lazy_ids = nullptr);

private:
    static constexpr std::uint8_t kStub = 1, kLeftRay = 2, kRightRay = 4;
    static constexpr int kUnknown = -2;

    struct Node {
        std::int32_t parent = -1;
        std::int32_t first_child = -1;
        std::int32_t nchild = -1;  // -1 until drawn
        std::int32_t height = 0;
        std::int32_t rank = 0;
        std::int32_t lo = 0, hi = 0;  // visible children
        std::int32_t next = kUnknown, prev = kUnknown;
        std::int64_t tree = 0;
        std::uint64_t key = 0;
        VertexKind kind = VertexKind::Plain;
        std::uint8_t flags = 0;
    };

    void expand(int v);
    int add_node(const Node& n);
    int first_in_level(int h);
    int last_in_level(int h);
    int level0_step(int v, int dir);

    MapKind kind_ = MapKind::Causal;
    DerivedLaws laws_;
    std::uint64_t seed_ = 0;
    std::vector<Node> n_;
    int root_ = 0;
    std::map<std::int64_t, int> roots_;
    std::vector<int> first_, last_;
    std::vector<VertexKind> scratch_;
    std::size_t size_limit_ = kDefaultSizeLimit;
    ChildOracle oracle_;
};

}  // namespace causal
