#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "causal/offspring.hpp"
#include "causal/rng.hpp"

namespace causal {

// How a vertex draws its children.
enum class VertexKind : std::uint8_t {
    Plain,     // unconditioned mu
    Backbone,  // conditioned: backbone count from bold mu, extra bushes, uniform slots
    Bush,      // mu tilde
};

// Laws for unconditioned sampling only (no supercriticality required).
DerivedLaws plain_laws(const OffspringDistribution& d);

// Draws the ordered children of a vertex of the given kind.
void draw_children(const DerivedLaws& laws, VertexKind kind, Rng& rng, std::vector<VertexKind>& out);

inline constexpr std::size_t kDefaultSizeLimit = 10'000'000;

class PlaneTree {
public:
    struct Vertex {
        std::int32_t parent = -1;
        std::int32_t first_child = -1;
        std::int32_t num_children = 0;
        std::int32_t height = 0;
        std::int32_t rank = 0;  // position among siblings, from 0
        bool on_backbone = false;
        VertexKind kind = VertexKind::Plain;
        bool expanded = false;  // children drawn
    };

    PlaneTree() = default;

    int size() const { return static_cast<int>(v_.size()); }
    int root() const { return 0; }
    int depth_cap() const { return depth_cap_; }
    const Vertex& vertex(int v) const { return v_.at(v); }
    int parent(int v) const { return v_[v].parent; }
    int height(int v) const { return v_[v].height; }
    int num_children(int v) const { return v_[v].num_children; }
    int child(int v, int i) const { return v_[v].first_child + i; }
    bool on_backbone(int v) const { return v_[v].on_backbone; }
    std::vector<int> children(int v) const;

    // appends a vertex; children of one parent must be added consecutively
    int add_root(VertexKind kind, bool backbone);
    int add_child(int parent, VertexKind kind, bool backbone);
    void set_depth_cap(int d) { depth_cap_ = d; }
    void mark_expanded(int v) { v_[v].expanded = true; }

    // Draws children for every unexpanded vertex below new_cap, breadth first.
    void extend(const DerivedLaws& laws, int new_cap, Rng& rng, std::size_t size_limit = kDefaultSizeLimit);

    // Structural self-check; throws on the first violated invariant.
    void validate() const;

private:
    std::vector<Vertex> v_;
    int depth_cap_ = 0;
};

PlaneTree sample_gw(const OffspringDistribution& d, int depth_cap, Rng& rng,
                    std::size_t size_limit = kDefaultSizeLimit);
PlaneTree sample_gw_survived(const OffspringDistribution& d, int depth_cap, Rng& rng,
                             std::size_t size_limit = kDefaultSizeLimit);
PlaneTree sample_gw_survived(const DerivedLaws& laws, int depth_cap, Rng& rng,
                             std::size_t size_limit = kDefaultSizeLimit);

// Vertices with a descendant (or themselves) at height depth_cap.
std::vector<int> backbone_to_cap(const PlaneTree& t);
std::vector<int> level_sizes(const PlaneTree& t);
// Vertices of each level, left to right.
std::vector<std::vector<int>> levels(const PlaneTree& t);

// Copy of the vertices at height <= depth, kinds and backbone flags kept.
// old_ids[i] is the vertex of t copied to i.
PlaneTree truncate(const PlaneTree& t, int depth, std::vector<int>* old_ids = nullptr);

// Builds a tree from explicit child counts in breadth-first order.
PlaneTree tree_from_child_counts(const std::vector<int>& counts, int depth_cap);

void write_tree(const PlaneTree& t, std::ostream& os);
PlaneTree read_tree(std::istream& is);

}  // namespace causal
