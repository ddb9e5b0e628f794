#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "causal/tree.hpp"

namespace causal {

enum class EdgeKind : std::uint8_t { Vertical, Horizontal, Wrap, RootStub };
enum class MapKind : std::uint8_t { Causal, Slice, HalfPlane };

const char* edge_kind_name(EdgeKind k);

struct Incidence {
    int edge;
    int other;
    int mate;  // position of the same edge in other's rotation
};

// Finite layered planar multigraph. Rotation at every vertex is
// [parent, left, children left to right, right], i.e. clockwise in a
// drawing with heights increasing upwards and ranks increasing rightwards.
class CausalMap {
public:
    struct Vertex {
        int height = 0;
        int level_index = 0;
        int tree_vertex = -1;
        int parent = -1;  // map vertex below along a vertical or stub edge
        bool stub = false;
        bool backbone = false;
    };
    struct Edge {
        int u, v;
        EdgeKind kind;
    };

    int num_vertices() const { return static_cast<int>(verts_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    const Vertex& vertex(int v) const;
    const Edge& edge(int e) const { return edges_.at(e); }
    const std::vector<Edge>& edges() const { return edges_; }
    MapKind kind() const { return kind_; }
    int root() const { return root_; }

    int degree(int v) const;
    std::span<const Incidence> neighbors(int v) const;
    int height(int v) const { return verts_[v].height; }
    int parent(int v) const { return verts_[v].parent; }
    std::vector<int> children(int v) const;

    // levels()[h - min_height()] lists the vertices at height h, left to right
    const std::vector<std::vector<int>>& levels() const { return levels_; }
    int min_height() const { return min_height_; }
    int max_height() const { return min_height_ + static_cast<int>(levels_.size()) - 1; }
    const std::vector<int>& level(int h) const { return levels_.at(h - min_height_); }

    // slices: gamma_l(h), gamma_r(h) for h = 0..max_height
    const std::vector<int>& left_ray() const { return left_ray_; }
    const std::vector<int>& right_ray() const { return right_ray_; }
    bool on_boundary(int v) const;

    // map vertex for a tree vertex (-1 when absent)
    int from_tree(int tv) const;

    struct Spec {
        MapKind kind = MapKind::Causal;
        std::vector<int> height, parent, tree_vertex;
        std::vector<char> stub, backbone;
        std::vector<std::vector<int>> levels;  // from min_height
        int min_height = 0;
        int root = 0;
        bool wrap = false;
        std::vector<int> left_ray, right_ray;
    };
    static CausalMap assemble(const Spec& spec);

private:
    MapKind kind_ = MapKind::Causal;
    std::vector<Vertex> verts_;
    std::vector<Edge> edges_;
    std::vector<int> rot_start_;
    std::vector<Incidence> rot_;
    std::vector<std::vector<int>> levels_;
    int min_height_ = 0;
    int root_ = 0;
    std::vector<int> left_ray_, right_ray_;
    std::vector<int> tree_to_map_;
};

CausalMap build_causal(const PlaneTree& t);
// Uses the backbone flags when the root is flagged, backbone_to_cap otherwise.
CausalMap build_slice(const PlaneTree& t);

// Faces of the embedding as cyclic lists of (vertex, rotation position)
// corners; each dart belongs to exactly one face.
struct Faces {
    std::vector<std::vector<std::pair<int, int>>> corners;  // (vertex, outgoing rotation slot)
    std::vector<int> dart_face;                               // indexed by global rotation slot
};
Faces trace_faces(const CausalMap& m);
int global_slot(const CausalMap& m, int v, int pos);

// Vertical-edge order inversions plus non-consecutive horizontal edges in the
// layered embedding; zero for a planar-consistent map.
long count_crossings(const CausalMap& m);

void write_map(const CausalMap& m, std::ostream& os);

}  // namespace causal
