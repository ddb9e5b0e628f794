#include "causal/cmap.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <ostream>

#include "causal/error.hpp"

namespace causal {

const char* edge_kind_name(EdgeKind k) {
    switch (k) {
        case EdgeKind::Vertical: return "vertical";
        case EdgeKind::Horizontal: return "horizontal";
        case EdgeKind::Wrap: return "wrap";
        case EdgeKind::RootStub: return "root_stub";
    }
    return "?";
}

const CausalMap::Vertex& CausalMap::vertex(int v) const {
    if (v < 0 || v >= num_vertices()) throw Error(Errc::UnknownVertex, std::to_string(v));
    return verts_[v];
}

int CausalMap::degree(int v) const {
    if (v < 0 || v >= num_vertices()) throw Error(Errc::UnknownVertex, std::to_string(v));
    return rot_start_[v + 1] - rot_start_[v];
}

std::span<const Incidence> CausalMap::neighbors(int v) const {
    if (v < 0 || v >= num_vertices()) throw Error(Errc::UnknownVertex, std::to_string(v));
    return {rot_.data() + rot_start_[v], static_cast<std::size_t>(rot_start_[v + 1] - rot_start_[v])};
}

std::vector<int> CausalMap::children(int v) const {
    std::vector<int> out;
    for (const auto& inc : neighbors(v))
        if (edges_[inc.edge].kind != EdgeKind::Horizontal && edges_[inc.edge].kind != EdgeKind::Wrap &&
            verts_[inc.other].parent == v)
            out.push_back(inc.other);
    return out;
}

bool CausalMap::on_boundary(int v) const {
    int h = verts_.at(v).height;
    if (h < 0 || h >= static_cast<int>(left_ray_.size())) return false;
    return left_ray_[h] == v || right_ray_[h] == v;
}

int CausalMap::from_tree(int tv) const {
    if (tv < 0 || tv >= static_cast<int>(tree_to_map_.size())) return -1;
    return tree_to_map_[tv];
}

int global_slot(const CausalMap& m, int v, int pos) {
    return static_cast<int>(m.neighbors(v).data() - m.neighbors(0).data()) + pos;
}

CausalMap CausalMap::assemble(const Spec& s) {
    CausalMap m;
    const int n = static_cast<int>(s.height.size());
    m.kind_ = s.kind;
    m.root_ = s.root;
    m.levels_ = s.levels;
    m.min_height_ = s.min_height;
    m.left_ray_ = s.left_ray;
    m.right_ray_ = s.right_ray;
    m.verts_.resize(n);
    int max_tv = -1;
    for (int v = 0; v < n; ++v) {
        m.verts_[v].height = s.height[v];
        m.verts_[v].parent = s.parent[v];
        m.verts_[v].tree_vertex = s.tree_vertex.empty() ? -1 : s.tree_vertex[v];
        m.verts_[v].stub = s.stub.empty() ? false : s.stub[v] != 0;
        m.verts_[v].backbone = s.backbone.empty() ? false : s.backbone[v] != 0;
        max_tv = std::max(max_tv, m.verts_[v].tree_vertex);
    }
    m.tree_to_map_.assign(max_tv + 1, -1);
    for (int v = 0; v < n; ++v)
        if (m.verts_[v].tree_vertex >= 0) m.tree_to_map_[m.verts_[v].tree_vertex] = v;

    std::vector<int> up_edge(n, -1), left_edge(n, -1), right_edge(n, -1);
    std::vector<std::vector<int>> kids(n);
    for (std::size_t li = 0; li < m.levels_.size(); ++li) {
        const auto& lv = m.levels_[li];
        for (std::size_t i = 0; i < lv.size(); ++i) {
            int v = lv[i];
            m.verts_[v].level_index = static_cast<int>(i);
            int p = m.verts_[v].parent;
            if (p >= 0) {
                up_edge[v] = static_cast<int>(m.edges_.size());
                m.edges_.push_back({p, v, m.verts_[p].stub ? EdgeKind::RootStub : EdgeKind::Vertical});
                kids[p].push_back(v);
            }
        }
        int h = s.min_height + static_cast<int>(li);
        if (h < 0) continue;
        for (std::size_t i = 0; i + 1 < lv.size(); ++i) {
            int e = static_cast<int>(m.edges_.size());
            m.edges_.push_back({lv[i], lv[i + 1], EdgeKind::Horizontal});
            right_edge[lv[i]] = e;
            left_edge[lv[i + 1]] = e;
        }
        if (s.wrap && lv.size() >= 2) {
            int e = static_cast<int>(m.edges_.size());
            m.edges_.push_back({lv.back(), lv.front(), EdgeKind::Wrap});
            right_edge[lv.back()] = e;
            left_edge[lv.front()] = e;
        }
    }
    auto other = [&](int e, int v) { return m.edges_[e].u == v ? m.edges_[e].v : m.edges_[e].u; };
    m.rot_start_.assign(n + 1, 0);
    m.rot_.clear();
    for (int v = 0; v < n; ++v) {
        m.rot_start_[v] = static_cast<int>(m.rot_.size());
        if (up_edge[v] >= 0) m.rot_.push_back({up_edge[v], m.verts_[v].parent, -1});
        if (left_edge[v] >= 0) m.rot_.push_back({left_edge[v], other(left_edge[v], v), -1});
        for (int c : kids[v]) m.rot_.push_back({up_edge[c], c, -1});
        if (right_edge[v] >= 0) m.rot_.push_back({right_edge[v], other(right_edge[v], v), -1});
    }
    m.rot_start_[n] = static_cast<int>(m.rot_.size());
    std::vector<std::array<int, 2>> slot(m.edges_.size(), {-1, -1});
    for (int v = 0; v < n; ++v)
        for (int g = m.rot_start_[v]; g < m.rot_start_[v + 1]; ++g) {
            auto& sl = slot[m.rot_[g].edge];
            (sl[0] < 0 ? sl[0] : sl[1]) = g;
        }
    for (int v = 0; v < n; ++v)
        for (int g = m.rot_start_[v]; g < m.rot_start_[v + 1]; ++g) {
            const auto& sl = slot[m.rot_[g].edge];
            int og = sl[0] == g ? sl[1] : sl[0];
            int w = m.rot_[g].other;
            m.rot_[g].mate = og - m.rot_start_[w];
        }
    return m;
}

CausalMap build_causal(const PlaneTree& t) {
    if (t.size() == 0) throw Error(Errc::OutOfDomain, "empty tree");
    CausalMap::Spec s;
    s.kind = MapKind::Causal;
    s.wrap = true;
    int n = t.size();
    s.height.resize(n);
    s.parent.resize(n);
    s.tree_vertex.resize(n);
    for (int v = 0; v < n; ++v) {
        s.height[v] = t.height(v);
        s.parent[v] = t.parent(v);
        s.tree_vertex[v] = v;
    }
    s.backbone.resize(n);
    for (int v = 0; v < n; ++v) s.backbone[v] = t.on_backbone(v);
    s.levels = levels(t);
    s.root = t.root();
    return CausalMap::assemble(s);
}

CausalMap build_slice(const PlaneTree& t) {
    if (t.size() == 0) throw Error(Errc::OutOfDomain, "empty tree");
    const int cap = t.depth_cap();
    std::vector<char> bb(t.size(), 0);
    if (t.on_backbone(t.root())) {
        for (int v = 0; v < t.size(); ++v) bb[v] = t.on_backbone(v);
    } else {
        for (int v : backbone_to_cap(t)) bb[v] = 1;
    }
    if (!bb[t.root()]) throw Error(Errc::NoBackbone, "root has no descendant at the cap");
    std::vector<int> gl{t.root()}, gr{t.root()};
    for (int h = 0; h < cap; ++h) {
        int l = -1, r = -1;
        for (int i = 0; i < t.num_children(gl[h]); ++i)
            if (bb[t.child(gl[h], i)]) { l = t.child(gl[h], i); break; }
        for (int i = t.num_children(gr[h]) - 1; i >= 0; --i)
            if (bb[t.child(gr[h], i)]) { r = t.child(gr[h], i); break; }
        if (l < 0 || r < 0) throw Error(Errc::NoBackbone, "backbone ends at height " + std::to_string(h));
        gl.push_back(l);
        gr.push_back(r);
    }
    auto lv = levels(t);
    std::vector<int> map_id(t.size(), -1);
    CausalMap::Spec s;
    s.kind = MapKind::Slice;
    s.wrap = false;
    s.root = 0;
    for (int h = 0; h <= cap && h < static_cast<int>(lv.size()); ++h) {
        auto a = std::find(lv[h].begin(), lv[h].end(), gl[h]);
        auto b = std::find(lv[h].begin(), lv[h].end(), gr[h]);
        std::vector<int> row;
        for (auto it = a; it <= b; ++it) {
            int v = *it;
            int id = static_cast<int>(s.height.size());
            map_id[v] = id;
            s.height.push_back(h);
            s.parent.push_back(h == 0 ? -1 : map_id[t.parent(v)]);
            s.tree_vertex.push_back(v);
            s.backbone.push_back(bb[v]);
            row.push_back(id);
        }
        s.levels.push_back(std::move(row));
        s.left_ray.push_back(map_id[gl[h]]);
        s.right_ray.push_back(map_id[gr[h]]);
    }
    return CausalMap::assemble(s);
}

Faces trace_faces(const CausalMap& m) {
    Faces f;
    const int total = m.num_vertices() == 0 ? 0 : global_slot(m, m.num_vertices() - 1, m.degree(m.num_vertices() - 1));
    f.dart_face.assign(total, -1);
    for (int v = 0; v < m.num_vertices(); ++v) {
        for (int pos = 0; pos < m.degree(v); ++pos) {
            if (f.dart_face[global_slot(m, v, pos)] >= 0) continue;
            int id = static_cast<int>(f.corners.size());
            f.corners.emplace_back();
            int cv = v, cp = pos;
            while (f.dart_face[global_slot(m, cv, cp)] < 0) {
                f.dart_face[global_slot(m, cv, cp)] = id;
                f.corners[id].emplace_back(cv, cp);
                const Incidence& inc = m.neighbors(cv)[cp];
                int w = inc.other;
                cp = (inc.mate + 1) % m.degree(w);
                cv = w;
            }
        }
    }
    return f;
}

namespace {

long count_inversions(std::vector<int>& a) {
    if (a.size() < 2) return 0;
    std::vector<int> left(a.begin(), a.begin() + a.size() / 2), right(a.begin() + a.size() / 2, a.end());
    long c = count_inversions(left) + count_inversions(right);
    std::size_t i = 0, j = 0, k = 0;
    while (i < left.size() && j < right.size()) {
        if (right[j] < left[i]) {
            c += static_cast<long>(left.size() - i);
            a[k++] = right[j++];
        } else {
            a[k++] = left[i++];
        }
    }
    while (i < left.size()) a[k++] = left[i++];
    while (j < right.size()) a[k++] = right[j++];
    return c;
}

}  // namespace

long count_crossings(const CausalMap& m) {
    long crossings = 0;
    for (int h = m.min_height(); h < m.max_height(); ++h) {
        std::vector<std::pair<int, int>> vert;
        for (int v : m.level(h + 1)) {
            int p = m.parent(v);
            if (p >= 0) vert.emplace_back(m.vertex(p).level_index, m.vertex(v).level_index);
        }
        std::stable_sort(vert.begin(), vert.end(), [](auto a, auto b) { return a.first < b.first; });
        std::vector<int> cs;
        for (auto [p, c] : vert) cs.push_back(c);
        crossings += count_inversions(cs);
    }
    for (const auto& e : m.edges()) {
        if (e.kind == EdgeKind::Horizontal) {
            int a = m.vertex(e.u).level_index, b = m.vertex(e.v).level_index;
            if (m.height(e.u) != m.height(e.v) || std::abs(a - b) != 1) ++crossings;
        } else if (e.kind == EdgeKind::Wrap) {
            int sz = static_cast<int>(m.level(m.height(e.u)).size());
            int a = m.vertex(e.u).level_index, b = m.vertex(e.v).level_index;
            if (m.height(e.u) != m.height(e.v) || !((a == sz - 1 && b == 0) || (a == 0 && b == sz - 1))) ++crossings;
        } else if (std::abs(m.height(e.u) - m.height(e.v)) != 1) {
            ++crossings;
        }
    }
    return crossings;
}

void write_map(const CausalMap& m, std::ostream& os) {
    os << "# vertices " << m.num_vertices() << '\n';
    for (int v = 0; v < m.num_vertices(); ++v)
        os << v << ' ' << m.vertex(v).height << ' ' << m.vertex(v).level_index << '\n';
    os << "# edges " << m.num_edges() << '\n';
    for (const auto& e : m.edges()) os << e.u << ' ' << e.v << ' ' << edge_kind_name(e.kind) << '\n';
}

}  // namespace causal
