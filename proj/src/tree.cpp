#include "causal/tree.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "causal/error.hpp"

namespace causal {

DerivedLaws plain_laws(const OffspringDistribution& d) {
    DerivedLaws L;
    L.mu = d;
    L.q = 1.0;
    return L;
}

void draw_children(const DerivedLaws& laws, VertexKind kind, Rng& rng, std::vector<VertexKind>& out) {
    out.clear();
    switch (kind) {
        case VertexKind::Plain: {
            int c = laws.mu.sample(rng);
            out.assign(c, VertexKind::Plain);
            return;
        }
        case VertexKind::Bush: {
            int c = laws.bush.sample(rng);
            out.assign(c, VertexKind::Bush);
            return;
        }
        case VertexKind::Backbone: {
            int b = laws.backbone.sample(rng);
            int j = laws.extra[b].sample(rng);
            int c = b + j;
            out.assign(c, VertexKind::Bush);
            if (j == 0) {
                out.assign(c, VertexKind::Backbone);
                return;
            }
            // partial Fisher-Yates over slot indices: the first b entries
            // form a uniform b-subset
            std::vector<int> slots(c);
            for (int i = 0; i < c; ++i) slots[i] = i;
            for (int i = 0; i < b; ++i) {
                int r = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(c - i)));
                std::swap(slots[i], slots[r]);
                out[slots[i]] = VertexKind::Backbone;
            }
            return;
        }
    }
}

std::vector<int> PlaneTree::children(int v) const {
    std::vector<int> out(v_[v].num_children);
    for (int i = 0; i < v_[v].num_children; ++i) out[i] = v_[v].first_child + i;
    return out;
}

int PlaneTree::add_root(VertexKind kind, bool backbone) {
    if (!v_.empty()) throw Error(Errc::OutOfDomain, "tree already has a root");
    Vertex r;
    r.kind = kind;
    r.on_backbone = backbone;
    v_.push_back(r);
    return 0;
}

int PlaneTree::add_child(int parent, VertexKind kind, bool backbone) {
    Vertex& p = v_.at(parent);
    int id = size();
    if (p.num_children == 0) {
        p.first_child = id;
    } else if (p.first_child + p.num_children != id) {
        throw Error(Errc::OutOfDomain, "children of a vertex must be contiguous");
    }
    Vertex c;
    c.parent = parent;
    c.height = p.height + 1;
    c.rank = p.num_children;
    c.kind = kind;
    c.on_backbone = backbone;
    ++v_[parent].num_children;
    v_.push_back(c);
    return id;
}

void PlaneTree::extend(const DerivedLaws& laws, int new_cap, Rng& rng, std::size_t size_limit) {
    std::vector<VertexKind> kids;
    for (std::size_t v = 0; v < v_.size(); ++v) {
        if (v_[v].expanded || v_[v].height >= new_cap) continue;
        v_[v].expanded = true;
        draw_children(laws, v_[v].kind, rng, kids);
        if (v_.size() + kids.size() > size_limit)
            throw Error(Errc::SizeLimit, "tree exceeds " + std::to_string(size_limit) + " vertices");
        for (VertexKind k : kids) add_child(static_cast<int>(v), k, k == VertexKind::Backbone);
    }
    if (new_cap > depth_cap_) depth_cap_ = new_cap;
}

void PlaneTree::validate() const {
    if (v_.empty()) throw Error(Errc::OutOfDomain, "empty tree");
    if (v_[0].parent != -1 || v_[0].height != 0) throw Error(Errc::OutOfDomain, "bad root");
    for (int v = 0; v < size(); ++v) {
        const Vertex& x = v_[v];
        for (int i = 0; i < x.num_children; ++i) {
            const Vertex& c = v_.at(x.first_child + i);
            if (c.parent != v || c.rank != i || c.height != x.height + 1)
                throw Error(Errc::OutOfDomain, "inconsistent child link at " + std::to_string(v));
            if (c.on_backbone && !x.on_backbone)
                throw Error(Errc::OutOfDomain, "backbone not ancestor-closed at " + std::to_string(v));
        }
        if (v > 0) {
            const Vertex& p = v_.at(x.parent);
            if (x.rank >= p.num_children || p.first_child + x.rank != v)
                throw Error(Errc::OutOfDomain, "inconsistent parent link at " + std::to_string(v));
        }
    }
}

PlaneTree sample_gw(const OffspringDistribution& d, int depth_cap, Rng& rng, std::size_t size_limit) {
    PlaneTree t;
    t.add_root(VertexKind::Plain, false);
    t.extend(plain_laws(d), depth_cap, rng, size_limit);
    t.set_depth_cap(depth_cap);
    return t;
}

PlaneTree sample_gw_survived(const DerivedLaws& laws, int depth_cap, Rng& rng, std::size_t size_limit) {
    PlaneTree t;
    t.add_root(VertexKind::Backbone, true);
    t.extend(laws, depth_cap, rng, size_limit);
    t.set_depth_cap(depth_cap);
    return t;
}

PlaneTree sample_gw_survived(const OffspringDistribution& d, int depth_cap, Rng& rng, std::size_t size_limit) {
    return sample_gw_survived(derive_laws(d), depth_cap, rng, size_limit);
}

std::vector<int> backbone_to_cap(const PlaneTree& t) {
    std::vector<char> reach(t.size(), 0);
    // children always have larger ids than their parent
    for (int v = t.size() - 1; v >= 0; --v) {
        if (t.height(v) == t.depth_cap()) reach[v] = 1;
        if (reach[v] && v > 0) reach[t.parent(v)] = 1;
    }
    std::vector<int> out;
    for (int v = 0; v < t.size(); ++v)
        if (reach[v]) out.push_back(v);
    return out;
}

std::vector<std::vector<int>> levels(const PlaneTree& t) {
    std::vector<std::vector<int>> out;
    // index order inside a level is left-to-right by construction
    for (int v = 0; v < t.size(); ++v) {
        int h = t.height(v);
        if (h > t.depth_cap()) continue;
        if (static_cast<int>(out.size()) <= h) out.resize(h + 1);
        out[h].push_back(v);
    }
    return out;
}

std::vector<int> level_sizes(const PlaneTree& t) {
    std::vector<int> z;
    for (const auto& lv : levels(t)) z.push_back(static_cast<int>(lv.size()));
    return z;
}

PlaneTree truncate(const PlaneTree& t, int depth, std::vector<int>* old_ids) {
    if (depth < 0) throw Error(Errc::OutOfDomain, "negative depth");
    PlaneTree out;
    out.add_root(t.vertex(0).kind, t.on_backbone(0));
    std::vector<int> src{0};
    for (std::size_t i = 0; i < src.size(); ++i) {
        const int v = src[i];
        if (t.height(v) >= depth || !t.vertex(v).expanded) continue;
        out.mark_expanded(static_cast<int>(i));
        for (int c : t.children(v)) {
            out.add_child(static_cast<int>(i), t.vertex(c).kind, t.on_backbone(c));
            src.push_back(c);
        }
    }
    out.set_depth_cap(std::min(depth, t.depth_cap()));
    if (old_ids) *old_ids = std::move(src);
    return out;
}

PlaneTree tree_from_child_counts(const std::vector<int>& counts, int depth_cap) {
    PlaneTree t;
    t.add_root(VertexKind::Plain, false);
    for (std::size_t v = 0; v < counts.size(); ++v) {
        if (static_cast<int>(v) >= t.size()) throw Error(Errc::OutOfDomain, "child counts exceed tree size");
        t.mark_expanded(static_cast<int>(v));
        for (int i = 0; i < counts[v]; ++i) t.add_child(static_cast<int>(v), VertexKind::Plain, false);
    }
    t.set_depth_cap(depth_cap);
    return t;
}

void write_tree(const PlaneTree& t, std::ostream& os) {
    os << "# depth_cap " << t.depth_cap() << '\n';
    for (int v = 0; v < t.size(); ++v) {
        const auto& x = t.vertex(v);
        os << x.parent << ' ' << x.rank << ' ' << x.height << ' ' << (x.on_backbone ? 1 : 0) << '\n';
    }
}

PlaneTree read_tree(std::istream& is) {
    PlaneTree t;
    std::string line;
    int cap = -1;
    int n = 0;
    bool conditioned = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string key;
            hs >> key;
            if (key == "depth_cap") hs >> cap;
            continue;
        }
        std::istringstream ls(line);
        int parent, rank, height, bb;
        if (!(ls >> parent >> rank >> height >> bb)) throw Error(Errc::ParseError, "bad tree line '" + line + "'");
        if (parent < 0 && bb) conditioned = true;
        VertexKind kind = bb ? VertexKind::Backbone : (conditioned ? VertexKind::Bush : VertexKind::Plain);
        int id;
        if (parent < 0) {
            id = t.add_root(kind, bb != 0);
        } else {
            if (parent >= n) throw Error(Errc::ParseError, "parent after child");
            id = t.add_child(parent, kind, bb != 0);
        }
        if (t.vertex(id).rank != rank || t.vertex(id).height != height)
            throw Error(Errc::ParseError, "inconsistent rank/height on line " + std::to_string(n));
        ++n;
    }
    if (n == 0) throw Error(Errc::ParseError, "empty tree");
    int maxh = 0;
    for (int v = 0; v < t.size(); ++v) maxh = std::max(maxh, t.height(v));
    for (int v = 0; v < t.size(); ++v)
        if (t.num_children(v) > 0 || t.height(v) < (cap < 0 ? maxh : cap)) t.mark_expanded(v);
    t.set_depth_cap(cap < 0 ? maxh : cap);
    return t;
}

}  // namespace causal
