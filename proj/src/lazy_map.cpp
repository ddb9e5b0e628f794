#include "causal/lazy_map.hpp"

#include <algorithm>

#include "causal/error.hpp"

namespace causal {

LazyMap LazyMap::causal(const DerivedLaws& laws, std::uint64_t seed) {
    LazyMap m;
    m.kind_ = MapKind::Causal;
    m.laws_ = laws;
    m.seed_ = seed;
    Node r;
    r.kind = VertexKind::Backbone;
    r.flags = kLeftRay | kRightRay;
    r.key = mix64(seed, 0);
    r.next = r.prev = kNone;
    m.root_ = m.add_node(r);
    return m;
}

LazyMap LazyMap::slice(const DerivedLaws& laws, std::uint64_t seed) {
    LazyMap m = causal(laws, seed);
    m.kind_ = MapKind::Slice;
    return m;
}

LazyMap LazyMap::halfplane(const OffspringDistribution& mu, std::uint64_t seed) {
    if (mu.weight(0) > 0.0) throw Error(Errc::Mu0Positive, "the half-plane model needs mu(0) = 0");
    LazyMap m;
    m.kind_ = MapKind::HalfPlane;
    m.laws_ = plain_laws(mu);
    m.seed_ = seed;
    m.root_ = m.tree_root(0);
    return m;
}

LazyMap LazyMap::halfplane_scripted(ChildOracle oracle) {
    LazyMap m;
    m.kind_ = MapKind::HalfPlane;
    m.oracle_ = std::move(oracle);
    m.root_ = m.tree_root(0);
    return m;
}

int LazyMap::add_node(const Node& n) {
    if (n_.size() >= size_limit_)
        throw Error(Errc::SizeLimit, "lazy map exceeds " + std::to_string(size_limit_) + " vertices");
    n_.push_back(n);
    return static_cast<int>(n_.size()) - 1;
}

int LazyMap::tree_root(std::int64_t index) {
    auto it = roots_.find(index);
    if (it != roots_.end()) return it->second;
    Node stub;
    stub.height = -1;
    stub.flags = kStub;
    stub.tree = index;
    stub.next = stub.prev = kNone;
    stub.nchild = 1;
    stub.lo = 0;
    stub.hi = 1;
    int s = add_node(stub);
    Node r;
    r.parent = s;
    r.height = 0;
    r.tree = index;
    r.key = mix64(seed_, static_cast<std::uint64_t>(index));
    r.kind = VertexKind::Plain;
    int rid = add_node(r);
    n_[s].first_child = rid;
    n_[s].key = mix64(r.key, 0);
    roots_.emplace(index, rid);
    return rid;
}

void LazyMap::expand(int v) {
    if (n_[v].nchild >= 0) return;
    if (oracle_) {
        std::vector<int> path;
        for (int u = v; n_[u].height > 0; u = n_[u].parent) path.push_back(n_[u].rank);
        std::reverse(path.begin(), path.end());
        int c = oracle_(n_[v].tree, path);
        if (c < 1) throw Error(Errc::OutOfDomain, "scripted half-plane vertices need a child");
        scratch_.assign(c, VertexKind::Plain);
    } else {
        Rng rng(n_[v].key);
        draw_children(laws_, n_[v].kind, rng, scratch_);
    }
    const int c = static_cast<int>(scratch_.size());
    const Node pv = n_[v];
    int first = size();
    int lo = 0, hi = c;
    int lray = -1, rray = -1;
    if (pv.flags & kLeftRay)
        for (int i = 0; i < c; ++i)
            if (scratch_[i] == VertexKind::Backbone) { lray = i; break; }
    if (pv.flags & kRightRay)
        for (int i = c - 1; i >= 0; --i)
            if (scratch_[i] == VertexKind::Backbone) { rray = i; break; }
    if (kind_ == MapKind::Slice) {
        if (lray >= 0) lo = lray;
        if (rray >= 0) hi = rray + 1;
    }
    for (int i = 0; i < c; ++i) {
        Node ch;
        ch.parent = v;
        ch.height = pv.height + 1;
        ch.rank = i;
        ch.tree = pv.tree;
        ch.key = mix64(pv.key, static_cast<std::uint64_t>(i) + 1);
        ch.kind = scratch_[i];
        if (i == lray) ch.flags |= kLeftRay;
        if (i == rray) ch.flags |= kRightRay;
        if (i > 0) ch.prev = first + i - 1;
        if (i + 1 < c) ch.next = first + i + 1;
        add_node(ch);
    }
    n_[v].nchild = c;
    n_[v].first_child = c > 0 ? first : -1;
    n_[v].lo = lo;
    n_[v].hi = hi;
}

int LazyMap::num_tree_children(int v) {
    expand(v);
    return n_[v].nchild;
}

int LazyMap::tree_child(int v, int i) {
    expand(v);
    return n_[v].first_child + i;
}

int LazyMap::child_lo(int v) {
    expand(v);
    return n_[v].lo;
}

int LazyMap::child_hi(int v) {
    expand(v);
    return n_[v].hi;
}

int LazyMap::level0_step(int v, int dir) {
    if (kind_ != MapKind::HalfPlane) return kNone;
    return tree_root(n_[v].tree + dir);
}

int LazyMap::next_in_level(int v) {
    if (n_[v].next != kUnknown) return n_[v].next;
    std::vector<int> stack;
    int u = v;
    int r;
    for (;;) {
        if (n_[u].next != kUnknown) {
            r = n_[u].next;
            break;
        }
        if (n_[u].height == 0) {
            r = level0_step(u, +1);
            n_[u].next = r;
            if (r >= 0) n_[r].prev = u;
            break;
        }
        stack.push_back(u);
        u = n_[u].parent;
    }
    // r is the successor of u; walk back down, one level per pushed vertex
    while (!stack.empty()) {
        int w = stack.back();
        stack.pop_back();
        int x = r;
        while (x >= 0) {
            expand(x);
            if (n_[x].nchild > 0) break;
            x = next_in_level(x);
        }
        r = x >= 0 ? n_[x].first_child : kNone;
        n_[w].next = r;
        if (r >= 0) n_[r].prev = w;
    }
    return n_[v].next;
}

int LazyMap::prev_in_level(int v) {
    if (n_[v].prev != kUnknown) return n_[v].prev;
    std::vector<int> stack;
    int u = v;
    int r;
    for (;;) {
        if (n_[u].prev != kUnknown) {
            r = n_[u].prev;
            break;
        }
        if (n_[u].height == 0) {
            r = level0_step(u, -1);
            n_[u].prev = r;
            if (r >= 0) n_[r].next = u;
            break;
        }
        stack.push_back(u);
        u = n_[u].parent;
    }
    while (!stack.empty()) {
        int w = stack.back();
        stack.pop_back();
        int x = r;
        while (x >= 0) {
            expand(x);
            if (n_[x].nchild > 0) break;
            x = prev_in_level(x);
        }
        r = x >= 0 ? n_[x].first_child + n_[x].nchild - 1 : kNone;
        n_[w].prev = r;
        if (r >= 0) n_[r].next = w;
    }
    return n_[v].prev;
}

int LazyMap::first_in_level(int h) {
    while (static_cast<int>(first_.size()) <= h) {
        int lvl = static_cast<int>(first_.size());
        if (lvl == 0) {
            first_.push_back(root_);
            continue;
        }
        int x = first_[lvl - 1];
        while (x >= 0) {
            expand(x);
            if (n_[x].nchild > 0) break;
            x = next_in_level(x);
        }
        first_.push_back(x >= 0 ? n_[x].first_child : kNone);
    }
    return first_[h];
}

int LazyMap::last_in_level(int h) {
    while (static_cast<int>(last_.size()) <= h) {
        int lvl = static_cast<int>(last_.size());
        if (lvl == 0) {
            last_.push_back(root_);
            continue;
        }
        int x = last_[lvl - 1];
        while (x >= 0) {
            expand(x);
            if (n_[x].nchild > 0) break;
            x = prev_in_level(x);
        }
        last_.push_back(x >= 0 ? n_[x].first_child + n_[x].nchild - 1 : kNone);
    }
    return last_[h];
}

int LazyMap::left(int v) {
    if (n_[v].flags & kStub) return kNone;
    switch (kind_) {
        case MapKind::Slice:
            return (n_[v].flags & kLeftRay) ? kNone : prev_in_level(v);
        case MapKind::HalfPlane:
            return prev_in_level(v);
        case MapKind::Causal: {
            int p = prev_in_level(v);
            if (p >= 0) return p;
            int l = last_in_level(n_[v].height);
            return l == v ? kNone : l;
        }
    }
    return kNone;
}

int LazyMap::right(int v) {
    if (n_[v].flags & kStub) return kNone;
    switch (kind_) {
        case MapKind::Slice:
            return (n_[v].flags & kRightRay) ? kNone : next_in_level(v);
        case MapKind::HalfPlane:
            return next_in_level(v);
        case MapKind::Causal: {
            int p = next_in_level(v);
            if (p >= 0) return p;
            int f = first_in_level(n_[v].height);
            return f == v ? kNone : f;
        }
    }
    return kNone;
}

int LazyMap::degree(int v) {
    if (v < 0 || v >= size()) throw Error(Errc::UnknownVertex, std::to_string(v));
    expand(v);
    int d = n_[v].hi - n_[v].lo;
    if (n_[v].parent >= 0) ++d;
    if (left(v) >= 0) ++d;
    if (right(v) >= 0) ++d;
    return d;
}

void LazyMap::incidences(int v, std::vector<Inc>& out) {
    if (v < 0 || v >= size()) throw Error(Errc::UnknownVertex, std::to_string(v));
    out.clear();
    expand(v);
    if (n_[v].flags & kStub) {
        out.push_back({n_[v].first_child, EdgeKind::RootStub, true});
        return;
    }
    int p = n_[v].parent;
    if (p >= 0) out.push_back({p, (n_[p].flags & kStub) ? EdgeKind::RootStub : EdgeKind::Vertical, false});
    int l = left(v);
    if (l >= 0) out.push_back({l, prev_in_level(v) == kNone ? EdgeKind::Wrap : EdgeKind::Horizontal, false});
    int lo = n_[v].lo, hi = n_[v].hi, fc = n_[v].first_child;
    for (int i = lo; i < hi; ++i) out.push_back({fc + i, EdgeKind::Vertical, true});
    int r = right(v);
    if (r >= 0) out.push_back({r, next_in_level(v) == kNone ? EdgeKind::Wrap : EdgeKind::Horizontal, false});
}

int LazyMap::ancestor(int v, int h) const {
    while (v >= 0 && n_[v].height > h) v = n_[v].parent;
    return v;
}

PlaneTree LazyMap::materialize(int depth, std::vector<int>* lazy_ids) {
    if (kind_ == MapKind::HalfPlane) throw Error(Errc::OutOfDomain, "materialize a half-plane with snapshot()");
    PlaneTree t;
    std::vector<int> ids{root_};
    t.add_root(n_[root_].kind, n_[root_].kind == VertexKind::Backbone);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        int x = ids[i];
        if (n_[x].height >= depth) continue;
        expand(x);
        t.mark_expanded(static_cast<int>(i));
        for (int c = 0; c < n_[x].nchild; ++c) {
            int y = n_[x].first_child + c;
            t.add_child(static_cast<int>(i), n_[y].kind, n_[y].kind == VertexKind::Backbone);
            ids.push_back(y);
        }
    }
    t.set_depth_cap(depth);
    if (lazy_ids) *lazy_ids = std::move(ids);
    return t;
}

CausalMap LazyMap::snapshot(std::int64_t lo, std::int64_t hi, int depth, std::vector<int>* lazy_ids) {
    if (kind_ != MapKind::HalfPlane) throw Error(Errc::OutOfDomain, "snapshot is for half-plane maps");
    CausalMap::Spec s;
    s.kind = MapKind::HalfPlane;
    s.wrap = false;
    s.min_height = -1;
    s.levels.assign(depth + 2, {});
    std::vector<int> ids;
    std::map<int, int> local;
    auto add = [&](int x, int parent_id) {
        int id = static_cast<int>(ids.size());
        ids.push_back(x);
        local[x] = id;
        s.height.push_back(n_[x].height);
        s.parent.push_back(parent_id);
        s.tree_vertex.push_back(x);
        s.stub.push_back((n_[x].flags & kStub) ? 1 : 0);
        s.levels[n_[x].height + 1].push_back(id);
        return id;
    };
    for (std::int64_t i = lo; i <= hi; ++i) {
        int r = tree_root(i);
        int sid = add(n_[r].parent, -1);
        add(r, sid);
    }
    for (int h = 0; h < depth; ++h) {
        std::vector<int> row = s.levels[h + 1];
        for (int id : row) {
            int x = ids[id];
            expand(x);
            for (int c = 0; c < n_[x].nchild; ++c) add(n_[x].first_child + c, id);
        }
    }
    s.root = local.count(root_) ? local[root_] : s.levels[1].front();
    if (lazy_ids) *lazy_ids = ids;
    return CausalMap::assemble(s);
}

}  // namespace causal
