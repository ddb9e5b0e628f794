#include "causal/explore.hpp"

#include <ostream>
#include <string>

#include <json.hpp>

#include "causal/error.hpp"

namespace causal {

Exploration::Exploration(LazyMap& m, int k, Rng rng) : m_(&m), k_(k), rng_(rng) { init(); }

Exploration::Exploration(LazyMap& m, int k, const WalkTrace& trace) : m_(&m), k_(k), rng_(0), trace_(trace) {
    if (trace.positions.size() < 2 || trace.positions[0] != m.root())
        throw Error(Errc::OutOfDomain, "trace must start at the root and take at least one step");
    init();
}

void Exploration::init() {
    if (m_->kind() != MapKind::HalfPlane) throw Error(Errc::OutOfDomain, "explorations run on the half-plane");
    if (k_ < 1) throw Error(Errc::OutOfDomain, "k must be >= 1");
    add_vertex(m_->root());
    positions_.push_back(m_->root());
    phi_.push_back(0);
    mark_from_ = m_->root();
    mark_to_ = next_walk_target(mark_from_);
}

int Exploration::next_walk_target(int from) {
    if (trace_) {
        std::size_t n = positions_.size();  // next position index
        if (n >= trace_->positions.size())
            throw Error(Errc::NotYetReached, "walk trace exhausted after " + std::to_string(n - 1) + " steps");
        return trace_->positions[n];
    }
    m_->incidences(from, inc_);
    return inc_[choose_slot(inc_, 1.0, rng_)].other;
}

void Exploration::mark(int v) {
    if (static_cast<int>(in_.size()) <= v) in_.resize(std::max<std::size_t>(v + 1, in_.size() * 2), 0);
    in_[v] = 1;
    order_.push_back(v);
}

void Exploration::add_vertex(int v) {
    if (v < 0 || v >= m_->size()) throw Error(Errc::UnknownVertex, std::to_string(v));
    if (explored(v)) throw Error(Errc::OutOfDomain, "vertex already explored");
    if (m_->is_stub(v)) v = m_->tree_child(v, 0);
    if (m_->height(v) == 0) {
        mark(m_->parent(v));
        mark(v);
        roots_.emplace(m_->tree_index(v), v);
    } else {
        if (!explored(m_->parent(v))) throw Error(Errc::OutOfDomain, "exploring a vertex before its parent");
        mark(v);
    }
    m_->num_tree_children(v);
    dirty_ = true;
}

bool Exploration::is_stable() const {
    for (int v : order_) {
        int p = m_->parent(v);
        if (p >= 0 && !explored(p)) return false;
        if (m_->is_stub(v) && !explored(m_->tree_child(v, 0))) return false;
    }
    return true;
}

void Exploration::contour(int v, std::vector<HalfEdge>& out) {
    const int c = m_->num_tree_children(v);
    const int h = m_->height(v);
    for (int i = 0; i < c; ++i) {
        int ch = m_->tree_child(v, i);
        if (!explored(ch)) {
            out.push_back({v, ch, HalfEdge::Up, h});
            continue;
        }
        int l = m_->left(ch);
        if (!explored(l)) out.push_back({ch, l, HalfEdge::Left, h + 1});
        contour(ch, out);
        int r = m_->right(ch);
        if (!explored(r)) out.push_back({ch, r, HalfEdge::Right, h + 1});
    }
}

void Exploration::refresh() {
    if (!dirty_) return;
    boundary_cache_.clear();
    for (const auto& [idx, r] : roots_) {
        int l = m_->left(r);
        if (!explored(l)) boundary_cache_.push_back({r, l, HalfEdge::Left, 0});
        contour(r, boundary_cache_);
        int rr = m_->right(r);
        if (!explored(rr)) boundary_cache_.push_back({r, rr, HalfEdge::Right, 0});
    }
    pits_cache_.clear();
    const auto& b = boundary_cache_;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i].dir != HalfEdge::Right) continue;
        const int h = b[i].height - 1;
        std::size_t j = i + 1;
        while (j < b.size() && b[j].dir == HalfEdge::Up && b[j].height == h) ++j;
        if (j > i + 1 && j < b.size() && b[j].dir == HalfEdge::Left && b[j].height == h + 1) {
            pits_cache_.push_back({h, static_cast<int>(j - i - 1), i, b[i + 1]});
            i = j;
        }
    }
    dirty_ = false;
}

std::vector<HalfEdge> Exploration::boundary() {
    refresh();
    return boundary_cache_;
}

std::vector<Pit> Exploration::pits() {
    refresh();
    return pits_cache_;
}

bool Exploration::is_k_flat(int kk) {
    refresh();
    for (const auto& p : pits_cache_)
        if (p.width <= 2 * kk) return false;
    return true;
}

long Exploration::phi(long n) const {
    if (n < 0 || n > walk_steps_done())
        throw Error(Errc::NotYetReached, "walk step " + std::to_string(n) + " not reached");
    return phi_[n];
}

const ExploreEvent& Exploration::advance() {
    ExploreEvent ev;
    ev.clock = clock_ + 1;
    if (marked_is_full() && is_k_flat()) {
        ev.kind = StepKind::Walk;
        ev.rule = 1;
        int x = mark_to_;
        positions_.push_back(x);
        int next;
        try {
            next = next_walk_target(x);
        } catch (...) {
            positions_.pop_back();
            throw;
        }
        phi_.push_back(ev.clock);
        mark_from_ = x;
        mark_to_ = next;
        ev.vertex = x;
    } else {
        ev.kind = StepKind::Explore;
        int v;
        if (!marked_is_full()) {
            ev.rule = 2;
            v = mark_to_;
            for (int p = m_->parent(v); p >= 0 && !explored(p); p = m_->parent(p)) v = p;
        } else {
            ev.rule = 3;
            refresh();
            v = -1;
            for (const auto& p : pits_cache_)
                if (p.width <= 2 * k_) {
                    v = p.leftmost.to;
                    break;
                }
        }
        const std::size_t before = order_.size();
        add_vertex(v);
        if (m_->is_stub(v)) v = m_->tree_child(v, 0);
        ev.vertex = v;
        ev.added = static_cast<int>(order_.size() - before);
        ev.children = m_->num_tree_children(v);
        const int cap = 2 * k_ + 1;
        for (int x = m_->tree_child(v, 0), i = 0; i < cap; ++i) {
            x = m_->left(x);
            if (x < 0 || explored(x)) break;
            ++ev.free_left;
        }
        for (int x = m_->tree_child(v, ev.children - 1), i = 0; i < cap; ++i) {
            x = m_->right(x);
            if (x < 0 || explored(x)) break;
            ++ev.free_right;
        }
    }
    refresh();
    for (const auto& p : pits_cache_)
        if (p.width <= 2 * k_) ++ev.pits_open;
    clock_ = ev.clock;
    log_.push_back(ev);
    return log_.back();
}

void Exploration::run_walk_steps(long n, long max_clock) {
    while (walk_steps_done() < n) {
        if (clock_ >= max_clock) throw Error(Errc::SizeLimit, "exploration clock limit reached");
        advance();
    }
}

KFreeWitness Exploration::kfree_witness(long i) const {
    if (i < 1 || i > clock_) throw Error(Errc::NotYetReached, "step " + std::to_string(i) + " not reached");
    const ExploreEvent& ev = log_[i - 1];
    if (ev.kind != StepKind::Explore) throw Error(Errc::OutOfDomain, "step " + std::to_string(i) + " is a walk step");
    if (ev.free_right >= k_) return {KFreeWitness::Right, ev.free_right};
    if (ev.free_left >= k_) return {KFreeWitness::Left, ev.free_left};
    throw Error(Errc::NotKFree, "vertex of step " + std::to_string(i) + " is neither left nor right k-free");
}

void Exploration::write_log_jsonl(std::ostream& os) const {
    for (const auto& ev : log_) {
        nlohmann::json j;
        j["clock"] = ev.clock;
        j["kind"] = ev.kind == StepKind::Walk ? "walk" : "explore";
        j["vertex"] = m_->label(ev.vertex);
        j["pits_open"] = ev.pits_open;
        os << j.dump() << '\n';
    }
}

}  // namespace causal
