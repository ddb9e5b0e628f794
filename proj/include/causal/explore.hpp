#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "causal/lazy_map.hpp"
#include "causal/rng.hpp"
#include "causal/walk.hpp"

namespace causal {

// Half-edge of the explored map: from an explored vertex to an unexplored one.
struct HalfEdge {
    enum Dir : std::uint8_t { Up, Left, Right };
    int from = -1;
    int to = -1;
    Dir dir = Up;
    int height = 0;  // height of `from`
};

struct Pit {
    int height = 0;
    int width = 0;
    std::size_t first = 0;  // index of p_0 in the boundary traversal
    HalfEdge leftmost;      // p_1
};

enum class StepKind : std::uint8_t { Walk, Explore };

struct ExploreEvent {
    long clock = 0;
    StepKind kind = StepKind::Walk;
    int rule = 1;        // (i), (ii) or (iii)
    int vertex = -1;     // walk: new position; explore: the vertex at height >= 0 added
    int added = 0;       // vertices added (2 when a stub comes with its root)
    int children = 0;    // revealed child count of an explored vertex
    int pits_open = 0;   // pits of width <= 2k after the step
    int free_left = 0;   // unexplored neighbours left of the leftmost child, capped at 2k+1
    int free_right = 0;  // same on the right of the rightmost child
};

struct KFreeWitness {
    enum Side : std::uint8_t { Left, Right } side = Right;
    int witness_count = 0;
};

// Markovian exploration of the half-plane coupled with a simple random walk.
// Online mode draws the walk with the same stream usage as run_walk; trace
// mode replays a walk that was run on the same map.
class Exploration {
public:
    Exploration(LazyMap& m, int k, Rng rng);
    Exploration(LazyMap& m, int k, const WalkTrace& trace);

    // Applies one rule and returns the event (clock advances by one).
    const ExploreEvent& advance();
    // Advances until n walk steps have been done.
    void run_walk_steps(long n, long max_clock = 100'000'000);

    int k() const { return k_; }
    long clock() const { return clock_; }
    long walk_steps_done() const { return static_cast<long>(phi_.size()) - 1; }
    long phi(long n) const;
    const std::vector<ExploreEvent>& log() const { return log_; }
    const std::vector<int>& walk_positions() const { return positions_; }
    LazyMap& map() { return *m_; }

    bool explored(int v) const { return v >= 0 && v < static_cast<int>(in_.size()) && in_[v]; }
    const std::vector<int>& explored_vertices() const { return order_; }
    // Marked oriented edge or half-edge (from, to).
    std::pair<int, int> marked() const { return {mark_from_, mark_to_}; }
    bool marked_is_full() const { return explored(mark_to_); }

    std::vector<HalfEdge> boundary();
    std::vector<Pit> pits();
    bool is_k_flat() { return is_k_flat(k_); }
    bool is_k_flat(int kk);
    bool is_stable() const;

    // Witness for the k-free property of exploration step i (throws NotKFree).
    KFreeWitness kfree_witness(long i) const;

    // Adds v (its ancestors must be explored; a root brings its stub).
    void add_vertex(int v);

    void write_log_jsonl(std::ostream& os) const;

private:
    void init();
    void contour(int v, std::vector<HalfEdge>& out);
    int next_walk_target(int from);
    void refresh();
    void mark(int v);

    LazyMap* m_;
    int k_;
    Rng rng_;
    std::optional<WalkTrace> trace_;
    std::vector<char> in_;
    std::vector<int> order_;
    std::map<std::int64_t, int> roots_;  // explored roots by tree index
    int mark_from_ = -1, mark_to_ = -1;
    long clock_ = 0;
    std::vector<long> phi_;
    std::vector<int> positions_;
    std::vector<ExploreEvent> log_;
    bool dirty_ = true;
    std::vector<HalfEdge> boundary_cache_;
    std::vector<Pit> pits_cache_;
    std::vector<LazyMap::Inc> inc_;
};

}  // namespace causal
