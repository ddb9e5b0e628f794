#pragma once

#include <iosfwd>
#include <memory>
#include <utility>
#include <vector>

#include "causal/cmap.hpp"
#include "causal/parallel.hpp"
#include "causal/rng.hpp"
#include "causal/tree.hpp"

namespace causal {

struct ResistanceNetwork {
    struct Edge {
        int u, v;
        double c;  // conductance
    };
    int num_nodes = 0;
    std::vector<Edge> edges;
    std::vector<int> sources, sinks;  // A and Z

    void add_edge(int u, int v, double c = 1.0);
    // Parallel edges summed, self-loops dropped.
    ResistanceNetwork merged() const;
    // Unit resistance on every edge of the map, multiplicities merged.
    static ResistanceNetwork from_map(const CausalMap& m);

    void write(std::ostream& os) const;
    static ResistanceNetwork read(std::istream& is);
};

struct SolverOptions {
    Exec exec = Exec::Serial;
    double tol = 1e-10;
    int dense_limit = 2000;
    long max_iter = 0;  // 0: 20 times the number of unknowns
};

double effective_resistance(const ResistanceNetwork& net, const SolverOptions& opt = {});
// Matrix-tree enumeration; at most 12 edges.
double effective_resistance_bruteforce(const ResistanceNetwork& net);

struct CsrMatrix {
    int n = 0;
    std::vector<int> row_start, col;
    std::vector<double> val;
};
void spmv(const CsrMatrix& a, const std::vector<double>& x, std::vector<double>& y, Exec exec);

struct CgResult {
    long iterations = 0;
    double residual = 0.0;  // relative
    bool converged = false;
};
// Jacobi-preconditioned conjugate gradient for a symmetric positive definite matrix.
CgResult conjugate_gradient(const CsrMatrix& a, const std::vector<double>& b, std::vector<double>& x, double tol,
                            long max_iter, Exec exec);

// One sparse factorization of the Laplacian grounded on the sinks; then
// R(x <-> sinks) for any x in a few triangular solves.
class GroundedSolver {
public:
    explicit GroundedSolver(const ResistanceNetwork& net);
    ~GroundedSolver();
    GroundedSolver(GroundedSolver&&) noexcept;
    GroundedSolver& operator=(GroundedSolver&&) noexcept;
    double resistance(int x) const;
    int unknowns() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Planar map given by clockwise rotations of (neighbour, edge id).
struct PlanarMap {
    std::vector<std::vector<std::pair<int, int>>> rot;
    int num_edges = 0;
    int add_vertex();
    // Appends the edge at the end of both rotations.
    int add_edge(int u, int v);
    static PlanarMap from_causal(const CausalMap& m);
};

struct PlanarFaces {
    std::vector<std::vector<std::pair<int, int>>> corners;  // (vertex, rotation position) darts
    std::vector<std::vector<int>> dart_face;                // [vertex][position]
};
PlanarFaces planar_faces(const PlanarMap& pm);

struct DualNetwork {
    ResistanceNetwork net;  // sources = {a*}, sinks = {z*}
    int outer_face = -1;
    std::vector<int> face_node;  // dual node of every inner face, -1 for the outer face
};
// a* and z* are the two arcs of the outer face between a and z. The outer
// face defaults to the longest face containing both terminals.
DualNetwork dual_network(const PlanarMap& pm, int a, int z, int outer_face = -1);
DualNetwork dual_network(const CausalMap& m, int a, int z, int outer_face = -1);

struct SpineDecomposition {
    std::vector<int> spine;  // tree vertices x_0, x_1, ...
    std::vector<int> left_counts, right_counts;
    std::vector<std::pair<int, int>> cut_heights;  // (h_k, h'_k)
    std::vector<std::vector<int>> cutsets;         // A_k as tree vertices
};

// h_0 = min{n : L_n > 0}, h'_k = min{n > h_k : R_n > 0}, h_{k+1} = min{n > h'_k : L_n > 0}.
std::vector<std::pair<int, int>> cut_heights(const std::vector<int>& left, const std::vector<int>& right);
SpineDecomposition spine_walk(const PlaneTree& t, Rng& rng);

struct CutsetBound {
    double lower = 0.0;   // sum of R(A_2i <-> A_2i+1)
    double direct = 0.0;  // R(x_n <-> boundary)
    int pairs = 0;
};
CutsetBound cutset_lower_bound(const CausalMap& s, const SpineDecomposition& d, int n,
                               const SolverOptions& opt = {});

// R(x <-> top level of the map).
double resistance_to_frontier(const CausalMap& m, int x, const SolverOptions& opt = {});
struct FrontierResistance {
    double shallow = 0.0, deep = 0.0;
    double rel_change = 0.0;
    bool converged = false;  // rel_change < 0.05
};
// R(x <-> frontier) in the causal maps of t truncated at `shallow` and of t
// itself (frontier at t.depth_cap()); x is a tree vertex.
FrontierResistance frontier_resistance(const PlaneTree& t, int x, int shallow, const SolverOptions& opt = {});

// Unit network of a slice grounded on its boundary rays.
ResistanceNetwork slice_boundary_network(const CausalMap& s);

struct DualTree {
    std::vector<int> vertices;  // map vertices of T[v0]_bdd, breadth first
    std::vector<int> parent;    // index into vertices, -1 for v0
    std::vector<int> node_face; // face of every node (one per tree vertex)
    std::vector<std::pair<int, int>> edges;  // between node indices
    int distinct_faces = 0;
    bool is_tree() const;
    // Node-to-node distances from node i in T*.
    std::vector<int> distances_from(int i) const;
};
DualTree dual_tree(const CausalMap& s, int v0, int c_max);

}  // namespace causal
