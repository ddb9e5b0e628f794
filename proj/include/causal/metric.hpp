#pragma once

#include <cstdint>
#include <vector>

#include "causal/cmap.hpp"
#include "causal/offspring.hpp"
#include "causal/rng.hpp"

namespace causal {

struct GeodesicPath {
    std::vector<int> vertices;
    int length = 0;
};

// -1 marks unreachable vertices.
std::vector<int> bfs_distances(const CausalMap& m, int src, int max_dist = -1);
int distance(const CausalMap& m, int u, int v);
GeodesicPath geodesic(const CausalMap& m, int u, int v);
// Same, reusing distances from u (dist_from_u = bfs_distances(m, u)).
GeodesicPath geodesic_from(const CausalMap& m, const std::vector<int>& dist_from_u, int u, int v);

// Winding number of a closed vertex loop about the centre of the radial
// embedding (angle = level rank / level size).
int winding_number(const CausalMap& m, const std::vector<int>& loop);
bool triangle_surrounds_root(const CausalMap& m, const GeodesicPath& p1, const GeodesicPath& p2,
                             const GeodesicPath& p3);

struct ProbeStats {
    long triples = 0;
    std::vector<int> d_root_triangle;  // one entry per surrounding triangle
    int max() const;
};
ProbeStats hyperbolicity_probe(const CausalMap& m, int trials, Rng& rng, int max_surrounding = -1);

struct EscapeOutcome {
    bool survived = false;
    int killed_at = -1;
    std::vector<int> y_trace, z_trace;
};

// u[i] is used at level i. Levels and children are those of the backbone.
EscapeOutcome escape_sequences(const CausalMap& s, int x, const std::vector<int>& u, int depth);

// Same recursion from gamma_l(k) in law, run on level counts of the
// backbone tree: the number of backbone vertices right of z_i is a sum of
// independent bold-mu variables minus u_{i+1}.
EscapeOutcome escape_count(const OffspringDistribution& backbone, int k, const std::vector<int>& u,
                           int depth, Rng& rng);

std::vector<int> escape_u_linear(int depth);  // u_i = 2i + 1

struct AijTable {
    std::vector<std::vector<int>> a;
    int imax = 0, jmax = 0;
    GeodesicPath gl, gr;  // finite-scale geodesic rays from the root
    int at(int i, int j) const { return a[i][j]; }
    bool monotone() const;
    // every entry with i + j >= imax + jmax - (diagonals - 1) equals a(imax, jmax)
    bool plateau(int diagonals = 5) const;
};

AijTable aij_table(const CausalMap& s, int imax, int jmax);

struct BiGeodesic {
    GeodesicPath path;
    int i0 = 0, j0 = 0, K = 0;
    bool verified = false;
};
BiGeodesic bi_infinite_geodesic(const CausalMap& s, const AijTable& table);

}  // namespace causal
