#include "causal/metric.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

#include "causal/error.hpp"

namespace causal {

std::vector<int> bfs_distances(const CausalMap& m, int src, int max_dist) {
    std::vector<int> dist(m.num_vertices(), -1);
    m.vertex(src);
    std::vector<int> queue{src};
    dist[src] = 0;
    for (std::size_t i = 0; i < queue.size(); ++i) {
        int v = queue[i];
        if (max_dist >= 0 && dist[v] >= max_dist) continue;
        for (const auto& inc : m.neighbors(v)) {
            if (dist[inc.other] < 0) {
                dist[inc.other] = dist[v] + 1;
                queue.push_back(inc.other);
            }
        }
    }
    return dist;
}

int distance(const CausalMap& m, int u, int v) {
    m.vertex(v);
    int d = bfs_distances(m, u)[v];
    if (d < 0) throw Error(Errc::Disconnected, "no path");
    return d;
}

GeodesicPath geodesic_from(const CausalMap& m, const std::vector<int>& dist, int u, int v) {
    if (dist[v] < 0) throw Error(Errc::Disconnected, "no path");
    GeodesicPath p;
    p.length = dist[v];
    p.vertices.resize(p.length + 1);
    int cur = v;
    p.vertices[p.length] = v;
    for (int d = p.length; d > 0; --d) {
        int best = -1;
        for (const auto& inc : m.neighbors(cur)) {
            int w = inc.other;
            if (dist[w] != d - 1) continue;
            if (best < 0 || std::pair(m.height(w), m.vertex(w).level_index) <
                                std::pair(m.height(best), m.vertex(best).level_index))
                best = w;
        }
        cur = best;
        p.vertices[d - 1] = cur;
    }
    (void)u;
    return p;
}

GeodesicPath geodesic(const CausalMap& m, int u, int v) {
    m.vertex(v);
    return geodesic_from(m, bfs_distances(m, u), u, v);
}

namespace {

double angle_of(const CausalMap& m, int v) {
    const auto& lv = m.level(m.height(v));
    return static_cast<double>(m.vertex(v).level_index) / static_cast<double>(lv.size());
}

}  // namespace

int winding_number(const CausalMap& m, const std::vector<int>& loop) {
    double total = 0.0;
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
        int a = loop[i], b = loop[(i + 1) % n];
        if (a == b) continue;
        double ta = angle_of(m, a), tb = angle_of(m, b);
        if (m.height(a) == m.height(b)) {
            int sz = static_cast<int>(m.level(m.height(a)).size());
            int ia = m.vertex(a).level_index, ib = m.vertex(b).level_index;
            if (std::abs(ia - ib) == 1) {
                total += tb - ta;
            } else {
                // wrap edge between the two ends of the level
                total += (ia == sz - 1) ? (1.0 - ta + tb) : -(ta + 1.0 - tb);
            }
        } else {
            total += tb - ta;
        }
    }
    return static_cast<int>(std::lround(total));
}

bool triangle_surrounds_root(const CausalMap& m, const GeodesicPath& p1, const GeodesicPath& p2,
                             const GeodesicPath& p3) {
    for (const GeodesicPath* p : {&p1, &p2, &p3})
        if (p->vertices.empty()) throw Error(Errc::NotClosed, "empty side");
    if (p1.vertices.back() != p2.vertices.front() || p2.vertices.back() != p3.vertices.front() ||
        p3.vertices.back() != p1.vertices.front())
        throw Error(Errc::NotClosed, "sides do not share endpoints");
    std::vector<int> loop;
    for (const GeodesicPath* p : {&p1, &p2, &p3})
        loop.insert(loop.end(), p->vertices.begin(), p->vertices.end() - 1);
    bool degenerate = std::all_of(loop.begin(), loop.end(), [&](int v) { return v == loop.front(); });
    if (degenerate) return false;
    if (std::find(loop.begin(), loop.end(), m.root()) != loop.end()) return true;
    return winding_number(m, loop) != 0;
}

int ProbeStats::max() const {
    return d_root_triangle.empty() ? -1 : *std::max_element(d_root_triangle.begin(), d_root_triangle.end());
}

ProbeStats hyperbolicity_probe(const CausalMap& m, int trials, Rng& rng, int max_surrounding) {
    ProbeStats st;
    auto droot = bfs_distances(m, m.root());
    const int n = m.num_vertices();
    for (int t = 0; t < trials; ++t) {
        if (max_surrounding >= 0 && static_cast<int>(st.d_root_triangle.size()) >= max_surrounding) break;
        int x = static_cast<int>(rng.below(n)), y = static_cast<int>(rng.below(n)), z = static_cast<int>(rng.below(n));
        ++st.triples;
        auto dx = bfs_distances(m, x), dy = bfs_distances(m, y), dz = bfs_distances(m, z);
        if (dx[y] < 0 || dy[z] < 0 || dz[x] < 0) continue;
        GeodesicPath pxy = geodesic_from(m, dx, x, y);
        GeodesicPath pyz = geodesic_from(m, dy, y, z);
        GeodesicPath pzx = geodesic_from(m, dz, z, x);
        if (!triangle_surrounds_root(m, pxy, pyz, pzx)) continue;
        int best = -1;
        for (const GeodesicPath* p : {&pxy, &pyz, &pzx})
            for (int v : p->vertices)
                if (best < 0 || droot[v] < best) best = droot[v];
        st.d_root_triangle.push_back(best);
    }
    return st;
}

std::vector<int> escape_u_linear(int depth) {
    std::vector<int> u(depth + 1);
    for (int i = 0; i <= depth; ++i) u[i] = 2 * i + 1;
    return u;
}

EscapeOutcome escape_sequences(const CausalMap& s, int x, const std::vector<int>& u, int depth) {
    if (s.kind() != MapKind::Slice) throw Error(Errc::NotASlice, "escape sequences run on slices");
    if (!s.vertex(x).backbone) throw Error(Errc::OutOfDomain, "start vertex must lie on the backbone");
    if (depth > s.max_height()) throw Error(Errc::TooShallow, "slice shallower than escape depth");
    EscapeOutcome out;
    int y = x;
    for (int i = s.height(x); i < depth; ++i) {
        std::vector<int> bl;
        int pos = -1;
        for (int v : s.level(i)) {
            if (!s.vertex(v).backbone) continue;
            if (v == y) pos = static_cast<int>(bl.size());
            bl.push_back(v);
        }
        int zi = pos + u.at(i);
        out.y_trace.push_back(y);
        if (zi >= static_cast<int>(bl.size())) {
            out.killed_at = i;
            out.z_trace.push_back(-1);
            return out;
        }
        int z = bl[zi];
        out.z_trace.push_back(z);
        if (z == s.right_ray()[i]) {
            out.killed_at = i;
            return out;
        }
        int next = -1;
        for (int c : s.children(z))
            if (s.vertex(c).backbone) next = c;
        y = next;
    }
    out.survived = true;
    return out;
}

namespace {

// Sum of n independent draws from d, via sequential binomials.
std::int64_t sum_of_draws(const OffspringDistribution& d, std::int64_t n, Rng& rng) {
    if (n <= 32) {
        std::int64_t s = 0;
        for (std::int64_t i = 0; i < n; ++i) s += d.sample(rng);
        return s;
    }
    const auto& w = d.weights();
    std::int64_t left = n, s = 0;
    double mass = 1.0;
    for (std::size_t k = 0; k < w.size() && left > 0; ++k) {
        if (w[k] == 0.0) continue;
        std::int64_t c;
        if (k + 1 == w.size() || w[k] >= mass) {
            c = left;
        } else {
            std::binomial_distribution<std::int64_t> bin(left, std::min(1.0, w[k] / mass));
            c = bin(rng);
        }
        s += c * static_cast<std::int64_t>(k);
        left -= c;
        mass -= w[k];
    }
    return s;
}

}  // namespace

EscapeOutcome escape_count(const OffspringDistribution& backbone, int k, const std::vector<int>& u, int depth,
                           Rng& rng) {
    if (backbone.weight(0) > 0.0) throw Error(Errc::OutOfDomain, "backbone law must be leafless");
    EscapeOutcome out;
    std::int64_t z = 1;
    for (int i = 0; i < k; ++i) z = sum_of_draws(backbone, z, rng);
    std::vector<std::int64_t> tail(depth + 2, 0);
    for (int i = depth - 1; i >= 0; --i) tail[i] = tail[i + 1] + u.at(i);
    // right_of: vertices strictly right of z_i on level i
    std::int64_t right_of = z - 1 - u.at(k);
    for (int i = k;; ++i) {
        if (right_of < 1) {
            out.killed_at = i;
            return out;
        }
        if (i + 1 >= depth || right_of > tail[i + 1]) break;
        right_of = sum_of_draws(backbone, right_of, rng) - u.at(i + 1);
    }
    out.survived = true;
    return out;
}

bool AijTable::monotone() const {
    for (int i = 0; i <= imax; ++i)
        for (int j = 0; j <= jmax; ++j) {
            if (i > 0 && a[i][j] < a[i - 1][j]) return false;
            if (j > 0 && a[i][j] < a[i][j - 1]) return false;
        }
    return true;
}

bool AijTable::plateau(int diagonals) const {
    int K = a[imax][jmax];
    for (int i = 0; i <= imax; ++i)
        for (int j = 0; j <= jmax; ++j)
            if (i + j >= imax + jmax - (diagonals - 1) && a[i][j] != K) return false;
    return true;
}

AijTable aij_table(const CausalMap& s, int imax, int jmax) {
    if (s.kind() != MapKind::Slice) throw Error(Errc::NotASlice, "a_ij needs a slice");
    const int depth = s.max_height();
    bool leafless = true;
    for (int v = 0; v < s.num_vertices() && leafless; ++v)
        if (s.height(v) < depth && s.children(v).empty()) leafless = false;
    // a path of length <= i + j from height i never climbs above
    // i + (i + j) / 2; in leafless slices it never needs to leave the
    // heights <= max(i, j) at all (project onto ancestors)
    int need = leafless ? std::max(imax, jmax) : (imax + jmax + std::max(imax, jmax) + 1) / 2;
    if (depth < need) throw Error(Errc::TooShallow, "slice depth " + std::to_string(depth) + " < " + std::to_string(need));
    AijTable t;
    t.imax = imax;
    t.jmax = jmax;
    auto droot = bfs_distances(s, s.root());
    t.gl = geodesic_from(s, droot, s.root(), s.left_ray()[depth]);
    t.gr = geodesic_from(s, droot, s.root(), s.right_ray()[depth]);
    t.a.assign(imax + 1, std::vector<int>(jmax + 1, 0));
    for (int i = 0; i <= imax; ++i) {
        auto d = bfs_distances(s, t.gl.vertices[i]);
        for (int j = 0; j <= jmax; ++j) t.a[i][j] = i + j - d[t.gr.vertices[j]];
    }
    return t;
}

BiGeodesic bi_infinite_geodesic(const CausalMap& s, const AijTable& t) {
    if (!t.plateau()) throw Error(Errc::NoPlateau, "a_ij has not stabilised");
    BiGeodesic out;
    out.K = t.at(t.imax, t.jmax);
    bool found = false;
    for (int sum = 0; sum <= t.imax + t.jmax && !found; ++sum)
        for (int i = std::max(0, sum - t.jmax); i <= std::min(t.imax, sum) && !found; ++i)
            if (t.at(i, sum - i) == out.K) {
                out.i0 = i;
                out.j0 = sum - i;
                found = true;
            }
    std::vector<int> path;
    for (int i = t.imax; i > out.i0; --i) path.push_back(t.gl.vertices[i]);
    GeodesicPath mid = geodesic(s, t.gl.vertices[out.i0], t.gr.vertices[out.j0]);
    path.insert(path.end(), mid.vertices.begin(), mid.vertices.end());
    for (int j = out.j0 + 1; j <= t.jmax; ++j) path.push_back(t.gr.vertices[j]);
    out.path.vertices = path;
    out.path.length = static_cast<int>(path.size()) - 1;
    out.verified = true;
    for (std::size_t a = 0; a < path.size() && out.verified; ++a) {
        auto d = bfs_distances(s, path[a]);
        for (std::size_t b = 0; b < path.size(); ++b)
            if (d[path[b]] != std::abs(static_cast<int>(a) - static_cast<int>(b))) {
                out.verified = false;
                break;
            }
    }
    return out;
}

}  // namespace causal
