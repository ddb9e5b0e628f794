#include "causal/electric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "causal/error.hpp"

namespace causal {

void ResistanceNetwork::add_edge(int u, int v, double c) {
    if (!(c > 0.0)) throw Error(Errc::OutOfDomain, "conductances must be positive");
    if (u < 0 || v < 0) throw Error(Errc::UnknownVertex, "negative node");
    num_nodes = std::max({num_nodes, u + 1, v + 1});
    edges.push_back({u, v, c});
}

ResistanceNetwork ResistanceNetwork::merged() const {
    std::map<std::pair<int, int>, double> acc;
    for (const auto& e : edges) {
        if (e.u == e.v) continue;
        acc[{std::min(e.u, e.v), std::max(e.u, e.v)}] += e.c;
    }
    ResistanceNetwork r;
    r.num_nodes = num_nodes;
    r.sources = sources;
    r.sinks = sinks;
    r.edges.reserve(acc.size());
    for (const auto& [k, c] : acc) r.edges.push_back({k.first, k.second, c});
    return r;
}

ResistanceNetwork ResistanceNetwork::from_map(const CausalMap& m) {
    ResistanceNetwork r;
    r.num_nodes = m.num_vertices();
    for (const auto& e : m.edges()) r.edges.push_back({e.u, e.v, 1.0});
    return r.merged();
}

void ResistanceNetwork::write(std::ostream& os) const {
    os << "# nodes " << num_nodes << "\n# sources";
    for (int a : sources) os << ' ' << a;
    os << "\n# sinks";
    for (int z : sinks) os << ' ' << z;
    os << '\n';
    os.precision(17);
    for (const auto& e : edges) os << e.u << ' ' << e.v << ' ' << e.c << '\n';
}

ResistanceNetwork ResistanceNetwork::read(std::istream& is) {
    ResistanceNetwork r;
    std::string line;
    int declared = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        if (line[0] == '#') {
            std::string hash, key;
            ss >> hash >> key;
            int x;
            if (key == "nodes") {
                ss >> declared;
            } else if (key == "sources") {
                while (ss >> x) r.sources.push_back(x);
            } else if (key == "sinks") {
                while (ss >> x) r.sinks.push_back(x);
            }
            continue;
        }
        int u, v;
        double c;
        if (!(ss >> u >> v >> c)) throw Error(Errc::ParseError, "bad edge line: " + line);
        r.add_edge(u, v, c);
    }
    r.num_nodes = std::max(r.num_nodes, declared);
    return r;
}

void spmv(const CsrMatrix& a, const std::vector<double>& x, std::vector<double>& y, Exec exec) {
    y.resize(a.n);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < a.n; ++i) {
            double s = 0.0;
            for (int p = a.row_start[i]; p < a.row_start[i + 1]; ++p) s += a.val[p] * x[a.col[p]];
            y[i] = s;
        }
    } else {
        for (int i = 0; i < a.n; ++i) {
            double s = 0.0;
            for (int p = a.row_start[i]; p < a.row_start[i + 1]; ++p) s += a.val[p] * x[a.col[p]];
            y[i] = s;
        }
    }
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b, Exec exec) {
    double s = 0.0;
    const long n = static_cast<long>(a.size());
    if (exec == Exec::Parallel) {
#pragma omp parallel for reduction(+ : s) schedule(static)
        for (long i = 0; i < n; ++i) s += a[i] * b[i];
    } else {
        for (long i = 0; i < n; ++i) s += a[i] * b[i];
    }
    return s;
}

}  // namespace

CgResult conjugate_gradient(const CsrMatrix& a, const std::vector<double>& b, std::vector<double>& x, double tol,
                            long max_iter, Exec exec) {
    const int n = a.n;
    CgResult res;
    x.assign(n, 0.0);
    std::vector<double> diag(n, 1.0);
    for (int i = 0; i < n; ++i)
        for (int p = a.row_start[i]; p < a.row_start[i + 1]; ++p)
            if (a.col[p] == i && a.val[p] != 0.0) diag[i] = a.val[p];
    const double bnorm = std::sqrt(dot(b, b, exec));
    if (bnorm == 0.0) {
        res.converged = true;
        return res;
    }
    std::vector<double> r = b, z(n), p(n), ap(n);
    for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    p = z;
    double rz = dot(r, z, exec);
    for (long it = 0; it < max_iter; ++it) {
        spmv(a, p, ap, exec);
        const double alpha = rz / dot(p, ap, exec);
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        res.iterations = it + 1;
        res.residual = std::sqrt(dot(r, r, exec)) / bnorm;
        if (res.residual <= tol) break;
        for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
        const double rz_new = dot(r, z, exec);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    // true residual
    spmv(a, x, ap, exec);
    double rr = 0.0;
    for (int i = 0; i < n; ++i) rr += (b[i] - ap[i]) * (b[i] - ap[i]);
    res.residual = std::sqrt(rr) / bnorm;
    res.converged = res.residual <= tol * 10.0;
    return res;
}

namespace {

// Dirichlet problem: potential 1 on A, 0 on Z, harmonic elsewhere on the
// component of A.
struct Reduced {
    std::vector<int> label;  // -1 outside, -2 source, -3 sink, else unknown index
    int unknowns = 0;
    std::vector<std::vector<std::pair<int, double>>> adj;
};

Reduced reduce(const ResistanceNetwork& net) {
    if (net.sources.empty() || net.sinks.empty()) throw Error(Errc::DisconnectedTerminals, "empty terminal set");
    Reduced r;
    const int n = net.num_nodes;
    r.adj.assign(n, {});
    for (const auto& e : net.edges) {
        if (e.u >= n || e.v >= n) throw Error(Errc::UnknownVertex, "edge endpoint beyond num_nodes");
        if (e.u == e.v) continue;
        r.adj[e.u].push_back({e.v, e.c});
        r.adj[e.v].push_back({e.u, e.c});
    }
    std::vector<char> kind(n, 0);
    for (int a : net.sources) {
        if (a < 0 || a >= n) throw Error(Errc::UnknownVertex, std::to_string(a));
        kind[a] = 1;
    }
    for (int z : net.sinks) {
        if (z < 0 || z >= n) throw Error(Errc::UnknownVertex, std::to_string(z));
        if (kind[z] == 1) throw Error(Errc::OutOfDomain, "source and sink sets intersect");
        kind[z] = 2;
    }
    r.label.assign(n, -1);
    std::queue<int> q;
    for (int a : net.sources)
        if (r.label[a] == -1) {
            r.label[a] = -2;
            q.push(a);
        }
    bool reached = false;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        if (kind[u] == 2) continue;
        for (auto [w, c] : r.adj[u]) {
            if (r.label[w] != -1) continue;
            if (kind[w] == 2) {
                r.label[w] = -3;
                reached = true;
            } else if (kind[w] == 1) {
                r.label[w] = -2;
                q.push(w);
            } else {
                r.label[w] = r.unknowns++;
                q.push(w);
            }
        }
    }
    if (!reached) throw Error(Errc::DisconnectedTerminals, "no path from sources to sinks");
    return r;
}

}  // namespace

double effective_resistance(const ResistanceNetwork& net, const SolverOptions& opt) {
    Reduced r = reduce(net);
    const int m = r.unknowns;
    const int n = net.num_nodes;
    std::vector<double> x(m, 0.0);
    if (m > 0) {
        std::vector<double> b(m, 0.0);
        std::vector<std::map<int, double>> rows(m);
        for (int u = 0; u < n; ++u) {
            int i = r.label[u];
            if (i < 0) continue;
            for (auto [w, c] : r.adj[u]) {
                rows[i][i] += c;
                int j = r.label[w];
                if (j >= 0) {
                    rows[i][j] -= c;
                } else if (j == -2) {
                    b[i] += c;
                }
            }
        }
        double bnorm = 0.0;
        for (double v : b) bnorm += v * v;
        bnorm = std::sqrt(bnorm);
        if (m < opt.dense_limit) {
            Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
            for (int i = 0; i < m; ++i)
                for (auto [j, v] : rows[i]) a(i, j) = v;
            Eigen::VectorXd bv = Eigen::Map<Eigen::VectorXd>(b.data(), m);
            Eigen::LLT<Eigen::MatrixXd> llt(a);
            if (llt.info() != Eigen::Success) throw Error(Errc::SolverFailure, "Cholesky failed");
            Eigen::VectorXd xv = llt.solve(bv);
            double resid = bnorm > 0 ? (a * xv - bv).norm() / bnorm : 0.0;
            if (resid > opt.tol) throw Error(Errc::SolverFailure, "dense residual " + std::to_string(resid));
            for (int i = 0; i < m; ++i) x[i] = xv[i];
        } else {
            CsrMatrix a;
            a.n = m;
            a.row_start.push_back(0);
            for (int i = 0; i < m; ++i) {
                for (auto [j, v] : rows[i]) {
                    a.col.push_back(j);
                    a.val.push_back(v);
                }
                a.row_start.push_back(static_cast<int>(a.col.size()));
            }
            long max_iter = opt.max_iter > 0 ? opt.max_iter : 20L * m;
            CgResult cg = conjugate_gradient(a, b, x, opt.tol, max_iter, opt.exec);
            if (!cg.converged)
                throw Error(Errc::SolverFailure, "CG residual " + std::to_string(cg.residual) + " after " +
                                                     std::to_string(cg.iterations) + " iterations");
        }
    }
    double current = 0.0;
    for (int u = 0; u < n; ++u) {
        if (r.label[u] != -2) continue;
        for (auto [w, c] : r.adj[u]) {
            int j = r.label[w];
            double pw = j >= 0 ? x[j] : (j == -2 ? 1.0 : 0.0);
            current += c * (1.0 - pw);
        }
    }
    if (!(current > 0.0)) throw Error(Errc::SolverFailure, "zero current");
    return 1.0 / current;
}

namespace {

struct Dsu {
    std::vector<int> p;
    explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        p[a] = b;
        return true;
    }
};

}  // namespace

double effective_resistance_bruteforce(const ResistanceNetwork& net) {
    if (net.edges.size() > 12) throw Error(Errc::TooLarge, "brute force needs at most 12 edges");
    Reduced r = reduce(net);
    // contracted graph: node 0 = A, node 1 = Z, then unknowns
    auto node = [&](int u) { return r.label[u] == -2 ? 0 : (r.label[u] == -3 ? 1 : r.label[u] + 2); };
    std::vector<ResistanceNetwork::Edge> es;
    for (const auto& e : net.edges) {
        if (r.label[e.u] == -1 || r.label[e.v] == -1) continue;
        int a = node(e.u), b = node(e.v);
        if (a != b) es.push_back({a, b, e.c});
    }
    const int n = r.unknowns + 2;
    const int ne = static_cast<int>(es.size());
    double trees = 0.0, forests = 0.0;
    for (unsigned mask = 0; mask < (1u << ne); ++mask) {
        int k = __builtin_popcount(mask);
        if (k != n - 1 && k != n - 2) continue;
        Dsu d(n);
        double prod = 1.0;
        bool acyclic = true;
        for (int i = 0; i < ne && acyclic; ++i)
            if (mask & (1u << i)) {
                acyclic = d.unite(es[i].u, es[i].v);
                prod *= es[i].c;
            }
        if (!acyclic) continue;
        if (k == n - 1) {
            trees += prod;
        } else if (d.find(0) != d.find(1)) {
            forests += prod;
        }
    }
    if (trees == 0.0) throw Error(Errc::DisconnectedTerminals, "no spanning tree");
    return forests / trees;
}

struct GroundedSolver::Impl {
    std::vector<int> label;
    int m = 0;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

GroundedSolver::GroundedSolver(const ResistanceNetwork& net) : impl_(std::make_unique<Impl>()) {
    const int n = net.num_nodes;
    if (net.sinks.empty()) throw Error(Errc::DisconnectedTerminals, "no sinks");
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (const auto& e : net.edges) {
        if (e.u == e.v) continue;
        adj[e.u].push_back({e.v, e.c});
        adj[e.v].push_back({e.u, e.c});
    }
    auto& label = impl_->label;
    label.assign(n, -1);
    std::queue<int> q;
    for (int z : net.sinks) {
        label[z] = -3;
        q.push(z);
    }
    int m = 0;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (auto [w, c] : adj[u])
            if (label[w] == -1) {
                label[w] = m++;
                q.push(w);
            }
    }
    impl_->m = m;
    std::vector<Eigen::Triplet<double>> trip;
    for (int u = 0; u < n; ++u) {
        int i = label[u];
        if (i < 0) continue;
        double d = 0.0;
        for (auto [w, c] : adj[u]) {
            d += c;
            if (label[w] >= 0) trip.emplace_back(i, label[w], -c);
        }
        trip.emplace_back(i, i, d);
    }
    Eigen::SparseMatrix<double> a(m, m);
    a.setFromTriplets(trip.begin(), trip.end());
    impl_->ldlt.compute(a);
    if (impl_->ldlt.info() != Eigen::Success) throw Error(Errc::SolverFailure, "sparse LDLT failed");
}

GroundedSolver::~GroundedSolver() = default;
GroundedSolver::GroundedSolver(GroundedSolver&&) noexcept = default;
GroundedSolver& GroundedSolver::operator=(GroundedSolver&&) noexcept = default;

int GroundedSolver::unknowns() const { return impl_->m; }

double GroundedSolver::resistance(int x) const {
    if (x < 0 || x >= static_cast<int>(impl_->label.size())) throw Error(Errc::UnknownVertex, std::to_string(x));
    int i = impl_->label[x];
    if (i == -3) return 0.0;
    if (i < 0) throw Error(Errc::DisconnectedTerminals, "vertex not connected to the sinks");
    Eigen::VectorXd e = Eigen::VectorXd::Zero(impl_->m);
    e[i] = 1.0;
    Eigen::VectorXd y = impl_->ldlt.solve(e);
    return y[i];
}

int PlanarMap::add_vertex() {
    rot.emplace_back();
    return static_cast<int>(rot.size()) - 1;
}

int PlanarMap::add_edge(int u, int v) {
    int id = num_edges++;
    rot.at(u).push_back({v, id});
    rot.at(v).push_back({u, id});
    return id;
}

PlanarMap PlanarMap::from_causal(const CausalMap& m) {
    PlanarMap pm;
    pm.rot.resize(m.num_vertices());
    pm.num_edges = m.num_edges();
    for (int v = 0; v < m.num_vertices(); ++v)
        for (const auto& inc : m.neighbors(v)) pm.rot[v].push_back({inc.other, inc.edge});
    return pm;
}

PlanarFaces planar_faces(const PlanarMap& pm) {
    const int n = static_cast<int>(pm.rot.size());
    // position of each edge end: for edge e, the two (vertex, pos)
    std::vector<std::array<std::pair<int, int>, 2>> ends(pm.num_edges, {std::pair{-1, -1}, std::pair{-1, -1}});
    for (int v = 0; v < n; ++v)
        for (int p = 0; p < static_cast<int>(pm.rot[v].size()); ++p) {
            int e = pm.rot[v][p].second;
            auto& slot = ends.at(e);
            if (slot[0].first < 0) {
                slot[0] = {v, p};
            } else {
                slot[1] = {v, p};
            }
        }
    auto mate = [&](int v, int p) {
        const auto& s = ends[pm.rot[v][p].second];
        return (s[0] == std::pair{v, p}) ? s[1] : s[0];
    };
    PlanarFaces f;
    f.dart_face.resize(n);
    for (int v = 0; v < n; ++v) f.dart_face[v].assign(pm.rot[v].size(), -1);
    for (int v = 0; v < n; ++v)
        for (int p = 0; p < static_cast<int>(pm.rot[v].size()); ++p) {
            if (f.dart_face[v][p] >= 0) continue;
            int id = static_cast<int>(f.corners.size());
            f.corners.emplace_back();
            int cv = v, cp = p;
            while (f.dart_face[cv][cp] < 0) {
                f.dart_face[cv][cp] = id;
                f.corners.back().push_back({cv, cp});
                auto [w, wp] = mate(cv, cp);
                cv = w;
                cp = (wp + 1) % static_cast<int>(pm.rot[w].size());
            }
        }
    return f;
}

DualNetwork dual_network(const PlanarMap& pm, int a, int z, int outer_face) {
    const int n = static_cast<int>(pm.rot.size());
    if (a < 0 || a >= n || z < 0 || z >= n || a == z) throw Error(Errc::OutOfDomain, "bad terminals");
    PlanarFaces f = planar_faces(pm);
    auto contains = [&](int face, int v) {
        for (auto [u, p] : f.corners[face])
            if (u == v) return true;
        return false;
    };
    if (outer_face < 0) {
        std::size_t best = 0;
        for (int i = 0; i < static_cast<int>(f.corners.size()); ++i)
            if (f.corners[i].size() > best && contains(i, a) && contains(i, z)) {
                best = f.corners[i].size();
                outer_face = i;
            }
        if (outer_face < 0) throw Error(Errc::TerminalsNotOuter, "no face contains both terminals");
    } else if (outer_face >= static_cast<int>(f.corners.size()) || !contains(outer_face, a) ||
               !contains(outer_face, z)) {
        throw Error(Errc::TerminalsNotOuter, "terminals not on the given outer face");
    }
    DualNetwork d;
    d.outer_face = outer_face;
    d.face_node.assign(f.corners.size(), -1);
    int next = 2;  // 0 = a*, 1 = z*
    for (int i = 0; i < static_cast<int>(f.corners.size()); ++i)
        if (i != outer_face) d.face_node[i] = next++;
    const auto& oc = f.corners[outer_face];
    const int len = static_cast<int>(oc.size());
    int ia = 0;
    while (oc[ia].first != a) ++ia;
    int iz = ia;
    while (oc[iz % len].first != z) ++iz;
    std::map<std::pair<int, int>, int> arc;  // outer dart -> 0 / 1
    for (int s = 0; s < len; ++s) arc[oc[(ia + s) % len]] = (ia + s < iz) ? 0 : 1;
    auto dual_of = [&](int v, int p) {
        int face = f.dart_face[v][p];
        return face == outer_face ? arc.at({v, p}) : d.face_node[face];
    };
    std::vector<std::pair<int, int>> first_end(pm.num_edges, {-1, -1});
    d.net.num_nodes = next;
    for (int v = 0; v < n; ++v)
        for (int p = 0; p < static_cast<int>(pm.rot[v].size()); ++p) {
            int e = pm.rot[v][p].second;
            if (first_end[e].first < 0) {
                first_end[e] = {v, p};
                continue;
            }
            int x = dual_of(first_end[e].first, first_end[e].second);
            int y = dual_of(v, p);
            if (x != y) d.net.add_edge(x, y, 1.0);
        }
    d.net.num_nodes = next;
    d.net.sources = {0};
    d.net.sinks = {1};
    return d;
}

DualNetwork dual_network(const CausalMap& m, int a, int z, int outer_face) {
    return dual_network(PlanarMap::from_causal(m), a, z, outer_face);
}

std::vector<std::pair<int, int>> cut_heights(const std::vector<int>& left, const std::vector<int>& right) {
    std::vector<std::pair<int, int>> out;
    const int n = static_cast<int>(std::min(left.size(), right.size()));
    int i = 0;
    for (;;) {
        while (i < n && left[i] == 0) ++i;
        if (i >= n) break;
        int h = i++;
        while (i < n && right[i] == 0) ++i;
        if (i >= n) break;
        out.push_back({h, i});
        ++i;
    }
    return out;
}

namespace {

std::vector<char> backbone_mask(const PlaneTree& t) {
    std::vector<char> bb(t.size(), 0);
    if (t.size() > 0 && t.on_backbone(t.root())) {
        for (int v = 0; v < t.size(); ++v) bb[v] = t.on_backbone(v);
    } else {
        for (int v : backbone_to_cap(t)) bb[v] = 1;
    }
    return bb;
}

}  // namespace

SpineDecomposition spine_walk(const PlaneTree& t, Rng& rng) {
    std::vector<char> bb = backbone_mask(t);
    if (t.size() == 0 || !bb[t.root()]) throw Error(Errc::NoBackbone, "tree does not reach its depth cap");
    SpineDecomposition d;
    int x = t.root();
    std::vector<int> kids;
    for (;;) {
        d.spine.push_back(x);
        if (t.height(x) >= t.depth_cap()) break;
        kids.clear();
        for (int i = 0; i < t.num_children(x); ++i)
            if (bb[t.child(x, i)]) kids.push_back(t.child(x, i));
        if (kids.empty()) break;
        int j = static_cast<int>(rng.below(kids.size()));
        d.left_counts.push_back(j);
        d.right_counts.push_back(static_cast<int>(kids.size()) - 1 - j);
        x = kids[j];
    }
    d.cut_heights = cut_heights(d.left_counts, d.right_counts);
    auto ray = [&](int v, bool leftmost, std::vector<int>& out) {
        for (;;) {
            out.push_back(v);
            int next = -1;
            for (int i = 0; i < t.num_children(v); ++i) {
                int c = t.child(v, leftmost ? i : t.num_children(v) - 1 - i);
                if (bb[c]) {
                    next = c;
                    break;
                }
            }
            if (next < 0) break;
            v = next;
        }
    };
    for (auto [h, hp] : d.cut_heights) {
        std::vector<int> a;
        ray(d.spine[h], true, a);
        a.erase(a.begin());
        for (int i = h; i <= hp; ++i) a.push_back(d.spine[i]);
        std::vector<int> r;
        ray(d.spine[hp], false, r);
        a.insert(a.end(), r.begin() + 1, r.end());
        d.cutsets.push_back(std::move(a));
    }
    return d;
}

ResistanceNetwork slice_boundary_network(const CausalMap& s) {
    if (s.kind() != MapKind::Slice) throw Error(Errc::NotASlice, "needs a slice");
    ResistanceNetwork net = ResistanceNetwork::from_map(s);
    for (int v = 0; v < s.num_vertices(); ++v)
        if (s.on_boundary(v)) net.sinks.push_back(v);
    return net;
}

CutsetBound cutset_lower_bound(const CausalMap& s, const SpineDecomposition& d, int n, const SolverOptions& opt) {
    if (n < 0 || n >= static_cast<int>(d.spine.size())) throw Error(Errc::OutOfDomain, "spine index out of range");
    CutsetBound b;
    ResistanceNetwork base = slice_boundary_network(s);
    auto to_map = [&](const std::vector<int>& tv) {
        std::vector<int> out;
        for (int v : tv) {
            int x = s.from_tree(v);
            if (x < 0) throw Error(Errc::UnknownVertex, "cutset vertex missing from the slice");
            out.push_back(x);
        }
        return out;
    };
    for (std::size_t i = 0; 2 * i + 1 < d.cutsets.size(); ++i) {
        if (d.cut_heights[2 * i + 1].second >= n) break;
        ResistanceNetwork net = base;
        net.sources = to_map(d.cutsets[2 * i]);
        net.sinks = to_map(d.cutsets[2 * i + 1]);
        b.lower += effective_resistance(net, opt);
        ++b.pairs;
    }
    if (b.pairs == 0) throw Error(Errc::TooFewCutsets, "fewer than two cutsets below x_n");
    ResistanceNetwork net = base;
    net.sources = {s.from_tree(d.spine[n])};
    b.direct = effective_resistance(net, opt);
    return b;
}

double resistance_to_frontier(const CausalMap& m, int x, const SolverOptions& opt) {
    ResistanceNetwork net = ResistanceNetwork::from_map(m);
    net.sources = {x};
    for (int v : m.level(m.max_height()))
        if (v != x) net.sinks.push_back(v);
    if (net.sinks.empty()) return 0.0;
    return effective_resistance(net, opt);
}

FrontierResistance frontier_resistance(const PlaneTree& t, int x, int shallow, const SolverOptions& opt) {
    if (shallow <= t.height(x) || shallow > t.depth_cap())
        throw Error(Errc::OutOfDomain, "shallow depth must lie above x and within the tree");
    FrontierResistance r;
    std::vector<int> old;
    PlaneTree cut = truncate(t, shallow, &old);
    const int xc = static_cast<int>(std::find(old.begin(), old.end(), x) - old.begin());
    CausalMap a = build_causal(cut), b = build_causal(t);
    r.shallow = resistance_to_frontier(a, a.from_tree(xc), opt);
    r.deep = resistance_to_frontier(b, b.from_tree(x), opt);
    r.rel_change = r.deep > 0.0 ? (r.deep - r.shallow) / r.deep : 0.0;
    r.converged = r.rel_change < 0.05;
    return r;
}

bool DualTree::is_tree() const {
    const int n = static_cast<int>(node_face.size());
    if (static_cast<int>(edges.size()) != n - 1) return false;
    Dsu d(n);
    for (auto [a, b] : edges)
        if (!d.unite(a, b)) return false;
    return true;
}

std::vector<int> DualTree::distances_from(int i) const {
    const int n = static_cast<int>(node_face.size());
    std::vector<std::vector<int>> adj(n);
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<int> dist(n, -1);
    std::queue<int> q;
    dist[i] = 0;
    q.push(i);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int w : adj[u])
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                q.push(w);
            }
    }
    return dist;
}

DualTree dual_tree(const CausalMap& s, int v0, int c_max) {
    if (s.kind() != MapKind::Slice) throw Error(Errc::NotASlice, "dual_tree needs a slice");
    s.vertex(v0);
    if (!s.left_ray().empty() && s.left_ray()[s.height(v0)] == v0)
        throw Error(Errc::OutOfDomain, "v0 must not lie on the left boundary");
    PlanarFaces f = planar_faces(PlanarMap::from_causal(s));
    auto left_face = [&](int u) {
        auto nb = s.neighbors(u);
        for (int p = 0; p < static_cast<int>(nb.size()); ++p)
            if (s.height(nb[p].other) == s.height(u) && p <= 1) return f.dart_face[u][p];
        throw Error(Errc::OutOfDomain, "vertex without a left neighbour");
    };
    DualTree t;
    t.vertices.push_back(v0);
    t.parent.push_back(-1);
    bool reached = s.height(v0) == s.max_height();
    for (std::size_t i = 0; i < t.vertices.size(); ++i) {
        int u = t.vertices[i];
        if (s.height(u) >= s.max_height()) continue;
        auto ch = s.children(u);
        if (static_cast<int>(ch.size()) > c_max) continue;
        for (int c : ch) {
            t.vertices.push_back(c);
            t.parent.push_back(static_cast<int>(i));
            if (s.height(c) == s.max_height()) reached = true;
        }
    }
    if (!reached) throw Error(Errc::TruncationDies, "T[v0]_bdd does not reach the depth cap");
    for (int u : t.vertices) t.node_face.push_back(left_face(u));
    int prev_parent = -1, prev_node = -1;
    for (int i = 1; i < static_cast<int>(t.vertices.size()); ++i) {
        int p = t.parent[i];
        if (p != prev_parent) {
            t.edges.push_back({p, i});
        } else {
            t.edges.push_back({prev_node, i});
        }
        prev_parent = p;
        prev_node = i;
    }
    std::vector<int> faces = t.node_face;
    std::sort(faces.begin(), faces.end());
    t.distinct_faces = static_cast<int>(std::unique(faces.begin(), faces.end()) - faces.begin());
    return t;
}

}  // namespace causal
