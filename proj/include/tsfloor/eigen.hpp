#pragma once

#include <cfloat>
#include <cmath>
#include <complex>
#include <optional>
#include <set>
#include <vector>

#include "tsfloor/matrix.hpp"
#include "tsfloor/util.hpp"

namespace tsfloor {

// ---------------------------------------------------------------------------
// Dense unsymmetric eigenvalues: balance + elimination Hessenberg + Francis
// double-shift QR. Eigenvalues only; eigenvectors come from inverse iteration.
// ---------------------------------------------------------------------------

namespace detail {

inline void balance(DMat& a) {
    const int n = a.rows();
    const double radix = 2.0;
    bool done = false;
    while (!done) {
        done = true;
        for (int i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != i) {
                    c += std::fabs(a(j, i));
                    r += std::fabs(a(i, j));
                }
            if (c != 0.0 && r != 0.0) {
                double g = r / radix, f = 1.0, s = c + r;
                while (c < g) {
                    f *= radix;
                    c *= radix * radix;
                }
                g = r * radix;
                while (c > g) {
                    f /= radix;
                    c /= radix * radix;
                }
                if ((c + r) / f < 0.95 * s) {
                    done = false;
                    g = 1.0 / f;
                    for (int j = 0; j < n; ++j) a(i, j) *= g;
                    for (int j = 0; j < n; ++j) a(j, i) *= f;
                }
            }
        }
    }
}

inline void to_hessenberg(DMat& a) {
    const int n = a.rows();
    for (int m = 1; m < n - 1; ++m) {
        double x = 0.0;
        int piv = m;
        for (int j = m; j < n; ++j) {
            if (std::fabs(a(j, m - 1)) > std::fabs(x)) {
                x = a(j, m - 1);
                piv = j;
            }
        }
        if (piv != m) {
            for (int j = m - 1; j < n; ++j) std::swap(a(piv, j), a(m, j));
            for (int j = 0; j < n; ++j) std::swap(a(j, piv), a(j, m));
        }
        if (x != 0.0) {
            for (int i = m + 1; i < n; ++i) {
                double y = a(i, m - 1);
                if (y != 0.0) {
                    y /= x;
                    a(i, m - 1) = 0.0;
                    for (int j = m; j < n; ++j) a(i, j) -= y * a(m, j);
                    for (int j = 0; j < n; ++j) a(j, m) += y * a(j, i);
                }
            }
        }
    }
    for (int i = 2; i < n; ++i)
        for (int j = 0; j < i - 1; ++j) a(i, j) = 0.0;
}

inline double sign_of(double a, double b) { return b >= 0.0 ? std::fabs(a) : -std::fabs(a); }

/// Francis double-shift QR on an upper Hessenberg matrix (EISPACK hqr).
inline void hqr_eigenvalues(DMat& a, std::vector<double>& wr, std::vector<double>& wi) {
    const int n = a.rows();
    wr.assign(n, 0.0);
    wi.assign(n, 0.0);
    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::fabs(a(i, j));
    if (anorm == 0.0) return;

    int nn = n - 1;
    double t = 0.0;
    while (nn >= 0) {
        int its = 0;
        int l;
        do {
            for (l = nn; l >= 1; --l) {
                double s = std::fabs(a(l - 1, l - 1)) + std::fabs(a(l, l));
                if (s == 0.0) s = anorm;
                if (std::fabs(a(l, l - 1)) <= DBL_EPSILON * s) {
                    a(l, l - 1) = 0.0;
                    break;
                }
            }
            double x = a(nn, nn);
            if (l == nn) {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                --nn;
            } else {
                double y = a(nn - 1, nn - 1);
                double w = a(nn, nn - 1) * a(nn - 1, nn);
                if (l == nn - 1) {
                    double p = 0.5 * (y - x);
                    double q = p * p + w;
                    double z = std::sqrt(std::fabs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + sign_of(z, p);
                        wr[nn - 1] = wr[nn] = x + z;
                        if (z != 0.0) wr[nn] = x - w / z;
                        wi[nn - 1] = wi[nn] = 0.0;
                    } else {
                        wr[nn - 1] = wr[nn] = x + p;
                        wi[nn - 1] = -(wi[nn] = z);
                    }
                    nn -= 2;
                } else {
                    if (its == 60) throw error("hqr: too many QR iterations");
                    if (its == 10 || its == 20 || its == 30 || its == 40 || its == 50) {
                        t += x;
                        for (int i = 0; i <= nn; ++i) a(i, i) -= x;
                        double s = std::fabs(a(nn, nn - 1)) + std::fabs(a(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        w = -0.4375 * s * s;
                    }
                    ++its;
                    int m;
                    double p = 0.0, q = 0.0, r = 0.0;
                    for (m = nn - 2; m >= l; --m) {
                        double z = a(m, m);
                        double rr = x - z;
                        double ss = y - z;
                        p = (rr * ss - w) / a(m + 1, m) + a(m, m + 1);
                        q = a(m + 1, m + 1) - z - rr - ss;
                        r = a(m + 2, m + 1);
                        double s = std::fabs(p) + std::fabs(q) + std::fabs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        double u = std::fabs(a(m, m - 1)) * (std::fabs(q) + std::fabs(r));
                        double v = std::fabs(p) * (std::fabs(a(m - 1, m - 1)) + std::fabs(z) + std::fabs(a(m + 1, m + 1)));
                        if (u <= DBL_EPSILON * v) break;
                    }
                    for (int i = m + 2; i <= nn; ++i) {
                        a(i, i - 2) = 0.0;
                        if (i != m + 2) a(i, i - 3) = 0.0;
                    }
                    for (int k = m; k <= nn - 1; ++k) {
                        double xs = 0.0;
                        if (k != m) {
                            p = a(k, k - 1);
                            q = a(k + 1, k - 1);
                            r = 0.0;
                            if (k != nn - 1) r = a(k + 2, k - 1);
                            xs = std::fabs(p) + std::fabs(q) + std::fabs(r);
                            if (xs != 0.0) {
                                p /= xs;
                                q /= xs;
                                r /= xs;
                            }
                        }
                        double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
                        if (s != 0.0) {
                            if (k == m) {
                                if (l != m) a(k, k - 1) = -a(k, k - 1);
                            } else {
                                a(k, k - 1) = -s * xs;
                            }
                            p += s;
                            const double xx = p / s, yy = q / s, zz = r / s;
                            q /= p;
                            r /= p;
                            for (int j = k; j <= nn; ++j) {
                                double pp = a(k, j) + q * a(k + 1, j);
                                if (k != nn - 1) {
                                    pp += r * a(k + 2, j);
                                    a(k + 2, j) -= pp * zz;
                                }
                                a(k + 1, j) -= pp * yy;
                                a(k, j) -= pp * xx;
                            }
                            const int mmin = nn < k + 3 ? nn : k + 3;
                            for (int i = l; i <= mmin; ++i) {
                                double pp = xx * a(i, k) + yy * a(i, k + 1);
                                if (k != nn - 1) {
                                    pp += zz * a(i, k + 2);
                                    a(i, k + 2) -= pp * r;
                                }
                                a(i, k + 1) -= pp * q;
                                a(i, k) -= pp;
                            }
                        }
                    }
                }
            }
        } while (l < nn - 1 && nn >= 0);
    }
}

}  // namespace detail

/// All eigenvalues of a real square matrix.
inline std::vector<std::complex<double>> eigenvalues(DMat m) {
    require(m.rows() == m.cols(), "eigenvalues: square matrix required");
    const int n = m.rows();
    if (n == 0) return {};
    if (n == 1) return {std::complex<double>(m(0, 0), 0.0)};
    detail::balance(m);
    detail::to_hessenberg(m);
    std::vector<double> wr, wi;
    detail::hqr_eigenvalues(m, wr, wi);
    std::vector<std::complex<double>> out(n);
    for (int i = 0; i < n; ++i) out[i] = {wr[i], wi[i]};
    return out;
}

inline double spectral_radius_dense(const DMat& m) {
    double r = 0.0;
    for (auto& z : eigenvalues(m)) r = std::max(r, std::abs(z));
    return r;
}

/// True iff the two eigenvalue multisets match pairwise within tol.
inline bool eigenvalue_multisets_match(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b,
                                       double tol) {
    if (a.size() != b.size()) return false;
    std::vector<char> used(b.size(), 0);
    for (const auto& x : a) {
        int best = -1;
        double bestd = tol;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            double d = std::abs(x - b[j]);
            if (d <= bestd) {
                bestd = d;
                best = static_cast<int>(j);
            }
        }
        if (best < 0) return false;
        used[best] = 1;
    }
    return true;
}

// ---------------------------------------------------------------------------
// LU solve (partial pivoting), used by inverse iteration.
// ---------------------------------------------------------------------------

struct Lu {
    DMat lu;
    std::vector<int> perm;
    bool singular = false;
};

inline Lu lu_decompose(DMat a) {
    const int n = a.rows();
    Lu f;
    f.perm.resize(n);
    for (int i = 0; i < n; ++i) f.perm[i] = i;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(a(i, k)) > std::fabs(a(piv, k))) piv = i;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
        }
        if (a(k, k) == 0.0) {
            f.singular = true;
            a(k, k) = 1e-300;
        }
        for (int i = k + 1; i < n; ++i) {
            a(i, k) /= a(k, k);
            const double m = a(i, k);
            if (m == 0.0) continue;
            for (int j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
        }
    }
    f.lu = std::move(a);
    return f;
}

inline DVec lu_solve(const Lu& f, const DVec& b) {
    const int n = f.lu.rows();
    DVec x(n);
    for (int i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
        x[i] /= f.lu(i, i);
    }
    return x;
}

// ---------------------------------------------------------------------------
// Power iteration and dominant-eigenpair extraction.
// ---------------------------------------------------------------------------

struct PowerResult {
    double value = 0.0;
    DVec vector;
    bool converged = false;
    int iterations = 0;
};

/// Deterministic power iteration: all-ones start, Rayleigh-quotient delta
/// convergence test.
inline PowerResult power_iteration(const DMat& m, double delta_tol = 1e-12, int cap = 100000) {
    const int n = m.rows();
    PowerResult res;
    res.vector.assign(n, 1.0);
    normalize2(res.vector);
    double prev = 0.0;
    for (int it = 0; it < cap; ++it) {
        DVec next = m * res.vector;
        const double nn = norm2(next);
        if (nn == 0.0) {
            res.value = 0.0;
            res.converged = true;
            res.iterations = it;
            return res;
        }
        for (double& x : next) x /= nn;
        const double lambda = dot(next, m * next);
        res.vector = std::move(next);
        res.iterations = it + 1;
        if (it > 0 && std::fabs(lambda - prev) <= delta_tol * std::max(1.0, std::fabs(lambda))) {
            res.value = lambda;
            // confirm with a residual check; oscillating (imprimitive) cases fail here
            DVec mv = m * res.vector;
            double resid = 0.0;
            for (int i = 0; i < n; ++i) resid = std::max(resid, std::fabs(mv[i] - lambda * res.vector[i]));
            res.converged = resid <= 1e-9 * std::max(1.0, std::fabs(lambda));
            if (res.converged) return res;
        }
        prev = lambda;
    }
    res.value = prev;
    return res;
}

/// Inverse iteration for the eigenvector of an (approximately) known eigenvalue.
inline DVec inverse_iteration(const DMat& m, double lambda, int sweeps = 4) {
    const int n = m.rows();
    DMat shifted = m;
    const double shift = lambda + 1e-9 * std::max(1.0, std::fabs(lambda));
    for (int i = 0; i < n; ++i) shifted(i, i) -= shift;
    Lu f = lu_decompose(shifted);
    DVec v(n, 1.0);
    normalize2(v);
    for (int s = 0; s < sweeps; ++s) {
        v = lu_solve(f, v);
        normalize2(v);
    }
    // fix global sign so that the dominant-magnitude entry is positive
    double big = 0.0;
    for (double x : v)
        if (std::fabs(x) > std::fabs(big)) big = x;
    if (big < 0.0)
        for (double& x : v) x = -x;
    return v;
}

// ---------------------------------------------------------------------------
// Strongly connected components / Frobenius normal form.
// ---------------------------------------------------------------------------

/// Digraph of a transition matrix: edge k -> i iff M(i,k) != 0, i.e. state i
/// at the next step depends on state k. The adjacency matrix of this digraph
/// is the transpose of M.
struct FnfStructure {
    std::vector<std::vector<int>> blocks;  // FNF diagonal blocks, in FNF order
    std::vector<bool> irreducible;         // per block: irreducible vs 1x1 null
    int n_z = 0;                           // zero columns of M
};

namespace detail {

struct TarjanScc {
    const std::vector<std::vector<int>>& adj;
    std::vector<int> index, low, comp;
    std::vector<char> on_stack;
    std::vector<int> stack;
    int counter = 0, ncomp = 0;

    explicit TarjanScc(const std::vector<std::vector<int>>& a)
        : adj(a), index(a.size(), -1), low(a.size(), 0), comp(a.size(), -1), on_stack(a.size(), 0) {}

    void run() {
        for (std::size_t v = 0; v < adj.size(); ++v)
            if (index[v] < 0) dfs(static_cast<int>(v));
    }

    void dfs(int v0) {
        // iterative DFS to be safe for larger graphs
        std::vector<std::pair<int, std::size_t>> call;
        call.push_back({v0, 0});
        while (!call.empty()) {
            auto& [v, ei] = call.back();
            if (ei == 0) {
                index[v] = low[v] = counter++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            bool descended = false;
            while (ei < adj[v].size()) {
                int w = adj[v][ei++];
                if (index[w] < 0) {
                    call.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                while (true) {
                    int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = ncomp;
                    if (w == v) break;
                }
                ++ncomp;
            }
            call.pop_back();
            if (!call.empty()) {
                int parent = call.back().first;
                low[parent] = std::min(low[parent], low[v]);
            }
        }
    }
};

}  // namespace detail

template <class T>
FnfStructure fnf_structure(const Mat<T>& m) {
    const int n = m.rows();
    std::vector<std::vector<int>> adj(n);  // edge k -> i iff M(i,k) != 0
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            if (m(i, k) != T{}) adj[k].push_back(i);

    detail::TarjanScc scc(adj);
    scc.run();
    const int nc = scc.ncomp;

    // condensation edges in digraph direction (component of k -> component of i)
    std::vector<std::set<int>> cadj(nc);
    for (int k = 0; k < n; ++k)
        for (int i : adj[k])
            if (scc.comp[k] != scc.comp[i]) cadj[scc.comp[k]].insert(scc.comp[i]);

    // topological order of the condensation, then reversed: digraph descendants
    // (sinks; zero-column states) come first, which makes P M P^T block upper
    // triangular.
    std::vector<int> indeg(nc, 0);
    for (int c = 0; c < nc; ++c)
        for (int d : cadj[c]) ++indeg[d];
    std::vector<int> order;
    std::vector<int> queue;
    for (int c = 0; c < nc; ++c)
        if (indeg[c] == 0) queue.push_back(c);
    while (!queue.empty()) {
        int c = queue.back();
        queue.pop_back();
        order.push_back(c);
        for (int d : cadj[c])
            if (--indeg[d] == 0) queue.push_back(d);
    }
    std::reverse(order.begin(), order.end());

    FnfStructure out;
    std::vector<std::vector<int>> members(nc);
    for (int v = 0; v < n; ++v) members[scc.comp[v]].push_back(v);
    for (int c : order) {
        auto& blk = members[c];
        std::sort(blk.begin(), blk.end());
        bool irr = blk.size() > 1;
        if (blk.size() == 1) irr = m(blk[0], blk[0]) != T{};
        out.blocks.push_back(blk);
        out.irreducible.push_back(irr);
    }
    for (int k = 0; k < n; ++k) {
        bool zero = true;
        for (int i = 0; i < n && zero; ++i)
            if (m(i, k) != T{}) zero = false;
        if (zero) ++out.n_z;
    }
    return out;
}

template <class T>
int count_irreducible_blocks(const Mat<T>& m) {
    auto f = fnf_structure(m);
    int c = 0;
    for (bool b : f.irreducible) c += b ? 1 : 0;
    return c;
}

// ---------------------------------------------------------------------------
// Dominant eigenpair summary (Perron-Frobenius machinery).
// ---------------------------------------------------------------------------

struct SpectralSummary {
    double r = 0.0;      // dominant eigenvalue (spectral radius)
    DVec w1;             // left eigenvector, unit 2-norm, non-negative
    DVec u1;             // right eigenvector, unit 2-norm, non-negative
    int n_z = 0;         // zero-column count of the analyzed matrix
    std::vector<std::vector<int>> irreducible_blocks;
    bool power_converged = false;
    double residual = 0.0;
};

/// Dominant eigenvalue and left/right eigenvectors of a non-negative matrix.
/// Power iteration first (deterministic all-ones start); dense fallback when
/// it stalls (imprimitive matrices, multiple dominant eigenvalues).
inline SpectralSummary dominant_eigen(const DMat& m, double delta_tol = 1e-12, int cap = 100000) {
    require(m.rows() == m.cols(), "dominant_eigen: square matrix required");
    SpectralSummary s;
    const int n = m.rows();
    if (n == 0) return s;

    auto fnf = fnf_structure(m);
    s.n_z = fnf.n_z;
    for (std::size_t b = 0; b < fnf.blocks.size(); ++b)
        if (fnf.irreducible[b]) s.irreducible_blocks.push_back(fnf.blocks[b]);

    PowerResult right = power_iteration(m, delta_tol, cap);
    PowerResult left = power_iteration(m.transpose(), delta_tol, cap);
    if (right.converged && left.converged && std::fabs(right.value - left.value) <= 1e-7 * std::max(1.0, right.value)) {
        s.r = right.value;
        s.u1 = right.vector;
        s.w1 = left.vector;
        s.power_converged = true;
    } else {
        require(n <= 2048, "dominant_eigen: dense fallback limit exceeded");
        double radius = 0.0;
        for (auto& z : eigenvalues(m)) radius = std::max(radius, std::abs(z));
        s.r = radius;
        s.u1 = inverse_iteration(m, radius);
        s.w1 = inverse_iteration(m.transpose(), radius);
        s.power_converged = false;
    }
    // clip tiny negative round-off in the Perron vectors
    for (DVec* v : {&s.w1, &s.u1})
        for (double& x : *v)
            if (x < 0.0 && x > -1e-12) x = 0.0;
    DVec mu = m * s.u1;
    DVec wm = s.w1 * m;
    double resid = 0.0;
    for (int i = 0; i < n; ++i) {
        resid = std::max(resid, std::fabs(mu[i] - s.r * s.u1[i]));
        resid = std::max(resid, std::fabs(wm[i] - s.r * s.w1[i]));
    }
    s.residual = resid;
    return s;
}

// ---------------------------------------------------------------------------
// Trapping-set digraphs (flooding and layered flavors).
// ---------------------------------------------------------------------------

struct TsDigraph {
    int n = 0;
    std::vector<std::set<int>> out;  // out[v] = children of v

    bool has_edge(int a, int b) const { return out[a].count(b) > 0; }

    /// Adjacency matrix; by construction equals the transpose of the
    /// corresponding transition matrix (0/1 reachability, not multiplicity).
    IMat adjacency() const {
        IMat m(n, n);
        for (int v = 0; v < n; ++v)
            for (int w : out[v]) m(v, w) = 1;
        return m;
    }
};

template <class T>
TsDigraph digraph_of_transition(const Mat<T>& m) {
    TsDigraph d;
    d.n = m.rows();
    d.out.assign(d.n, {});
    for (int i = 0; i < d.n; ++i)
        for (int k = 0; k < d.n; ++k)
            if (m(i, k) != T{}) d.out[k].insert(i);
    return d;
}

/// Layered digraph D_l built from the flooding digraph D_f by the J-1 rewiring
/// steps: for every node updated in layer j+1 whose incoming edge has a tail
/// already updated earlier in the iteration, the edge is replaced by edges
/// from the tail's current parents.
inline TsDigraph layered_digraph(const TsDigraph& df, const std::vector<int>& layer_of_node, int num_layers) {
    TsDigraph d = df;
    std::vector<std::set<int>> in(d.n);
    for (int v = 0; v < d.n; ++v)
        for (int w : d.out[v]) in[w].insert(v);

    for (int step = 1; step < num_layers; ++step) {
        // heads in layer step (0-based: layer index == step), tails in layers < step
        std::vector<std::pair<int, int>> to_rewire;
        for (int h = 0; h < d.n; ++h) {
            if (layer_of_node[h] != step) continue;
            for (int t : in[h])
                if (layer_of_node[t] < step) to_rewire.push_back({t, h});
        }
        for (auto [t, h] : to_rewire) {
            d.out[t].erase(h);
            in[h].erase(t);
        }
        for (auto [t, h] : to_rewire) {
            for (int p : in[t]) {
                d.out[p].insert(h);
                in[h].insert(p);
            }
        }
    }
    return d;
}

// ---------------------------------------------------------------------------
// Dihedral (cyclic shift + reversal) equivalence classes of layer orders.
// ---------------------------------------------------------------------------

inline std::vector<int> dihedral_class_key(const std::vector<int>& perm) {
    std::vector<int> best = perm;
    auto consider = [&](std::vector<int> cand) {
        for (std::size_t s = 0; s < cand.size(); ++s) {
            if (cand < best) best = cand;
            std::rotate(cand.begin(), cand.begin() + 1, cand.end());
        }
    };
    consider(perm);
    std::vector<int> rev(perm.rbegin(), perm.rend());
    consider(rev);
    return best;
}

}  // namespace tsfloor
