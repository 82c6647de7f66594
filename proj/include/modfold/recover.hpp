#pragma once

// Recovery of signals from modulo (folded) measurements: solve for the
// integer fold vector eps satisfying F_V^H (z - eps) = 0 within a box.
//
// The search runs over real scalar coordinates. Coordinates whose basis row
// extends the rank of the signal subspace are "free"; the rest are forced by
// interpolation once the free ones are fixed. Free assignments are
// enumerated best-first under a prior-whitened distance (the folded signal
// is far more likely to be smooth/small than not), which makes the first
// feasible point cheap to reach while remaining a complete enumeration of
// the box. For DFT-structured models the full solution set is a coset of
// the lattice of polynomial shifts of the product of hit class factors, so
// uniqueness is decided by walking that coset instead of re-searching.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>

#include "modfold/cyclotomic.hpp"
#include "modfold/ident.hpp"
#include "modfold/modcore.hpp"
#include "modfold/types.hpp"

namespace modfold {

struct SolverConfig {
    enum class Mode { first_feasible, enumerate_all };
    int box_bound = 1;           // per real/imag component: eps in [-B, B]
    double residual_tol = 1e-6;  // feasibility threshold on the subspace residual
    long long max_nodes = 2000000;
    Mode mode = Mode::first_feasible;
    int solution_cap = 256;  // enumerate_all stops collecting here
};

enum class SolveStatus { unique_in_box, multiple, infeasible, budget_exhausted };

struct RecoveryResult {
    SolveStatus status = SolveStatus::infeasible;
    std::vector<GaussianIntegerVector> eps_solutions;  // lexicographically sorted
    ComplexVector s_hat;   // recovered signal (or unfolded samples for PBL)
    double residual = 0.0; // subspace residual of the reported solution
    long long nodes = 0;   // search + coset-walk nodes visited
};

namespace detail {

using IntVec = std::vector<long long>;

/// Integer feasibility core over d real scalar unknowns with box [-B, B]:
/// find eps in Z^d with (zvec - eps) in the column space of `rows` (d rows
/// of the signal basis), within residual_tol in l2.
class FoldEngine {
  public:
    struct LatticeCol {
        int pivot = 0;  // highest coordinate with a nonzero entry; value +1 there
        std::vector<std::pair<int, long long>> entries;  // (coord, value), coord ascending
    };

    int d = 0;
    int box = 1;
    double tol = 1e-6;
    long long max_nodes = 2000000;
    std::vector<double> zvec;
    std::vector<std::vector<double>> rows;  // d x w signal basis rows
    std::vector<LatticeCol> lattice;        // optional: integer kernel basis
    bool has_lattice = false;
    long long nodes = 0;

    enum class Outcome { stopped_by_visitor, exhausted, budget };

    void prepare() {
        classify_coordinates();
        build_projector();
        build_prior();
    }

    int free_count() const { return f_; }

    double residual_of(const IntVec& eps) const {
        std::vector<double> x(d);
        for (int k = 0; k < d; ++k) x[k] = zvec[k] - static_cast<double>(eps[k]);
        for (const auto& q : qcols_) {
            double dot = 0;
            for (int k = 0; k < d; ++k) dot += q[k] * x[k];
            for (int k = 0; k < d; ++k) x[k] -= dot * q[k];
        }
        double s = 0;
        for (double v : x) s += v * v;
        return std::sqrt(s);
    }

    /// Best-first enumeration of feasible points, most-plausible first.
    /// Visitor returns false to stop. Complete over the box when run to
    /// exhaustion.
    Outcome search(const std::function<bool(const IntVec&)>& visit) {
        // Priority is penalty minus a per-level depth credit. The credit
        // biases the frontier toward deep nodes (time-to-first-solution
        // matters most; verdicts never depend on visit order), while the
        // penalty term still makes backtracking pick plausible siblings.
        struct Node {
            double key;
            double pen;
            std::vector<int16_t> ranks;
            bool operator<(const Node& o) const {  // reversed: min-heap
                if (key != o.key) return key > o.key;
                return ranks > o.ranks;
            }
        };
        std::priority_queue<Node> heap;
        heap.push({0.0, 0.0, {}});
        std::vector<double> u(f_), yfree(f_);
        IntVec epsfree(f_), eps(d);
        auto push = [&](std::vector<int16_t>&& r) {
            double pen = path_eval(r, u, yfree, epsfree);
            if (std::isfinite(pen))
                heap.push({pen - depth_credit_ * static_cast<double>(r.size()), pen, std::move(r)});
        };
        while (!heap.empty()) {
            if (++nodes > max_nodes) return Outcome::budget;
            Node node = std::move(const_cast<Node&>(heap.top()));
            heap.pop();
            int k = static_cast<int>(node.ranks.size());
            // advance the last assigned level to its next candidate; leaves
            // must do this too, or their later siblings become unreachable
            if (k > 0 && node.ranks.back() + 1 < 2 * box + 1) {
                std::vector<int16_t> r = node.ranks;
                ++r.back();
                push(std::move(r));
            }
            eval_path(node.ranks, u, yfree, epsfree);
            if (k == f_) {
                if (complete_leaf(yfree, epsfree, eps) && !visit(eps))
                    return Outcome::stopped_by_visitor;
                continue;
            }
            // extend to level k with its best candidate
            {
                std::vector<int16_t> r = node.ranks;
                r.push_back(0);
                push(std::move(r));
            }
        }
        return Outcome::exhausted;
    }

    /// Enumerate the coset base + integer combinations of the lattice
    /// columns, restricted to the box. Complete; every emitted point is
    /// verified feasible. Visitor returns false to stop.
    Outcome walk(const IntVec& base, const std::function<bool(const IntVec&)>& visit) {
        if (!has_lattice) throw std::logic_error("FoldEngine::walk: no lattice");
        std::vector<long long> acc(d, 0);
        return walk_rec(static_cast<int>(lattice.size()) - 1, base, acc, visit);
    }

  private:
    int f_ = 0;                       // number of free scalar coordinates
    std::vector<int> free_coords_;    // ascending
    std::vector<int> det_coords_;
    std::vector<std::vector<double>> det_dep_;  // per determined coord: weights over earlier free y's
    std::vector<std::vector<double>> qcols_;    // orthonormal basis of the signal column space
    std::vector<std::vector<double>> chol_;     // lower-triangular factor M of the precision, penalty = |M y|^2
    double depth_credit_ = 0.5;       // per-level priority credit; see search()

    static double dot(const std::vector<double>& a, const std::vector<double>& b, size_t n) {
        double s = 0;
        for (size_t i = 0; i < n; ++i) s += a[i] * b[i];
        return s;
    }

    void classify_coordinates() {
        size_t w = rows.empty() ? 0 : rows[0].size();
        double scale = 0;
        for (const auto& r : rows) scale = std::max(scale, std::sqrt(dot(r, r, w)));
        double rank_tol = 1e-8 * std::max(scale, 1.0);
        std::vector<std::vector<double>> pivots;       // orthonormal row directions
        std::vector<std::vector<double>> free_alpha;   // per free coord: projections (lower triangular)
        for (int k = 0; k < d; ++k) {
            std::vector<double> r = rows[k];
            std::vector<double> alpha(pivots.size());
            for (size_t j = 0; j < pivots.size(); ++j) {
                alpha[j] = dot(r, pivots[j], w);
                for (size_t i = 0; i < w; ++i) r[i] -= alpha[j] * pivots[j][i];
            }
            double nr = std::sqrt(dot(r, r, w));
            if (nr > rank_tol) {
                for (size_t i = 0; i < w; ++i) r[i] /= nr;
                alpha.push_back(nr);
                pivots.push_back(std::move(r));
                free_alpha.push_back(std::move(alpha));
                free_coords_.push_back(k);
            } else {
                // y_k = alpha . beta with y_free = M beta; solve M^T c = alpha
                size_t q = alpha.size();
                std::vector<double> c(q, 0.0);
                for (size_t l = q; l-- > 0;) {
                    double s = alpha[l];
                    for (size_t j = l + 1; j < q; ++j) s -= c[j] * free_alpha[j][l];
                    c[l] = s / free_alpha[l][l];
                }
                det_coords_.push_back(k);
                det_dep_.push_back(std::move(c));
            }
        }
        f_ = static_cast<int>(free_coords_.size());
    }

    void build_projector() {
        size_t w = rows.empty() ? 0 : rows[0].size();
        for (size_t c = 0; c < w; ++c) {
            std::vector<double> col(d);
            for (int k = 0; k < d; ++k) col[k] = rows[k][c];
            for (const auto& q : qcols_) {
                double a = dot(col, q, d);
                for (int k = 0; k < d; ++k) col[k] -= a * q[k];
            }
            double n = std::sqrt(dot(col, col, d));
            if (n > 1e-10) {
                for (auto& v : col) v /= n;
                qcols_.push_back(std::move(col));
            }
        }
    }

    // Search-order metric on the free-coordinate signal values: the Gram
    // matrix of the free basis rows serves as a prior covariance, so
    // whitening turns "plausible signal" into "short vector". The metric
    // only orders the complete enumeration; it never prunes.
    void build_prior() {
        size_t w = rows.empty() ? 0 : rows[0].size();
        std::vector<std::vector<double>> c(f_, std::vector<double>(f_));
        double dmax = 1e-12;
        for (int i = 0; i < f_; ++i)
            for (int j = 0; j <= i; ++j) {
                c[i][j] = c[j][i] = dot(rows[free_coords_[i]], rows[free_coords_[j]], w);
                if (i == j) dmax = std::max(dmax, c[i][i]);
            }
        for (int i = 0; i < f_; ++i) c[i][i] += 1e-6 * dmax;
        // lam = C^{-1} via Cholesky of C
        std::vector<std::vector<double>> lo(f_, std::vector<double>(f_, 0.0));
        for (int i = 0; i < f_; ++i)
            for (int j = 0; j <= i; ++j) {
                double s = c[i][j];
                for (int k = 0; k < j; ++k) s -= lo[i][k] * lo[j][k];
                if (i == j)
                    lo[i][i] = std::sqrt(std::max(s, 1e-12 * dmax));
                else
                    lo[i][j] = s / lo[j][j];
            }
        std::vector<std::vector<double>> inv(f_, std::vector<double>(f_, 0.0));
        for (int col = 0; col < f_; ++col) {
            std::vector<double> e(f_, 0.0);
            e[col] = 1.0;
            for (int i = 0; i < f_; ++i) {
                double s = e[i];
                for (int k = 0; k < i; ++k) s -= lo[i][k] * e[k];
                e[i] = s / lo[i][i];
            }
            for (int i = f_ - 1; i >= 0; --i) {
                double s = e[i];
                for (int k = i + 1; k < f_; ++k) s -= lo[k][i] * e[k];
                e[i] = s / lo[i][i];
            }
            for (int i = 0; i < f_; ++i) inv[i][col] = e[i];
        }
        // factor lam = M^T M with M lower triangular (reverse-order Cholesky),
        // so the running whitened sum can be built in natural coordinate order
        std::vector<std::vector<double>> rl(f_, std::vector<double>(f_, 0.0));
        for (int i = 0; i < f_; ++i)
            for (int j = 0; j <= i; ++j) {
                double s = inv[f_ - 1 - i][f_ - 1 - j];
                for (int k = 0; k < j; ++k) s -= rl[i][k] * rl[j][k];
                if (i == j)
                    rl[i][i] = std::sqrt(std::max(s, 1e-12));
                else
                    rl[i][j] = s / rl[j][j];
            }
        chol_.assign(f_, std::vector<double>(f_, 0.0));
        for (int i = 0; i < f_; ++i)
            for (int j = 0; j <= i; ++j) chol_[i][j] = rl[f_ - 1 - j][f_ - 1 - i];
    }

    // Candidate integer of given rank (0 = nearest) to `center`, restricted
    // to [-box, box]; nan when the rank runs past the box.
    double candidate(double center, int rank) const {
        int m = 2 * box + 1;
        if (rank >= m) return std::numeric_limits<double>::quiet_NaN();
        std::vector<std::pair<double, long long>> cs;
        cs.reserve(m);
        for (long long v = -box; v <= box; ++v) cs.push_back({std::abs(v - center), v});
        std::sort(cs.begin(), cs.end());
        return static_cast<double>(cs[rank].second);
    }

    // Recompute the whitened path for a rank prefix; fills u/yfree/epsfree up
    // to its length and returns the accumulated penalty (nan if a rank is
    // outside the box).
    double path_eval(const std::vector<int16_t>& ranks, std::vector<double>& u,
                     std::vector<double>& yfree, IntVec& epsfree) const {
        double pen = 0;
        for (size_t j = 0; j < ranks.size(); ++j) {
            double acc = 0;
            for (size_t l = 0; l < j; ++l) acc += chol_[j][l] * yfree[l];
            double yhat = -acc / chol_[j][j];
            double center = zvec[free_coords_[j]] - yhat;
            double cand = candidate(center, ranks[j]);
            if (!std::isfinite(cand)) return cand;
            epsfree[j] = std::llround(cand);
            yfree[j] = zvec[free_coords_[j]] - cand;
            u[j] = chol_[j][j] * (yfree[j] - yhat);
            pen += u[j] * u[j];
        }
        return pen;
    }

    void eval_path(const std::vector<int16_t>& ranks, std::vector<double>& u,
                   std::vector<double>& yfree, IntVec& epsfree) const {
        path_eval(ranks, u, yfree, epsfree);
    }

    double path_penalty(const std::vector<int16_t>& ranks, std::vector<double>& u,
                        std::vector<double>& yfree, IntVec& epsfree) const {
        return path_eval(ranks, u, yfree, epsfree);
    }

    // Fill determined coordinates by interpolation; reject if any forced
    // value is out of box or visibly non-integer; verify the full residual.
    bool complete_leaf(const std::vector<double>& yfree, const IntVec& epsfree, IntVec& eps) const {
        for (int j = 0; j < f_; ++j) eps[free_coords_[j]] = epsfree[j];
        for (size_t i = 0; i < det_coords_.size(); ++i) {
            int k = det_coords_[i];
            double yhat = 0;
            for (size_t j = 0; j < det_dep_[i].size(); ++j) yhat += det_dep_[i][j] * yfree[j];
            double e = zvec[k] - yhat;
            long long ei = std::llround(e);
            if (std::llabs(ei) > box || std::abs(e - ei) > 0.1) return false;
            eps[k] = ei;
        }
        return residual_of(eps) <= tol;
    }

    Outcome walk_rec(int c, const IntVec& base, std::vector<long long>& acc,
                     const std::function<bool(const IntVec&)>& visit) {
        if (++nodes > max_nodes) return Outcome::budget;
        if (c < 0) {
            IntVec eps(d);
            for (int k = 0; k < d; ++k) {
                eps[k] = base[k] + acc[k];
                if (std::llabs(eps[k]) > box) return Outcome::exhausted;
            }
            if (residual_of(eps) > tol) return Outcome::exhausted;  // numeric guard
            return visit(eps) ? Outcome::exhausted : Outcome::stopped_by_visitor;
        }
        const LatticeCol& col = lattice[c];
        long long at_pivot = base[col.pivot] + acc[col.pivot];
        for (long long q = -box - at_pivot; q <= box - at_pivot; ++q) {
            for (const auto& [k, v] : col.entries) acc[k] += q * v;
            Outcome o = walk_rec(c - 1, base, acc, visit);
            for (const auto& [k, v] : col.entries) acc[k] -= q * v;
            if (o != Outcome::exhausted) return o;
        }
        return Outcome::exhausted;
    }
};

inline bool lex_less(const IntVec& a, const IntVec& b) { return a < b; }

/// Lattice of Gaussian-integer kernel vectors for a DFT model: shifts of
/// g = product of class factors hit by V, in interleaved re/im coordinates.
inline std::vector<FoldEngine::LatticeCol> dft_kernel_lattice(int n, const IndexSet& v) {
    FactorPartition part = partition_gaussian(n);
    std::vector<bool> in_v(n, false);
    for (int idx : v) in_v[idx] = true;
    std::vector<GaussPoly> polys = gaussian_class_polys(n);
    GaussPoly g{{1, 0}};
    for (int c = 0; c < part.K(); ++c)
        if (std::any_of(part.classes[c].begin(), part.classes[c].end(),
                        [&](int k) { return in_v[k]; }))
            g = gauss_poly_mul(g, polys[c]);
    int deg = static_cast<int>(g.size()) - 1;
    std::vector<FoldEngine::LatticeCol> cols;
    for (int i = 0; i + deg < n; ++i) {
        FoldEngine::LatticeCol re_col, im_col;  // shifts x^i g and x^i (j g)
        for (int t = 0; t <= deg; ++t) {
            if (g[t].re) re_col.entries.push_back({2 * (i + t), g[t].re});
            if (g[t].im) re_col.entries.push_back({2 * (i + t) + 1, g[t].im});
            if (g[t].im) im_col.entries.push_back({2 * (i + t), -g[t].im});
            if (g[t].re) im_col.entries.push_back({2 * (i + t) + 1, g[t].re});
        }
        re_col.pivot = 2 * (i + deg);
        im_col.pivot = 2 * (i + deg) + 1;
        cols.push_back(std::move(re_col));
        cols.push_back(std::move(im_col));
    }
    return cols;
}

/// Integer kernel for PBL band measurements: shifts of the product of the
/// cyclotomic polynomials of the rational classes hit by {P+1..N-P-1}.
inline std::vector<FoldEngine::LatticeCol> pbl_kernel_lattice(int n, int P) {
    FactorPartition part = partition_rational(n);
    IntPoly g{1};
    for (int c = 0; c < part.K(); ++c) {
        bool hit = std::any_of(part.classes[c].begin(), part.classes[c].end(),
                               [&](int k) { return k >= P + 1 && k <= n - P - 1; });
        if (!hit) continue;
        const IntPoly& phi = cyclotomic_poly(part.class_divisor[c]);
        IntPoly prod(g.size() + phi.size() - 1, 0);
        for (size_t i = 0; i < g.size(); ++i)
            for (size_t k = 0; k < phi.size(); ++k) prod[i + k] += g[i] * phi[k];
        g = std::move(prod);
    }
    int deg = static_cast<int>(g.size()) - 1;
    std::vector<FoldEngine::LatticeCol> cols;
    for (int i = 0; i + deg < n; ++i) {
        FoldEngine::LatticeCol col;
        for (int t = 0; t <= deg; ++t)
            if (g[t] != 0) col.entries.push_back({i + t, g[t].get_si()});
        col.pivot = i + deg;
        cols.push_back(std::move(col));
    }
    return cols;
}

/// Shared driver: find solutions with the engine, decide uniqueness via the
/// kernel coset when available, otherwise by continued enumeration.
inline std::pair<SolveStatus, std::vector<IntVec>> drive(FoldEngine& eng, const SolverConfig& cfg) {
    std::vector<IntVec> sols;
    bool enumerate = cfg.mode == SolverConfig::Mode::enumerate_all;
    size_t want = enumerate ? static_cast<size_t>(cfg.solution_cap) : 2;

    FoldEngine::Outcome out;
    if (eng.has_lattice) {
        // Any single solution seeds the coset walk, which recovers the whole
        // solution set at the full box. The first-solution search is run with
        // an escalating box (capped node budget per rung below the full one):
        // true fold vectors are usually small, and the search frontier grows
        // steeply with the box. The final rung uses the full box and budget,
        // so infeasible verdicts remain exact.
        IntVec first;
        bool found = false;
        long long full_box = eng.box;
        long long full_budget = eng.max_nodes;
        std::vector<long long> rungs;
        for (long long b = 1; b < full_box; b *= 2) rungs.push_back(b);
        rungs.push_back(full_box);
        for (size_t i = 0; i < rungs.size() && !found; ++i) {
            eng.box = rungs[i];
            bool last = i + 1 == rungs.size();
            eng.max_nodes = last ? full_budget : std::min<long long>(full_budget, eng.nodes + 100000);
            out = eng.search([&](const IntVec& eps) {
                first = eps;
                found = true;
                return false;
            });
        }
        eng.box = full_box;
        eng.max_nodes = full_budget;
        if (found) {
            out = eng.walk(first, [&](const IntVec& eps) {
                sols.push_back(eps);
                return sols.size() < want;
            });
            if (out == FoldEngine::Outcome::stopped_by_visitor && sols.size() >= want)
                out = FoldEngine::Outcome::exhausted;  // cap reached, not an error
        }
    } else {
        out = eng.search([&](const IntVec& eps) {
            sols.push_back(eps);
            return sols.size() < want;
        });
        if (out == FoldEngine::Outcome::stopped_by_visitor) out = FoldEngine::Outcome::exhausted;
    }

    std::sort(sols.begin(), sols.end());
    SolveStatus status;
    if (out == FoldEngine::Outcome::budget)
        status = SolveStatus::budget_exhausted;
    else if (sols.empty())
        status = SolveStatus::infeasible;
    else
        status = sols.size() == 1 ? SolveStatus::unique_in_box : SolveStatus::multiple;
    return {status, std::move(sols)};
}

inline void check_measurements(const ComplexVector& z) {
    for (Complex c : z)
        if (c.real() < -0.5 - 1e-9 || c.real() >= 0.5 + 1e-9 || c.imag() < -0.5 - 1e-9 ||
            c.imag() >= 0.5 + 1e-9)
            throw std::domain_error("solve: measurements outside the fundamental modulo range");
}

}  // namespace detail

/// Recover the signal estimate from measurements and a fold vector:
/// s_hat = F^H (z - eps).
inline ComplexVector recover_signal(const ComplexVector& z, const GaussianIntegerVector& eps) {
    if (z.size() != eps.size()) throw std::domain_error("recover_signal: length mismatch");
    ComplexVector y(z.size());
    for (size_t k = 0; k < z.size(); ++k) y[k] = z[k] - to_complex(eps[k]);
    return adjoint_dft(y);
}

/// Solve F_V^H z = F_V^H eps for a Gaussian-integer eps inside the box
/// (DFT sensing model). Uniqueness is decided exactly via the kernel coset.
inline RecoveryResult solve_integer_equations(const ComplexVector& z, const IndexSet& v,
                                              const SolverConfig& cfg = {}) {
    int n = static_cast<int>(z.size());
    if (v.empty())
        throw std::domain_error("solve_integer_equations: empty V makes every fold feasible");
    for (int idx : v)
        if (idx < 0 || idx >= n) throw std::domain_error("solve_integer_equations: V out of range");
    detail::check_measurements(z);

    std::vector<bool> in_v(n, false);
    for (int idx : v) in_v[idx] = true;

    detail::FoldEngine eng;
    eng.d = 2 * n;
    eng.box = cfg.box_bound;
    eng.tol = cfg.residual_tol;
    eng.max_nodes = cfg.max_nodes;
    eng.zvec.resize(2 * n);
    for (int k = 0; k < n; ++k) {
        eng.zvec[2 * k] = z[k].real();
        eng.zvec[2 * k + 1] = z[k].imag();
    }
    // real form of the DFT columns outside V (the signal subspace)
    std::vector<int> keep;
    for (int k = 0; k < n; ++k)
        if (!in_v[k]) keep.push_back(k);
    const ComplexVector& tw = detail::twiddle_table(n);
    eng.rows.assign(2 * n, std::vector<double>(2 * keep.size()));
    for (int k = 0; k < n; ++k)
        for (size_t c = 0; c < keep.size(); ++c) {
            Complex t = tw[static_cast<size_t>(k) * keep[c] % n] / std::sqrt(double(n));
            eng.rows[2 * k][2 * c] = t.real();
            eng.rows[2 * k][2 * c + 1] = -t.imag();
            eng.rows[2 * k + 1][2 * c] = t.imag();
            eng.rows[2 * k + 1][2 * c + 1] = t.real();
        }
    eng.lattice = detail::dft_kernel_lattice(n, v);
    eng.has_lattice = true;
    eng.prepare();

    auto [status, sols] = detail::drive(eng, cfg);
    RecoveryResult res;
    res.status = status;
    res.nodes = eng.nodes;
    for (const auto& s : sols) {
        GaussianIntegerVector g(n);
        for (int k = 0; k < n; ++k) g[k] = GaussInt{s[k * 2], s[k * 2 + 1]};
        res.eps_solutions.push_back(std::move(g));
    }
    if (!sols.empty()) {
        res.residual = eng.residual_of(sols.front());
        res.s_hat = recover_signal(z, res.eps_solutions.front());
        for (int idx : v) res.s_hat[idx] = 0.0;  // exact zeros on the constrained support
    }
    return res;
}

/// General sensing-matrix variant. DFT models route through the lattice
/// path; Vandermonde models are handled by exhaustive best-first search
/// (no algebraic kernel available).
inline RecoveryResult solve_integer_equations(const ComplexVector& z, const SensingConfig& scfg,
                                              const SolverConfig& cfg = {}) {
    if (std::holds_alternative<DftKind>(scfg.matrix_kind))
        return solve_integer_equations(z, scfg.zero_set, cfg);

    int n = scfg.n;
    if (static_cast<int>(z.size()) != n) throw std::domain_error("solve: length mismatch");
    if (scfg.zero_set.empty()) throw std::domain_error("solve: empty V makes every fold feasible");
    detail::check_measurements(z);
    std::vector<bool> in_v(n, false);
    for (int idx : scfg.zero_set) in_v[idx] = true;

    std::vector<int> keep;
    for (int k = 0; k < n; ++k)
        if (!in_v[k]) keep.push_back(k);
    std::vector<ComplexVector> cols(keep.size());
    for (size_t c = 0; c < keep.size(); ++c) cols[c] = sensing_column(scfg, keep[c]);

    detail::FoldEngine eng;
    eng.d = 2 * n;
    eng.box = cfg.box_bound;
    eng.tol = cfg.residual_tol;
    eng.max_nodes = cfg.max_nodes;
    eng.zvec.resize(2 * n);
    for (int k = 0; k < n; ++k) {
        eng.zvec[2 * k] = z[k].real();
        eng.zvec[2 * k + 1] = z[k].imag();
    }
    eng.rows.assign(2 * n, std::vector<double>(2 * keep.size()));
    for (int k = 0; k < n; ++k)
        for (size_t c = 0; c < keep.size(); ++c) {
            Complex t = cols[c][k];
            eng.rows[2 * k][2 * c] = t.real();
            eng.rows[2 * k][2 * c + 1] = -t.imag();
            eng.rows[2 * k + 1][2 * c] = t.imag();
            eng.rows[2 * k + 1][2 * c + 1] = t.real();
        }
    eng.prepare();

    auto [status, sols] = detail::drive(eng, cfg);
    RecoveryResult res;
    res.status = status;
    res.nodes = eng.nodes;
    for (const auto& s : sols) {
        GaussianIntegerVector g(n);
        for (int k = 0; k < n; ++k) g[k] = GaussInt{s[k * 2], s[k * 2 + 1]};
        res.eps_solutions.push_back(std::move(g));
    }
    if (!sols.empty()) {
        res.residual = eng.residual_of(sols.front());
        // least-squares fit of the kept columns to z - eps (complex MGS)
        ComplexVector y(n);
        for (int k = 0; k < n; ++k)
            y[k] = z[k] - to_complex(res.eps_solutions.front()[k]);
        std::vector<ComplexVector> q = cols;
        std::vector<std::vector<Complex>> r(keep.size(), std::vector<Complex>(keep.size(), 0.0));
        for (size_t c = 0; c < q.size(); ++c) {
            for (size_t p = 0; p < c; ++p) {
                Complex a = 0;
                for (int k = 0; k < n; ++k) a += std::conj(q[p][k]) * q[c][k];
                r[p][c] = a;
                for (int k = 0; k < n; ++k) q[c][k] -= a * q[p][k];
            }
            double nn = 0;
            for (int k = 0; k < n; ++k) nn += std::norm(q[c][k]);
            r[c][c] = std::sqrt(nn);
            for (int k = 0; k < n; ++k) q[c][k] /= r[c][c];
        }
        std::vector<Complex> b(keep.size()), coef(keep.size());
        for (size_t c = 0; c < keep.size(); ++c) {
            b[c] = 0;
            for (int k = 0; k < n; ++k) b[c] += std::conj(q[c][k]) * y[k];
        }
        for (size_t c = keep.size(); c-- > 0;) {
            Complex s = b[c];
            for (size_t p = c + 1; p < keep.size(); ++p) s -= r[c][p] * coef[p];
            coef[c] = s / r[c][c];
        }
        res.s_hat.assign(n, 0.0);
        for (size_t c = 0; c < keep.size(); ++c) res.s_hat[keep[c]] = coef[c];
    }
    return res;
}

/// Convenience: run in enumerate_all mode.
inline RecoveryResult enumerate_solutions(const ComplexVector& z, const IndexSet& v,
                                          SolverConfig cfg = {}) {
    cfg.mode = SolverConfig::Mode::enumerate_all;
    return solve_integer_equations(z, v, cfg);
}

/// Recovery of the unfolded samples of a periodic bandlimited signal from
/// real folded samples: the fold vector is a real integer vector, the kept
/// rows are the contiguous DFT band {P+1..N-P-1}, and uniqueness is up to
/// an integer constant vector (DC ambiguity). Solutions are reported in the
/// canonical form eps - eps_0 * 1; `s_hat` carries the unfolded samples
/// z - eps (real, as complex with zero imaginary part).
inline RecoveryResult pbl_recover(const RealVector& z, int P, const SolverConfig& cfg = {}) {
    int n = static_cast<int>(z.size());
    if (P < 1) throw std::domain_error("pbl_recover: need P >= 1");
    if (n <= 2 * P + 1)
        throw std::domain_error("pbl_recover: N <= 2P+1 is unidentifiable regardless of V");
    for (double x : z)
        if (x < -0.5 - 1e-9 || x >= 0.5 + 1e-9)
            throw std::domain_error("pbl_recover: samples outside the fundamental modulo range");

    detail::FoldEngine eng;
    eng.d = n;
    eng.box = cfg.box_bound;
    eng.tol = cfg.residual_tol;
    eng.max_nodes = cfg.max_nodes;
    eng.zvec = z;
    // real trig basis of the PBL sample space: 1, cos, sin per harmonic
    eng.rows.assign(n, std::vector<double>(2 * P + 1));
    for (int k = 0; k < n; ++k) {
        eng.rows[k][0] = 1.0;
        for (int p = 1; p <= P; ++p) {
            eng.rows[k][2 * p - 1] = std::cos(2.0 * M_PI * p * k / n);
            eng.rows[k][2 * p] = std::sin(2.0 * M_PI * p * k / n);
        }
    }
    eng.lattice = detail::pbl_kernel_lattice(n, P);
    eng.has_lattice = true;
    eng.prepare();

    // Collect solutions grouped into DC-equivalence classes eps - eps_0 * 1.
    bool enumerate = cfg.mode == SolverConfig::Mode::enumerate_all;
    size_t want = enumerate ? static_cast<size_t>(cfg.solution_cap) : 2;
    std::vector<detail::IntVec> classes;
    detail::IntVec first;
    bool found = false;
    auto out = eng.search([&](const detail::IntVec& eps) {
        first = eps;
        found = true;
        return false;
    });
    double residual = 0.0;
    if (found) {
        residual = eng.residual_of(first);
        out = eng.walk(first, [&](const detail::IntVec& eps) {
            detail::IntVec canon(eps.size());
            for (size_t k = 0; k < eps.size(); ++k) canon[k] = eps[k] - eps[0];
            if (std::find(classes.begin(), classes.end(), canon) == classes.end())
                classes.push_back(std::move(canon));
            return classes.size() < want;
        });
        if (out == detail::FoldEngine::Outcome::stopped_by_visitor && classes.size() >= want)
            out = detail::FoldEngine::Outcome::exhausted;
    }

    std::sort(classes.begin(), classes.end());
    RecoveryResult res;
    res.nodes = eng.nodes;
    res.residual = residual;
    if (out == detail::FoldEngine::Outcome::budget)
        res.status = SolveStatus::budget_exhausted;
    else if (classes.empty())
        res.status = SolveStatus::infeasible;
    else
        res.status = classes.size() == 1 ? SolveStatus::unique_in_box : SolveStatus::multiple;
    for (const auto& c : classes) {
        GaussianIntegerVector g(n);
        for (int k = 0; k < n; ++k) g[k] = GaussInt{c[k], 0};
        res.eps_solutions.push_back(std::move(g));
    }
    if (!classes.empty()) {
        res.s_hat.resize(n);
        for (int k = 0; k < n; ++k)
            res.s_hat[k] = Complex(z[k] - static_cast<double>(classes.front()[k]), 0.0);
    }
    return res;
}

}  // namespace modfold
