#pragma once

// Matrix-free Krylov solvers: conjugate gradients, BiCGSTAB and restarted
// GMRES. They work on grid fields and on plain std::vector<double>.
//
// Convergence is ‖L x - b‖₂ ≤ rel_tol ‖b‖₂. A zero right-hand side returns
// the zero vector without iterating.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include "gpr4/errors.hpp"
#include "gpr4/grid.hpp"

namespace gpr4 {

struct KrylovConfig {
    double rel_tol = 1e-10;
    int max_iter = 0;  // 0 selects 10 (nx + ny) for grid fields, 10 n for vectors
    bool deterministic = true;
    int restart = 40;  // GMRES subspace size

    void validate() const {
        if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw ConfigError("solver rel_tol must be in (0, 1)");
        if (max_iter < 0) throw ConfigError("solver max_iter must be >= 1");
        if (restart < 2) throw ConfigError("GMRES restart must be >= 2");
    }
};

template <class V>
struct SolveResult {
    V x;
    int iterations = 0;
    double residual = 0.0;  // final ‖r‖ / ‖b‖
    std::string method;
};

template <class V>
using LinearOperator = std::function<V(const V&)>;

// --- vector-space plumbing ---------------------------------------------------

namespace kdetail {

inline double sum_products(const double* a, const double* b, std::size_t n, bool deterministic) {
    if (deterministic) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
        return s;
    }
    return std::transform_reduce(a, a + n, b, 0.0);
}

template <class T>
constexpr std::size_t width() {
    if constexpr (std::is_same_v<T, double>) return 1;
    else if constexpr (std::is_same_v<T, Vec3>) return 3;
    else return 9;
}

template <class T>
const double* raw(const T* p) {
    if constexpr (std::is_same_v<T, double>) return p;
    else if constexpr (std::is_same_v<T, Vec3>) return p->v.data();
    else return p->m.data();
}

}  // namespace kdetail

inline double kdot(const std::vector<double>& a, const std::vector<double>& b, bool det) {
    return kdetail::sum_products(a.data(), b.data(), a.size(), det);
}
inline void kaxpy(std::vector<double>& y, double a, const std::vector<double>& x) {
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += a * x[k];
}
inline void kscale(std::vector<double>& y, double a) {
    for (auto& v : y) v *= a;
}
inline std::vector<double> kzero_like(const std::vector<double>& x) { return std::vector<double>(x.size(), 0.0); }
inline std::size_t kdim(const std::vector<double>& x) { return x.size(); }

template <class T, Loc L>
double kdot(const Field<T, L>& a, const Field<T, L>& b, bool det) {
    static_assert(sizeof(T) == kdetail::width<T>() * sizeof(double));
    return kdetail::sum_products(kdetail::raw(a.values().data()), kdetail::raw(b.values().data()),
                                 a.size() * kdetail::width<T>(), det);
}
template <class T, Loc L>
void kaxpy(Field<T, L>& y, double a, const Field<T, L>& x) {
    y.axpy(a, x);
}
template <class T, Loc L>
void kscale(Field<T, L>& y, double a) {
    y *= a;
}
template <class T, Loc L>
Field<T, L> kzero_like(const Field<T, L>& x) {
    Field<T, L> z = x;
    for (auto& v : z) v = T{};
    return z;
}
template <class T, Loc L>
std::size_t kdim(const Field<T, L>& x) {
    return x.size() * kdetail::width<T>();
}

/// Flatten a field to its component vector and back; used by dense oracles.
template <class T, Loc L>
std::vector<double> flatten(const Field<T, L>& f) {
    const double* p = kdetail::raw(f.values().data());
    return std::vector<double>(p, p + kdim(f));
}
template <class T, Loc L>
void unflatten(const std::vector<double>& x, Field<T, L>& f) {
    if (x.size() != kdim(f)) throw DimensionError("unflatten: size mismatch");
    double* p = const_cast<double*>(kdetail::raw(f.values().data()));
    std::copy(x.begin(), x.end(), p);
}

/// Fill with uniform random numbers in [-1, 1].
template <class V>
void fill_random(V& x, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    if constexpr (std::is_same_v<V, std::vector<double>>) {
        for (auto& v : x) v = u(rng);
    } else {
        std::vector<double> f(kdim(x));
        for (auto& v : f) v = u(rng);
        unflatten(f, x);
    }
}

namespace kdetail {

template <class V>
int default_iters(const V& x, const KrylovConfig& cfg) {
    if (cfg.max_iter > 0) return cfg.max_iter;
    return static_cast<int>(std::max<std::size_t>(10 * kdim(x), 10));
}

template <class V>
V residual(const LinearOperator<V>& L, const V& b, const V& x) {
    V r = b;
    kaxpy(r, -1.0, L(x));
    return r;
}

}  // namespace kdetail

// --- conjugate gradients -------------------------------------------------------

template <class V>
SolveResult<V> cg_solve(const LinearOperator<V>& L, const V& b, const V& x0, const KrylovConfig& cfg,
                        int max_iter = 0) {
    cfg.validate();
    const bool det = cfg.deterministic;
    const int cap = max_iter > 0 ? max_iter : kdetail::default_iters(b, cfg);
    const double bnorm = std::sqrt(kdot(b, b, det));
    if (bnorm <= 1e-300) return {kzero_like(b), 0, 0.0, "cg"};

    V x = x0;
    V r = kdetail::residual(L, b, x);
    double rr = kdot(r, r, det);
    if (std::sqrt(rr) <= cfg.rel_tol * bnorm) return {x, 0, std::sqrt(rr) / bnorm, "cg"};
    V p = r;
    for (int it = 1; it <= cap; ++it) {
        const V Lp = L(p);
        const double curv = kdot(p, Lp, det);
        if (!(curv > 0.0)) throw SolverError("cg: operator is not positive definite", it, std::sqrt(rr) / bnorm);
        const double alpha = rr / curv;
        kaxpy(x, alpha, p);
        kaxpy(r, -alpha, Lp);
        const double rr_new = kdot(r, r, det);
        if (std::sqrt(rr_new) <= cfg.rel_tol * bnorm) return {x, it, std::sqrt(rr_new) / bnorm, "cg"};
        kscale(p, rr_new / rr);
        kaxpy(p, 1.0, r);
        rr = rr_new;
    }
    throw SolverError("cg: no convergence within " + std::to_string(cap) + " iterations", cap,
                      std::sqrt(rr) / bnorm);
}

// --- BiCGSTAB -----------------------------------------------------------------

template <class V>
SolveResult<V> bicgstab_solve(const LinearOperator<V>& L, const V& b, const V& x0, const KrylovConfig& cfg,
                              int max_iter = 0) {
    cfg.validate();
    const bool det = cfg.deterministic;
    const int cap = max_iter > 0 ? max_iter : kdetail::default_iters(b, cfg);
    const double bnorm = std::sqrt(kdot(b, b, det));
    if (bnorm <= 1e-300) return {kzero_like(b), 0, 0.0, "bicgstab"};

    V x = x0;
    V r = kdetail::residual(L, b, x);
    double rnorm = std::sqrt(kdot(r, r, det));
    if (rnorm <= cfg.rel_tol * bnorm) return {x, 0, rnorm / bnorm, "bicgstab"};
    const V rhat = r;
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    V v = kzero_like(b);
    V p = kzero_like(b);
    const double tiny = 1e-300;
    const double rhat_norm = rnorm;
    for (int it = 1; it <= cap; ++it) {
        const double rho_new = kdot(rhat, r, det);
        if (std::abs(rho_new) <= 1e-30 * rhat_norm * rnorm) throw SolverError("bicgstab: breakdown (rho = 0)", it, rnorm / bnorm);
        const double beta = (rho_new / rho) * (alpha / omega);
        // p = r + beta (p - omega v)
        kaxpy(p, -omega, v);
        kscale(p, beta);
        kaxpy(p, 1.0, r);
        v = L(p);
        const double rv = kdot(rhat, v, det);
        if (std::abs(rv) <= 1e-30 * rhat_norm * std::sqrt(kdot(v, v, det))) throw SolverError("bicgstab: breakdown (rhat.v = 0)", it, rnorm / bnorm);
        alpha = rho_new / rv;
        V s = r;
        kaxpy(s, -alpha, v);
        const double snorm = std::sqrt(kdot(s, s, det));
        if (snorm <= cfg.rel_tol * bnorm) {
            kaxpy(x, alpha, p);
            return {x, it, snorm / bnorm, "bicgstab"};
        }
        const V t = L(s);
        const double tt = kdot(t, t, det);
        if (tt < tiny) throw SolverError("bicgstab: breakdown (t = 0)", it, snorm / bnorm);
        omega = kdot(t, s, det) / tt;
        kaxpy(x, alpha, p);
        kaxpy(x, omega, s);
        r = s;
        kaxpy(r, -omega, t);
        rnorm = std::sqrt(kdot(r, r, det));
        if (!std::isfinite(rnorm)) throw SolverError("bicgstab: non-finite residual", it, rnorm);
        if (rnorm <= cfg.rel_tol * bnorm) return {x, it, rnorm / bnorm, "bicgstab"};
        if (omega == 0.0) throw SolverError("bicgstab: stagnation (omega = 0)", it, rnorm / bnorm);
        rho = rho_new;
    }
    throw SolverError("bicgstab: no convergence within " + std::to_string(cap) + " iterations", cap, rnorm / bnorm);
}

// --- restarted GMRES ----------------------------------------------------------

template <class V>
SolveResult<V> gmres_solve(const LinearOperator<V>& L, const V& b, const V& x0, const KrylovConfig& cfg,
                           int max_iter = 0) {
    cfg.validate();
    const bool det = cfg.deterministic;
    const int cap = max_iter > 0 ? max_iter : kdetail::default_iters(b, cfg);
    const double bnorm = std::sqrt(kdot(b, b, det));
    if (bnorm <= 1e-300) return {kzero_like(b), 0, 0.0, "gmres"};
    const int m = cfg.restart;

    V x = x0;
    int total = 0;
    double rel = 0.0;
    while (true) {
        V r = kdetail::residual(L, b, x);
        const double beta = std::sqrt(kdot(r, r, det));
        rel = beta / bnorm;
        if (beta <= cfg.rel_tol * bnorm) return {x, total, rel, "gmres"};
        if (total >= cap) break;

        std::vector<V> basis;
        basis.reserve(m + 1);
        kscale(r, 1.0 / beta);
        basis.push_back(std::move(r));
        std::vector<std::vector<double>> h(m + 1, std::vector<double>(m, 0.0));
        std::vector<double> cs(m), sn(m), g(m + 1, 0.0);
        g[0] = beta;
        int k = 0;
        for (; k < m && total < cap; ++k) {
            ++total;
            V w = L(basis[k]);
            for (int i = 0; i <= k; ++i) {  // modified Gram-Schmidt
                h[i][k] = kdot(w, basis[i], det);
                kaxpy(w, -h[i][k], basis[i]);
            }
            h[k + 1][k] = std::sqrt(kdot(w, w, det));
            for (int i = 0; i < k; ++i) {
                const double t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            const double d = std::hypot(h[k][k], h[k + 1][k]);
            if (d == 0.0) throw SolverError("gmres: breakdown", total, rel);
            cs[k] = h[k][k] / d;
            sn[k] = h[k + 1][k] / d;
            const double hk1 = h[k + 1][k];
            h[k][k] = d;
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k] * g[k];
            rel = std::abs(g[k + 1]) / bnorm;
            if (rel <= cfg.rel_tol || hk1 == 0.0) {
                ++k;
                break;
            }
            kscale(w, 1.0 / hk1);
            basis.push_back(std::move(w));
        }
        // back substitution for the k x k upper triangular system
        std::vector<double> y(k, 0.0);
        for (int i = k - 1; i >= 0; --i) {
            double s = g[i];
            for (int j = i + 1; j < k; ++j) s -= h[i][j] * y[j];
            y[i] = s / h[i][i];
        }
        for (int i = 0; i < k; ++i) kaxpy(x, y[i], basis[i]);
    }
    throw SolverError("gmres: no convergence within " + std::to_string(cap) + " iterations", total, rel);
}

// --- selection ----------------------------------------------------------------

/// Symmetry defect |<Lx, y> - <x, Ly>| / (|Lx| |y| + |x| |Ly|) on random
/// probes. The Cauchy-Schwarz scale keeps the measure meaningful when <Lx, y>
/// happens to be close to zero.
template <class V>
double symmetry_defect(const LinearOperator<V>& L, const V& like, int probes = 2, unsigned seed = 12345) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int k = 0; k < probes; ++k) {
        V x = like, y = like;
        fill_random(x, rng);
        fill_random(y, rng);
        const V Lx = L(x), Ly = L(y);
        const double a = kdot(Lx, y, true);
        const double c = kdot(x, Ly, true);
        const double scale = std::sqrt(kdot(Lx, Lx, true) * kdot(y, y, true)) +
                             std::sqrt(kdot(x, x, true) * kdot(Ly, Ly, true));
        worst = std::max(worst, scale > 0.0 ? std::abs(a - c) / scale : 0.0);
    }
    return worst;
}

enum class SolverChoice { cg, bicgstab, automatic };

/// CG when the operator is known (or probed) to be symmetric, otherwise
/// BiCGSTAB with GMRES as fallback on breakdown or stagnation.
template <class V>
SolveResult<V> solve_linear(const LinearOperator<V>& L, const V& b, const V& x0, const KrylovConfig& cfg,
                            SolverChoice choice) {
    if (choice == SolverChoice::automatic)
        choice = symmetry_defect(L, b) <= 1e-12 ? SolverChoice::cg : SolverChoice::bicgstab;
    if (choice == SolverChoice::cg) {
        try {
            return cg_solve(L, b, x0, cfg);
        } catch (const SolverError&) {
            // fall through to the general solvers
        }
    }
    try {
        return bicgstab_solve(L, b, x0, cfg);
    } catch (const SolverError&) {
        return gmres_solve(L, b, x0, cfg);
    }
}

}  // namespace gpr4
