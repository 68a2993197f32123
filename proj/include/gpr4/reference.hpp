#pragma once

// Reference solutions: exact Euler Riemann solver, Taylor–Green vortex,
// Stokes' first problem, a 1D cylindrical Euler solver for the explosion
// problems, and the Ghia et al. (1982) Re = 100 cavity centerlines.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gpr4/errors.hpp"

namespace gpr4 {

struct Primitive1D {
    double rho;
    double u;
    double p;
};

// ---------------------------------------------------------------------------
// Exact Riemann solver for the ideal-gas Euler equations (Toro, ch. 4).

namespace riemann_detail {

struct Wave {
    double rho, u, p, a;
};

/// Pressure function f_K(p) and its derivative.
inline std::pair<double, double> pressure_function(double p, const Wave& s, double gamma) {
    if (p > s.p) {
        const double A = 2.0 / ((gamma + 1.0) * s.rho);
        const double B = (gamma - 1.0) / (gamma + 1.0) * s.p;
        const double q = std::sqrt(A / (p + B));
        return {(p - s.p) * q, q * (1.0 - 0.5 * (p - s.p) / (p + B))};
    }
    const double pr = p / s.p;
    const double f = 2.0 * s.a / (gamma - 1.0) * (std::pow(pr, (gamma - 1.0) / (2.0 * gamma)) - 1.0);
    const double df = 1.0 / (s.rho * s.a) * std::pow(pr, -(gamma + 1.0) / (2.0 * gamma));
    return {f, df};
}

}  // namespace riemann_detail

struct StarState {
    double p;
    double u;
};

/// Star-region pressure and velocity by Newton iteration.
inline StarState riemann_star(const Primitive1D& L, const Primitive1D& R, double gamma) {
    using namespace riemann_detail;
    if (!(L.rho > 0 && R.rho > 0 && L.p > 0 && R.p > 0)) throw DomainError("riemann: rho and p must be positive");
    const Wave l{L.rho, L.u, L.p, std::sqrt(gamma * L.p / L.rho)};
    const Wave r{R.rho, R.u, R.p, std::sqrt(gamma * R.p / R.rho)};
    if (2.0 * (l.a + r.a) / (gamma - 1.0) <= r.u - l.u) throw DomainError("riemann: data generates vacuum");
    // two-rarefaction initial guess
    const double z = (gamma - 1.0) / (2.0 * gamma);
    double p = std::pow((l.a + r.a - 0.5 * (gamma - 1.0) * (r.u - l.u)) / (l.a / std::pow(l.p, z) + r.a / std::pow(r.p, z)),
                        1.0 / z);
    p = std::max(p, 1e-12);
    for (int it = 0; it < 100; ++it) {
        const auto [fl, dl] = pressure_function(p, l, gamma);
        const auto [fr, dr] = pressure_function(p, r, gamma);
        const double pn = std::max(p - (fl + fr + r.u - l.u) / (dl + dr), 1e-14);
        const double change = 2.0 * std::abs(pn - p) / (pn + p);
        p = pn;
        if (change < 1e-15) break;
    }
    const auto fl = pressure_function(p, l, gamma).first;
    const auto fr = pressure_function(p, r, gamma).first;
    return {p, 0.5 * (l.u + r.u) + 0.5 * (fr - fl)};
}

/// Self-similar solution sampled at ξ = x/t.
inline Primitive1D euler_exact_riemann(const Primitive1D& L, const Primitive1D& R, double gamma, double xi) {
    const StarState s = riemann_star(L, R, gamma);
    const double g1 = (gamma - 1.0) / (gamma + 1.0);
    if (xi <= s.u) {
        const double a = std::sqrt(gamma * L.p / L.rho);
        if (s.p > L.p) {
            const double pr = s.p / L.p;
            const double S = L.u - a * std::sqrt((gamma + 1.0) / (2.0 * gamma) * pr + (gamma - 1.0) / (2.0 * gamma));
            if (xi <= S) return L;
            return {L.rho * (pr + g1) / (pr * g1 + 1.0), s.u, s.p};
        }
        const double a_star = a * std::pow(s.p / L.p, (gamma - 1.0) / (2.0 * gamma));
        if (xi <= L.u - a) return L;
        if (xi >= s.u - a_star) return {L.rho * std::pow(s.p / L.p, 1.0 / gamma), s.u, s.p};
        const double c = 2.0 / (gamma + 1.0) + g1 / a * (L.u - xi);
        return {L.rho * std::pow(c, 2.0 / (gamma - 1.0)), 2.0 / (gamma + 1.0) * (a + 0.5 * (gamma - 1.0) * L.u + xi),
                L.p * std::pow(c, 2.0 * gamma / (gamma - 1.0))};
    }
    const double a = std::sqrt(gamma * R.p / R.rho);
    if (s.p > R.p) {
        const double pr = s.p / R.p;
        const double S = R.u + a * std::sqrt((gamma + 1.0) / (2.0 * gamma) * pr + (gamma - 1.0) / (2.0 * gamma));
        if (xi >= S) return R;
        return {R.rho * (pr + g1) / (pr * g1 + 1.0), s.u, s.p};
    }
    const double a_star = a * std::pow(s.p / R.p, (gamma - 1.0) / (2.0 * gamma));
    if (xi >= R.u + a) return R;
    if (xi <= s.u + a_star) return {R.rho * std::pow(s.p / R.p, 1.0 / gamma), s.u, s.p};
    const double c = 2.0 / (gamma + 1.0) - g1 / a * (R.u - xi);
    return {R.rho * std::pow(c, 2.0 / (gamma - 1.0)), 2.0 / (gamma + 1.0) * (-a + 0.5 * (gamma - 1.0) * R.u + xi),
            R.p * std::pow(c, 2.0 * gamma / (gamma - 1.0))};
}

// ---------------------------------------------------------------------------

struct TaylorGreenSample {
    double rho, u, v, p;
};

inline TaylorGreenSample taylor_green_exact(double x, double y, double t, double nu, double rho0, double p0) {
    const double f = std::exp(-2.0 * nu * t);
    return {rho0, std::sin(x) * std::cos(y) * f, -std::cos(x) * std::sin(y) * f,
            p0 + 0.25 * (std::cos(2.0 * x) + std::cos(2.0 * y)) * f * f};
}

/// v0 erf(x / (2 sqrt(ν t)))
inline double stokes_first_problem(double x, double t, double nu, double v0) {
    if (!(t > 0.0)) throw DomainError("stokes_first_problem: t must be positive");
    if (!(nu > 0.0)) throw DomainError("stokes_first_problem: nu must be positive");
    return v0 * std::erf(x / (2.0 * std::sqrt(nu * t)));
}

// ---------------------------------------------------------------------------
// Cylindrical Euler reference: MUSCL-Hancock, minmod limiting, HLLC flux.
// The update is area weighted, so the only source is the pressure term
// p dA/dr in the radial momentum and total mass is conserved exactly.

struct RadialProfile {
    std::vector<double> r;
    std::vector<double> rho;
    std::vector<double> u;
    std::vector<double> p;
    double mass = 0.0;  // Σ ρ V (per radian)
};

namespace radial_detail {

struct Cons {
    double m, mu, e;
};

inline Cons to_cons(const Primitive1D& w, double gamma) {
    return {w.rho, w.rho * w.u, w.p / (gamma - 1.0) + 0.5 * w.rho * w.u * w.u};
}
inline Primitive1D to_prim(const Cons& c, double gamma) {
    const double u = c.mu / c.m;
    return {c.m, u, (gamma - 1.0) * (c.e - 0.5 * c.m * u * u)};
}
inline Cons flux(const Primitive1D& w, double gamma) {
    const double E = w.p / (gamma - 1.0) + 0.5 * w.rho * w.u * w.u;
    return {w.rho * w.u, w.rho * w.u * w.u + w.p, w.u * (E + w.p)};
}

inline Cons hllc(const Primitive1D& L, const Primitive1D& R, double gamma) {
    const double aL = std::sqrt(gamma * L.p / L.rho), aR = std::sqrt(gamma * R.p / R.rho);
    const double SL = std::min(L.u - aL, R.u - aR), SR = std::max(L.u + aL, R.u + aR);
    const Cons FL = flux(L, gamma), FR = flux(R, gamma);
    if (SL >= 0.0) return FL;
    if (SR <= 0.0) return FR;
    const double Ss = (R.p - L.p + L.rho * L.u * (SL - L.u) - R.rho * R.u * (SR - R.u)) /
                      (L.rho * (SL - L.u) - R.rho * (SR - R.u));
    auto star = [&](const Primitive1D& w, double S) {
        const Cons U = to_cons(w, gamma);
        const double f = w.rho * (S - w.u) / (S - Ss);
        return Cons{f, f * Ss, f * (U.e / w.rho + (Ss - w.u) * (Ss + w.p / (w.rho * (S - w.u))))};
    };
    if (Ss >= 0.0) {
        const Cons Us = star(L, SL), UL = to_cons(L, gamma);
        return {FL.m + SL * (Us.m - UL.m), FL.mu + SL * (Us.mu - UL.mu), FL.e + SL * (Us.e - UL.e)};
    }
    const Cons Us = star(R, SR), UR = to_cons(R, gamma);
    return {FR.m + SR * (Us.m - UR.m), FR.mu + SR * (Us.mu - UR.mu), FR.e + SR * (Us.e - UR.e)};
}

inline double minmod(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return std::abs(a) < std::abs(b) ? a : b;
}

}  // namespace radial_detail

/// Radial solver on [0, r_max] with n cells, reflective axis and transmissive
/// outer end, started from a discontinuity at radius R.
inline RadialProfile radial_euler_solve(const std::vector<Primitive1D>& init, double r_max, double gamma,
                                        double t_final, double cfl = 0.8) {
    using namespace radial_detail;
    const int n = static_cast<int>(init.size());
    if (n < 2) throw DimensionError("radial solver needs at least 2 cells");
    const double dr = r_max / n;
    std::vector<double> rc(n), vol(n), af(n + 1);
    for (int i = 0; i <= n; ++i) af[i] = i * dr;
    for (int i = 0; i < n; ++i) {
        rc[i] = (i + 0.5) * dr;
        vol[i] = 0.5 * (af[i + 1] * af[i + 1] - af[i] * af[i]);
    }
    std::vector<Cons> U(n);
    for (int i = 0; i < n; ++i) U[i] = to_cons(init[i], gamma);

    double t = 0.0;
    std::vector<Primitive1D> W(n), WL(n), WR(n);
    std::vector<Cons> F(n + 1);
    while (t < t_final) {
        double smax = 0.0;
        for (int i = 0; i < n; ++i) {
            W[i] = to_prim(U[i], gamma);
            if (!(W[i].rho > 0.0 && W[i].p > 0.0)) throw StateError("radial solver: non-physical state");
            smax = std::max(smax, std::abs(W[i].u) + std::sqrt(gamma * W[i].p / W[i].rho));
        }
        double dt = cfl * dr / smax;
        if (t + dt > t_final) dt = t_final - t;

        // limited slopes and half-step prediction of the face states
        for (int i = 0; i < n; ++i) {
            const Primitive1D& wm = i > 0 ? W[i - 1] : Primitive1D{W[0].rho, -W[0].u, W[0].p};
            const Primitive1D& wp = i < n - 1 ? W[i + 1] : W[n - 1];
            const double drho = minmod(W[i].rho - wm.rho, wp.rho - W[i].rho);
            const double du = minmod(W[i].u - wm.u, wp.u - W[i].u);
            const double dp = minmod(W[i].p - wm.p, wp.p - W[i].p);
            const Primitive1D l{W[i].rho - 0.5 * drho, W[i].u - 0.5 * du, W[i].p - 0.5 * dp};
            const Primitive1D r{W[i].rho + 0.5 * drho, W[i].u + 0.5 * du, W[i].p + 0.5 * dp};
            const Cons fl = flux(l, gamma), fr = flux(r, gamma);
            // geometric source of the non-conservative radial form, −(1/r)(ρu, ρu², u(E+p))
            const Cons ui = U[i];
            const double E = ui.e;
            const Cons src{-W[i].rho * W[i].u / rc[i], -W[i].rho * W[i].u * W[i].u / rc[i], -W[i].u * (E + W[i].p) / rc[i]};
            const double h = 0.5 * dt / dr;
            Cons cl = to_cons(l, gamma), cr = to_cons(r, gamma);
            const Cons d{h * (fl.m - fr.m) + 0.5 * dt * src.m, h * (fl.mu - fr.mu) + 0.5 * dt * src.mu,
                         h * (fl.e - fr.e) + 0.5 * dt * src.e};
            cl = {cl.m + d.m, cl.mu + d.mu, cl.e + d.e};
            cr = {cr.m + d.m, cr.mu + d.mu, cr.e + d.e};
            WL[i] = to_prim(cl, gamma);
            WR[i] = to_prim(cr, gamma);
        }
        for (int f = 1; f < n; ++f) F[f] = hllc(WR[f - 1], WL[f], gamma);
        F[0] = hllc(Primitive1D{WL[0].rho, -WL[0].u, WL[0].p}, WL[0], gamma);
        F[n] = hllc(WR[n - 1], WR[n - 1], gamma);
        for (int i = 0; i < n; ++i) {
            // pressure source p dA/dr with the cell-averaged predicted pressure
            const double pmid = 0.5 * (WL[i].p + WR[i].p);
            const double k = dt / vol[i];
            U[i].m -= k * (af[i + 1] * F[i + 1].m - af[i] * F[i].m);
            U[i].mu -= k * (af[i + 1] * F[i + 1].mu - af[i] * F[i].mu) - k * pmid * (af[i + 1] - af[i]);
            U[i].e -= k * (af[i + 1] * F[i + 1].e - af[i] * F[i].e);
        }
        t += dt;
    }
    RadialProfile out;
    for (int i = 0; i < n; ++i) {
        const Primitive1D w = to_prim(U[i], gamma);
        out.r.push_back(rc[i]);
        out.rho.push_back(w.rho);
        out.u.push_back(w.u);
        out.p.push_back(w.p);
        out.mass += U[i].m * vol[i];
    }
    return out;
}

/// Explosion reference: inner state for r < R, outer state beyond.
inline RadialProfile radial_explosion_reference(const Primitive1D& inner, const Primitive1D& outer, double R,
                                                double gamma, double t_final, int n_cells, double r_max = 1.5) {
    if (n_cells < 1000) throw DimensionError("radial reference needs at least 1000 cells");
    std::vector<Primitive1D> init(n_cells);
    const double dr = r_max / n_cells;
    for (int i = 0; i < n_cells; ++i) init[i] = (i + 0.5) * dr < R ? inner : outer;
    if (t_final <= 0.0) {
        RadialProfile out;
        for (int i = 0; i < n_cells; ++i) {
            out.r.push_back((i + 0.5) * dr);
            out.rho.push_back(init[i].rho);
            out.u.push_back(init[i].u);
            out.p.push_back(init[i].p);
        }
        return out;
    }
    return radial_euler_solve(init, r_max, gamma, t_final);
}

/// Linear interpolation in a profile sampled at increasing abscissae.
inline double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at) {
    if (at <= x.front()) return y.front();
    if (at >= x.back()) return y.back();
    const auto it = std::upper_bound(x.begin(), x.end(), at);
    const std::size_t j = static_cast<std::size_t>(it - x.begin());
    const double w = (at - x[j - 1]) / (x[j] - x[j - 1]);
    return (1.0 - w) * y[j - 1] + w * y[j];
}

// ---------------------------------------------------------------------------
// Ghia, Ghia & Shin (1982), Re = 100. u along the vertical centreline and
// v along the horizontal centreline, both in increasing coordinate.

struct CenterlineTable {
    std::vector<double> y, u;  // vertical centreline x = 0.5
    std::vector<double> x, v;  // horizontal centreline y = 0.5
};

inline CenterlineTable ghia_centerlines() {
    CenterlineTable t;
    t.y = {0.0, 0.0547, 0.0625, 0.0703, 0.1016, 0.1719, 0.2813, 0.4531, 0.5,
           0.6172, 0.7344, 0.8516, 0.9531, 0.9609, 0.9688, 0.9766, 1.0};
    t.u = {0.0, -0.03717, -0.04192, -0.04775, -0.06434, -0.10150, -0.15662, -0.21090, -0.20581,
           -0.13641, 0.00332, 0.23151, 0.68717, 0.73722, 0.78871, 0.84123, 1.0};
    t.x = {0.0, 0.0625, 0.0703, 0.0781, 0.0938, 0.1563, 0.2266, 0.2344, 0.5,
           0.8047, 0.8594, 0.9063, 0.9453, 0.9531, 0.9609, 0.9688, 1.0};
    t.v = {0.0, 0.09233, 0.10091, 0.10890, 0.12317, 0.16077, 0.17507, 0.17527, 0.05454,
           -0.24533, -0.22445, -0.16914, -0.10313, -0.08864, -0.07391, -0.05906, 0.0};
    return t;
}

/// Read the same table from CSV (lines "u,<y>,<u>" and "v,<x>,<v>"; '#'
/// starts a comment).
inline CenterlineTable load_centerlines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open centreline file: " + path);
    CenterlineTable t;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            header = true;
            continue;
        }
        std::stringstream ss(line);
        std::string kind, a, b;
        std::getline(ss, kind, ',');
        std::getline(ss, a, ',');
        std::getline(ss, b, ',');
        if (kind == "u") {
            t.y.push_back(std::stod(a));
            t.u.push_back(std::stod(b));
        } else if (kind == "v") {
            t.x.push_back(std::stod(a));
            t.v.push_back(std::stod(b));
        } else {
            throw ConfigError("centreline file: unknown row kind '" + kind + "'");
        }
    }
    return t;
}

}  // namespace gpr4
