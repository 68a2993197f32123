#pragma once

// Explicit convective step: cell-centred finite volumes with nodal
// Rusanov-type fluxes, plus the velocity-only CFL time step.
//
// Mass, momentum and energy are updated in flux form. A and J obey an
// advective law v·∇A; they use the same nodal flux v_k A minus a discrete
// A div v correction, so a uniform A is preserved for any velocity.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "gpr4/errors.hpp"
#include "gpr4/grid.hpp"
#include "gpr4/model.hpp"
#include "gpr4/operators.hpp"
#include "gpr4/state.hpp"

namespace gpr4 {

struct TimeStepPolicy {
    double cfl = 0.45;
    std::optional<double> dt_min;
    std::optional<double> dt_max;

    void validate() const {
        if (!(cfl > 0.0 && cfl <= 0.5)) throw ConfigError("cfl must be in (0, 0.5]");
        if (dt_min && !(*dt_min > 0.0)) throw ConfigError("dt_min must be positive");
        if (dt_max && !(*dt_max > 0.0)) throw ConfigError("dt_max must be positive");
        if (dt_min && dt_max && *dt_min > *dt_max) throw ConfigError("dt_min > dt_max");
    }
    static TimeStepPolicy fixed(double dt) {
        TimeStepPolicy p;
        p.dt_min = dt;
        p.dt_max = dt;
        return p;
    }
};

/// Bundle of cell quantities carried through the convective step. The
/// arithmetic lets the generic 4-point stencils act on all of them at once.
struct ConvVars {
    double rho = 0.0;
    Vec3 m{};
    double E = 0.0;
    Mat3 A{};
    Vec3 J{};

    ConvVars& operator+=(const ConvVars& o) {
        rho += o.rho;
        m += o.m;
        E += o.E;
        A += o.A;
        J += o.J;
        return *this;
    }
    ConvVars& operator-=(const ConvVars& o) {
        rho -= o.rho;
        m -= o.m;
        E -= o.E;
        A -= o.A;
        J -= o.J;
        return *this;
    }
    ConvVars& operator*=(double s) {
        rho *= s;
        m *= s;
        E *= s;
        A *= s;
        J *= s;
        return *this;
    }
    friend ConvVars operator+(ConvVars a, const ConvVars& b) { return a += b; }
    friend ConvVars operator-(ConvVars a, const ConvVars& b) { return a -= b; }
    friend ConvVars operator*(ConvVars a, double s) { return a *= s; }
};

/// Conserved cell values and the velocity of one (possibly ghost) cell.
struct CellSample {
    ConvVars q;
    Vec3 v;
    double e234;  // kinetic + elastic + thermal-impulse energy density
};

/// Physical flux of the convective subsystem in direction k. For A and J the
/// entry is v_k A and v_k J.
inline ConvVars physical_flux(const CellSample& c, int k) {
    const double vk = c.v[k];
    ConvVars f;
    f.rho = c.q.rho * vk;
    f.m = c.q.m * vk;
    f.E = c.e234 * vk;
    f.A = c.q.A * vk;
    f.J = c.q.J * vk;
    return f;
}

struct NodalFlux {
    ConvVars fx;
    ConvVars fy;
    Vec3 vbar;     // plain average of the cell velocities
    double smax;   // max |v^c| over the adjacent cells
};

/// Rusanov-type nodal flux from the four cells around a vertex, ordered
/// (c00, c10, c01, c11). f_k = mean(f_k^c) - ½ h s_max ∂_k q.
inline NodalFlux nodal_flux(const std::array<CellSample, 4>& c, const GridSpec& g) {
    NodalFlux out;
    out.smax = 0.0;
    std::array<ConvVars, 4> fx, fy, q;
    std::array<Vec3, 4> v;
    for (int k = 0; k < 4; ++k) {
        fx[k] = physical_flux(c[k], 0);
        fy[k] = physical_flux(c[k], 1);
        q[k] = c[k].q;
        v[k] = c[k].v;
        out.smax = std::max(out.smax, norm(c[k].v));
    }
    out.fx = mean4(fx);
    out.fy = mean4(fy);
    out.vbar = mean4(v);
    if (out.smax > 0.0) {
        const double nu = 0.5 * g.vertex_length() * out.smax;
        out.fx -= diff_x(q, g.dx) * nu;
        out.fy -= diff_y(q, g.dy) * nu;
    }
    return out;
}

namespace detail {

inline Field<CellSample, Loc::cell> cell_samples(const ConservedState& s, const GridSpec& g, const ModelParams& p) {
    const CellVector mc = avg_p2c(s.mom, g);
    Field<CellSample, Loc::cell> out(g);
    for (std::size_t k = 0; k < out.size(); ++k) {
        CellSample& c = out[k];
        c.q = {s.rho[k], mc[k], s.E[k], s.A[k], s.J[k]};
        c.v = mc[k] / s.rho[k];
        c.e234 = 0.5 * s.rho[k] * dot(c.v, c.v) + elastic_energy(s.rho[k], metric_of(s.A[k]), p) +
                 thermal_impulse_energy(s.rho[k], s.J[k], p);
    }
    return out;
}

/// Ghost rule for samples: velocity-like parts follow the wall closure, the
/// rest is copied.
struct SampleGhost {
    VelocityGhost vel;
    CellSample operator()(CellSample c, const GhostCell& gc) const {
        if (gc.cross_x == 0 && gc.cross_y == 0) return c;
        const Vec3 v = vel(c.v, gc);
        if (!(v == c.v)) {
            c.e234 += 0.5 * c.q.rho * (dot(v, v) - dot(c.v, c.v));
            c.v = v;
            c.q.m = v * c.q.rho;
        }
        return c;
    }
};

}  // namespace detail

/// Δt = CFL min_p h / s_max^p, clamped to [dt_min, dt_max].
inline double compute_dt(const ConservedState& s, const GridSpec& g, const TimeStepPolicy& tp) {
    tp.validate();
    require_state(s, g, "compute_dt");
    const CellVector v = cell_velocity(s.mom, s.rho, g);
    const VelocityGhost ghost{&g};
    double smax_all = 0.0;
    for (int j = 0; j < g.nvy(); ++j)
        for (int i = 0; i < g.nvx(); ++i) {
            const auto c = gather_cells(v, g, i, j, ghost);
            for (const auto& x : c) smax_all = std::max(smax_all, norm(x));
        }
    double dt;
    if (smax_all > 0.0) dt = tp.cfl * g.vertex_length() / smax_all;
    else if (tp.dt_max) dt = *tp.dt_max;
    else throw ConfigError("compute_dt: zero velocity everywhere and no dt_max given");
    if (tp.dt_max) dt = std::min(dt, *tp.dt_max);
    if (tp.dt_min) dt = std::max(dt, *tp.dt_min);
    return dt;
}

/// q* from qⁿ. Throws TimeStepFailure if a density becomes non-positive.
inline ConservedState convective_step(const ConservedState& s, double dt, const GridSpec& g, const ModelParams& p) {
    require_state(s, g, "convective_step");
    if (!(dt > 0.0)) throw DomainError("convective_step: dt must be positive");
    const auto samples = detail::cell_samples(s, g, p);
    const detail::SampleGhost ghost{{&g}};

    Field<ConvVars, Loc::vertex> fx(g), fy(g);
    VertexVector vbar(g);
    // Nothing crosses a wall. Mirrored ghosts already cancel the normal flux,
    // except at corners where the two walls disagree (lid next to a side wall).
    const bool wall_l = g.side(Side::left).is_wall(), wall_r = g.side(Side::right).is_wall();
    const bool wall_b = g.side(Side::bottom).is_wall(), wall_t = g.side(Side::top).is_wall();
    for (int j = 0; j < g.nvy(); ++j)
        for (int i = 0; i < g.nvx(); ++i) {
            NodalFlux f = nodal_flux(gather_cells(samples, g, i, j, ghost), g);
            if ((i == 0 && wall_l) || (i == g.nvx() - 1 && wall_r)) {
                f.fx = ConvVars{};
                f.vbar[0] = 0.0;
            }
            if ((j == 0 && wall_b) || (j == g.nvy() - 1 && wall_t)) {
                f.fy = ConvVars{};
                f.vbar[1] = 0.0;
            }
            fx(i, j) = f.fx;
            fy(i, j) = f.fy;
            vbar(i, j) = f.vbar;
        }
    const CellScalar divv = div_cp(vbar, g);

    ConservedState out = s;
    CellVector dm(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = g.cell_index(i, j);
            const ConvVars d = diff_x(gather_vertices(fx, g, i, j), g.dx) + diff_y(gather_vertices(fy, g, i, j), g.dy);
            out.rho[k] = s.rho[k] - dt * d.rho;
            out.E[k] = s.E[k] - dt * d.E;
            out.A[k] = s.A[k] - (d.A - s.A[k] * divv[k]) * dt;
            out.J[k] = s.J[k] - (d.J - s.J[k] * divv[k]) * dt;
            dm[k] = d.m * (-dt);
            if (!(out.rho[k] > 0.0))
                throw TimeStepFailure("convective step produced non-positive density at cell (" +
                                      std::to_string(i) + ", " + std::to_string(j) + ")");
        }
    // The momentum increment is formed on cells and carried back to the
    // vertices by averaging.
    out.mom += avg_c2p(dm, g);
    const VertexConstraints bc(g);
    bc.impose_momentum(out.mom, vertex_density(out.rho, g));
    return out;
}

}  // namespace gpr4
