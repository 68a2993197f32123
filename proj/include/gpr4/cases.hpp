#pragma once

// Benchmark case library. Every case starts from A = I and J = 0; the
// temperature follows from (ρ, p) through the ideal-gas law.

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "gpr4/convective.hpp"
#include "gpr4/driver.hpp"
#include "gpr4/errors.hpp"
#include "gpr4/grid.hpp"
#include "gpr4/model.hpp"
#include "gpr4/state.hpp"

namespace gpr4 {

struct InitialPoint {
    double rho;
    Vec3 v;
    double p;
};

using InitialCondition = std::function<InitialPoint(double x, double y)>;

struct CaseSpec {
    std::string name;
    std::string description;
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    int nx = 2, ny = 2;
    std::array<Boundary, 4> bc{};  // left, right, bottom, top
    ModelParams params;
    InitialCondition init;
    double t_end = 0.0;
    double output_interval = 0.0;  // simulated time between snapshots, 0 = end only
    TimeStepPolicy time_step;
    SolverSettings solver;
    int max_steps = 1000000;
    bool curl_series = false;
    bool conservation = true;
    std::optional<double> cut_y;  // y of the 1D cut, default mid-domain

    void validate() const {
        if (!(t_end > 0.0)) throw ConfigError(name + ": t_end must be positive");
        if (nx < 2 || ny < 2) throw ConfigError(name + ": grid sizes must be >= 2");
        if (!(x1 > x0) || !(y1 > y0)) throw ConfigError(name + ": empty domain");
        if (output_interval < 0.0) throw ConfigError(name + ": output_interval must be >= 0");
        if (!init) throw ConfigError(name + ": missing initial condition");
        params.validate();
        time_step.validate();
        solver.validate();
    }

    GridSpec grid() const {
        GridSpec g = GridSpec::box(nx, ny, x0, x1, y0, y1, bc[0], bc[2]);
        g.sides = bc;
        g.validate();
        return g;
    }
};

/// Build the conserved state: ρ and p at cell centres, v sampled at the
/// vertex positions, ρv = ρ^p v, and E composed with the cell velocity that
/// temperature extraction will see.
inline ConservedState initial_state(const CaseSpec& c, const GridSpec& g) {
    ConservedState s(g);
    CellScalar pr(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const InitialPoint q = c.init(g.xc(i), g.yc(j));
            if (!(q.rho > 0.0) || !(q.p > 0.0)) throw ConfigError(c.name + ": initial ρ and p must be positive");
            s.rho(i, j) = q.rho;
            pr(i, j) = q.p;
        }
    const VertexScalar rho_p = vertex_density(s.rho, g);
    for (int j = 0; j < g.nvy(); ++j)
        for (int i = 0; i < g.nvx(); ++i) s.mom(i, j) = c.init(g.xv(i), g.yv(j)).v * rho_p(i, j);
    VertexConstraints(g).impose_momentum(s.mom, rho_p);
    const CellVector vc = cell_velocity(s.mom, s.rho, g);
    const ModelParams& p = c.params;
    for (std::size_t k = 0; k < s.E.size(); ++k) {
        const double T = eos_temperature(s.rho[k], pr[k], p);
        s.E[k] = energy_compose(s.rho[k], vc[k], Mat3::identity(), Vec3{}, T, p);
    }
    return s;
}

inline ConservedState initial_state(const CaseSpec& c) { return initial_state(c, c.grid()); }

/// Overrides from the command line or a config file. Fields left empty keep
/// the case defaults.
struct CaseOverrides {
    std::optional<int> nx, ny;
    std::optional<double> t_end, cfl, dt, dt_min, dt_max, output_interval;
    std::optional<double> gamma, cv, cs, ch, rho0, tau1, tau2, mu;
    std::optional<double> p0;  // Taylor–Green background pressure
    std::optional<double> rel_tol;
    std::optional<int> max_iter, max_steps;
    std::optional<bool> deterministic, rescale_det;
    std::optional<double> cut_y;
};

namespace cases {

inline CaseSpec base(const std::string& name, const std::string& desc) {
    CaseSpec c;
    c.name = name;
    c.description = desc;
    return c;
}

/// Periodic Taylor–Green vortex on [0, 2π]².
inline CaseSpec taylor_green(int n = 64, double p0 = 1e5) {
    CaseSpec c = base("taylor_green", "Taylor-Green vortex at low Mach number, periodic [0,2pi]^2");
    c.x1 = c.y1 = 2.0 * std::numbers::pi;
    c.nx = c.ny = n;
    c.bc = {Boundary::periodic(), Boundary::periodic(), Boundary::periodic(), Boundary::periodic()};
    c.params = {1.4, 1004.0 / 1.4, 1000.0, 100.0, 1.0, 1e-8, 1e-10};
    c.init = [p0](double x, double y) {
        return InitialPoint{1.0,
                            {std::sin(x) * std::cos(y), -std::cos(x) * std::sin(y), 0.0},
                            p0 + 0.25 * (std::cos(2.0 * x) + std::cos(2.0 * y))};
    };
    c.t_end = 0.1;
    return c;
}

/// 1D Riemann problem on [-½, ½] run as a strip of nx × ny cells with square
/// cells, transmissive in x and periodic in y.
inline CaseSpec riemann_strip(const std::string& name, const std::string& desc, InitialPoint L, InitialPoint R,
                              ModelParams p, double t_end, int nx = 200, int ny = 4) {
    CaseSpec c = base(name, desc);
    c.x0 = -0.5;
    c.x1 = 0.5;
    c.nx = nx;
    c.ny = ny;
    c.y0 = 0.0;
    c.y1 = ny * (c.x1 - c.x0) / nx;
    c.bc = {Boundary::transmissive(), Boundary::transmissive(), Boundary::periodic(), Boundary::periodic()};
    c.params = p;
    c.init = [L, R](double x, double) { return x < 0.0 ? L : R; };
    c.t_end = t_end;
    // The flow starts from rest in most problems; cap Δt at a unit velocity scale.
    c.time_step.dt_max = c.time_step.cfl * (c.x1 - c.x0) / nx;
    return c;
}

inline ModelParams fluid_riemann_params() { return {1.4, 1.0, 100.0, 10.0, 1.0, 1e-10, 1e-12}; }

inline CaseSpec rp1(int nx = 200, int ny = 4) {
    return riemann_strip("rp1", "Sod shock tube, stiff relaxation limit", {1.0, {}, 1.0}, {0.125, {}, 0.1},
                         fluid_riemann_params(), 0.2, nx, ny);
}
inline CaseSpec rp2(int nx = 200, int ny = 4) {
    return riemann_strip("rp2", "Lax shock tube, stiff relaxation limit", {0.445, {0.698, 0.0, 0.0}, 3.528},
                         {0.5, {}, 0.571}, fluid_riemann_params(), 0.14, nx, ny);
}
inline CaseSpec rp3(int nx = 200, int ny = 4) {
    return riemann_strip("rp3", "Riemann problem in the solid limit (tau = 1e20)", {1.0, {0.0, -0.2, 0.0}, 1.0},
                         {0.5, {0.0, 0.2, 0.0}, 0.5}, {1.4, 1.0, 1.0, 1.0, 1.0, 1e20, 1e20}, 0.2, nx, ny);
}
inline CaseSpec rp4(int nx = 200, int ny = 4) {
    return riemann_strip("rp4", "Shear Riemann problem, stiff relaxation limit", {1.0, {0.0, -0.2, 0.0}, 1.0},
                         {0.5, {0.0, 0.2, 0.0}, 0.5}, {1.4, 1.0, 1.0, 1.0, 1.0, 1e-10, 1e-12}, 0.2, nx, ny);
}

/// Shear layer on [-1, 1] as a strip; v₂ = ±v₀ across x = 0.
inline CaseSpec shear_layer(int nx = 200, int ny = 4, double mu = 1e-2) {
    CaseSpec c = base("shear_layer", "Simple shear layer, Navier-Stokes limit (Stokes first problem)");
    c.x0 = -1.0;
    c.x1 = 1.0;
    c.nx = nx;
    c.ny = ny;
    c.y1 = ny * 2.0 / nx;
    c.bc = {Boundary::transmissive(), Boundary::transmissive(), Boundary::periodic(), Boundary::periodic()};
    c.params = {1.4, 1.0, 1e3, 1e2, 1.0, 6.0 * mu / 1e6, 1e-12};
    c.init = [](double x, double) { return InitialPoint{1.0, {0.0, x >= 0.0 ? 0.1 : -0.1, 0.0}, 1e5}; };
    c.t_end = 0.25;
    c.time_step = TimeStepPolicy::fixed(5e-3);
    return c;
}

/// Lid-driven cavity at Re = 100. Lid (1, 0, 0) on top, no-slip elsewhere;
/// the two top corners belong to the side walls and are no-slip.
inline CaseSpec lid_cavity(int n = 64) {
    CaseSpec c = base("lid_cavity", "Lid-driven cavity, Re = 100");
    c.nx = c.ny = n;
    c.bc = {Boundary::no_slip(), Boundary::no_slip(), Boundary::no_slip(), Boundary::moving_wall({1.0, 0.0, 0.0})};
    c.params = {1.4, 1e5, 1e3, 100.0, 1.0, 6e-8, 1e-14};
    c.init = [](double, double) { return InitialPoint{1.0, {}, 1e8}; };
    c.t_end = 10.0;
    c.output_interval = 1.0;
    return c;
}

/// Solid rotor: rigid rotation inside r ≤ R = 0.2, periodic closure.
inline CaseSpec solid_rotor(int n = 128) {
    CaseSpec c = base("solid_rotor", "Solid rotor, elastic limit with stiff heat conduction");
    c.x0 = c.y0 = -1.0;
    c.nx = c.ny = n;
    c.bc = {Boundary::periodic(), Boundary::periodic(), Boundary::periodic(), Boundary::periodic()};
    c.params = {1.4, 1004.0 / 1.4, 1.0, 100.0, 1.0, 1e20, 1e-14};
    c.init = [](double x, double y) {
        const double R = 0.2;
        const bool in = std::hypot(x, y) <= R;
        return InitialPoint{1.0, in ? Vec3{-y / R, x / R, 0.0} : Vec3{}, 1e5};
    };
    c.t_end = 0.1;
    c.output_interval = 0.02;
    c.curl_series = true;
    return c;
}

inline CaseSpec explosion(const std::string& name, const std::string& desc, double tau1, double tau2, double t_end,
                          int n) {
    CaseSpec c = base(name, desc);
    c.x0 = c.y0 = -1.0;
    c.nx = c.ny = n;
    c.bc = {Boundary::transmissive(), Boundary::transmissive(), Boundary::transmissive(), Boundary::transmissive()};
    c.params = {1.4, 2.5, 1.0, 1.0, 1.0, tau1, tau2};
    c.init = [](double x, double y) {
        return std::hypot(x, y) <= 0.5 ? InitialPoint{1.0, {}, 1.0} : InitialPoint{0.125, {}, 0.1};
    };
    c.t_end = t_end;
    c.time_step.dt_max = c.time_step.cfl * 2.0 / n;
    c.cut_y = 0.0;
    return c;
}

inline CaseSpec ep1(int n = 100) {
    return explosion("ep1", "Circular explosion, fluid limit", 1e-8, 1e-10, 0.2, n);
}
inline CaseSpec ep2(int n = 100) {
    return explosion("ep2", "Circular explosion, solid limit", 1e20, 1e20, 0.15, n);
}

}  // namespace cases

inline const std::vector<std::string>& case_names() {
    static const std::vector<std::string> names = {"taylor_green", "rp1",        "rp2",         "rp3", "rp4",
                                                   "shear_layer",  "lid_cavity", "solid_rotor", "ep1", "ep2"};
    return names;
}

/// Named case with overrides applied.
inline CaseSpec make_case(const std::string& name, const CaseOverrides& o = {}) {
    CaseSpec c;
    if (o.p0 && name != "taylor_green") throw ConfigError("p0 is only defined for taylor_green");
    if (o.mu && name != "shear_layer" && name != "lid_cavity" && name != "taylor_green" && name != "ep1")
        throw ConfigError("mu is not defined for case " + name);
    if (name == "taylor_green") c = cases::taylor_green(64, o.p0.value_or(1e5));
    else if (name == "rp1") c = cases::rp1();
    else if (name == "rp2") c = cases::rp2();
    else if (name == "rp3") c = cases::rp3();
    else if (name == "rp4") c = cases::rp4();
    else if (name == "shear_layer") c = cases::shear_layer();
    else if (name == "lid_cavity") c = cases::lid_cavity();
    else if (name == "solid_rotor") c = cases::solid_rotor();
    else if (name == "ep1") c = cases::ep1();
    else if (name == "ep2") c = cases::ep2();
    else throw ConfigError("unknown case '" + name + "'");

    const int nx0 = c.nx;
    const double cfl0 = c.time_step.cfl;
    const bool rest_cap = c.time_step.dt_max && !c.time_step.dt_min;

    // Strips keep square cells when nx or ny change.
    const bool strip = c.bc[2].kind == BoundaryKind::periodic && c.bc[0].kind != BoundaryKind::periodic;
    if (o.nx) c.nx = *o.nx;
    if (o.ny) c.ny = *o.ny;
    if (strip && (o.nx || o.ny)) c.y1 = c.y0 + c.ny * (c.x1 - c.x0) / c.nx;
    if (o.t_end) c.t_end = *o.t_end;
    if (o.output_interval) c.output_interval = *o.output_interval;
    if (o.cfl) c.time_step.cfl = *o.cfl;
    if (o.dt) c.time_step = TimeStepPolicy::fixed(*o.dt);
    // The start-from-rest Δt cap follows the resolution and the CFL number.
    if (rest_cap && !o.dt && !o.dt_max) *c.time_step.dt_max *= (c.time_step.cfl / cfl0) * nx0 / c.nx;
    if (o.dt_min) c.time_step.dt_min = *o.dt_min;
    if (o.dt_max) c.time_step.dt_max = *o.dt_max;
    ModelParams& p = c.params;
    if (o.gamma) p.gamma = *o.gamma;
    if (o.cv) p.cv = *o.cv;
    if (o.cs) p.cs = *o.cs;
    if (o.ch) p.ch = *o.ch;
    if (o.rho0) p.rho0 = *o.rho0;
    if (o.tau1) p.tau1 = *o.tau1;
    if (o.tau2) p.tau2 = *o.tau2;
    if (o.mu) {
        if (!(*o.mu > 0.0) || !(p.cs > 0.0)) throw ConfigError("mu needs mu > 0 and cs > 0");
        p.tau1 = 6.0 * *o.mu / (p.rho0 * p.cs * p.cs);
    }
    if (o.rel_tol) c.solver.rel_tol = *o.rel_tol;
    if (o.max_iter) c.solver.max_iter = *o.max_iter;
    if (o.deterministic) c.solver.deterministic = *o.deterministic;
    if (o.rescale_det) c.solver.rescale_determinant = *o.rescale_det;
    if (o.max_steps) c.max_steps = *o.max_steps;
    if (o.cut_y) c.cut_y = *o.cut_y;
    c.validate();
    return c;
}

}  // namespace gpr4
