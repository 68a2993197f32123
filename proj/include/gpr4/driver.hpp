#pragma once

// One time step of the four-split scheme:
//   convective (explicit) → temperature (implicit) → G̊-J-v (implicit)
//   → pressure (implicit) → compatible updates of A, J and E.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gpr4/compatible.hpp"
#include "gpr4/convective.hpp"
#include "gpr4/errors.hpp"
#include "gpr4/gjv.hpp"
#include "gpr4/grid.hpp"
#include "gpr4/heat.hpp"
#include "gpr4/krylov.hpp"
#include "gpr4/model.hpp"
#include "gpr4/pressure.hpp"
#include "gpr4/state.hpp"

namespace gpr4 {

struct SolverSettings {
    double rel_tol = 1e-12;
    int max_iter = 0;  // 0 selects 10 (nx + ny)
    bool deterministic = true;
    bool rescale_determinant = true;  // row rescale of A so that det A = ρ/ρ₀

    void validate() const {
        if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw ConfigError("rel_tol must be in (0, 1)");
        if (max_iter < 0) throw ConfigError("max_iter must be >= 0");
    }
    KrylovConfig krylov(const GridSpec& g) const {
        KrylovConfig k;
        k.rel_tol = rel_tol;
        k.max_iter = max_iter > 0 ? max_iter : 10 * (g.nx + g.ny);
        k.deterministic = deterministic;
        return k;
    }
    HeatSolveConfig heat() const { return {rel_tol, max_iter, deterministic}; }
};

struct StepStats {
    double dt = 0.0;
    int heat_iterations = 0;
    int velocity_iterations = 0;
    int pressure_iterations = 0;
    std::string velocity_method;
    bool velocity_symmetric = false;
};

/// Optional record of the intermediate results of one step, in stage order.
struct StageTrace {
    std::vector<std::string> stages;
    ConservedState convective;  // q*
    HeatResult heat;
    GjvCoefficients coefficients;
    VelocitySolve velocity;
    GjvPost post;
    CellScalar p_star;
    PressureResult pressure;
};

namespace detail {

/// Run one stage and prefix any error with the stage name, keeping its type.
template <class F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
    const auto msg = [&](const std::exception& e) { return std::string(stage) + ": " + e.what(); };
    try {
        return f();
    } catch (const SolverError& e) {
        throw SolverError(msg(e), e.iterations(), e.residual());
    } catch (const TimeStepFailure& e) {
        throw TimeStepFailure(msg(e));
    } catch (const StateError& e) {
        throw StateError(msg(e));
    } catch (const DomainError& e) {
        throw DomainError(msg(e));
    } catch (const DimensionError& e) {
        throw DimensionError(msg(e));
    } catch (const ConfigError& e) {
        throw ConfigError(msg(e));
    }
}

}  // namespace detail

/// qⁿ⁺¹ from qⁿ with the given Δt.
inline ConservedState advance_step(const ConservedState& qn, double dt, const GridSpec& g, const ModelParams& p,
                                   const SolverSettings& solver = {}, StepStats* stats = nullptr,
                                   StageTrace* trace = nullptr) {
    require_state(qn, g, "advance_step");
    p.validate();
    solver.validate();
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("advance_step: dt must be positive and finite");
    const KrylovConfig kcfg = solver.krylov(g);
    auto mark = [&](const char* s) {
        if (trace) trace->stages.emplace_back(s);
    };

    const CellScalar Tn = detail::staged("temperature extraction", [&] { return temperature(qn, g, p); });

    const ConservedState qs = detail::staged("convective", [&] { return convective_step(qn, dt, g, p); });
    mark("convective");

    const HeatResult heat =
        detail::staged("temperature", [&] { return solve_temperature(qs, Tn, dt, g, p, solver.heat()); });
    mark("temperature");

    const VertexScalar rho_p = vertex_density(qs.rho, g);
    const GjvCoefficients coef =
        detail::staged("G-J-v", [&] { return gjv_coefficients(qn.rho, qn.A, heat.J, dt, g, p); });
    const VertexVector b = build_rhs_b(qs.mom, qn.rho, qs.A, heat.J, coef, g, p);
    const VelocitySolve vel =
        detail::staged("G-J-v", [&] { return solve_velocity(b, rho_p, coef.H, dt, g, p, kcfg); });
    const GjvPost post = post_updates(vel.v, qn.rho, qs.A, heat.J, coef, g, p);
    mark("gjv");

    const CellScalar p_star =
        detail::staged("pressure", [&] { return extract_p_star(heat.E, qs.rho, vel.mom, post.dev_G, post.J3, g, p); });
    const PressureResult pres =
        detail::staged("pressure", [&] { return solve_pressure(p_star, qs.rho, vel.mom, dt, g, p, kcfg); });
    mark("pressure");

    ConservedState out(g);
    out.rho = qs.rho;
    out.mom = pres.mom;
    const VertexVector v_new = vertex_velocity(out.mom, out.rho, g);
    out.A = detail::staged("update A", [&] { return update_A(qn.A, v_new, out.rho, dt, g, p, {true, solver.rescale_determinant}); });
    out.J = update_J(qn.J, v_new, &heat.T, dt, g, p);
    CellTensor sigma(g), omega(g);
    for (std::size_t k = 0; k < sigma.size(); ++k) {
        const Stresses s = stresses(out.rho[k], metric_of(out.A[k]), out.J[k], p);
        sigma[k] = s.sigma;
        omega[k] = s.omega;
    }
    out.E = update_energy_final(heat.E, pres.h, out.mom, sigma, omega, v_new, dt, g);
    mark("compatible");

    if (!all_finite(out.E) || !all_finite(out.mom)) throw StateError("advance_step: non-finite state after update");

    if (stats) {
        stats->dt = dt;
        stats->heat_iterations = heat.iterations;
        stats->velocity_iterations = vel.iterations;
        stats->pressure_iterations = pres.iterations;
        stats->velocity_method = vel.method;
        stats->velocity_symmetric = vel.symmetric;
    }
    if (trace) {
        trace->convective = qs;
        trace->heat = heat;
        trace->coefficients = coef;
        trace->velocity = vel;
        trace->post = post;
        trace->p_star = p_star;
        trace->pressure = pres;
    }
    return out;
}

/// Same, with Δt from the convective CFL policy.
inline ConservedState advance_step(const ConservedState& qn, const GridSpec& g, const ModelParams& p,
                                   const TimeStepPolicy& tp, const SolverSettings& solver = {},
                                   StepStats* stats = nullptr) {
    return advance_step(qn, compute_dt(qn, g, tp), g, p, solver, stats);
}

}  // namespace gpr4
