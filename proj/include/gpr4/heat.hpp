#pragma once

// Implicit temperature subsystem. Eliminating the vertex thermal impulse
// gives a scalar Helmholtz problem for T**,
//
//   (1 + Δt/τ₂) m T − Δt² ∂^{cp}_k ∂^{pc}_k T = (1 + Δt/τ₂) m T* − Δt ∂^{cp}_k J*_k,   m = c_v / (Tⁿ c_h²),
//
// after which J and E follow explicitly.

#include <cmath>

#include "gpr4/errors.hpp"
#include "gpr4/grid.hpp"
#include "gpr4/krylov.hpp"
#include "gpr4/model.hpp"
#include "gpr4/operators.hpp"
#include "gpr4/state.hpp"

namespace gpr4 {

struct HeatSolveConfig {
    double rel_tol = 1e-10;
    int max_iter = 0;  // 0 selects 10 (nx + ny)
    bool deterministic = true;

    void validate() const {
        if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw ConfigError("heat rel_tol must be in (0, 1)");
        if (max_iter < 0) throw ConfigError("heat max_iter must be >= 1");
    }
    KrylovConfig krylov(const GridSpec& g) const {
        KrylovConfig k;
        k.rel_tol = rel_tol;
        k.max_iter = max_iter > 0 ? max_iter : 10 * (g.nx + g.ny);
        k.deterministic = deterministic;
        return k;
    }
};

/// m = c_v / (Tⁿ c_h²) per cell.
inline CellScalar heat_coefficient(const CellScalar& Tn, const ModelParams& p) {
    CellScalar m(Tn);
    for (auto& t : m) {
        if (!(t > 0.0)) throw DomainError("heat: temperature must be positive");
        t = p.cv / (t * p.ch * p.ch);
    }
    return m;
}

/// (1 + Δt/τ₂) m T − Δt² ∂^{cp}(∂^{pc} T)
inline CellScalar apply_T_operator(const CellScalar& T, const CellScalar& m, double dt, double tau2,
                                   const GridSpec& g) {
    require_shape(T, g, "apply_T_operator");
    require_shape(m, g, "apply_T_operator coefficients");
    CellScalar out = div_cp(grad_pc(T, g), g);
    const double a = 1.0 + dt / tau2;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a * m[k] * T[k] - dt * dt * out[k];
    return out;
}

struct HeatResult {
    CellScalar T;   // T**
    CellVector J;   // J** at cells
    VertexVector Jp;  // J** at vertices
    CellScalar E;   // E**
    int iterations = 0;
    double residual = 0.0;
};

/// Temperature step on the post-convective state qs. Tn is the temperature
/// at the start of the time step (it freezes the Helmholtz coefficient).
inline HeatResult solve_temperature(const ConservedState& qs, const CellScalar& Tn, double dt, const GridSpec& g,
                                    const ModelParams& p, const HeatSolveConfig& cfg = {}) {
    cfg.validate();
    require_state(qs, g, "solve_temperature");
    HeatResult r;
    r.T = temperature(qs, g, p);
    if (p.ch == 0.0) {
        r.J = qs.J;
        r.Jp = avg_c2p(qs.J, g);
        r.E = qs.E;
        return r;
    }
    const CellScalar m = heat_coefficient(Tn, p);
    const double relax = 1.0 + dt / p.tau2;

    VertexVector Jp = avg_c2p(qs.J, g);
    zero_wall_normal(Jp, g);

    // Increment form: L δ = −Δt ∂J* − (L T* − relax m T*)
    CellScalar rhs = div_cp(Jp, g);
    const CellScalar lapT = div_cp(grad_pc(r.T, g), g);
    for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] = -dt * rhs[k] + dt * dt * lapT[k];

    const LinearOperator<CellScalar> L = [&](const CellScalar& x) { return apply_T_operator(x, m, dt, p.tau2, g); };
    const auto sol = solve_linear(L, rhs, CellScalar(g), cfg.krylov(g),
                                  g.fully_periodic() ? SolverChoice::cg : SolverChoice::automatic);
    r.T += sol.x;
    r.iterations = sol.iterations;
    r.residual = sol.residual;

    // Vertex thermal impulse and heat flux
    const VertexVector gT = grad_pc(r.T, g);
    r.Jp = VertexVector(g);
    for (std::size_t k = 0; k < Jp.size(); ++k) r.Jp[k] = (Jp[k] - gT[k] * dt) / relax;
    zero_wall_normal(r.Jp, g);

    // Cell thermal impulse from the averaged temperature
    const CellVector gTc = grad_cp(avg_c2p(r.T, g), g);
    r.J = CellVector(g);
    for (std::size_t k = 0; k < r.J.size(); ++k) r.J[k] = (qs.J[k] - gTc[k] * dt) / relax;

    const VertexScalar rho_p = avg_c2p(qs.rho, g);
    const VertexScalar T_p = avg_c2p(r.T, g);
    VertexVector q(g);
    for (std::size_t k = 0; k < q.size(); ++k) q[k] = r.Jp[k] * (rho_p[k] * p.ch * p.ch * T_p[k]);
    const CellScalar dq = div_cp(q, g);
    r.E = qs.E;
    for (std::size_t k = 0; k < r.E.size(); ++k) r.E[k] -= dt * dq[k];
    return r;
}

}  // namespace gpr4
