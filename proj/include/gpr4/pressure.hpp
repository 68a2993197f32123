#pragma once

// Implicit pressure subsystem:
//
//   p/(γ−1) − Δt² ∂^{cp}_i (h ∂^{pc}_i p) = p**/(γ−1) − Δt ∂^{cp}_i (h (ρv_i)**),
//   (ρv)ⁿ⁺¹ = (ρv)** − Δt ∂^{pc} pⁿ⁺¹,
//
// with the specific enthalpy h = γp/((γ−1)ρ) taken at the vertices.

#include "gpr4/errors.hpp"
#include "gpr4/grid.hpp"
#include "gpr4/krylov.hpp"
#include "gpr4/model.hpp"
#include "gpr4/operators.hpp"
#include "gpr4/state.hpp"

namespace gpr4 {

/// p** = (γ−1)(E** − ½ρ|v̄|² − ¼ρc_s²G̊:G̊ − ½c_h²ρ|J|²), v̄ = cell average of v**.
inline CellScalar extract_p_star(const CellScalar& E, const CellScalar& rho, const VertexVector& mom,
                                 const CellTensor& dev_G, const CellVector& J, const GridSpec& g,
                                 const ModelParams& p) {
    const CellVector mc = avg_p2c(mom, g);
    CellScalar out(g);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double e1 = E[k] - 0.5 * dot(mc[k], mc[k]) / rho[k] -
                          0.25 * rho[k] * p.cs * p.cs * ddot(dev_G[k], dev_G[k]) -
                          thermal_impulse_energy(rho[k], J[k], p);
        if (!(e1 > 0.0)) throw StateError("pressure: non-positive internal energy before the pressure step");
        out[k] = (p.gamma - 1.0) * e1;
    }
    return out;
}

/// h = γp/((γ−1)ρ) on cells, averaged to vertices.
inline VertexScalar enthalpy_at_vertices(const CellScalar& pr, const CellScalar& rho, const GridSpec& g,
                                         const ModelParams& p) {
    CellScalar h(g);
    for (std::size_t k = 0; k < h.size(); ++k) h[k] = p.gamma * pr[k] / ((p.gamma - 1.0) * rho[k]);
    return avg_c2p(h, g);
}

/// Vertex pressure gradient with wall-constrained components removed.
inline VertexVector masked_gradient(const CellScalar& pr, const GridSpec& g, const VertexConstraints& bc) {
    VertexVector gp = grad_pc(pr, g);
    bc.zero_fixed(gp);
    return gp;
}

/// p/(γ−1) − Δt² ∂^{cp}(h ∂^{pc} p)
inline CellScalar apply_p_operator(const CellScalar& pr, const VertexScalar& h, double dt, double gamma,
                                   const GridSpec& g, const VertexConstraints& bc) {
    require_shape(pr, g, "apply_p_operator");
    VertexVector f = masked_gradient(pr, g, bc);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] *= h[k];
    CellScalar out = div_cp(f, g);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = pr[k] / (gamma - 1.0) - dt * dt * out[k];
    return out;
}

inline CellScalar apply_p_operator(const CellScalar& pr, const VertexScalar& h, double dt, double gamma,
                                   const GridSpec& g) {
    return apply_p_operator(pr, h, dt, gamma, g, VertexConstraints(g));
}

struct PressureResult {
    CellScalar p;      // pⁿ⁺¹
    VertexVector mom;  // (ρv)ⁿ⁺¹
    VertexScalar h;    // h** at vertices
    int iterations = 0;
    double residual = 0.0;
};

inline PressureResult solve_pressure(const CellScalar& p_star, const CellScalar& rho, const VertexVector& mom2,
                                     double dt, const GridSpec& g, const ModelParams& p, const KrylovConfig& cfg) {
    const VertexConstraints bc(g);
    PressureResult r;
    r.h = enthalpy_at_vertices(p_star, rho, g, p);
    for (double x : r.h)
        if (!(x > 0.0)) throw StateError("pressure: non-positive enthalpy");

    // Increment form around p**.
    VertexVector f = masked_gradient(p_star, g, bc);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = mom2[k] * r.h[k] - f[k] * (dt * r.h[k]);
    CellScalar rhs = div_cp(f, g);
    rhs *= -dt;

    const LinearOperator<CellScalar> L = [&](const CellScalar& x) {
        return apply_p_operator(x, r.h, dt, p.gamma, g, bc);
    };
    const auto sol = solve_linear(L, rhs, CellScalar(g), cfg,
                                  g.fully_periodic() ? SolverChoice::cg : SolverChoice::automatic);
    r.p = p_star + sol.x;
    r.iterations = sol.iterations;
    r.residual = sol.residual;

    const VertexVector gp = masked_gradient(r.p, g, bc);
    r.mom = mom2;
    r.mom.axpy(-dt, gp);
    return r;
}

}  // namespace gpr4
