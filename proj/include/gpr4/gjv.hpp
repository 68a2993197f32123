#pragma once

// Semi-implicit G̊-J-v subsystem. The deviatoric metric and the thermal
// impulse are eliminated in favour of the vertex velocity, which solves
//
//   ρ* v − Δt² ∂^{pc}_k (H_iknm ∂^{cp}_n v_m) = b.
//
// Notation per cell: κ = 2Δtρc_s²/θ₁ = 6Δt|A|^{5/3}/τ₁, Σ = I + κG,
// P = GΣ⁻¹ and D_nm = ∂_n v_m.

#include <cmath>
#include <limits>

#include "gpr4/errors.hpp"
#include "gpr4/grid.hpp"
#include "gpr4/krylov.hpp"
#include "gpr4/model.hpp"
#include "gpr4/operators.hpp"
#include "gpr4/state.hpp"

namespace gpr4 {

/// Σ⁻¹ = (I + κ G)⁻¹
inline Mat3 sigma_inverse_kappa(const Mat3& G, double kappa) {
    if (kappa == 0.0) return Mat3::identity();
    return inverse(Mat3::identity() + G * kappa);
}

/// Σ⁻¹ with κ = 2Δtρc_s²/θ₁. A non-finite θ₁ is the elastic limit, Σ = I.
inline Mat3 sigma_inverse(const Mat3& G, double rho, double theta1, double dt, const ModelParams& p) {
    if (!std::isfinite(theta1)) return Mat3::identity();
    if (!(theta1 > 0.0)) throw DomainError("sigma_inverse: theta1 must be positive");
    return sigma_inverse_kappa(G, 2.0 * dt * rho * p.cs * p.cs / theta1);
}

/// H = C + (τ₂ρc_h²/(Δt+τ₂)) δ_kn J_i J_m with
/// C_iknm = ρc_s² [(PG)_im δ_kn + P_in G_mk − ⅔ P_ik G_nm].
inline Tensor4 build_H(const Mat3& G, const Mat3& Sinv, const Vec3& J, double rho, double dt, const ModelParams& p) {
    Tensor4 H;
    const double cs2 = rho * p.cs * p.cs;
    const double jc = rho * p.ch * p.ch / (1.0 + dt / p.tau2);
    if (cs2 == 0.0 && jc == 0.0) return H;
    const Mat3 P = G * Sinv;
    const Mat3 PG = P * G;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t n = 0; n < 3; ++n)
                for (std::size_t m = 0; m < 3; ++m) {
                    double c = P(i, n) * G(m, k) - (2.0 / 3.0) * P(i, k) * G(n, m);
                    if (k == n) c += PG(i, m);
                    double h = cs2 * c;
                    if (k == n) h += jc * J[i] * J[m];
                    H(i, k, n, m) = h;
                }
    return H;
}

/// Per-cell data frozen for the G̊-J-v step.
struct GjvCoefficients {
    CellTensor G;      // Gⁿ
    CellTensor Sinv;   // Σ⁻¹
    CellScalar kappa;  // 2Δtρc_s²/θ₁
    Field<Tensor4, Loc::cell> H;
    double dt = 0.0;
};

inline GjvCoefficients gjv_coefficients(const CellScalar& rho_n, const CellTensor& A_n, const CellVector& J2,
                                        double dt, const GridSpec& g, const ModelParams& p) {
    GjvCoefficients c{CellTensor(g), CellTensor(g), CellScalar(g), Field<Tensor4, Loc::cell>(g), dt};
    for (std::size_t k = 0; k < c.G.size(); ++k) {
        c.G[k] = metric_of(A_n[k]);
        c.kappa[k] = p.cs > 0.0 ? strain_relaxation_factor(A_n[k], dt, p) : 0.0;
        c.Sinv[k] = sigma_inverse_kappa(c.G[k], c.kappa[k]);
        c.H[k] = build_H(c.G[k], c.Sinv[k], J2[k], rho_n[k], dt, p);
    }
    return c;
}

/// Δt² ∂^{pc}_k (H_iknm ∂^{cp}_n v_m)
inline VertexVector viscous_flux_divergence(const VertexVector& v, const Field<Tensor4, Loc::cell>& H, double dt,
                                            const GridSpec& g) {
    CellTensor S = grad_cp(v, g);
    for (std::size_t k = 0; k < S.size(); ++k) S[k] = H[k].contract(S[k]) * (dt * dt);
    return div_pc(S, g);
}

/// ρ* v − Δt² ∂^{pc}(H ∂^{cp} v)
inline VertexVector apply_v_operator(const VertexVector& v, const VertexScalar& rho_p,
                                     const Field<Tensor4, Loc::cell>& H, double dt, const GridSpec& g) {
    require_shape(v, g, "apply_v_operator");
    VertexVector out = viscous_flux_divergence(v, H, dt, g);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = v[k] * rho_p[k] - out[k];
    return out;
}

/// Cell tensor whose vertex divergence is subtracted from ρ*v* to form b:
/// Δt [ρc_s² P (G̊* + (κ/3)(G:G̊ⁿ) I) + (ρc_h²/(1+Δt/τ₂)) J⊗J].
inline Mat3 rhs_stress(double rho, const Mat3& G, const Mat3& Sinv, double kappa, const Mat3& dev_star,
                       const Mat3& dev_n, const Vec3& J, double dt, const ModelParams& p) {
    const Mat3 inner = dev_star + Mat3::identity() * (kappa / 3.0 * ddot(G, dev_n));
    const Mat3 s = (G * Sinv) * inner * (rho * p.cs * p.cs);
    const Mat3 w = outer(J, J) * (rho * p.ch * p.ch / (1.0 + dt / p.tau2));
    return (s + w) * dt;
}

inline VertexVector build_rhs_b(const VertexVector& mom_star, const CellScalar& rho_n,
                                const CellTensor& A_star, const CellVector& J2, const GjvCoefficients& c,
                                const GridSpec& g, const ModelParams& p) {
    CellTensor B(g);
    for (std::size_t k = 0; k < B.size(); ++k)
        B[k] = rhs_stress(rho_n[k], c.G[k], c.Sinv[k], c.kappa[k], deviator(metric_of(A_star[k])),
                          deviator(c.G[k]), J2[k], c.dt, p);
    VertexVector b = div_pc(B, g);
    for (std::size_t k = 0; k < b.size(); ++k) b[k] = mom_star[k] - b[k];
    return b;
}

struct VelocitySolve {
    VertexVector v;    // v**
    VertexVector mom;  // ρ* v** in flux form
    int iterations = 0;
    double residual = 0.0;
    std::string method;
    bool symmetric = false;
};

/// Solve for v**. Wall-constrained components are eliminated, which keeps a
/// symmetric operator symmetric. Momentum is rebuilt as b + Δt²∂(H∂v) so it
/// is conserved independently of the solver tolerance.
inline VelocitySolve solve_velocity(const VertexVector& b, const VertexScalar& rho_p,
                                    const Field<Tensor4, Loc::cell>& H, double dt, const GridSpec& g,
                                    const ModelParams& p, const KrylovConfig& cfg) {
    VelocitySolve out;
    const VertexConstraints bc(g);
    VertexVector v0(g);
    for (std::size_t k = 0; k < v0.size(); ++k) v0[k] = b[k] / rho_p[k];
    bc.impose_velocity(v0);
    if (p.cs == 0.0 && p.ch == 0.0) {
        out.v = v0;
        out.mom = b;
        bc.impose_momentum(out.mom, rho_p);
        out.method = "diagonal";
        out.symmetric = true;
        return out;
    }
    const LinearOperator<VertexVector> L = [&](const VertexVector& x) {
        if (!bc.any()) return apply_v_operator(x, rho_p, H, dt, g);
        VertexVector xm = x;
        bc.zero_fixed(xm);
        VertexVector y = apply_v_operator(xm, rho_p, H, dt, g);
        bc.zero_fixed(y);
        VertexVector fixed_part = x;
        bc.zero_free(fixed_part);
        y += fixed_part;
        return y;
    };
    VertexVector r0 = b;
    r0 -= apply_v_operator(v0, rho_p, H, dt, g);
    bc.zero_fixed(r0);
    out.symmetric = symmetry_defect(L, r0) <= 1e-12;
    const auto sol = solve_linear(L, r0, VertexVector(g), cfg, out.symmetric ? SolverChoice::cg : SolverChoice::bicgstab);
    out.v = v0 + sol.x;
    out.iterations = sol.iterations;
    out.residual = sol.residual;
    out.method = sol.method;
    out.mom = b + viscous_flux_divergence(out.v, H, dt, g);
    bc.impose_momentum(out.mom, rho_p);
    return out;
}

struct GjvPost {
    CellTensor dev_G;   // G̊**
    CellVector J3;      // J***
    CellTensor sigma;   // σ**
    CellTensor omega;   // ω***
};

/// G̊** = dev(Σ⁻¹[G̊* + (κ/3)(G:G̊ⁿ)I − Δt(G Dᵀ + D G − ⅔(G:D)I)]),
/// J*** = (J** − Δt D J**)/(1 + Δt/τ₂), σ** = ρc_s² G G̊**, ω*** = ρc_h² J**⊗J***.
inline GjvPost post_updates(const VertexVector& v2, const CellScalar& rho_n, const CellTensor& A_star,
                            const CellVector& J2, const GjvCoefficients& c, const GridSpec& g,
                            const ModelParams& p) {
    const CellTensor D = grad_cp(v2, g);
    GjvPost out{CellTensor(g), CellVector(g), CellTensor(g), CellTensor(g)};
    const double dt = c.dt;
    const double relax = 1.0 + dt / p.tau2;
    for (std::size_t k = 0; k < D.size(); ++k) {
        const Mat3& G = c.G[k];
        const Mat3& Dk = D[k];
        const Mat3 strain = G * transpose(Dk) + Dk * G - Mat3::identity() * (2.0 / 3.0 * ddot(G, Dk));
        const Mat3 inner = deviator(metric_of(A_star[k])) +
                           Mat3::identity() * (c.kappa[k] / 3.0 * ddot(G, deviator(G))) - strain * dt;
        out.dev_G[k] = deviator(c.Sinv[k] * inner);
        out.J3[k] = (J2[k] - Dk * J2[k] * dt) / relax;
        out.sigma[k] = (G * out.dev_G[k]) * (rho_n[k] * p.cs * p.cs);
        out.omega[k] = outer(J2[k], out.J3[k]) * (rho_n[k] * p.ch * p.ch);
    }
    return out;
}

}  // namespace gpr4
