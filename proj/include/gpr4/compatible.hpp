#pragma once

// Final updates of A, J and E. The transport part of A and J is written with
// the compatible operators, so rows of A and J that are discretely curl-free
// stay curl-free:
//
//   A_ik ← A_ik − Δt ∂^{cp}_k (v_m A_im) − (Δt/4) Σ_p v_m (∂^{pc}_m A_ik − ∂^{pc}_k A_im).
//
// The second term vanishes for curl-free rows and the first is a discrete
// gradient, which curl_pc maps to zero.

#include <algorithm>
#include <cmath>

#include "gpr4/errors.hpp"
#include "gpr4/grid.hpp"
#include "gpr4/model.hpp"
#include "gpr4/operators.hpp"
#include "gpr4/state.hpp"

namespace gpr4 {

namespace detail {

/// Transport increment for a cell field whose "rows" are the leading index:
/// returns ∂^{cp}_k W_i + ¼ Σ_p N_ik with W = F v and
/// N_ik = v_m (∂_m F_ik − ∂_k F_im). F is Mat3 (A) or Vec3 (J, one row).
inline CellTensor transport_increment(const CellTensor& F, const VertexVector& v, const GridSpec& g) {
    const VertexTensor Fp = avg_c2p(F, g);
    const auto dF = diff_pc(F, g);
    VertexVector W(g);
    VertexTensor N(g);
    for (std::size_t k = 0; k < W.size(); ++k) {
        const Vec3& u = v[k];
        W[k] = Fp[k] * u;
        const Mat3& ax = dF.dx[k];
        const Mat3& ay = dF.dy[k];
        const Vec3 gx = ax * u;  // ∂_x F_im v_m
        const Vec3 gy = ay * u;  // ∂_y F_im v_m
        Mat3 n = ax * u[0] + ay * u[1];
        for (std::size_t i = 0; i < 3; ++i) {
            n(i, 0) -= gx[i];
            n(i, 1) -= gy[i];
        }
        N[k] = n;
    }
    const auto dW = diff_cp(W, g);
    const CellTensor Nc = avg_p2c(N, g);
    CellTensor out(g);
    for (std::size_t k = 0; k < out.size(); ++k) {
        Mat3 t = Nc[k];
        for (std::size_t i = 0; i < 3; ++i) {
            t(i, 0) += dW.dx[k][i];
            t(i, 1) += dW.dy[k][i];
        }
        out[k] = t;
    }
    return out;
}

inline CellVector transport_increment(const CellVector& F, const VertexVector& v, const GridSpec& g) {
    CellTensor as_row(g);
    for (std::size_t k = 0; k < F.size(); ++k) {
        as_row[k] = Mat3{};
        as_row[k].set_row(0, F[k]);
    }
    const CellTensor t = transport_increment(as_row, v, g);
    CellVector out(g);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = t[k].row(0);
    return out;
}

}  // namespace detail

/// Implicit strain relaxation of one cell. The deviatoric part of ln G
/// decays by 1/(1 + κ g̃) with g̃ = det(G)^{1/3}; det(A) and the rotation
/// part of A are unchanged. Returns A untouched when the factor rounds to 1.
inline Mat3 relax_distortion(const Mat3& A, double kappa) {
    if (kappa <= 0.0) return A;
    const Mat3 G = metric_of(A);
    const double gt = std::cbrt(det(G));
    const double damp = 1.0 + kappa * gt;
    if (damp == 1.0) return A;
    const SymEigen e = sym_eigen(G);
    Vec3 l;
    for (std::size_t i = 0; i < 3; ++i) {
        if (!(e.values[i] > 0.0)) throw StateError("distortion metric is not positive definite");
        l[i] = std::log(e.values[i]);
    }
    const double mean = (l[0] + l[1] + l[2]) / 3.0;
    Mat3 scale;
    for (std::size_t i = 0; i < 3; ++i) {
        const double lnew = mean + (l[i] - mean) / damp;
        scale(i, i) = std::exp(0.5 * (lnew - l[i]));
    }
    return A * (e.vectors * scale * transpose(e.vectors));
}

/// Row scaling s = (ρ/(ρ₀ det A))^{1/3} so that det(sA) = ρ/ρ₀.
inline Mat3 rescale_determinant(const Mat3& A, double rho, double rho0) {
    const double d = det(A);
    if (!(d > 0.0)) throw StateError("distortion with non-positive determinant after transport");
    return A * std::cbrt(rho / (rho0 * d));
}

struct UpdateAOptions {
    bool relax = true;
    bool rescale = true;
};

/// Aⁿ⁺¹ from Aⁿ and the new vertex velocity. κ is evaluated from Aⁿ.
inline CellTensor update_A(const CellTensor& A_n, const VertexVector& v_new, const CellScalar& rho_new, double dt,
                           const GridSpec& g, const ModelParams& p, UpdateAOptions opt = {}) {
    require_shape(A_n, g, "update_A");
    require_shape(v_new, g, "update_A velocity");
    const CellTensor inc = detail::transport_increment(A_n, v_new, g);
    CellTensor out(g);
    for (std::size_t k = 0; k < out.size(); ++k) {
        Mat3 a = A_n[k] - inc[k] * dt;
        if (!(det(a) > 0.0)) throw StateError("update_A: transported distortion has non-positive determinant");
        if (opt.relax && p.cs > 0.0) a = relax_distortion(a, strain_relaxation_factor(A_n[k], dt, p));
        if (opt.rescale) a = rescale_determinant(a, rho_new[k], p.rho0);
        out[k] = a;
    }
    return out;
}

/// Jⁿ⁺¹ = [Jⁿ − Δt(transport + ∂^{cp} T^p)] / (1 + Δt/τ₂). T is the
/// temperature after the heat step, averaged to vertices; its discrete
/// gradient is curl-free, so the curl property is kept.
inline CellVector update_J(const CellVector& J_n, const VertexVector& v_new, const CellScalar* T, double dt,
                           const GridSpec& g, const ModelParams& p) {
    require_shape(J_n, g, "update_J");
    const CellVector inc = detail::transport_increment(J_n, v_new, g);
    CellVector gT(g);
    if (T) gT = grad_cp(avg_c2p(*T, g), g);
    const double relax = 1.0 + dt / p.tau2;
    CellVector out(g);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = (J_n[k] - (inc[k] + gT[k]) * dt) / relax;
    return out;
}

/// Eⁿ⁺¹ = E** − Δt ∂^{cp}_k (h (ρv_k) + (σ_ik + ω_ik) v_i), stresses from the
/// new cell state averaged to vertices.
inline CellScalar update_energy_final(const CellScalar& E2, const VertexScalar& h, const VertexVector& mom_new,
                                      const CellTensor& sigma_new, const CellTensor& omega_new,
                                      const VertexVector& v_new, double dt, const GridSpec& g) {
    const VertexTensor S = avg_c2p(sigma_new + omega_new, g);
    VertexVector F(g);
    for (std::size_t k = 0; k < F.size(); ++k) F[k] = mom_new[k] * h[k] + transpose(S[k]) * v_new[k];
    const CellScalar d = div_cp(F, g);
    CellScalar out = E2;
    out.axpy(-dt, d);
    return out;
}

struct CurlReport {
    double A = 0.0;  // max over rows of ‖curl_pc(row)‖∞
    double J = 0.0;
};

inline CurlReport curl_diagnostics(const CellTensor& A, const CellVector& J, const GridSpec& g) {
    CurlReport r;
    for (std::size_t i = 0; i < 3; ++i) {
        CellVector row(g);
        for (std::size_t k = 0; k < row.size(); ++k) row[k] = A[k].row(i);
        r.A = std::max(r.A, norm_inf(curl_pc(row, g)));
    }
    r.J = norm_inf(curl_pc(J, g));
    return r;
}

}  // namespace gpr4
