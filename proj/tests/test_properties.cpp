#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <random>

#include "test_util.hpp"

using namespace gpr4;
using namespace gpr4::testing;

namespace {

// Grid sizes cycled through by the random-field sweeps, 4×4 up to 64×64.
// Cell spacing is O(1); roundoff in second differences grows like 1/(Δx Δy).
GridSpec sweep_grid(int k, std::mt19937_64& rng, bool unit_square = false) {
    static const int sizes[] = {4, 5, 8, 12, 16, 23, 32, 48, 64};
    const int nx = sizes[k % 9];
    const int ny = sizes[(k * 7 + 3) % 9];
    if (unit_square) return periodic_grid(nx, ny);
    return periodic_grid(nx, ny, nx * uniform(rng, 0.5, 2.0), ny * uniform(rng, 0.5, 2.0));
}

double norm_inf(const Vec3& v) { return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])}); }

double inner(const CellScalar& a, const CellScalar& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double max_abs(const VertexVector& f) {
    double m = 0.0;
    for (const Vec3& v : f) m = std::max(m, norm_inf(v));
    return m;
}
double max_abs(const CellVector& f) {
    double m = 0.0;
    for (const Vec3& v : f) m = std::max(m, norm_inf(v));
    return m;
}
double max_abs(const CellScalar& f) { return max_abs_of(flatten(f)); }
double max_abs(const VertexScalar& f) { return max_abs_of(flatten(f)); }

}  // namespace

TEST(DiscreteIdentities, RandomFieldsOnPeriodicGrids) {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240601);
    double cg_pc = 0, cg_cp = 0, dc_pc = 0, dc_cp = 0, sbp = 0, sbp_v = 0;
    for (int k = 0; k < 200; ++k) {
        const GridSpec g = sweep_grid(k, rng);
        const auto phi_c = random_field<CellScalar>(g, rng);
        const auto phi_p = random_field<VertexScalar>(g, rng);
        const auto a_c = random_field<CellVector>(g, rng);
        const auto a_p = random_field<VertexVector>(g, rng);

        cg_pc = std::max(cg_pc, max_abs(curl_cp(grad_pc(phi_c, g), g)));
        cg_cp = std::max(cg_cp, max_abs(curl_pc(grad_cp(phi_p, g), g)));
        dc_pc = std::max(dc_pc, max_abs(div_cp(curl_pc(a_c, g), g)));
        dc_cp = std::max(dc_cp, max_abs(div_pc(curl_cp(a_p, g), g)));

        // Σ_c |Ω_c| φ_c (div a)_c = −Σ_p |Ω_p| a_p · (grad φ)_p
        const auto d = div_cp(a_p, g);
        const auto gr = grad_pc(phi_c, g);
        double lhs = 0.0, rhs = 0.0, scale = 0.0;
        for (std::size_t c = 0; c < d.size(); ++c) {
            lhs += g.cell_volume() * phi_c[c] * d[c];
            scale += g.cell_volume() * std::abs(phi_c[c] * d[c]);
        }
        for (std::size_t p = 0; p < gr.size(); ++p) rhs -= g.vertex_volume() * dot(a_p[p], gr[p]);
        sbp = std::max(sbp, std::abs(lhs - rhs) / scale);

        const auto dv = div_pc(a_c, g);
        const auto gv = grad_cp(phi_p, g);
        lhs = rhs = scale = 0.0;
        for (std::size_t p = 0; p < dv.size(); ++p) {
            lhs += g.vertex_volume() * phi_p[p] * dv[p];
            scale += g.vertex_volume() * std::abs(phi_p[p] * dv[p]);
        }
        for (std::size_t c = 0; c < gv.size(); ++c) rhs -= g.cell_volume() * dot(a_c[c], gv[c]);
        sbp_v = std::max(sbp_v, std::abs(lhs - rhs) / scale);
    }
    EXPECT_LE(cg_pc, 1e-13);
    EXPECT_LE(cg_cp, 1e-13);
    EXPECT_LE(dc_pc, 1e-13);
    EXPECT_LE(dc_cp, 1e-13);
    EXPECT_LE(sbp, 1e-13);
    EXPECT_LE(sbp_v, 1e-13);
    EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 10.0);
}

// Same identities on the unit square, measured against the size of the
// second differences themselves.
TEST(DiscreteIdentities, UnitSquareRelativeToOperatorScale) {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 40; ++k) {
        const GridSpec g = sweep_grid(k, rng, true);
        const double scale = 1.0 / (g.dx * g.dy);
        const auto phi_c = random_field<CellScalar>(g, rng);
        const auto a_p = random_field<VertexVector>(g, rng);
        EXPECT_LE(max_abs(curl_cp(grad_pc(phi_c, g), g)), 1e-13 * scale);
        EXPECT_LE(max_abs(div_pc(curl_cp(a_p, g), g)), 1e-13 * scale);
    }
}

TEST(DiscreteIdentities, TensorRowsOfGradientsAreCurlFree) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 20; ++k) {
        const GridSpec g = sweep_grid(k, rng);
        std::array<VertexScalar, 3> phi{random_field<VertexScalar>(g, rng), random_field<VertexScalar>(g, rng),
                                        random_field<VertexScalar>(g, rng)};
        CellTensor A(g);
        for (int r = 0; r < 3; ++r) {
            const CellVector gr = grad_cp(phi[r], g);
            for (std::size_t c = 0; c < A.size(); ++c)
                for (int s = 0; s < 3; ++s) A[c](r, s) = gr[c][s];
        }
        const CurlReport rep = curl_diagnostics(A, CellVector(g, Vec3{}), g);
        EXPECT_LE(rep.A, 1e-13);
    }
}

TEST(Operators, AreLinear) {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 10; ++k) {
        const GridSpec g = sweep_grid(k, rng);
        const auto a = random_field<CellScalar>(g, rng);
        const auto b = random_field<CellScalar>(g, rng);
        const double s = uniform(rng, -3.0, 3.0);
        const auto lhs = grad_pc(a + b * s, g);
        const auto rhs = grad_pc(a, g) + grad_pc(b, g) * s;
        EXPECT_LE(max_diff(lhs, rhs), 1e-11);
        const auto u = random_field<VertexVector>(g, rng);
        const auto w = random_field<VertexVector>(g, rng);
        EXPECT_LE(max_diff(div_cp(u + w * s, g), div_cp(u, g) + div_cp(w, g) * s), 1e-11);
    }
}

TEST(Spd, TemperatureAndPressureOperators) {
    std::mt19937_64 rng(42);
    const ModelParams p{1.4, 2.5, 1.0, 3.0, 1.0, 1e-3, 1e-3};
    double sym_T = 0.0, sym_p = 0.0;
    for (int k = 0; k < 50; ++k) {
        const GridSpec g = sweep_grid(k % 5, rng);
        const double dt = uniform(rng, 1e-3, 1e-1);
        const auto m = random_field<CellScalar>(g, rng, 0.5, 2.0);
        const auto h = random_field<VertexScalar>(g, rng, 0.5, 2.0);
        const LinearOperator<CellScalar> LT = [&](const CellScalar& x) { return apply_T_operator(x, m, dt, p.tau2, g); };
        const LinearOperator<CellScalar> LP = [&](const CellScalar& x) { return apply_p_operator(x, h, dt, p.gamma, g); };
        sym_T = std::max(sym_T, symmetry_defect(LT, m, 4, 1000 + k));
        sym_p = std::max(sym_p, symmetry_defect(LP, m, 4, 2000 + k));
        const auto x = random_field<CellScalar>(g, rng);
        EXPECT_GT(inner(x, LT(x)), 0.0);
        EXPECT_GT(inner(x, LP(x)), 0.0);
    }
    EXPECT_LE(sym_T, 1e-12);
    EXPECT_LE(sym_p, 1e-12);
}

TEST(Invariants, DeterminantAndTraceUnderRescaleAndDeviator) {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 200; ++k) {
        Mat3 A;
        randomize(A, rng, -1.0, 1.0);
        A = A * 0.3 + Mat3::identity();
        if (det(A) <= 0.0) continue;
        const double rho = uniform(rng, 0.2, 5.0);
        const Mat3 B = rescale_determinant(A, rho, 1.3);
        EXPECT_NEAR(det(B), rho / 1.3, 1e-13 * rho);
        EXPECT_NEAR(trace(deviator(metric_of(A))), 0.0, 1e-13 * trace(metric_of(A)));
    }
}

TEST(Invariants, ConvectiveStepConservesOnPeriodicGrids) {
    std::mt19937_64 rng(77);
    const ModelParams p{1.4, 2.5, 1.0, 1.0, 1.0, 1e-3, 1e-3};
    for (int k = 0; k < 10; ++k) {
        const GridSpec g = sweep_grid(k, rng);
        const auto rho = random_field<CellScalar>(g, rng, 0.8, 1.2);
        const auto v = random_planar<VertexVector>(g, rng) * 0.1;
        const auto pr = random_field<CellScalar>(g, rng, 0.8, 1.2);
        const ConservedState s = state_from(g, p, rho, v, pr);
        const ConservedState out = convective_step(s, 0.2 * std::min(g.dx, g.dy), g, p);
        const Totals a = totals(s, g), b = totals(out, g);
        EXPECT_NEAR(b.mass, a.mass, 1e-13 * a.mass);
        EXPECT_NEAR(b.energy, a.energy, 1e-13 * a.energy);
        EXPECT_NEAR(b.momentum[0], a.momentum[0], 1e-13 * a.mass);
        EXPECT_NEAR(b.momentum[1], a.momentum[1], 1e-13 * a.mass);
    }
}
