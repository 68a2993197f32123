#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_util.hpp"

using namespace gpr4;
using namespace gpr4::testing;

namespace {

ModelParams params() { return {1.4, 2.5, 0.8, 0.6, 1.0, 1.0, 1.0}; }

CellScalar oracle_p_operator(const CellScalar& pr, const VertexScalar& h, double dt, double gamma, const GridSpec& g) {
    VertexVector f = oracle_grad_pc(pr, g);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] *= h[k];
    const CellScalar d = oracle_div_cp(f, g);
    CellScalar out(g);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = pr[k] / (gamma - 1.0) - dt * dt * d[k];
    return out;
}

}  // namespace

TEST(ExtractPressure, InternalEnergyOnly) {
    const GridSpec g = periodic_grid(2, 2);
    const ModelParams p = params();
    const CellScalar ps = extract_p_star(CellScalar(g, 2.5), CellScalar(g, 1.0), VertexVector(g), CellTensor(g),
                                         CellVector(g), g, p);
    for (double x : ps) EXPECT_NEAR(x, 1.0, 1e-15);
}

TEST(ExtractPressure, RoundTripWithEnergyCompose) {
    const GridSpec g = periodic_grid(6, 5);
    const ModelParams p = params();
    std::mt19937_64 rng(30);
    const auto rho = random_field<CellScalar>(g, rng, 0.5, 2.0);
    const auto mom = random_field<VertexVector>(g, rng);
    const auto T = random_field<CellScalar>(g, rng, 0.5, 2.0);
    const CellVector vc = cell_velocity(mom, rho, g);
    CellTensor dev(g);
    CellVector J(g);
    CellScalar E(g);
    for (std::size_t k = 0; k < E.size(); ++k) {
        Mat3 A = Mat3::identity();
        for (double& x : A.m) x += 0.1 * uniform(rng);
        dev[k] = deviator(metric_of(A));
        J[k] = {0.2 * uniform(rng), 0.2 * uniform(rng), 0.0};
        E[k] = energy_compose(rho[k], vc[k], metric_of(A), J[k], T[k], p);
    }
    const CellScalar ps = extract_p_star(E, rho, mom, dev, J, g, p);
    for (std::size_t k = 0; k < ps.size(); ++k) {
        const double ref = eos_pressure(rho[k], T[k], p);
        EXPECT_NEAR(ps[k], ref, 1e-12 * ref);
    }
}

TEST(ExtractPressure, NonPositiveRemainderIsStateError) {
    const GridSpec g = periodic_grid(2, 2);
    EXPECT_THROW(extract_p_star(CellScalar(g, 0.1), CellScalar(g, 1.0), VertexVector(g, {1, 0, 0}), CellTensor(g),
                                CellVector(g), g, params()),
                 StateError);
}

TEST(PressureOperator, ConstantPressure) {
    const GridSpec g = periodic_grid(5, 4);
    std::mt19937_64 rng(31);
    const auto h = random_field<VertexScalar>(g, rng, 0.5, 2.0);
    for (double x : apply_p_operator(CellScalar(g, 2.0), h, 0.1, 1.4, g)) EXPECT_NEAR(x, 2.0 / 0.4, 1e-13);
}

TEST(PressureOperator, MatchesDenseOracleAssembly) {
    const GridSpec g = periodic_grid(4, 4, 1.0, 0.6);
    std::mt19937_64 rng(32);
    const auto h = random_field<VertexScalar>(g, rng, 0.5, 2.0);
    const double dt = 0.07;
    const Dense A = assemble([&](const CellScalar& x) { return apply_p_operator(x, h, dt, 1.4, g); }, CellScalar(g));
    const Dense B = assemble([&](const CellScalar& x) { return oracle_p_operator(x, h, dt, 1.4, g); }, CellScalar(g));
    for (std::size_t r = 0; r < A.size(); ++r) EXPECT_LE(max_diff(A[r], B[r]), 1e-13);
}

TEST(SolvePressure, UniformPressureAndFlowUnchanged) {
    const GridSpec g = periodic_grid(6, 6);
    const ModelParams p = params();
    const CellScalar ps(g, 3.0);
    const VertexVector mom(g, {0.5, -0.25, 0.0});
    KrylovConfig cfg;
    const PressureResult r = solve_pressure(ps, CellScalar(g, 1.0), mom, 0.01, g, p, cfg);
    EXPECT_LE(max_diff(r.p, ps), 1e-13);
    EXPECT_LE(max_diff(r.mom, mom), 1e-13);
}

TEST(SolvePressure, AcousticModeMatchesDenseSolve) {
    const GridSpec g = periodic_grid(8, 4);
    const ModelParams p = params();
    const double dt = 0.05;
    CellScalar ps(g), rho(g, 1.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) ps(i, j) = 1.0 + 0.01 * std::cos(2.0 * std::numbers::pi * g.xc(i));
    VertexVector mom(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) mom(i, j) = {0.01 * std::sin(2.0 * std::numbers::pi * g.xv(i)), 0.0, 0.0};
    KrylovConfig cfg;
    cfg.rel_tol = 1e-14;
    const PressureResult r = solve_pressure(ps, rho, mom, dt, g, p, cfg);

    const VertexScalar h = enthalpy_at_vertices(ps, rho, g, p);
    VertexVector f(g);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = mom[k] * h[k];
    const CellScalar d = oracle_div_cp(f, g);
    std::vector<double> rhs(g.num_cells());
    for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] = ps[k] / (p.gamma - 1.0) - dt * d[k];
    const Dense M = assemble([&](const CellScalar& x) { return oracle_p_operator(x, h, dt, p.gamma, g); }, CellScalar(g));
    const std::vector<double> ref = dense_solve(M, rhs);
    EXPECT_LE(max_diff(flatten(r.p), ref), 1e-11);

    VertexVector mref = oracle_grad_pc(r.p, g);
    for (std::size_t k = 0; k < mref.size(); ++k) mref[k] = mom[k] - mref[k] * dt;
    EXPECT_LE(max_diff(r.mom, mref), 1e-13);
}

TEST(SolvePressure, ConservesMomentum) {
    const GridSpec g = periodic_grid(10, 8);
    const ModelParams p = params();
    std::mt19937_64 rng(33);
    const auto ps = random_field<CellScalar>(g, rng, 1.0, 2.0);
    const auto rho = random_field<CellScalar>(g, rng, 0.8, 1.2);
    const auto mom = random_field<VertexVector>(g, rng);
    const PressureResult r = solve_pressure(ps, rho, mom, 0.05, g, p, KrylovConfig{});
    Vec3 a{}, b{};
    for (std::size_t k = 0; k < mom.size(); ++k) {
        a += mom[k];
        b += r.mom[k];
    }
    EXPECT_LE(norm(a - b), 1e-13);
}

TEST(SolvePressure, WallsBlockNormalMomentum) {
    const GridSpec g = GridSpec::box(6, 6, 0, 1, 0, 1, Boundary::wall(), Boundary::wall());
    const ModelParams p = params();
    std::mt19937_64 rng(34);
    const auto ps = random_field<CellScalar>(g, rng, 1.0, 2.0);
    VertexVector mom(g);
    const PressureResult r = solve_pressure(ps, CellScalar(g, 1.0), mom, 0.05, g, p, KrylovConfig{});
    for (int j = 0; j < g.nvy(); ++j) {
        EXPECT_EQ(r.mom(0, j)[0], 0.0);
        EXPECT_EQ(r.mom(g.nx, j)[0], 0.0);
    }
    for (int i = 0; i < g.nvx(); ++i) EXPECT_EQ(r.mom(i, 0)[1], 0.0);
}
