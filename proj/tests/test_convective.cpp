#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_util.hpp"

using namespace gpr4;
using namespace gpr4::testing;

namespace {

ModelParams params() { return {1.4, 2.5, 1.0, 1.0, 1.0, 1e20, 1e20}; }

ConservedState uniform_state(const GridSpec& g, const ModelParams& p, Vec3 v) {
    return state_from(g, p, CellScalar(g, 1.3), VertexVector(g, v), CellScalar(g, 2.0));
}

}  // namespace

TEST(ComputeDt, CflFormula) {
    const GridSpec g = periodic_grid(100, 100);
    const ModelParams p = params();
    TimeStepPolicy tp;
    tp.cfl = 0.45;
    EXPECT_NEAR(compute_dt(uniform_state(g, p, {2, 0, 0}), g, tp), 2.25e-3, 1e-15);
}

TEST(ComputeDt, AnisotropicCellsUseVertexLength) {
    const GridSpec g = GridSpec::box(50, 100, 0, 1, 0, 1);
    const ModelParams p = params();
    TimeStepPolicy tp;
    tp.cfl = 0.3;
    EXPECT_NEAR(compute_dt(uniform_state(g, p, {0, 1, 0}), g, tp), 0.3 / 75.0, 1e-15);
}

TEST(ComputeDt, RestUsesDtMaxOrFails) {
    const GridSpec g = periodic_grid(8, 8);
    const ModelParams p = params();
    TimeStepPolicy tp;
    EXPECT_THROW(compute_dt(uniform_state(g, p, {}), g, tp), ConfigError);
    tp.dt_max = 1e-3;
    EXPECT_EQ(compute_dt(uniform_state(g, p, {}), g, tp), 1e-3);
    tp.dt_min = 2e-3;
    EXPECT_THROW(compute_dt(uniform_state(g, p, {}), g, tp), ConfigError);
}

TEST(ComputeDt, FixedPolicy) {
    const GridSpec g = periodic_grid(8, 8);
    EXPECT_EQ(compute_dt(uniform_state(g, params(), {5, 0, 0}), g, TimeStepPolicy::fixed(0.25)), 0.25);
}

TEST(NodalFlux, UniformStateHasNoDissipation) {
    const GridSpec g = periodic_grid(4, 4);
    CellSample c;
    c.q = {1.5, {0.3, 0.6, 0}, 4.0, Mat3::identity(), {}};
    c.v = {0.2, 0.4, 0};
    c.e234 = 0.1;
    const NodalFlux f = nodal_flux({c, c, c, c}, g);
    const ConvVars ref = physical_flux(c, 0);
    EXPECT_DOUBLE_EQ(f.fx.rho, ref.rho);
    EXPECT_DOUBLE_EQ(f.fx.E, ref.E);
    EXPECT_EQ(f.fx.A, ref.A);
}

TEST(NodalFlux, RestingJumpGivesZeroFlux) {
    const GridSpec g = periodic_grid(4, 4);
    CellSample a, b;
    a.q.rho = 1.0;
    b.q.rho = 0.125;
    a.v = b.v = {};
    a.e234 = b.e234 = 0.0;
    const NodalFlux f = nodal_flux({a, b, a, b}, g);
    EXPECT_EQ(f.smax, 0.0);
    EXPECT_EQ(f.fx.rho, 0.0);
    EXPECT_EQ(f.fx.m, Vec3(0, 0, 0));
}

TEST(ConvectiveStep, UniformStateIsFixedPoint) {
    const GridSpec g = periodic_grid(6, 5);
    const ModelParams p = params();
    const ConservedState s = uniform_state(g, p, {0.3, -0.2, 0});
    const ConservedState out = convective_step(s, 0.01, g, p);
    EXPECT_LE(max_diff(out.rho, s.rho), 1e-15);
    EXPECT_LE(max_diff(out.E, s.E), 1e-14);
    EXPECT_LE(max_diff(out.mom, s.mom), 1e-15);
    EXPECT_LE(max_diff(out.A, s.A), 1e-15);
}

TEST(ConvectiveStep, StationaryContactPreserved) {
    const GridSpec g = GridSpec::box(8, 4, 0, 1, 0, 0.5, Boundary::transmissive(), Boundary::periodic());
    const ModelParams p = params();
    CellScalar rho(g, 1.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 4; i < g.nx; ++i) rho(i, j) = 0.125;
    const ConservedState s = state_from(g, p, rho, VertexVector(g), CellScalar(g, 1.0));
    const ConservedState out = convective_step(s, 0.01, g, p);
    EXPECT_EQ(out.rho, s.rho);
    EXPECT_EQ(out.E, s.E);
}

// 1D Rusanov oracle: y-uniform data on a periodic 8-cell strip with constant
// vertex velocity u. Vertex momentum is ρ^p u, the cell velocity is the cell
// average of the vertex momentum over ρ^c.
TEST(ConvectiveStep, MatchesOneDimensionalRusanovOracle) {
    const int n = 8;
    const GridSpec g = periodic_grid(n, 2, 1.0, 0.25);
    const ModelParams p = params();
    const double u = 0.7, dt = 0.02;
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[i] = 1.0 + 0.3 * std::sin(2.0 * std::numbers::pi * g.xc(i));

    CellScalar rho(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < n; ++i) rho(i, j) = r[i];
    const ConservedState s = state_from(g, p, rho, VertexVector(g, {u, 0, 0}), CellScalar(g, 1.0));

    auto w = [&](int i) { return (i % n + n) % n; };
    std::vector<double> mp(n), mc(n), vc(n), F(n), expect(n);
    for (int i = 0; i < n; ++i) mp[i] = u * 0.5 * (r[w(i - 1)] + r[i]);
    for (int i = 0; i < n; ++i) {
        mc[i] = 0.5 * (mp[i] + mp[w(i + 1)]);
        vc[i] = mc[i] / r[i];
    }
    const double h = 2.0 * g.dx * g.dy / (g.dx + g.dy);
    for (int i = 0; i < n; ++i) {
        const double smax = std::max(std::abs(vc[w(i - 1)]), std::abs(vc[i]));
        F[i] = 0.5 * (mc[w(i - 1)] + mc[i]) - 0.5 * h * smax * (r[i] - r[w(i - 1)]) / g.dx;
    }
    for (int i = 0; i < n; ++i) expect[i] = r[i] - dt / g.dx * (F[w(i + 1)] - F[i]);

    const ConservedState out = convective_step(s, dt, g, p);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < n; ++i) EXPECT_NEAR(out.rho(i, j), expect[i], 1e-14) << i;
}

TEST(ConvectiveStep, ConservesOnPeriodicGrid) {
    const GridSpec g = periodic_grid(12, 10);
    const ModelParams p = params();
    std::mt19937_64 rng(21);
    const auto rho = random_field<CellScalar>(g, rng, 0.8, 1.2);
    const auto v = random_planar<VertexVector>(g, rng);
    const auto pr = random_field<CellScalar>(g, rng, 1.0, 2.0);
    ConservedState s = state_from(g, p, rho, v, pr);
    for (auto& J : s.J) J = {0.01 * uniform(rng), 0.01 * uniform(rng), 0};
    const Totals before = totals(s, g);
    const ConservedState out = convective_step(s, 0.2 * g.dx, g, p);
    const Totals after = totals(out, g);
    EXPECT_LE(std::abs(after.mass - before.mass), 1e-13 * before.mass);
    EXPECT_LE(std::abs(after.energy - before.energy), 1e-13 * before.energy);
    EXPECT_LE(norm(after.momentum - before.momentum), 1e-13 * (norm(before.momentum) + before.mass));
}

TEST(ConvectiveStep, NegativeDensitySignalsRetry) {
    const GridSpec g = periodic_grid(8, 8);
    const ModelParams p = params();
    CellScalar rho(g, 1.0);
    rho(3, 3) = 1e-3;
    const ConservedState s = state_from(g, p, rho, VertexVector(g, {1, 0, 0}), CellScalar(g, 1.0));
    EXPECT_THROW(convective_step(s, 1.0, g, p), TimeStepFailure);
}
