#include <gtest/gtest.h>

#include "gpr4/grid.hpp"
#include "gpr4/operators.hpp"

using namespace gpr4;

TEST(GridSpec, OneByOneIsDimensionError) {
    EXPECT_THROW(GridSpec::box(1, 1, 0, 1, 0, 1), DimensionError);
    EXPECT_THROW(GridSpec::box(4, 1, 0, 1, 0, 1), DimensionError);
}

TEST(GridSpec, NonPositiveSpacingRejected) {
    EXPECT_THROW(GridSpec(4, 4, 0.0, 1.0), DimensionError);
    EXPECT_THROW(GridSpec(4, 4, 1.0, -1.0), DimensionError);
}

TEST(GridSpec, UnpairedPeriodicSidesRejected) {
    GridSpec g = GridSpec::box(4, 4, 0, 1, 0, 1);
    g.side(Side::left) = Boundary::wall();
    EXPECT_THROW(g.validate(), ConfigError);
}

TEST(GridSpec, VolumesAndVertexLength) {
    const GridSpec g = GridSpec::box(50, 100, 0, 1, 0, 1);
    EXPECT_DOUBLE_EQ(g.cell_volume(), 0.02 * 0.01);
    EXPECT_DOUBLE_EQ(g.vertex_volume(), g.cell_volume());
    EXPECT_NEAR(g.vertex_length(), 1.0 / 75.0, 1e-16);
}

TEST(GridSpec, VertexCountsDependOnClosure) {
    const GridSpec per = GridSpec::box(6, 5, 0, 1, 0, 1);
    EXPECT_EQ(per.num_vertices(), 30u);
    const GridSpec open = GridSpec::box(6, 5, 0, 1, 0, 1, Boundary::transmissive(), Boundary::wall());
    EXPECT_EQ(open.num_vertices(), 7u * 6u);
    const GridSpec strip = GridSpec::box(6, 5, 0, 1, 0, 1, Boundary::transmissive(), Boundary::periodic());
    EXPECT_EQ(strip.num_vertices(), 7u * 5u);
    EXPECT_EQ(CellScalar(open).size(), 30u);
    EXPECT_EQ(VertexVector(open).size(), 42u);
}

TEST(GridSpec, CornerNormalsAreHalfEdges) {
    // ∂^{pc}_x of the indicator of one cell gives ±½Δy/|Ω_p| at its four vertices.
    const GridSpec g = GridSpec::box(4, 4, 0, 2, 0, 1);
    CellScalar phi(g);
    phi(1, 1) = 1.0;
    const VertexVector d = grad_pc(phi, g);
    const double ex = 0.5 * g.dy / g.vertex_volume();
    const double ey = 0.5 * g.dx / g.vertex_volume();
    // vertex (1,1) lies left-below of the cell: s = (+1, +1)
    EXPECT_DOUBLE_EQ(d(1, 1)[0], ex);
    EXPECT_DOUBLE_EQ(d(1, 1)[1], ey);
    EXPECT_DOUBLE_EQ(d(2, 2)[0], -ex);
    EXPECT_DOUBLE_EQ(d(2, 2)[1], -ey);
    EXPECT_DOUBLE_EQ(d(2, 1)[0], -ex);
    EXPECT_DOUBLE_EQ(d(1, 2)[1], -ey);
}

TEST(Field, ArithmeticAndShape) {
    const GridSpec g = GridSpec::box(3, 2, 0, 1, 0, 1);
    CellScalar a(g, 1.0), b(g, 2.0);
    a += b;
    EXPECT_EQ(a[0], 3.0);
    a.axpy(-0.5, b);
    EXPECT_EQ(a(2, 1), 2.0);
    EXPECT_TRUE((a * 2.0).matches(g));
    EXPECT_TRUE(all_finite(a));
    a[3] = std::nan("");
    EXPECT_FALSE(all_finite(a));
}

TEST(Field, SizeMismatchIsDimensionError) {
    const GridSpec g = GridSpec::box(4, 4, 0, 1, 0, 1);
    const GridSpec h = GridSpec::box(5, 4, 0, 1, 0, 1);
    EXPECT_THROW(grad_pc(CellScalar(h), g), DimensionError);
    EXPECT_THROW(div_cp(VertexVector(h), g), DimensionError);
    EXPECT_THROW(avg_p2c(VertexScalar(h), g), DimensionError);
}
