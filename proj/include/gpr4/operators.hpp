#pragma once

// Compatible discrete operators between cell and vertex fields.
//
// With (s_x, s_y) the signs of (x_c - x_p, y_c - y_p), the corner normal of
// cell c seen from vertex p is n^{pc} = ½ (s_x Δy, s_y Δx) and n^{cp} = -n^{pc}.
// Every operator is built from the two 4-point differences
//
//   ∂_x^{pc} φ = (1 / |Ω_p|) Σ_c n_x^{pc} φ^c = [(φ_10 + φ_11) - (φ_00 + φ_01)] / (2 Δx)
//   ∂_y^{pc} φ = (1 / |Ω_p|) Σ_c n_y^{pc} φ^c = [(φ_01 + φ_11) - (φ_00 + φ_10)] / (2 Δy)
//
// and their vertex-to-cell mirrors. These are tensor products of 1D central
// differences and averages, so they commute with each other; that is where
// curl∘grad = 0 and div∘curl = 0 come from.
//
// Cells outside the domain are supplied by a one-cell ghost ring: periodic
// wraps, every other kind copies the nearest interior cell unless the caller
// passes a ghost transform (used for velocity-like fields at walls).

#include <array>
#include <utility>

#include "gpr4/grid.hpp"
#include "gpr4/tensor.hpp"

namespace gpr4 {

/// Location of a possibly-ghost cell: the interior cell that supplies its
/// value and which boundary sides were crossed to reach it.
struct GhostCell {
    int i;
    int j;
    int cross_x;  // -1 left, +1 right, 0 inside
    int cross_y;  // -1 bottom, +1 top, 0 inside
};

inline GhostCell resolve_cell(const GridSpec& g, int i, int j) {
    GhostCell r{i, j, 0, 0};
    if (i < 0 || i >= g.nx) {
        if (g.periodic_x()) r.i = (i % g.nx + g.nx) % g.nx;
        else {
            r.cross_x = i < 0 ? -1 : 1;
            r.i = i < 0 ? 0 : g.nx - 1;
        }
    }
    if (j < 0 || j >= g.ny) {
        if (g.periodic_y()) r.j = (j % g.ny + g.ny) % g.ny;
        else {
            r.cross_y = j < 0 ? -1 : 1;
            r.j = j < 0 ? 0 : g.ny - 1;
        }
    }
    return r;
}

/// Ghost rule that copies the interior value.
struct CopyGhost {
    template <class T>
    const T& operator()(const T& interior, const GhostCell&) const {
        return interior;
    }
};

/// Ghost rule for a cell velocity: slip walls mirror the normal component,
/// moving walls use 2 v_wall - v so the wall average equals v_wall.
struct VelocityGhost {
    const GridSpec* g;

    Vec3 operator()(Vec3 v, const GhostCell& c) const {
        if (c.cross_x != 0) v = apply(v, g->side(c.cross_x < 0 ? Side::left : Side::right), 0);
        if (c.cross_y != 0) v = apply(v, g->side(c.cross_y < 0 ? Side::bottom : Side::top), 1);
        return v;
    }

    static Vec3 apply(Vec3 v, const Boundary& b, int normal) {
        if (b.kind == BoundaryKind::wall) v[normal] = -v[normal];
        else if (b.kind == BoundaryKind::moving_wall) v = 2.0 * b.wall_velocity - v;
        return v;
    }
};

/// The four cells around vertex (i, j), ordered (c00, c10, c01, c11) where the
/// first digit is the x offset (0 = left of the vertex) and the second the y offset.
template <class T, class Ghost = CopyGhost>
std::array<T, 4> gather_cells(const Field<T, Loc::cell>& f, const GridSpec& g, int i, int j,
                              const Ghost& ghost = {}) {
    if (i >= 1 && i < g.nx && j >= 1 && j < g.ny)
        return {f(i - 1, j - 1), f(i, j - 1), f(i - 1, j), f(i, j)};
    std::array<T, 4> out;
    const int di[4] = {-1, 0, -1, 0};
    const int dj[4] = {-1, -1, 0, 0};
    for (int k = 0; k < 4; ++k) {
        const GhostCell c = resolve_cell(g, i + di[k], j + dj[k]);
        out[k] = ghost(f(c.i, c.j), c);
    }
    return out;
}

/// The four vertices of cell (i, j), ordered (p00, p10, p01, p11).
template <class T>
std::array<T, 4> gather_vertices(const Field<T, Loc::vertex>& f, const GridSpec& g, int i, int j) {
    const int i1 = g.wrap_vx(i + 1);
    const int j1 = g.wrap_vy(j + 1);
    return {f(i, j), f(i1, j), f(i, j1), f(i1, j1)};
}

template <class T>
T diff_x(const std::array<T, 4>& s, double dx) {
    return ((s[1] + s[3]) - (s[0] + s[2])) * (0.5 / dx);
}
template <class T>
T diff_y(const std::array<T, 4>& s, double dy) {
    return ((s[2] + s[3]) - (s[0] + s[1])) * (0.5 / dy);
}
template <class T>
T mean4(const std::array<T, 4>& s) {
    return ((s[0] + s[1]) + (s[2] + s[3])) * 0.25;
}

template <class T>
struct Derivatives {
    T dx;
    T dy;
};

// ---------------------------------------------------------------------------
// Component-wise derivative pairs, the building block of all named operators.

template <class T, class Ghost = CopyGhost>
Derivatives<Field<T, Loc::vertex>> diff_pc(const Field<T, Loc::cell>& f, const GridSpec& g,
                                           const Ghost& ghost = {}) {
    require_shape(f, g, "diff_pc");
    Derivatives<Field<T, Loc::vertex>> d{Field<T, Loc::vertex>(g), Field<T, Loc::vertex>(g)};
    for (int j = 0; j < g.nvy(); ++j)
        for (int i = 0; i < g.nvx(); ++i) {
            const auto s = gather_cells(f, g, i, j, ghost);
            d.dx(i, j) = diff_x(s, g.dx);
            d.dy(i, j) = diff_y(s, g.dy);
        }
    return d;
}

template <class T>
Derivatives<Field<T, Loc::cell>> diff_cp(const Field<T, Loc::vertex>& f, const GridSpec& g) {
    require_shape(f, g, "diff_cp");
    Derivatives<Field<T, Loc::cell>> d{Field<T, Loc::cell>(g), Field<T, Loc::cell>(g)};
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const auto s = gather_vertices(f, g, i, j);
            d.dx(i, j) = diff_x(s, g.dx);
            d.dy(i, j) = diff_y(s, g.dy);
        }
    return d;
}

template <class T, class Ghost = CopyGhost>
Field<T, Loc::vertex> avg_c2p(const Field<T, Loc::cell>& f, const GridSpec& g, const Ghost& ghost = {}) {
    require_shape(f, g, "avg_c2p");
    Field<T, Loc::vertex> out(g);
    for (int j = 0; j < g.nvy(); ++j)
        for (int i = 0; i < g.nvx(); ++i) out(i, j) = mean4(gather_cells(f, g, i, j, ghost));
    return out;
}

template <class T>
Field<T, Loc::cell> avg_p2c(const Field<T, Loc::vertex>& f, const GridSpec& g) {
    require_shape(f, g, "avg_p2c");
    Field<T, Loc::cell> out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) out(i, j) = mean4(gather_vertices(f, g, i, j));
    return out;
}

// ---------------------------------------------------------------------------
// Named operators. The third spatial direction has no derivative.

inline VertexVector grad_pc(const CellScalar& phi, const GridSpec& g) {
    const auto d = diff_pc(phi, g);
    VertexVector out(g);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = {d.dx[k], d.dy[k], 0.0};
    return out;
}

inline CellVector grad_cp(const VertexScalar& phi, const GridSpec& g) {
    const auto d = diff_cp(phi, g);
    CellVector out(g);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = {d.dx[k], d.dy[k], 0.0};
    return out;
}

inline VertexScalar div_pc(const CellVector& a, const GridSpec& g) {
    const auto d = diff_pc(a, g);
    VertexScalar out(g);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = d.dx[k][0] + d.dy[k][1];
    return out;
}

inline CellScalar div_cp(const VertexVector& a, const GridSpec& g) {
    const auto d = diff_cp(a, g);
    CellScalar out(g);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = d.dx[k][0] + d.dy[k][1];
    return out;
}

/// (∂_y A_3, -∂_x A_3, ∂_x A_2 - ∂_y A_1)
inline Vec3 curl_from(const Vec3& ddx, const Vec3& ddy) { return {ddy[2], -ddx[2], ddx[1] - ddy[0]}; }

inline VertexVector curl_pc(const CellVector& a, const GridSpec& g) {
    const auto d = diff_pc(a, g);
    VertexVector out(g);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = curl_from(d.dx[k], d.dy[k]);
    return out;
}

inline CellVector curl_cp(const VertexVector& a, const GridSpec& g) {
    const auto d = diff_cp(a, g);
    CellVector out(g);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = curl_from(d.dx[k], d.dy[k]);
    return out;
}

/// Vertex-to-cell gradient of a vertex vector field, D(n, m) = ∂_n v_m.
inline CellTensor grad_cp(const VertexVector& v, const GridSpec& g) {
    const auto d = diff_cp(v, g);
    CellTensor out(g);
    for (std::size_t k = 0; k < out.size(); ++k) {
        Mat3 m;
        m.set_row(0, d.dx[k]);
        m.set_row(1, d.dy[k]);
        out[k] = m;
    }
    return out;
}

/// Cell-to-vertex divergence over the second index of a tensor, (∂_k S_ik).
inline VertexVector div_pc(const CellTensor& s, const GridSpec& g) {
    const auto d = diff_pc(s, g);
    VertexVector out(g);
    for (std::size_t k = 0; k < out.size(); ++k)
        for (std::size_t i = 0; i < 3; ++i) out[k][i] = d.dx[k](i, 0) + d.dy[k](i, 1);
    return out;
}

/// Vertex-to-cell divergence over the second index of a tensor, (∂_k S_ik).
inline CellVector div_cp(const VertexTensor& s, const GridSpec& g) {
    const auto d = diff_cp(s, g);
    CellVector out(g);
    for (std::size_t k = 0; k < out.size(); ++k)
        for (std::size_t i = 0; i < 3; ++i) out[k][i] = d.dx[k](i, 0) + d.dy[k](i, 1);
    return out;
}

}  // namespace gpr4
