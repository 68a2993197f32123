#pragma once

// Uniform 2D Cartesian grid with vertex staggering. Scalars and tensors live
// at cell centres, momentum lives at the vertices of the primal cells.
//
// Storage of every field is row-major over (iy, ix). Under periodic closure
// in a direction the last vertex line coincides with the first one and is
// not stored, so a vertex line holds nx entries instead of nx + 1.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gpr4/errors.hpp"
#include "gpr4/tensor.hpp"

namespace gpr4 {

enum class BoundaryKind { periodic, transmissive, wall, moving_wall };

inline std::string to_string(BoundaryKind k) {
    switch (k) {
        case BoundaryKind::periodic: return "periodic";
        case BoundaryKind::transmissive: return "transmissive";
        case BoundaryKind::wall: return "wall";
        case BoundaryKind::moving_wall: return "moving-wall";
    }
    return "?";
}

struct Boundary {
    BoundaryKind kind = BoundaryKind::periodic;
    Vec3 wall_velocity{};  // only read for moving_wall

    static Boundary periodic() { return {BoundaryKind::periodic, {}}; }
    static Boundary transmissive() { return {BoundaryKind::transmissive, {}}; }
    static Boundary wall() { return {BoundaryKind::wall, {}}; }
    static Boundary moving_wall(const Vec3& v) { return {BoundaryKind::moving_wall, v}; }
    static Boundary no_slip() { return moving_wall({0.0, 0.0, 0.0}); }

    bool is_wall() const { return kind == BoundaryKind::wall || kind == BoundaryKind::moving_wall; }
};

enum class Side : int { left = 0, right = 1, bottom = 2, top = 3 };

struct GridSpec {
    int nx = 0;
    int ny = 0;
    double dx = 0.0;
    double dy = 0.0;
    std::array<double, 2> origin{0.0, 0.0};
    std::array<Boundary, 4> sides{};  // indexed by Side

    GridSpec() = default;
    GridSpec(int nx_, int ny_, double dx_, double dy_, std::array<double, 2> origin_ = {0.0, 0.0},
             Boundary bc_x = Boundary::periodic(), Boundary bc_y = Boundary::periodic())
        : nx(nx_), ny(ny_), dx(dx_), dy(dy_), origin(origin_), sides{bc_x, bc_x, bc_y, bc_y} {
        validate();
    }

    /// Grid covering [x0, x1] x [y0, y1].
    static GridSpec box(int nx, int ny, double x0, double x1, double y0, double y1,
                        Boundary bc_x = Boundary::periodic(), Boundary bc_y = Boundary::periodic()) {
        if (nx < 1 || ny < 1) throw DimensionError("grid needs at least one cell per direction");
        return GridSpec(nx, ny, (x1 - x0) / nx, (y1 - y0) / ny, {x0, y0}, bc_x, bc_y);
    }

    void validate() const {
        if (nx < 2 || ny < 2) throw DimensionError("grid needs nx >= 2 and ny >= 2");
        if (!(dx > 0.0) || !(dy > 0.0)) throw DimensionError("grid spacing must be positive");
        const bool px0 = side(Side::left).kind == BoundaryKind::periodic;
        const bool px1 = side(Side::right).kind == BoundaryKind::periodic;
        const bool py0 = side(Side::bottom).kind == BoundaryKind::periodic;
        const bool py1 = side(Side::top).kind == BoundaryKind::periodic;
        if (px0 != px1 || py0 != py1) throw ConfigError("periodic boundaries must come in pairs");
    }

    const Boundary& side(Side s) const { return sides[static_cast<int>(s)]; }
    Boundary& side(Side s) { return sides[static_cast<int>(s)]; }

    bool periodic_x() const { return side(Side::left).kind == BoundaryKind::periodic; }
    bool periodic_y() const { return side(Side::bottom).kind == BoundaryKind::periodic; }
    bool fully_periodic() const { return periodic_x() && periodic_y(); }

    int nvx() const { return periodic_x() ? nx : nx + 1; }
    int nvy() const { return periodic_y() ? ny : ny + 1; }
    std::size_t num_cells() const { return static_cast<std::size_t>(nx) * ny; }
    std::size_t num_vertices() const { return static_cast<std::size_t>(nvx()) * nvy(); }

    double cell_volume() const { return dx * dy; }
    double vertex_volume() const { return dx * dy; }
    /// Characteristic vertex length 4|Ω_p| / |∂Ω_p|.
    double vertex_length() const { return 2.0 * dx * dy / (dx + dy); }

    double xc(int i) const { return origin[0] + (i + 0.5) * dx; }
    double yc(int j) const { return origin[1] + (j + 0.5) * dy; }
    double xv(int i) const { return origin[0] + i * dx; }
    double yv(int j) const { return origin[1] + j * dy; }
    double length_x() const { return nx * dx; }
    double length_y() const { return ny * dy; }

    std::size_t cell_index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    std::size_t vertex_index(int i, int j) const { return static_cast<std::size_t>(j) * nvx() + i; }

    /// Wrap a vertex index that may run one past the stored range under
    /// periodic closure.
    int wrap_vx(int i) const { return periodic_x() ? (i % nx + nx) % nx : i; }
    int wrap_vy(int j) const { return periodic_y() ? (j % ny + ny) % ny : j; }

    bool operator==(const GridSpec& o) const {
        if (nx != o.nx || ny != o.ny || dx != o.dx || dy != o.dy || origin != o.origin) return false;
        for (int s = 0; s < 4; ++s)
            if (sides[s].kind != o.sides[s].kind || !(sides[s].wall_velocity == o.sides[s].wall_velocity))
                return false;
        return true;
    }
};

enum class Loc { cell, vertex };

/// One value of type T per cell (or per stored vertex) of a grid.
template <class T, Loc L>
class Field {
public:
    using value_type = T;
    static constexpr Loc location = L;

    Field() = default;
    explicit Field(const GridSpec& g, const T& init = T{})
        : nx_(L == Loc::cell ? g.nx : g.nvx()), ny_(L == Loc::cell ? g.ny : g.nvy()),
          data_(static_cast<std::size_t>(nx_) * ny_, init) {}

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    std::size_t size() const { return data_.size(); }

    T& operator()(int i, int j) { return data_[static_cast<std::size_t>(j) * nx_ + i]; }
    const T& operator()(int i, int j) const { return data_[static_cast<std::size_t>(j) * nx_ + i]; }
    T& operator[](std::size_t k) { return data_[k]; }
    const T& operator[](std::size_t k) const { return data_[k]; }

    auto begin() { return data_.begin(); }
    auto end() { return data_.end(); }
    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }
    std::vector<T>& values() { return data_; }
    const std::vector<T>& values() const { return data_; }

    bool matches(const GridSpec& g) const {
        if constexpr (L == Loc::cell) return nx_ == g.nx && ny_ == g.ny;
        else return nx_ == g.nvx() && ny_ == g.nvy();
    }
    bool same_shape(const Field& o) const { return nx_ == o.nx_ && ny_ == o.ny_; }

    Field& operator+=(const Field& o) {
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Field& operator-=(const Field& o) {
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Field& operator*=(double s) {
        for (auto& x : data_) x *= s;
        return *this;
    }
    /// this += a * x
    Field& axpy(double a, const Field& x) {
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += x.data_[k] * a;
        return *this;
    }

    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(Field a, double s) { return a *= s; }
    friend Field operator*(double s, Field a) { return a *= s; }

    bool operator==(const Field& o) const { return nx_ == o.nx_ && ny_ == o.ny_ && data_ == o.data_; }

private:
    int nx_ = 0;
    int ny_ = 0;
    std::vector<T> data_;
};

using CellScalar = Field<double, Loc::cell>;
using CellVector = Field<Vec3, Loc::cell>;
using CellTensor = Field<Mat3, Loc::cell>;
using VertexScalar = Field<double, Loc::vertex>;
using VertexVector = Field<Vec3, Loc::vertex>;
using VertexTensor = Field<Mat3, Loc::vertex>;

template <class F>
void require_shape(const F& f, const GridSpec& g, const char* what) {
    if (!f.matches(g)) throw DimensionError(std::string("field size does not match grid: ") + what);
}

// ---------------------------------------------------------------------------
// Scalar products and norms. Summation order is fixed (storage order).

inline double component_dot(double a, double b) { return a * b; }
inline double component_dot(const Vec3& a, const Vec3& b) { return dot(a, b); }
inline double component_dot(const Mat3& a, const Mat3& b) { return ddot(a, b); }

inline double max_abs(double a) { return std::abs(a); }
inline double max_abs(const Vec3& a) { return std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2])}); }
inline double max_abs(const Mat3& a) {
    double m = 0.0;
    for (double x : a.m) m = std::max(m, std::abs(x));
    return m;
}

template <class T, Loc L>
double dot(const Field<T, L>& a, const Field<T, L>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += component_dot(a[k], b[k]);
    return s;
}

template <class T, Loc L>
double norm2(const Field<T, L>& a) {
    return std::sqrt(dot(a, a));
}

template <class T, Loc L>
double norm_inf(const Field<T, L>& a) {
    double m = 0.0;
    for (const auto& x : a) m = std::max(m, max_abs(x));
    return m;
}

inline bool is_finite(double a) { return std::isfinite(a); }
inline bool is_finite(const Vec3& a) { return std::isfinite(a[0]) && std::isfinite(a[1]) && std::isfinite(a[2]); }
inline bool is_finite(const Mat3& a) {
    for (double x : a.m)
        if (!std::isfinite(x)) return false;
    return true;
}

template <class T, Loc L>
bool all_finite(const Field<T, L>& a) {
    for (const auto& x : a)
        if (!is_finite(x)) return false;
    return true;
}

}  // namespace gpr4
