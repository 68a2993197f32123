#pragma once

// Conserved state q = (rho, rho v, E, A, J) over the staggered grid, derived
// primitive fields, and the wall constraints on vertex velocities.

#include <array>
#include <cstdint>
#include <vector>

#include "gpr4/errors.hpp"
#include "gpr4/grid.hpp"
#include "gpr4/model.hpp"
#include "gpr4/operators.hpp"

namespace gpr4 {

struct ConservedState {
    CellScalar rho;
    VertexVector mom;  // rho v at vertices
    CellScalar E;
    CellTensor A;
    CellVector J;

    ConservedState() = default;
    explicit ConservedState(const GridSpec& g)
        : rho(g, 1.0), mom(g), E(g), A(g, Mat3::identity()), J(g) {}

    bool matches(const GridSpec& g) const {
        return rho.matches(g) && mom.matches(g) && E.matches(g) && A.matches(g) && J.matches(g);
    }
    bool operator==(const ConservedState& o) const {
        return rho == o.rho && mom == o.mom && E == o.E && A == o.A && J == o.J;
    }
};

inline void require_state(const ConservedState& s, const GridSpec& g, const char* what) {
    if (!s.matches(g)) throw DimensionError(std::string("state does not match grid: ") + what);
}

inline VertexScalar vertex_density(const CellScalar& rho, const GridSpec& g) { return avg_c2p(rho, g); }

/// v^p = (rho v)^p / rho^p
inline VertexVector vertex_velocity(const VertexVector& mom, const CellScalar& rho, const GridSpec& g) {
    const VertexScalar rp = vertex_density(rho, g);
    VertexVector v(g);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = mom[k] / rp[k];
    return v;
}

/// Cell velocity from the cell average of the vertex momentum.
inline CellVector cell_velocity(const VertexVector& mom, const CellScalar& rho, const GridSpec& g) {
    CellVector m = avg_p2c(mom, g);
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = m[k] / rho[k];
    return m;
}

inline CellScalar temperature(const ConservedState& s, const GridSpec& g, const ModelParams& p) {
    require_state(s, g, "temperature");
    const CellVector v = cell_velocity(s.mom, s.rho, g);
    CellScalar T(g);
    for (std::size_t k = 0; k < T.size(); ++k)
        T[k] = energy_extract_T(s.E[k], s.rho[k], v[k], metric_of(s.A[k]), s.J[k], p);
    return T;
}

inline CellScalar pressure(const ConservedState& s, const GridSpec& g, const ModelParams& p) {
    CellScalar T = temperature(s, g, p);
    for (std::size_t k = 0; k < T.size(); ++k) T[k] = eos_pressure(s.rho[k], T[k], p);
    return T;
}

// ---------------------------------------------------------------------------
// Wall constraints on vertex vectors. A slip wall fixes the normal component
// to zero; a moving wall fixes all three components to the wall velocity.
// Bottom/top are applied before left/right, so a corner shared by a moving
// lid and a no-slip side wall ends up no-slip.

class VertexConstraints {
public:
    VertexConstraints() = default;
    explicit VertexConstraints(const GridSpec& g) : mask_(g.num_vertices(), 0), value_(g) {
        const int nvx = g.nvx(), nvy = g.nvy();
        auto fix = [&](int i, int j, const Boundary& b, int normal) {
            const std::size_t k = g.vertex_index(i, j);
            if (b.kind == BoundaryKind::wall) {
                mask_[k] |= static_cast<std::uint8_t>(1u << normal);
                value_[k][normal] = 0.0;
            } else if (b.kind == BoundaryKind::moving_wall) {
                mask_[k] = 7;
                value_[k] = b.wall_velocity;
            }
        };
        if (!g.periodic_y())
            for (int i = 0; i < nvx; ++i) {
                fix(i, 0, g.side(Side::bottom), 1);
                fix(i, nvy - 1, g.side(Side::top), 1);
            }
        if (!g.periodic_x())
            for (int j = 0; j < nvy; ++j) {
                fix(0, j, g.side(Side::left), 0);
                fix(nvx - 1, j, g.side(Side::right), 0);
            }
        for (auto m : mask_) any_ = any_ || m != 0;
    }

    bool any() const { return any_; }
    bool fixed(std::size_t k, int c) const { return (mask_[k] >> c) & 1u; }
    const VertexVector& values() const { return value_; }

    /// Zero every constrained component.
    void zero_fixed(VertexVector& f) const {
        if (!any_) return;
        for (std::size_t k = 0; k < f.size(); ++k)
            for (int c = 0; c < 3; ++c)
                if (fixed(k, c)) f[k][c] = 0.0;
    }
    /// Zero every free component.
    void zero_free(VertexVector& f) const {
        for (std::size_t k = 0; k < f.size(); ++k)
            for (int c = 0; c < 3; ++c)
                if (!fixed(k, c)) f[k][c] = 0.0;
    }
    /// Overwrite constrained components with the wall velocity.
    void impose_velocity(VertexVector& v) const {
        if (!any_) return;
        for (std::size_t k = 0; k < v.size(); ++k)
            for (int c = 0; c < 3; ++c)
                if (fixed(k, c)) v[k][c] = value_[k][c];
    }
    /// Same for a momentum field, scaled by the vertex density.
    void impose_momentum(VertexVector& m, const VertexScalar& rho_p) const {
        if (!any_) return;
        for (std::size_t k = 0; k < m.size(); ++k)
            for (int c = 0; c < 3; ++c)
                if (fixed(k, c)) m[k][c] = rho_p[k] * value_[k][c];
    }

private:
    std::vector<std::uint8_t> mask_;
    VertexVector value_;
    bool any_ = false;
};

/// Zero the wall-normal components at wall vertices (adiabatic and
/// impermeable walls). Moving walls are treated like slip walls here.
inline void zero_wall_normal(VertexVector& f, const GridSpec& g) {
    const int nvx = g.nvx(), nvy = g.nvy();
    if (!g.periodic_y()) {
        for (int i = 0; i < nvx; ++i) {
            if (g.side(Side::bottom).is_wall()) f(i, 0)[1] = 0.0;
            if (g.side(Side::top).is_wall()) f(i, nvy - 1)[1] = 0.0;
        }
    }
    if (!g.periodic_x()) {
        for (int j = 0; j < nvy; ++j) {
            if (g.side(Side::left).is_wall()) f(0, j)[0] = 0.0;
            if (g.side(Side::right).is_wall()) f(nvx - 1, j)[0] = 0.0;
        }
    }
}

struct Totals {
    double mass;
    Vec3 momentum;
    double energy;
};

/// Volume integrals of the conserved variables.
inline Totals totals(const ConservedState& s, const GridSpec& g) {
    Totals t{0.0, {}, 0.0};
    for (std::size_t k = 0; k < s.rho.size(); ++k) {
        t.mass += s.rho[k];
        t.energy += s.E[k];
    }
    for (const auto& m : s.mom) t.momentum += m;
    t.mass *= g.cell_volume();
    t.energy *= g.cell_volume();
    t.momentum *= g.vertex_volume();
    return t;
}

}  // namespace gpr4
