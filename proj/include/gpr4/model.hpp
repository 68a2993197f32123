#pragma once

// Closure of the hyperbolic continuum model: ideal-gas equation of state,
// energy contributions, stress tensors, heat flux and relaxation functions.
// All functions are pointwise.

#include <cmath>
#include <limits>
#include <string>

#include "gpr4/errors.hpp"
#include "gpr4/tensor.hpp"

namespace gpr4 {

struct ModelParams {
    double gamma = 1.4;
    double cv = 2.5;
    double cs = 1.0;    // shear sound speed
    double ch = 1.0;    // heat wave speed coefficient
    double rho0 = 1.0;  // reference density
    double tau1 = 1e20; // strain relaxation time
    double tau2 = 1e20; // thermal impulse relaxation time

    void validate() const {
        if (!(gamma > 1.0)) throw ConfigError("gamma must be > 1");
        if (!(cv > 0.0)) throw ConfigError("cv must be > 0");
        if (!(cs >= 0.0)) throw ConfigError("cs must be >= 0");
        if (!(ch >= 0.0)) throw ConfigError("ch must be >= 0");
        if (!(rho0 > 0.0)) throw ConfigError("rho0 must be > 0");
        if (!(tau1 > 0.0)) throw ConfigError("tau1 must be > 0");
        if (!(tau2 > 0.0)) throw ConfigError("tau2 must be > 0");
    }

    /// Shear viscosity of the stiff relaxation limit.
    double viscosity() const { return rho0 * cs * cs * tau1 / 6.0; }
    /// Heat conductivity of the stiff relaxation limit at (rho, T).
    double conductivity(double rho, double T) const { return rho * T * ch * ch * tau2; }
};

// --- equation of state ------------------------------------------------------

inline double eos_pressure(double rho, double T, const ModelParams& p) {
    if (!(rho > 0.0) || !(T > 0.0)) throw DomainError("eos: density and temperature must be positive");
    return (p.gamma - 1.0) * rho * p.cv * T;
}

inline double eos_temperature(double rho, double pressure, const ModelParams& p) {
    if (!(rho > 0.0) || !(pressure > 0.0)) throw DomainError("eos: density and pressure must be positive");
    return pressure / ((p.gamma - 1.0) * rho * p.cv);
}

/// Entropy diagnostic S = cv ln(p / rho^gamma), additive constant fixed to zero.
inline double entropy(double rho, double pressure, const ModelParams& p) {
    return p.cv * std::log(pressure / std::pow(rho, p.gamma));
}

// --- kinematics -------------------------------------------------------------

/// G = Aᵀ A
inline Mat3 metric_of(const Mat3& a) { return transpose(a) * a; }

inline Mat3 deviator(const Mat3& g) {
    Mat3 d = g;
    const double t = trace(g) / 3.0;
    d(0, 0) -= t;
    d(1, 1) -= t;
    d(2, 2) -= t;
    return d;
}

// --- energy -----------------------------------------------------------------

struct EnergyParts {
    double internal;  // rho cv T
    double kinetic;   // ½ rho |v|²
    double elastic;   // ¼ rho cs² G̊:G̊
    double thermal;   // ½ ch² rho |J|²

    double total() const { return internal + kinetic + elastic + thermal; }
    double mechanical() const { return kinetic + elastic + thermal; }
};

inline double elastic_energy(double rho, const Mat3& g, const ModelParams& p) {
    const Mat3 dev = deviator(g);
    return 0.25 * rho * p.cs * p.cs * ddot(dev, dev);
}

inline double thermal_impulse_energy(double rho, const Vec3& j, const ModelParams& p) {
    return 0.5 * p.ch * p.ch * rho * dot(j, j);
}

inline EnergyParts energy_parts(double rho, const Vec3& v, const Mat3& g, const Vec3& j, double T,
                                const ModelParams& p) {
    return {rho * p.cv * T, 0.5 * rho * dot(v, v), elastic_energy(rho, g, p), thermal_impulse_energy(rho, j, p)};
}

inline double energy_compose(double rho, const Vec3& v, const Mat3& g, const Vec3& j, double T,
                             const ModelParams& p) {
    if (!(rho > 0.0)) throw DomainError("energy_compose: density must be positive");
    return energy_parts(rho, v, g, j, T, p).total();
}

/// Inverse of energy_compose for the temperature.
inline double energy_extract_T(double E, double rho, const Vec3& v, const Mat3& g, const Vec3& j,
                               const ModelParams& p) {
    if (!(rho > 0.0)) throw StateError("energy_extract_T: non-positive density");
    const double e1 = E - 0.5 * rho * dot(v, v) - elastic_energy(rho, g, p) - thermal_impulse_energy(rho, j, p);
    if (!(e1 > 0.0)) throw StateError("negative internal energy (E1 = " + std::to_string(e1) + ")");
    return e1 / (rho * p.cv);
}

// --- stresses and fluxes ----------------------------------------------------

struct Stresses {
    Mat3 sigma;  // rho cs² G G̊
    Mat3 omega;  // rho ch² J ⊗ J
};

inline Stresses stresses(double rho, const Mat3& g, const Vec3& j, const ModelParams& p) {
    return {(rho * p.cs * p.cs) * (g * deviator(g)), (rho * p.ch * p.ch) * outer(j, j)};
}

/// α = ∂E/∂A = rho cs² A G̊
inline Mat3 alpha_of(double rho, const Mat3& a, const ModelParams& p) {
    return (rho * p.cs * p.cs) * (a * deviator(metric_of(a)));
}

inline Vec3 heat_flux(double rho, double T, const Vec3& j, const ModelParams& p) {
    return (rho * p.ch * p.ch * T) * j;
}

// --- relaxation -------------------------------------------------------------

struct Thetas {
    double theta1;
    double theta2;
};

inline Thetas thetas(double rho, const Mat3& a, const ModelParams& p) {
    const double d = det(a);
    if (!(d > 0.0)) throw StateError("distortion with non-positive determinant");
    return {rho * p.tau1 * p.cs * p.cs * std::pow(d, -5.0 / 3.0) / 3.0, rho * p.ch * p.ch * p.tau2};
}

/// 2 Δt rho cs² / θ1 = 6 Δt |A|^{5/3} / τ1. Evaluated without θ1 so that
/// cs = 0 does not produce 0/0.
inline double strain_relaxation_factor(const Mat3& a, double dt, const ModelParams& p) {
    const double d = det(a);
    if (!(d > 0.0)) throw StateError("distortion with non-positive determinant");
    return 6.0 * dt * std::pow(d, 5.0 / 3.0) / p.tau1;
}

/// Entropy production α:α/(T θ1) + β·β/(T θ2); diagnostic only.
inline double entropy_production(double rho, const Mat3& a, const Vec3& j, double T, const ModelParams& p) {
    double s = 0.0;
    if (p.cs > 0.0) {
        const Mat3 al = alpha_of(rho, a, p);
        s += ddot(al, al) / (T * thetas(rho, a, p).theta1);
    }
    if (p.ch > 0.0) {
        const Vec3 beta = (rho * p.ch * p.ch) * j;
        s += dot(beta, beta) / (T * rho * p.ch * p.ch * p.tau2);
    }
    return s;
}

// --- Mach numbers -----------------------------------------------------------

struct MachNumbers {
    double acoustic;
    double shear;  // +inf when cs == 0 and |v| > 0
    double heat;   // +inf when ch == 0 and |v| > 0
};

inline MachNumbers mach_numbers(double rho, const Vec3& v, double pressure, double T, const ModelParams& p) {
    if (!(rho > 0.0) || !(pressure > 0.0) || !(T > 0.0))
        throw DomainError("mach_numbers: rho, p and T must be positive");
    const double speed = norm(v);
    const double inf = std::numeric_limits<double>::infinity();
    auto ratio = [&](double c) { return speed == 0.0 ? 0.0 : (c > 0.0 ? speed / c : inf); };
    return {speed / std::sqrt(p.gamma * pressure / rho), ratio(p.cs), ratio(p.ch * std::sqrt(T / p.cv))};
}

}  // namespace gpr4
