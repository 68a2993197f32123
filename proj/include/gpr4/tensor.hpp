#pragma once

// Small fixed-size vector and tensor types used pointwise by the solver.
// Everything is 3D even though the grid is 2D: the third direction carries
// no derivatives but A, J and v keep all three components.

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

namespace gpr4 {

struct Vec3 {
    std::array<double, 3> v{0.0, 0.0, 0.0};

    constexpr Vec3() = default;
    constexpr Vec3(double x, double y, double z) : v{x, y, z} {}

    constexpr double& operator[](std::size_t i) { return v[i]; }
    constexpr double operator[](std::size_t i) const { return v[i]; }

    constexpr Vec3& operator+=(const Vec3& o) {
        for (std::size_t i = 0; i < 3; ++i) v[i] += o.v[i];
        return *this;
    }
    constexpr Vec3& operator-=(const Vec3& o) {
        for (std::size_t i = 0; i < 3; ++i) v[i] -= o.v[i];
        return *this;
    }
    constexpr Vec3& operator*=(double s) {
        for (auto& x : v) x *= s;
        return *this;
    }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(Vec3 a) { return a *= -1.0; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }

constexpr double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Row-major 3x3 tensor, m(i, k) = M_ik.
struct Mat3 {
    std::array<double, 9> m{};

    constexpr Mat3() = default;
    constexpr Mat3(double a00, double a01, double a02, double a10, double a11, double a12, double a20,
                   double a21, double a22)
        : m{a00, a01, a02, a10, a11, a12, a20, a21, a22} {}

    static constexpr Mat3 identity() { return diag(1.0, 1.0, 1.0); }
    static constexpr Mat3 diag(double a, double b, double c) { return Mat3(a, 0, 0, 0, b, 0, 0, 0, c); }

    constexpr double& operator()(std::size_t i, std::size_t k) { return m[3 * i + k]; }
    constexpr double operator()(std::size_t i, std::size_t k) const { return m[3 * i + k]; }

    constexpr Vec3 row(std::size_t i) const { return {m[3 * i], m[3 * i + 1], m[3 * i + 2]}; }
    constexpr void set_row(std::size_t i, const Vec3& r) {
        for (std::size_t k = 0; k < 3; ++k) m[3 * i + k] = r[k];
    }

    constexpr Mat3& operator+=(const Mat3& o) {
        for (std::size_t i = 0; i < 9; ++i) m[i] += o.m[i];
        return *this;
    }
    constexpr Mat3& operator-=(const Mat3& o) {
        for (std::size_t i = 0; i < 9; ++i) m[i] -= o.m[i];
        return *this;
    }
    constexpr Mat3& operator*=(double s) {
        for (auto& x : m) x *= s;
        return *this;
    }
    friend constexpr bool operator==(const Mat3&, const Mat3&) = default;
};

constexpr Mat3 operator+(Mat3 a, const Mat3& b) { return a += b; }
constexpr Mat3 operator-(Mat3 a, const Mat3& b) { return a -= b; }
constexpr Mat3 operator*(Mat3 a, double s) { return a *= s; }
constexpr Mat3 operator*(double s, Mat3 a) { return a *= s; }

constexpr Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 c;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k) {
            double s = 0.0;
            for (std::size_t j = 0; j < 3; ++j) s += a(i, j) * b(j, k);
            c(i, k) = s;
        }
    return c;
}

constexpr Vec3 operator*(const Mat3& a, const Vec3& x) {
    return {a(0, 0) * x[0] + a(0, 1) * x[1] + a(0, 2) * x[2], a(1, 0) * x[0] + a(1, 1) * x[1] + a(1, 2) * x[2],
            a(2, 0) * x[0] + a(2, 1) * x[1] + a(2, 2) * x[2]};
}

constexpr Mat3 transpose(const Mat3& a) {
    Mat3 t;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k) t(i, k) = a(k, i);
    return t;
}

constexpr double trace(const Mat3& a) { return a(0, 0) + a(1, 1) + a(2, 2); }

/// A:B = A_ij B_ij
constexpr double ddot(const Mat3& a, const Mat3& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < 9; ++i) s += a.m[i] * b.m[i];
    return s;
}

constexpr Mat3 outer(const Vec3& a, const Vec3& b) {
    Mat3 o;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k) o(i, k) = a[i] * b[k];
    return o;
}

constexpr double det(const Mat3& a) {
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

/// Closed-form inverse: adjugate divided by the determinant. No pivoting; the
/// caller is responsible for det != 0.
constexpr Mat3 inverse(const Mat3& a) {
    Mat3 adj;
    adj(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
    adj(0, 1) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
    adj(0, 2) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
    adj(1, 0) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
    adj(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
    adj(1, 2) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
    adj(2, 0) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
    adj(2, 1) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
    adj(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const double d = a(0, 0) * adj(0, 0) + a(0, 1) * adj(1, 0) + a(0, 2) * adj(2, 0);
    return adj * (1.0 / d);
}

inline double frobenius(const Mat3& a) { return std::sqrt(ddot(a, a)); }

/// Eigen-decomposition of a symmetric 3x3 matrix by cyclic Jacobi rotations.
/// Returns eigenvalues and a matrix whose columns are the eigenvectors.
struct SymEigen {
    Vec3 values;
    Mat3 vectors;
};

inline SymEigen sym_eigen(const Mat3& s) {
    Mat3 a = s;
    Mat3 q = Mat3::identity();
    for (int sweep = 0; sweep < 50; ++sweep) {
        const double off = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
        const double scale = a(0, 0) * a(0, 0) + a(1, 1) * a(1, 1) + a(2, 2) * a(2, 2);
        if (off <= 1e-34 * scale || off == 0.0) break;
        for (std::size_t p = 0; p < 2; ++p)
            for (std::size_t r = p + 1; r < 3; ++r) {
                const double apr = a(p, r);
                if (apr == 0.0) continue;
                const double theta = (a(r, r) - a(p, p)) / (2.0 * apr);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t k = 0; k < 3; ++k) {
                    const double akp = a(k, p), akr = a(k, r);
                    a(k, p) = c * akp - sn * akr;
                    a(k, r) = sn * akp + c * akr;
                }
                for (std::size_t k = 0; k < 3; ++k) {
                    const double apk = a(p, k), ark = a(r, k);
                    a(p, k) = c * apk - sn * ark;
                    a(r, k) = sn * apk + c * ark;
                }
                for (std::size_t k = 0; k < 3; ++k) {
                    const double qkp = q(k, p), qkr = q(k, r);
                    q(k, p) = c * qkp - sn * qkr;
                    q(k, r) = sn * qkp + c * qkr;
                }
            }
    }
    return {{a(0, 0), a(1, 1), a(2, 2)}, q};
}

/// Rank-4 tensor T_{ik nm}, stored flat with index ((i*3 + k)*3 + n)*3 + m.
struct Tensor4 {
    std::array<double, 81> t{};

    static constexpr std::size_t index(std::size_t i, std::size_t k, std::size_t n, std::size_t m) {
        return ((i * 3 + k) * 3 + n) * 3 + m;
    }
    constexpr double& operator()(std::size_t i, std::size_t k, std::size_t n, std::size_t m) {
        return t[index(i, k, n, m)];
    }
    constexpr double operator()(std::size_t i, std::size_t k, std::size_t n, std::size_t m) const {
        return t[index(i, k, n, m)];
    }

    /// S_ik = T_iknm X_nm
    constexpr Mat3 contract(const Mat3& x) const {
        Mat3 s;
        std::size_t idx = 0;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < 3; ++k) {
                double acc = 0.0;
                for (std::size_t nm = 0; nm < 9; ++nm) acc += t[idx++] * x.m[nm];
                s(i, k) = acc;
            }
        return s;
    }
};

}  // namespace gpr4
