#pragma once

#include <array>
#include <cmath>

namespace stokesim {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x, double y, double z) : x(x), y(y), z(z) {}

    constexpr Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 &operator+=(const Vec3 &o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    Vec3 &operator-=(const Vec3 &o) {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    Vec3 &operator*=(double s) {
        x *= s;
        y *= s;
        z *= s;
        return *this;
    }
    constexpr bool operator==(const Vec3 &o) const { return x == o.x && y == o.y && z == o.z; }

    constexpr double norm2() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
    Vec3 normalized() const {
        const double n = norm();
        return {x / n, y / n, z / n};
    }
    bool is_finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

constexpr Vec3 operator*(double s, const Vec3 &v) { return v * s; }
constexpr double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3 &a, const Vec3 &b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// Dense 3x3 matrix, row-major.
struct Mat3 {
    std::array<std::array<double, 3>, 3> a{};

    static constexpr Mat3 zero() { return Mat3{}; }
    static constexpr Mat3 identity() {
        Mat3 m;
        m.a[0][0] = m.a[1][1] = m.a[2][2] = 1.0;
        return m;
    }

    constexpr double operator()(int i, int j) const { return a[i][j]; }
    constexpr double &operator()(int i, int j) { return a[i][j]; }

    constexpr Mat3 operator+(const Mat3 &o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.a[i][j] = a[i][j] + o.a[i][j];
        return r;
    }
    constexpr Mat3 operator-(const Mat3 &o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.a[i][j] = a[i][j] - o.a[i][j];
        return r;
    }
    constexpr Mat3 operator*(double s) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.a[i][j] = a[i][j] * s;
        return r;
    }
    Mat3 &operator+=(const Mat3 &o) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                a[i][j] += o.a[i][j];
        return *this;
    }
    constexpr Vec3 operator*(const Vec3 &v) const {
        return {a[0][0] * v.x + a[0][1] * v.y + a[0][2] * v.z, a[1][0] * v.x + a[1][1] * v.y + a[1][2] * v.z,
                a[2][0] * v.x + a[2][1] * v.y + a[2][2] * v.z};
    }
    constexpr Mat3 operator*(const Mat3 &o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k)
                    s += a[i][k] * o.a[k][j];
                r.a[i][j] = s;
            }
        return r;
    }
    constexpr bool operator==(const Mat3 &o) const { return a == o.a; }

    constexpr Mat3 transpose() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.a[i][j] = a[j][i];
        return r;
    }
    constexpr double trace() const { return a[0][0] + a[1][1] + a[2][2]; }
    constexpr Mat3 symmetric_part() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.a[i][j] = 0.5 * (a[i][j] + a[j][i]);
        return r;
    }
    constexpr Mat3 skew_part() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.a[i][j] = 0.5 * (a[i][j] - a[j][i]);
        return r;
    }
    /// Trace-free part A - (tr A / 3) Id.
    constexpr Mat3 deviatoric() const {
        Mat3 r = *this;
        const double t = trace() / 3.0;
        r.a[0][0] -= t;
        r.a[1][1] -= t;
        r.a[2][2] -= t;
        return r;
    }
    /// Symmetric trace-free projection.
    constexpr Mat3 deviatoric_symmetric() const { return symmetric_part().deviatoric(); }

    double frobenius_norm() const { return std::sqrt(double_dot(*this, *this)); }
    bool is_finite() const {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (!std::isfinite(a[i][j]))
                    return false;
        return true;
    }

    /// A : B = A_ij B_ij.
    static constexpr double double_dot(const Mat3 &p, const Mat3 &q) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                s += p.a[i][j] * q.a[i][j];
        return s;
    }
};

constexpr Mat3 operator*(double s, const Mat3 &m) { return m * s; }

constexpr Mat3 outer(const Vec3 &a, const Vec3 &b) {
    Mat3 m;
    m.a = {{{a.x * b.x, a.x * b.y, a.x * b.z}, {a.y * b.x, a.y * b.y, a.y * b.z}, {a.z * b.x, a.z * b.y, a.z * b.z}}};
    return m;
}

/// a (x)° b = a (x) b - (a.b)/3 Id.
constexpr Mat3 traceless_outer(const Vec3 &a, const Vec3 &b) {
    Mat3 m = outer(a, b);
    const double t = dot(a, b) / 3.0;
    m.a[0][0] -= t;
    m.a[1][1] -= t;
    m.a[2][2] -= t;
    return m;
}

/// a (x)_s° b = (a (x) b + b (x) a)/2 - (a.b)/3 Id.
constexpr Mat3 traceless_sym_outer(const Vec3 &a, const Vec3 &b) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double ai = (i == 0) ? a.x : (i == 1) ? a.y : a.z;
            const double aj = (j == 0) ? a.x : (j == 1) ? a.y : a.z;
            const double bi = (i == 0) ? b.x : (i == 1) ? b.y : b.z;
            const double bj = (j == 0) ? b.x : (j == 1) ? b.y : b.z;
            m.a[i][j] = 0.5 * (ai * bj + bi * aj);
        }
    const double t = dot(a, b) / 3.0;
    m.a[0][0] -= t;
    m.a[1][1] -= t;
    m.a[2][2] -= t;
    return m;
}

/// Skew matrix (a x b)_ij = a_i b_j - a_j b_i.
constexpr Mat3 cross_matrix(const Vec3 &a, const Vec3 &b) {
    Mat3 m = outer(a, b);
    return m - m.transpose();
}

/// Rank-3 tensor t[i][j][k] = d_k K_ij of a matrix kernel K.
struct Grad3 {
    double t[3][3][3] = {};

    /// v_i = t_ijk T_jk.
    constexpr Vec3 contract(const Mat3 &T) const {
        Vec3 v;
        double c[3] = {0.0, 0.0, 0.0};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    c[i] += t[i][j][k] * T.a[j][k];
        v.x = c[0];
        v.y = c[1];
        v.z = c[2];
        return v;
    }

    /// M_ik = t_ijk f_j; the gradient of x -> K(x) f for constant f.
    constexpr Mat3 contract(const Vec3 &f) const {
        Mat3 m;
        const double fv[3] = {f.x, f.y, f.z};
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) {
                double s = 0.0;
                for (int j = 0; j < 3; ++j)
                    s += t[i][j][k] * fv[j];
                m.a[i][k] = s;
            }
        return m;
    }

    constexpr Grad3 operator*(double s) const {
        Grad3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    r.t[i][j][k] = t[i][j][k] * s;
        return r;
    }
    constexpr Grad3 operator-(const Grad3 &o) const {
        Grad3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    r.t[i][j][k] = t[i][j][k] - o.t[i][j][k];
        return r;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    s += t[i][j][k] * t[i][j][k];
        return std::sqrt(s);
    }
};

} // namespace stokesim
