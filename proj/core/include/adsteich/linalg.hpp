#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <ostream>

namespace ats {

// 2x2 real matrix, row major.
struct Mat2 {
    double a = 1, b = 0, c = 0, d = 1;

    static Mat2 identity() { return {}; }
    static Mat2 diag(double x, double y) { return {x, 0, 0, y}; }

    double trace() const { return a + d; }
    double det() const { return a * d - b * c; }

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 operator-(const Mat2& o) const {
        return {a - o.a, b - o.b, c - o.c, d - o.d};
    }
    Mat2 operator-() const { return {-a, -b, -c, -d}; }

    // Inverse assuming det = 1.
    Mat2 inv_unit() const { return {d, -b, -c, a}; }

    double max_abs() const {
        return std::max(std::max(std::abs(a), std::abs(b)),
                        std::max(std::abs(c), std::abs(d)));
    }
};

inline std::ostream& operator<<(std::ostream& os, const Mat2& m) {
    return os << "[" << m.a << " " << m.b << "; " << m.c << " " << m.d << "]";
}

// Flips the sign so the largest-magnitude entry (first in row-major order
// on ties) is positive. Fixes the PSL2 representative deterministically.
inline Mat2 canonical_sign(const Mat2& m) {
    const double v[4] = {m.a, m.b, m.c, m.d};
    int arg = 0;
    for (int i = 1; i < 4; ++i)
        if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    return v[arg] < 0 ? -m : m;
}

// Max-abs distance between the canonical representatives of two
// unit-determinant matrices; 0 iff they agree in PSL2.
inline double psl2_distance(const Mat2& m, const Mat2& n) {
    return (canonical_sign(m) - canonical_sign(n)).max_abs();
}

// 3-vector used by both the hyperboloid model of H^2 and the AdS quadric;
// the bilinear form lives with each module.
struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double euclid_dot(const Vec3& u, const Vec3& v) {
    return u.x * v.x + u.y * v.y + u.z * v.z;
}

inline Vec3 euclid_cross(const Vec3& u, const Vec3& v) {
    return {u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z,
            u.x * v.y - u.y * v.x};
}

inline double det3(const Vec3& u, const Vec3& v, const Vec3& w) {
    return euclid_dot(u, euclid_cross(v, w));
}

} // namespace ats
