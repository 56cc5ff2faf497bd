#pragma once

#include <array>
#include <cmath>

namespace kinlab {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline Vec3 operator+(const Vec3 &a, const Vec3 &b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3 &a, const Vec3 &b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator*(double s, const Vec3 &a) {
    return {s * a[0], s * a[1], s * a[2]};
}
inline Vec3 operator*(const Vec3 &a, double s) {
    return {s * a[0], s * a[1], s * a[2]};
}
inline Vec3 operator-(const Vec3 &a) { return {-a[0], -a[1], -a[2]}; }

inline double dot(const Vec3 &a, const Vec3 &b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline Vec3 cross(const Vec3 &a, const Vec3 &b) {
    return {a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}
inline double norm2(const Vec3 &a) { return dot(a, a); }
inline double norm(const Vec3 &a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3 &a) {
    double n = norm(a);
    return {a[0] / n, a[1] / n, a[2] / n};
}
inline Vec3 madd(const Vec3 &a, double s, const Vec3 &b) {
    return {a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]};
}

inline Vec3 matvec(const Mat3 &m, const Vec3 &x) {
    return {dot(m[0], x), dot(m[1], x), dot(m[2], x)};
}

/* Orthonormal pair spanning the plane normal to unit vector n. */
inline void tangent_basis(const Vec3 &n, Vec3 &t1, Vec3 &t2) {
    Vec3 h = std::fabs(n[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    t1 = normalized(cross(n, h));
    t2 = cross(n, t1);
}

}  // namespace kinlab
