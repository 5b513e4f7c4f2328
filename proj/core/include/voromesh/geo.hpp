#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>

namespace voromesh {

/// Integer lattice point. Reference-cell geometry lives on [0,48]^dim,
/// global exact coordinates on [0, 48*2^L]^dim; both fit easily in 32 bits
/// (the level cap keeps 48*2^L below 2^31).
struct Vec3i {
    std::array<int32_t, 3> v{0, 0, 0};

    constexpr Vec3i() = default;
    constexpr Vec3i(int32_t x, int32_t y, int32_t z) : v{x, y, z} {}

    constexpr int32_t& operator[](int i) { return v[i]; }
    constexpr int32_t operator[](int i) const { return v[i]; }

    friend constexpr Vec3i operator+(Vec3i a, Vec3i b) {
        return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
    }
    friend constexpr Vec3i operator-(Vec3i a, Vec3i b) {
        return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
    }
    friend constexpr Vec3i operator*(int32_t s, Vec3i a) {
        return {s * a[0], s * a[1], s * a[2]};
    }
    friend constexpr bool operator==(Vec3i a, Vec3i b) { return a.v == b.v; }
    friend constexpr bool operator!=(Vec3i a, Vec3i b) { return !(a == b); }
    friend constexpr bool operator<(Vec3i a, Vec3i b) { return a.v < b.v; }

    friend constexpr Vec3i cross(Vec3i a, Vec3i b) {
        return {a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0]};
    }
    friend constexpr int64_t dot(Vec3i a, Vec3i b) {
        return int64_t(a[0]) * b[0] + int64_t(a[1]) * b[1] + int64_t(a[2]) * b[2];
    }
    friend std::ostream& operator<<(std::ostream& os, Vec3i a) {
        return os << '(' << a[0] << ',' << a[1] << ',' << a[2] << ')';
    }
};

/// 64-bit cross product for coordinates that may already be large (global scale).
inline std::array<int64_t, 3> cross64(Vec3i a, Vec3i b) {
    return {int64_t(a[1]) * b[2] - int64_t(a[2]) * b[1],
            int64_t(a[2]) * b[0] - int64_t(a[0]) * b[2],
            int64_t(a[0]) * b[1] - int64_t(a[1]) * b[0]};
}

struct Vec3d {
    std::array<double, 3> v{0.0, 0.0, 0.0};

    constexpr Vec3d() = default;
    constexpr Vec3d(double x, double y, double z) : v{x, y, z} {}

    constexpr double& operator[](int i) { return v[i]; }
    constexpr double operator[](int i) const { return v[i]; }

    friend constexpr Vec3d operator+(Vec3d a, Vec3d b) {
        return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
    }
    friend constexpr Vec3d operator-(Vec3d a, Vec3d b) {
        return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
    }
    friend constexpr Vec3d operator*(double s, Vec3d a) {
        return {s * a[0], s * a[1], s * a[2]};
    }
    friend constexpr double dot(Vec3d a, Vec3d b) {
        return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    }
    friend constexpr Vec3d cross(Vec3d a, Vec3d b) {
        return {a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0]};
    }
    friend double norm(Vec3d a) { return std::sqrt(dot(a, a)); }
};

/// Reduced fraction of 64-bit integers. Used for exact volumes and areas at
/// module boundaries; internal accumulation works in fixed integer units.
struct Fraction {
    int64_t num = 0;
    int64_t den = 1;

    Fraction() = default;
    Fraction(int64_t n, int64_t d) : num(n), den(d) { reduce(); }

    void reduce() {
        if (den < 0) { num = -num; den = -den; }
        const int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }
    double value() const { return double(num) / double(den); }

    friend bool operator==(const Fraction& a, const Fraction& b) {
        return a.num == b.num && a.den == b.den;
    }
};

struct Vec3iHash {
    size_t operator()(const Vec3i& a) const {
        uint64_t h = 1469598103934665603ull;
        for (int i = 0; i < 3; ++i) {
            h ^= uint64_t(uint32_t(a[i]));
            h *= 1099511628211ull;
            h = (h << 13) | (h >> 51);
        }
        return size_t(h);
    }
};

}  // namespace voromesh
