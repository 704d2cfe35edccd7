#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "polyscatter/error.hpp"

namespace polyscatter {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Point or direction in R^d, d in {2, 3}; unused trailing components are zero.
struct Vec {
    std::array<double, 3> c{0.0, 0.0, 0.0};

    double operator[](std::size_t i) const { return c[i]; }
    double& operator[](std::size_t i) { return c[i]; }

    friend Vec operator+(const Vec& a, const Vec& b) {
        return {{a.c[0] + b.c[0], a.c[1] + b.c[1], a.c[2] + b.c[2]}};
    }
    friend Vec operator-(const Vec& a, const Vec& b) {
        return {{a.c[0] - b.c[0], a.c[1] - b.c[1], a.c[2] - b.c[2]}};
    }
    friend Vec operator*(double s, const Vec& a) { return {{s * a.c[0], s * a.c[1], s * a.c[2]}}; }
    Vec operator-() const { return {{-c[0], -c[1], -c[2]}}; }
    friend bool operator==(const Vec&, const Vec&) = default;
};

inline double dot(const Vec& a, const Vec& b) {
    return a.c[0] * b.c[0] + a.c[1] * b.c[1] + a.c[2] * b.c[2];
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

/// Unit direction on S^{d-1}. Construction normalizes; zero vectors are rejected.
class Direction {
public:
    Direction() = default;
    explicit Direction(const Vec& v) {
        const double len = norm(v);
        if (!(len > 0.0) || !std::isfinite(len)) throw DomainError("direction must be a nonzero finite vector");
        v_ = (1.0 / len) * v;
    }

    /// Direction at polar angle `phi` in the plane.
    static Direction planar(double phi) { return Direction(Vec{{std::cos(phi), std::sin(phi), 0.0}}); }

    /// Direction from polar angle `theta` (from +z) and azimuth `phi`.
    static Direction spherical(double theta, double phi) {
        return Direction(Vec{{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)}});
    }

    const Vec& vec() const { return v_; }
    double operator[](std::size_t i) const { return v_[i]; }
    Direction operator-() const {
        Direction out;
        out.v_ = -v_;
        return out;
    }

private:
    Vec v_{{1.0, 0.0, 0.0}};
};

inline void require_dimension(int d) {
    if (d != 2 && d != 3) throw DomainError("dimension must be 2 or 3");
}

}  // namespace polyscatter
