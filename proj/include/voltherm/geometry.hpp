#pragma once

#include <Eigen/Dense>
#include <complex>

namespace voltherm {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// Clockwise quarter turn: (a, b) -> (b, -a).
inline Vec2 rot90_cw(const Vec2& v) { return Vec2(v.y(), -v.x()); }

inline cplx to_cplx(const Vec2& v) { return cplx(v.x(), v.y()); }

// 53-bit uniform draw in [a, b). Used instead of std::uniform_real_distribution
// so harness runs are reproducible independent of the standard library.
// Requires a 64-bit generator (std::mt19937_64).
template <class Rng>
double draw_uniform(Rng& rng, double a, double b) {
    static_assert(Rng::max() == 0xFFFFFFFFFFFFFFFFull, "need a 64-bit generator");
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return a + (b - a) * u;
}

} // namespace voltherm
