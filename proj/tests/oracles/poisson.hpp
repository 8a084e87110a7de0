#pragma once

// Harmonic measure by direct quadrature of Poisson kernels. Independent of
// the conformal maps in the library: the disk uses the classical Poisson
// kernel about the disk center, the strip uses the closed-form kernel of the
// standard strip 0 < Im s < pi.

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "skw/geometry.hpp"

namespace skw::oracle
{
template<class F>
double integrate(F f, double a, double b)
{
    using boost::math::quadrature::gauss_kronrod;
    double error = 0;
    return gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14, &error);
}

//! Harmonic measure from the origin of the arc [0, theta] (angle about the
//! center) of a disk.
inline double disk_poisson_cdf(DiskDomain const& d, double theta)
{
    double const c2 = d.center.x * d.center.x + d.center.y * d.center.y;
    double const r = d.radius;
    auto density = [&](double t) {
        double const bx = d.center.x + r * std::cos(t);
        double const by = d.center.y + r * std::sin(t);
        return (r * r - c2) / (two_pi * (bx * bx + by * by));
    };
    return integrate(density, 0.0, theta);
}

//! Harmonic measure from the origin of the half line {x' > x} (top = true)
//! or {x' < x} (top = false) on one side of a strip; an infinite x gives
//! the whole side.
inline double strip_poisson_tail(StripDomain const& s, bool top, double x)
{
    double const pi = std::numbers::pi;
    double const y0 = pi * (-s.bottom) / s.width();
    // In standard coordinates the bottom side is Im = 0 and the top Im = pi;
    // the kernels from i*y0 are sin(y0) / (2 pi (cosh(t) -+ cos(y0))).
    double const sign = top ? 1.0 : -1.0;
    auto density = [&](double t) {
        return std::sin(y0) / (two_pi * (std::cosh(t) + sign * std::cos(y0)));
    };
    double const t = pi * x / s.width();
    double const inf = std::numeric_limits<double>::infinity();
    if (std::isinf(x))
        return integrate(density, -inf, inf);
    return top ? integrate(density, t, inf) : integrate(density, -inf, t);
}

}  // namespace skw::oracle
