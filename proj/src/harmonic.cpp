#include "skw/harmonic.hpp"

#include <algorithm>
#include <stdexcept>

namespace skw
{
namespace
{
constexpr double closure_tolerance = 1e-12;
constexpr Complex I{0, 1};

// Half-plane -> disk Moebius map evaluated either at u or, for |u| large,
// at v = 1/u.
Complex moebius_at(Complex u0, Complex u)
{
    return (u - u0) / (u - std::conj(u0));
}
Complex moebius_at_inverse(Complex u0, Complex v)
{
    return (1.0 - u0 * v) / (1.0 - std::conj(u0) * v);
}

Complex strip_u0(StripDomain const& s)
{
    return std::polar(1.0, std::numbers::pi * (-s.bottom) / s.width());
}

// Boundary lines map onto the real u axis; build u (or 1/u) as an exact real
// number so the image stays on the unit circle.
Complex strip_boundary_image(StripDomain const& s, Complex u0, StripSide side,
                             double x)
{
    double const t = std::numbers::pi * x / s.width();
    double const sign = side == StripSide::Bottom ? 1.0 : -1.0;
    if (t > 0)
        return moebius_at_inverse(u0, Complex{sign * std::exp(-t), 0});
    return moebius_at(u0, Complex{sign * std::exp(t), 0});
}
}  // namespace

ConformalMap::ConformalMap(Domain const& domain) : domain_(domain)
{
    if (domain_.is_disk())
    {
        auto const& d = domain_.disk();
        a_ = Complex{-d.center.x, -d.center.y} / d.radius;
    }
    else
    {
        u0_ = strip_u0(domain_.strip());
    }
}

Complex ConformalMap::disk_image(Point z) const
{
    auto const& d = domain_.disk();
    Complex const w = Complex{z.x - d.center.x, z.y - d.center.y} / d.radius;
    return (w - a_) / (1.0 - std::conj(a_) * w);
}

Complex ConformalMap::strip_image(Complex s) const
{
    if (s.real() > 0)
        return moebius_at_inverse(u0_, std::exp(-s));
    return moebius_at(u0_, std::exp(s));
}

Complex ConformalMap::operator()(Point z) const
{
    if (domain_.is_disk())
    {
        auto const& d = domain_.disk();
        double const r = std::hypot(z.x - d.center.x, z.y - d.center.y);
        if (r > d.radius * (1 + closure_tolerance))
            throw std::invalid_argument("map_point: point outside the disk");
        return disk_image(z);
    }
    auto const& st = domain_.strip();
    double const eps = closure_tolerance * st.width();
    if (z.y > st.top + eps || z.y < st.bottom - eps)
        throw std::invalid_argument("map_point: point outside the strip");
    if (z.y >= st.top)
        return strip_boundary(StripSide::Top, z.x);
    if (z.y <= st.bottom)
        return strip_boundary(StripSide::Bottom, z.x);
    Complex const s = std::numbers::pi * (Complex{z.x, z.y} - I * st.bottom)
                      / st.width();
    return strip_image(s);
}

Complex ConformalMap::strip_boundary(StripSide side, double x) const
{
    return strip_boundary_image(domain_.strip(), u0_, side, x);
}

double strip_far_left_parameter(StripDomain const& strip)
{
    return two_pi * (-strip.bottom) / strip.width();
}

double strip_parameter(StripDomain const& strip, StripSide side, double x)
{
    Complex const w = strip_boundary_image(strip, strip_u0(strip), side, x);
    double theta = std::atan2(w.imag(), w.real());
    if (theta < 0)
        theta += two_pi;
    double const far_left = strip_far_left_parameter(strip);
    if (side == StripSide::Top)
    {
        // Top line occupies (0, far_left); rounding near x = +inf can wrap.
        if (theta > far_left)
            theta = theta > 0.5 * (far_left + two_pi) ? 0.0 : far_left;
    }
    else
    {
        if (theta < far_left)
            theta = theta < 0.5 * far_left ? std::nextafter(two_pi, 0.0)
                                           : far_left;
    }
    if (theta >= two_pi)
        theta = std::nextafter(two_pi, 0.0);
    return theta;
}

double harmonic_cdf(Domain const& domain, double theta)
{
    if (!(theta >= 0 && theta <= two_pi))
        throw std::invalid_argument("harmonic_cdf: theta outside [0, 2pi]");
    if (theta == two_pi)
        return 1.0;
    if (domain.is_strip())
        return theta / two_pi;

    // phi(e^{it}) = e^{it} conj(q) / q with q = 1 - conj(a) e^{it}; Re q > 0,
    // so arg phi = t - 2 arg q is a continuous lift.
    auto const& d = domain.disk();
    Complex const a = Complex{-d.center.x, -d.center.y} / d.radius;
    auto lifted_arg = [&a](double t) {
        Complex const q = 1.0 - std::conj(a) * std::polar(1.0, t);
        return t - 2 * std::arg(q);
    };
    double const h = (lifted_arg(theta) - lifted_arg(0.0)) / two_pi;
    return std::clamp(h, 0.0, 1.0);
}

}  // namespace skw
