#pragma once

#include <complex>

#include "skw/geometry.hpp"

namespace skw
{
using Complex = std::complex<double>;

//---------------------------------------------------------------------------//
/*!
 * Conformal map from a domain onto the unit disk sending the origin to 0.
 *
 * Disk with center c and radius r:
 *   w = (z - c) / r,  a = -c / r,  phi(w) = (w - a) / (1 - conj(a) w).
 *
 * Strip bottom < Im z < top of width W:
 *   s = pi (z - i bottom) / W          (standard strip 0 < Im s < pi)
 *   u = exp(s)                         (upper half plane)
 *   phi(u) = (u - u0) / (u - conj(u0)) with u0 = exp(i pi (-bottom) / W)
 *
 * On the strip the bottom line goes to the positive real u axis and the top
 * line to the negative one; x -> +inf on either side lands on phi = 1 and
 * x -> -inf on phi = u0 / conj(u0).
 */
class ConformalMap
{
  public:
    explicit ConformalMap(Domain const& domain);

    //! Image of a point in the closure of the domain; throws outside it.
    Complex operator()(Point z) const;

    //! Image of a boundary point of the strip given by side and abscissa.
    Complex strip_boundary(StripSide side, double x) const;

    Domain const& domain() const { return domain_; }

  private:
    Complex disk_image(Point z) const;
    Complex strip_image(Complex s) const;

    Domain domain_;
    // Disk: normalized image of the origin.
    Complex a_{0, 0};
    // Strip: half-plane image of the origin.
    Complex u0_{0, 1};
};

inline Complex map_point(ConformalMap const& m, Point z)
{
    return m(z);
}

/*!
 * Boundary parameter of a strip boundary point: argument of its disk image,
 * in [0, 2*pi). The top line covers (0, theta_inf) and the bottom line
 * (theta_inf, 2*pi), where theta_inf = 2*pi*(-bottom)/W is the image of
 * x = -inf. Both lines approach parameter 0 (mod 2*pi) as x -> +inf.
 */
double strip_parameter(StripDomain const& strip, StripSide side, double x);

//! Image angle of x -> -inf (shared by both sides of the strip).
double strip_far_left_parameter(StripDomain const& strip);

/*!
 * Harmonic measure (from the origin) of the boundary arc with parameter in
 * [0, theta]. Disk parameter is the angle about the center; strip parameter
 * is the conformal angle, for which H is exactly theta / 2pi.
 * Throws std::invalid_argument for theta outside [0, 2pi].
 */
double harmonic_cdf(Domain const& domain, double theta);

}  // namespace skw
