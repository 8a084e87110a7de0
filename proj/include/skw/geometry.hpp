#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <variant>

namespace skw
{
inline constexpr double two_pi = 2 * std::numbers::pi;

//! Point in the continuum plane.
struct Point
{
    double x{0};
    double y{0};

    friend bool operator==(Point const&, Point const&) = default;
};

//! Site of the integer square lattice.
struct Site
{
    std::int32_t x{0};
    std::int32_t y{0};

    friend bool operator==(Site const&, Site const&) = default;
    friend Site operator+(Site a, Site b) { return {a.x + b.x, a.y + b.y}; }
    friend Site operator-(Site a, Site b) { return {a.x - b.x, a.y - b.y}; }
};

//! Lattice vector rotated by +90 degrees (counterclockwise).
constexpr Site rotate_ccw(Site d)
{
    return {-d.y, d.x};
}
//! Lattice vector rotated by -90 degrees (clockwise).
constexpr Site rotate_cw(Site d)
{
    return {d.y, -d.x};
}

//---------------------------------------------------------------------------//
struct DiskDomain
{
    Point center;
    double radius{1};
};

//! Horizontal strip bottom < y < top, unbounded in x.
struct StripDomain
{
    double top{0.5};
    double bottom{-0.5};

    double width() const { return top - bottom; }
};

enum class StripSide
{
    Top,
    Bottom
};

/*!
 * Simply connected domain containing the origin.
 *
 * Construction validates that the origin lies strictly inside.
 */
class Domain
{
  public:
    using Shape = std::variant<DiskDomain, StripDomain>;

    Domain(DiskDomain d);
    Domain(StripDomain s);

    Shape const& shape() const { return shape_; }
    bool is_disk() const { return std::holds_alternative<DiskDomain>(shape_); }
    bool is_strip() const { return std::holds_alternative<StripDomain>(shape_); }
    DiskDomain const& disk() const { return std::get<DiskDomain>(shape_); }
    StripDomain const& strip() const { return std::get<StripDomain>(shape_); }

    //! Euclidean distance from the origin to the boundary.
    double inradius_at_origin() const;

    std::string describe() const;

  private:
    Shape shape_;
};

//! The disk centered at (0.3, -0.25) with radius 1.
Domain reference_disk();
//! The horizontal strip with top at 0.6 and bottom at -0.4.
Domain reference_strip();

//! Strict interior test; boundary points count as outside.
inline bool contains(Domain const& domain, Point p)
{
    if (auto const* d = std::get_if<DiskDomain>(&domain.shape()))
    {
        double const dx = p.x - d->center.x;
        double const dy = p.y - d->center.y;
        return dx * dx + dy * dy < d->radius * d->radius;
    }
    auto const& s = std::get<StripDomain>(domain.shape());
    return p.y > s.bottom && p.y < s.top;
}

//---------------------------------------------------------------------------//
/*!
 * Placement of the square lattice in the plane: site (i, j) sits at
 * spacing * R(rotation) * (i, j).
 */
class LatticeEmbedding
{
  public:
    LatticeEmbedding(double spacing, double rotation);

    double spacing() const { return spacing_; }
    double rotation() const { return rotation_; }

    Point to_plane(Site s) const
    {
        double const i = s.x;
        double const j = s.y;
        return {spacing_ * (cos_ * i - sin_ * j),
                spacing_ * (sin_ * i + cos_ * j)};
    }

    //! Inverse map to (real-valued) lattice coordinates.
    Point to_lattice(Point p) const
    {
        return {(cos_ * p.x + sin_ * p.y) / spacing_,
                (-sin_ * p.x + cos_ * p.y) / spacing_};
    }

  private:
    double spacing_;
    double rotation_;
    double cos_;
    double sin_;
};

inline Point lattice_to_plane(LatticeEmbedding const& e, Site s)
{
    return e.to_plane(s);
}

//! Rotation angle 2*pi*u for a uniform deviate u in [0, 1).
double sample_rotation(double u);

//---------------------------------------------------------------------------//
//! Where a walk left the domain.
struct ExitRecord
{
    Point outside_point;
    Point boundary_point;
    //! Boundary parameter in [0, 2*pi).
    double theta{0};
    //! Strip only: which boundary line was hit.
    std::optional<StripSide> side;
};

struct Projection
{
    Point boundary_point;
    double theta{0};
    std::optional<StripSide> side;
};

/*!
 * Orthogonal projection of a point outside the domain onto its boundary.
 *
 * Disk: radial projection from the center; theta is the angle about the
 * center measured from the +x direction. Strip: vertical projection onto the
 * violated line; theta is the conformal boundary parameter (see
 * harmonic.hpp). Throws std::invalid_argument for interior points or the
 * disk center.
 */
Projection project(Domain const& domain, Point p);

//! Orthogonal projection packaged as an exit record.
ExitRecord make_exit_record(Domain const& domain, Point outside);

}  // namespace skw
