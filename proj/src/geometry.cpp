#include "skw/geometry.hpp"

#include <sstream>
#include <stdexcept>

#include "skw/errors.hpp"
#include "skw/harmonic.hpp"

namespace skw
{
namespace
{
double wrap_angle(double t)
{
    if (t < 0)
        t += two_pi;
    if (t >= two_pi)
        t -= two_pi;
    return t;
}
}  // namespace

Domain::Domain(DiskDomain d) : shape_(d)
{
    if (!(d.radius > 0))
        throw ConfigError("disk radius must be positive");
    if (!(std::hypot(d.center.x, d.center.y) < d.radius))
        throw ConfigError("disk must contain the origin in its interior");
}

Domain::Domain(StripDomain s) : shape_(s)
{
    if (!(s.bottom < 0 && 0 < s.top))
        throw ConfigError("strip must satisfy bottom < 0 < top");
}

double Domain::inradius_at_origin() const
{
    if (is_disk())
    {
        auto const& d = disk();
        return d.radius - std::hypot(d.center.x, d.center.y);
    }
    auto const& s = strip();
    return std::min(s.top, -s.bottom);
}

std::string Domain::describe() const
{
    std::ostringstream os;
    if (is_disk())
    {
        auto const& d = disk();
        os << "disk(center=(" << d.center.x << ", " << d.center.y
           << "), radius=" << d.radius << ")";
    }
    else
    {
        auto const& s = strip();
        os << "strip(top=" << s.top << ", bottom=" << s.bottom << ")";
    }
    return os.str();
}

Domain reference_disk()
{
    return Domain{DiskDomain{{0.3, -0.25}, 1.0}};
}

Domain reference_strip()
{
    return Domain{StripDomain{0.6, -0.4}};
}

LatticeEmbedding::LatticeEmbedding(double spacing, double rotation)
    : spacing_(spacing)
    , rotation_(rotation)
    , cos_(std::cos(rotation))
    , sin_(std::sin(rotation))
{
    if (!(spacing > 0))
        throw ConfigError("lattice spacing must be positive");
}

double sample_rotation(double u)
{
    return two_pi * u;
}

Projection project(Domain const& domain, Point p)
{
    if (contains(domain, p))
        throw std::invalid_argument("project: point lies inside the domain");

    if (domain.is_disk())
    {
        auto const& d = domain.disk();
        double const dx = p.x - d.center.x;
        double const dy = p.y - d.center.y;
        double const r = std::hypot(dx, dy);
        if (r == 0)
            throw std::invalid_argument("project: point is the disk center");
        Projection out;
        out.boundary_point = {d.center.x + d.radius * dx / r,
                              d.center.y + d.radius * dy / r};
        out.theta = wrap_angle(std::atan2(dy, dx));
        return out;
    }

    auto const& s = domain.strip();
    Projection out;
    if (p.y >= s.top)
    {
        out.side = StripSide::Top;
        out.boundary_point = {p.x, s.top};
    }
    else
    {
        out.side = StripSide::Bottom;
        out.boundary_point = {p.x, s.bottom};
    }
    out.theta = strip_parameter(s, *out.side, p.x);
    return out;
}

ExitRecord make_exit_record(Domain const& domain, Point outside)
{
    auto proj = project(domain, outside);
    return {outside, proj.boundary_point, proj.theta, proj.side};
}

}  // namespace skw
