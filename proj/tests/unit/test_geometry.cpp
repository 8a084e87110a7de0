#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "skw/errors.hpp"
#include "skw/geometry.hpp"
#include "skw/harmonic.hpp"
#include "skw/rng.hpp"

using namespace skw;
using std::numbers::pi;

TEST_SUITE("geometry")
{
    TEST_CASE("reference domains")
    {
        auto const d1 = reference_disk();
        REQUIRE(d1.is_disk());
        CHECK(d1.disk().center == Point{0.3, -0.25});
        CHECK(d1.disk().radius == 1.0);
        auto const d2 = reference_strip();
        REQUIRE(d2.is_strip());
        CHECK(d2.strip().top == 0.6);
        CHECK(d2.strip().bottom == -0.4);
        CHECK(d2.strip().width() == doctest::Approx(1.0));
        CHECK(d2.inradius_at_origin() == doctest::Approx(0.4));
        CHECK(d1.inradius_at_origin()
              == doctest::Approx(1 - std::hypot(0.3, 0.25)));
    }

    TEST_CASE("domains must contain the origin")
    {
        CHECK_THROWS_AS(Domain(DiskDomain{{2, 0}, 1}), ConfigError);
        CHECK_THROWS_AS(Domain(DiskDomain{{1, 0}, 1}), ConfigError);
        CHECK_THROWS_AS(Domain(DiskDomain{{0, 0}, 0}), ConfigError);
        CHECK_THROWS_AS(Domain(StripDomain{0.5, 0.1}), ConfigError);
        CHECK_THROWS_AS(Domain(StripDomain{0.0, -1.0}), ConfigError);
        CHECK_NOTHROW(Domain(StripDomain{0.1, -0.1}));
    }

    TEST_CASE("contains")
    {
        auto const d1 = reference_disk();
        auto const d2 = reference_strip();
        CHECK(contains(d1, {0, 0}));
        CHECK_FALSE(contains(d1, {1.3, -0.25}));
        CHECK(contains(d1, {1.2999, -0.25}));
        CHECK(contains(d2, {1000, 0.59}));
        CHECK(contains(d2, {-1e9, -0.39}));
        CHECK_FALSE(contains(d2, {0, 0.6}));
        CHECK_FALSE(contains(d2, {0, -0.4}));
    }

    TEST_CASE("lattice_to_plane")
    {
        auto const p = lattice_to_plane(LatticeEmbedding(0.01, 0), {3, 4});
        CHECK(p.x == doctest::Approx(0.03));
        CHECK(p.y == doctest::Approx(0.04));
        auto const q = lattice_to_plane(LatticeEmbedding(1, pi / 2), {1, 0});
        CHECK(q.x == doctest::Approx(0).epsilon(1e-15));
        CHECK(std::abs(q.x) < 1e-15);
        CHECK(q.y == doctest::Approx(1));
        for (double a : {0.0, 0.7, 2.0, 5.5})
            CHECK(lattice_to_plane(LatticeEmbedding(0.3, a), {0, 0})
                  == Point{0, 0});
        CHECK_THROWS_AS(LatticeEmbedding(0, 0), ConfigError);
        CHECK_THROWS_AS(LatticeEmbedding(-1, 0), ConfigError);

        LatticeEmbedding const e(0.02, 1.234);
        auto const back = e.to_lattice(e.to_plane({-7, 12}));
        CHECK(back.x == doctest::Approx(-7));
        CHECK(back.y == doctest::Approx(12));
    }

    TEST_CASE("contains is consistent with quarter-turn lattice symmetry")
    {
        StreamRng rng(3, 0);
        for (auto const& dom : {reference_disk(), reference_strip()})
        {
            for (int trial = 0; trial < 2000; ++trial)
            {
                double const a = two_pi * rng.uniform();
                Site const s{int(rng() % 121) - 60, int(rng() % 121) - 60};
                LatticeEmbedding const e(0.02, a);
                LatticeEmbedding const e90(0.02, a + pi / 2);
                CHECK(contains(dom, e.to_plane(s))
                      == contains(dom, e90.to_plane(rotate_cw(s))));
            }
        }
    }

    TEST_CASE("sample_rotation")
    {
        CHECK(sample_rotation(0.0) == 0.0);
        CHECK(sample_rotation(0.25) == doctest::Approx(pi / 2));

        int const n = 100'000;
        StreamRng rng(11, 0);
        std::vector<double> a(n);
        for (auto& x : a)
        {
            x = sample_rotation(rng.uniform());
            REQUIRE(x >= 0);
            REQUIRE(x < two_pi);
        }
        std::sort(a.begin(), a.end());
        double d = 0;
        for (int i = 0; i < n; ++i)
        {
            double const cdf = a[i] / two_pi;
            d = std::max({d, std::abs(cdf - double(i) / n),
                          std::abs(cdf - double(i + 1) / n)});
        }
        CHECK(d < 1.63 / std::sqrt(double(n)));
    }

    TEST_CASE("disk projection")
    {
        auto const d1 = reference_disk();
        auto const p = project(d1, {2.3, -0.25});
        CHECK(p.boundary_point.x == doctest::Approx(1.3));
        CHECK(p.boundary_point.y == doctest::Approx(-0.25));
        CHECK(p.theta == 0.0);
        CHECK_FALSE(p.side);

        Domain const unit(DiskDomain{{0, 0}, 1});
        auto const q = project(unit, {0, -2});
        CHECK(q.boundary_point.x == doctest::Approx(0).epsilon(1e-15));
        CHECK(q.boundary_point.y == doctest::Approx(-1));
        CHECK(q.theta == doctest::Approx(3 * pi / 2));

        CHECK_THROWS_AS(project(d1, {0, 0}), std::invalid_argument);
        CHECK_THROWS_AS(project(Domain(DiskDomain{{0.5, 0}, 0.6}), {0.5, 0}),
                        std::invalid_argument);
    }

    TEST_CASE("radial push-out preserves the disk angle")
    {
        auto const d1 = reference_disk();
        auto const c = d1.disk().center;
        for (double t = 0; t < two_pi; t += 0.0137)
        {
            for (double s : {1.0 + 1e-9, 1.01, 2.0, 50.0})
            {
                Point const p{c.x + s * std::cos(t), c.y + s * std::sin(t)};
                auto const q = project(d1, p);
                CHECK(q.theta == doctest::Approx(t).epsilon(1e-12));
                CHECK(std::hypot(q.boundary_point.x - c.x,
                                 q.boundary_point.y - c.y)
                      == doctest::Approx(1.0).epsilon(1e-14));
            }
        }
    }

    TEST_CASE("strip projection")
    {
        auto const d2 = reference_strip();
        auto const p = project(d2, {5.0, 0.61});
        CHECK(p.boundary_point == Point{5.0, 0.6});
        REQUIRE(p.side);
        CHECK(*p.side == StripSide::Top);
        CHECK(p.theta == strip_parameter(d2.strip(), StripSide::Top, 5.0));

        auto const q = project(d2, {-3.25, -0.43});
        CHECK(q.boundary_point == Point{-3.25, -0.4});
        CHECK(*q.side == StripSide::Bottom);

        for (double x : {-100.0, -1.5, 0.0, 0.123456789, 42.0})
        {
            CHECK(project(d2, {x, 0.7}).boundary_point.x == x);
            CHECK(project(d2, {x, -0.5}).boundary_point.x == x);
        }
        CHECK_THROWS_AS(project(d2, {0, 0.1}), std::invalid_argument);
    }

    TEST_CASE("exit records")
    {
        auto const rec = make_exit_record(reference_disk(), {2.3, -0.25});
        CHECK(rec.outside_point == Point{2.3, -0.25});
        CHECK(rec.theta == 0.0);
        auto const s = make_exit_record(reference_strip(), {1, -0.45});
        CHECK(s.side == StripSide::Bottom);
        CHECK(s.theta >= 0);
        CHECK(s.theta < two_pi);
    }
}
