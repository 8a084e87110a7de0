#include <array>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "../oracles/flood_fill.hpp"
#include "../oracles/random_config.hpp"
#include "doctest.h"
#include "skw/errors.hpp"
#include "skw/walker.hpp"

using namespace skw;

namespace
{
Domain big_disk()
{
    return Domain(DiskDomain{{0, 0}, 20});
}

std::array<Site, 4> neighbors(Site c)
{
    return {c + Site{1, 0}, c + Site{0, 1}, c + Site{-1, 0}, c + Site{0, -1}};
}

}  // namespace

TEST_SUITE("walker")
{
    TEST_CASE("empty walk in a large disk: every neighbor allowable")
    {
        Walker w(big_disk(), uniform_table(), 1.0);
        w.start(0);
        for (Site n : neighbors({0, 0}))
            CHECK(w.site_status(n) == SiteStatus::Allowable);
        w.first_step(0.1);
        CHECK(w.state().current == Site{1, 0});
        CHECK(w.site_status({0, 0}) == SiteStatus::Occupied);
        for (Site n : {Site{2, 0}, Site{1, 1}, Site{1, -1}})
            CHECK(w.site_status(n) == SiteStatus::Allowable);
        CHECK_THROWS_AS(w.site_status({5, 5}), std::invalid_argument);
    }

    TEST_CASE("sealed pocket is trapping")
    {
        // The walk curls around {(0,1), (1,1)} and stops next to it.
        std::vector<Site> const path{{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2},
                                     {1, 2}, {0, 2}, {-1, 2}, {-1, 1}};
        Walker w(big_disk(), uniform_table(), 1.0);
        w.load(path, 0);
        CHECK(w.site_status({0, 1}) == SiteStatus::Trapping);
        CHECK(w.site_status({-1, 0}) == SiteStatus::Allowable);
        CHECK(w.site_status({-2, 1}) == SiteStatus::Allowable);
        CHECK(w.site_status({-1, 2}) == SiteStatus::Occupied);

        auto const ns = w.classify_neighbors();
        CHECK(ns[RelativeDirection::Front] == SiteStatus::Allowable);
        CHECK(ns[RelativeDirection::Left] == SiteStatus::Trapping);
        CHECK(ns[RelativeDirection::Right] == SiteStatus::Allowable);

        // The walk never enters the pocket.
        for (double u = 0; u < 1; u += 0.01)
        {
            w.load(path, 0);
            w.step(u);
            CHECK(w.state().current != Site{0, 1});
        }
    }

    TEST_CASE("one blocked neighbor: the other two are equally likely")
    {
        // Left of the tip is the origin; front and right stay open.
        std::vector<Site> const path{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
        Walker w(big_disk(), uniform_table(), 1.0);
        w.load(path, 0);
        auto const ns = w.classify_neighbors();
        CHECK(ns[RelativeDirection::Left] == SiteStatus::Occupied);
        CHECK(ns[RelativeDirection::Front] == SiteStatus::Allowable);
        CHECK(ns[RelativeDirection::Right] == SiteStatus::Allowable);

        int const n = 100'000;
        int front = 0;
        StreamRng rng(2, 0);
        for (int i = 0; i < n; ++i)
        {
            w.load(path, 0);
            w.step(rng.uniform());
            Site const c = w.state().current;
            REQUIRE((c == Site{-1, 1} || c == Site{0, 2}));
            front += c == Site{-1, 1};
        }
        CHECK(std::abs(double(front) / n - 0.5) < 4 * std::sqrt(0.25 / n));
    }

    TEST_CASE("corridor forces the front move")
    {
        std::vector<Site> const path{
            {1, 0},  {2, 0},  {2, 1},  {2, 2},   {2, 3},  {1, 3},
            {0, 3},  {-1, 3}, {-2, 3}, {-2, 2},  {-2, 1}, {-2, 0},
            {-1, 0}, {-1, 1}, {-1, 2}, {0, 2},   {0, 1},  {0, 0}};
        Walker w(big_disk(), uniform_table(), 1.0);
        for (double u : {0.0, 0.3, 0.6, 0.999})
        {
            w.load(path, 0);
            CHECK_FALSE(w.step(u));
            CHECK(w.state().current == Site{0, -1});
        }
    }

    TEST_CASE("load rejects malformed paths")
    {
        Walker w(big_disk(), uniform_table(), 1.0);
        std::vector<Site> const gap{{0, 0}, {2, 0}};
        std::vector<Site> const loop{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}};
        std::vector<Site> const out{{0, 0}, {0, 1}};
        std::vector<Site> const single{{0, 0}};
        CHECK_THROWS_AS(w.load(gap, 0), std::invalid_argument);
        CHECK_THROWS_AS(w.load(loop, 0), std::invalid_argument);
        CHECK_THROWS_AS(w.load(single, 0), std::invalid_argument);
        Walker tiny(Domain(DiskDomain{{0, -0.5}, 1.2}), uniform_table(), 1.0);
        CHECK_THROWS_AS(tiny.load(out, 0), std::invalid_argument);
    }

    TEST_CASE("site_status agrees with the flood-fill oracle")
    {
        std::mt19937_64 gen(20240601);
        int bad = 0;
        int trapping = 0;
        for (int trial = 0; trial < 2000; ++trial)
        {
            auto const c = oracle::random_configuration(gen);
            Walker w(c.domain, uniform_table(), 1.0);
            w.load(c.path, c.rotation);
            bad += oracle::count_disagreements(w);
            for (Site n : neighbors(w.state().current))
                trapping += w.site_status(n) == SiteStatus::Trapping;
        }
        CHECK(bad == 0);
        // The generator does exercise the trap search.
        CHECK(trapping > 50);
    }

    TEST_CASE("live walks agree with the oracle at every step")
    {
        StreamRng rng(8, 0);
        for (auto const& dom : {reference_disk(), reference_strip()})
        {
            Walker w(dom, uniform_table(), 0.1);
            int bad = 0;
            for (int walk = 0; walk < 200; ++walk)
            {
                w.start(sample_rotation(rng.uniform()));
                w.first_step(rng.uniform());
                while (true)
                {
                    bad += oracle::count_disagreements(w);
                    if (w.step(rng.uniform()))
                        break;
                }
            }
            CHECK(bad == 0);
        }
    }

    TEST_CASE("walk invariants")
    {
        StreamRng rng(4, 0);
        for (auto const& dom : {reference_disk(), reference_strip()})
        {
            Walker w(dom, uniform_table(), 0.05);
            for (int walk = 0; walk < 300; ++walk)
            {
                w.start(sample_rotation(rng.uniform()));
                w.first_step(rng.uniform());
                std::optional<ExitRecord> rec;
                while (!(rec = w.step(rng.uniform())))
                {
                }
                auto const& st = w.state();
                std::set<oracle::Key> seen;
                for (std::size_t i = 0; i < st.path.size(); ++i)
                {
                    Site const s = st.path[i];
                    REQUIRE(seen.insert(oracle::key(s)).second);
                    REQUIRE(w.inside(s));
                    if (i > 0)
                    {
                        Site const d = s - st.path[i - 1];
                        REQUIRE(std::abs(d.x) + std::abs(d.y) == 1);
                    }
                }
                CHECK(st.occupancy.size() == st.path.size());
                CHECK(st.path.front() == Site{0, 0});
                // The exit is the neighbor of the last inside site.
                CHECK_FALSE(contains(dom, rec->outside_point));
                auto const tip = w.embedding().to_plane(st.current);
                CHECK(std::hypot(rec->outside_point.x - tip.x,
                                 rec->outside_point.y - tip.y)
                      == doctest::Approx(0.05));
                CHECK(rec->theta >= 0);
                CHECK(rec->theta < two_pi);
            }
        }
    }

    TEST_CASE("runs are deterministic under a fixed stream")
    {
        Walker w(reference_disk(), uniform_table(), 0.02);
        StreamRng a(99, 5), b(99, 5);
        auto const r1 = w.run(a);
        auto const r2 = w.run(b);
        CHECK(r1.theta == r2.theta);
        CHECK(r1.outside_point == r2.outside_point);

        StreamRng c(99, 5);
        auto const p1 = run_plain_walk(reference_strip(), 0.02, c);
        StreamRng d(99, 5);
        auto const p2 = run_plain_walk(reference_strip(), 0.02, d);
        CHECK(p1.theta == p2.theta);
        CHECK_FALSE(contains(reference_strip(), p1.outside_point));
    }

    TEST_CASE("first step is uniform over the four neighbors")
    {
        Walker w(reference_disk(), uniform_table(), 0.01);
        StreamRng rng(6, 0);
        int const n = 4'000'000;
        std::array<int, 4> hits{};
        std::array<Site, 4> const dirs{Site{1, 0}, Site{0, 1}, Site{-1, 0},
                                       Site{0, -1}};
        for (int i = 0; i < n; ++i)
        {
            // The rotation does not enter the choice.
            w.start(i % 2 ? 0.0 : 2.5);
            w.first_step(rng.uniform());
            for (int k = 0; k < 4; ++k)
                hits[k] += w.state().current == dirs[k];
        }
        for (int k = 0; k < 4; ++k)
            CHECK(std::abs(double(hits[k]) / n - 0.25) < 0.001);
    }

    TEST_CASE("lattice spacing too coarse for the domain")
    {
        Walker w(reference_strip(), uniform_table(), 1.0);
        StreamRng rng(1, 0);
        CHECK_THROWS_AS(w.run(rng), ConfigError);
    }
}
