#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "skw/rng.hpp"

using namespace skw;

TEST_SUITE("rng")
{
    TEST_CASE("Philox4x32-10 known answers")
    {
        using P = Philox4x32;
        CHECK(P::block({0, 0, 0, 0}, {0, 0})
              == P::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
        CHECK(P::block({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u})
              == P::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
        CHECK(P::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                       {0xa4093822u, 0x299f31d0u})
              == P::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
    }

    TEST_CASE("streams are reproducible and distinct")
    {
        StreamRng a(42, 17), b(42, 17), c(42, 18), d(43, 17);
        std::vector<std::uint64_t> xa, xb, xc, xd;
        for (int i = 0; i < 16; ++i)
        {
            xa.push_back(a());
            xb.push_back(b());
            xc.push_back(c());
            xd.push_back(d());
        }
        CHECK(xa == xb);
        CHECK(xa != xc);
        CHECK(xa != xd);

        // Streams can be created in any order.
        std::set<std::uint64_t> firsts;
        for (std::uint64_t s = 0; s < 1000; ++s)
            firsts.insert(StreamRng(1, s)());
        CHECK(firsts.size() == 1000);
    }

    TEST_CASE("uniform deviates are in [0, 1) and uniform")
    {
        StreamRng rng(5, 0);
        int const n = 200'000;
        std::vector<double> u(n);
        for (auto& x : u)
        {
            x = rng.uniform();
            REQUIRE(x >= 0.0);
            REQUIRE(x < 1.0);
        }
        std::sort(u.begin(), u.end());
        double d = 0;
        for (int i = 0; i < n; ++i)
            d = std::max({d, std::abs(u[i] - double(i) / n),
                          std::abs(u[i] - double(i + 1) / n)});
        // Kolmogorov-Smirnov 1% critical value.
        CHECK(d < 1.63 / std::sqrt(double(n)));
    }

    TEST_CASE("works with standard distributions")
    {
        StreamRng rng(9, 3);
        std::binomial_distribution<std::uint64_t> bin(1000, 0.5);
        double sum = 0;
        for (int i = 0; i < 1000; ++i)
            sum += double(bin(rng));
        CHECK(sum / 1000 == doctest::Approx(500).epsilon(0.01));
    }

    TEST_CASE("derived seeds differ by purpose")
    {
        CHECK(derive_seed(1, 0) != derive_seed(1, 1));
        CHECK(derive_seed(1, 0) != derive_seed(2, 0));
        CHECK(derive_seed(1, 0) == derive_seed(1, 0));
    }
}
