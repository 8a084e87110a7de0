#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace skw
{
//---------------------------------------------------------------------------//
/*!
 * Philox4x32-10 counter-based block function.
 *
 * Maps a 128-bit counter and 64-bit key to 128 pseudo-random bits with no
 * internal state, so any (key, counter) pair can be evaluated in any order.
 */
struct Philox4x32
{
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr int rounds = 10;

    static Counter block(Counter ctr, Key key)
    {
        constexpr std::uint32_t m0 = 0xD2511F53u;
        constexpr std::uint32_t m1 = 0xCD9E8D57u;
        constexpr std::uint32_t w0 = 0x9E3779B9u;
        constexpr std::uint32_t w1 = 0xBB67AE85u;
        for (int r = 0; r < rounds; ++r)
        {
            if (r > 0)
            {
                key[0] += w0;
                key[1] += w1;
            }
            std::uint64_t const p0 = std::uint64_t{m0} * ctr[0];
            std::uint64_t const p1 = std::uint64_t{m1} * ctr[2];
            ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0],
                   std::uint32_t(p1),
                   std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1],
                   std::uint32_t(p0)};
        }
        return ctr;
    }
};

//! SplitMix64 finalizer; used to turn user seeds into well-mixed keys.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

//! Independent seed for a named sub-purpose of a run (bootstrap, tests...).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose)
{
    return splitmix64(splitmix64(master) ^ splitmix64(purpose + 0x5851F42D4C957F2Dull));
}

//---------------------------------------------------------------------------//
/*!
 * Random stream number `stream` of the family keyed by `master_seed`.
 *
 * Two Philox blocks at counters (0, stream) and (1, stream) under the key
 * derived from the master seed give the 256-bit state of a xoshiro256**
 * generator. Stream i is therefore a pure function of (master_seed, i) and
 * can be created in any order on any thread. Satisfies
 * UniformRandomBitGenerator.
 */
class StreamRng
{
  public:
    using result_type = std::uint64_t;

    StreamRng(std::uint64_t master_seed, std::uint64_t stream)
    {
        std::uint64_t const k = splitmix64(master_seed);
        Philox4x32::Key const key{std::uint32_t(k), std::uint32_t(k >> 32)};
        auto const lo = std::uint32_t(stream);
        auto const hi = std::uint32_t(stream >> 32);
        auto const b0 = Philox4x32::block({0, 0, lo, hi}, key);
        auto const b1 = Philox4x32::block({1, 0, lo, hi}, key);
        s_[0] = std::uint64_t{b0[0]} | (std::uint64_t{b0[1]} << 32);
        s_[1] = std::uint64_t{b0[2]} | (std::uint64_t{b0[3]} << 32);
        s_[2] = std::uint64_t{b1[0]} | (std::uint64_t{b1[1]} << 32);
        s_[3] = std::uint64_t{b1[2]} | (std::uint64_t{b1[3]} << 32);
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0)
            s_[0] = 1;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max()
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()()
    {
        std::uint64_t const result = rotl(s_[1] * 5, 7) * 9;
        std::uint64_t const t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    //! Uniform double in [0, 1) with 53 random bits.
    double uniform()
    {
        return double((*this)() >> 11) * 0x1.0p-53;
    }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k)
    {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

}  // namespace skw
