#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "skw/geometry.hpp"

namespace skw
{
//---------------------------------------------------------------------------//
/*!
 * Set of lattice sites plus scratch marks for connectivity searches.
 *
 * Storage is a dense window of the lattice that grows on demand, so the
 * unbounded strip works the same way as the disk. Membership is stamped
 * with an epoch: clear() just bumps the epoch, making reuse across walks
 * O(1). Reads outside the window report "absent" without growing it.
 */
class SiteGrid
{
  public:
    SiteGrid();

    //! Make sure the window covers [lo, hi] (inclusive).
    void reserve(Site lo, Site hi);

    //! Remove every site.
    void clear();

    bool contains(Site s) const
    {
        auto const idx = index(s);
        return idx != npos && cells_[idx].occ == epoch_;
    }

    //! Insert a site; returns false if it was already present.
    bool insert(Site s);

    std::size_t size() const { return size_; }

    //// SEARCH MARKS ////

    //! Invalidate all marks.
    void begin_search();

    //! Mark id set during the current search, or -1.
    int mark(Site s) const
    {
        auto const idx = index(s);
        if (idx == npos)
            return -1;
        std::uint32_t const m = cells_[idx].mark;
        return (m >> mark_bits) == search_ ? int(m & mark_mask) : -1;
    }

    static constexpr int probe_occupied = -2;
    static constexpr int probe_unmarked = -1;

    //! Occupied, unmarked, or the mark id set during the current search.
    int probe(Site s) const
    {
        auto const idx = index(s);
        if (idx == npos)
            return probe_unmarked;
        Cell const& c = cells_[idx];
        if (c.occ == epoch_)
            return probe_occupied;
        return (c.mark >> mark_bits) == search_ ? int(c.mark & mark_mask)
                                                : probe_unmarked;
    }

    //! Set a mark id in [0, 3].
    void set_mark(Site s, int id)
    {
        auto idx = index(s);
        if (idx == npos)
            idx = grow_for(s);
        cells_[idx].mark = (search_ << mark_bits)
                           | (std::uint32_t(id) & mark_mask);
    }

  private:
    static constexpr std::size_t npos = std::size_t(-1);
    static constexpr unsigned mark_bits = 2;
    static constexpr std::uint32_t mark_mask = (1u << mark_bits) - 1;
    static constexpr std::uint32_t max_search = (~0u) >> mark_bits;

    std::size_t index(Site s) const
    {
        auto const dx = std::uint32_t(s.x - x0_);
        auto const dy = std::uint32_t(s.y - y0_);
        if (dx >= std::uint32_t(width_) || dy >= std::uint32_t(height_))
            return npos;
        return std::size_t(dy) * std::size_t(width_) + dx;
    }

    void grow_to_include(Site s);
    std::size_t grow_for(Site s);

    std::int32_t x0_{0};
    std::int32_t y0_{0};
    std::int32_t width_{0};
    std::int32_t height_{0};
    struct Cell
    {
        std::uint32_t occ{0};
        std::uint32_t mark{0};
    };

    std::vector<Cell> cells_;
    std::uint32_t epoch_{1};
    std::uint32_t search_{1};
    std::size_t size_{0};
};

}  // namespace skw
