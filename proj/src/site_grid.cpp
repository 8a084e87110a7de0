#include "skw/site_grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace skw
{
namespace
{
// Windows beyond this many cells indicate a runaway walk, not a real need.
constexpr std::size_t max_cells = std::size_t(1) << 31;
}  // namespace

SiteGrid::SiteGrid()
{
    reserve({-16, -16}, {16, 16});
}

void SiteGrid::reserve(Site lo, Site hi)
{
    if (width_ > 0 && index(lo) != npos && index(hi) != npos)
        return;

    std::int32_t nx0 = lo.x;
    std::int32_t ny0 = lo.y;
    std::int32_t nx1 = hi.x;
    std::int32_t ny1 = hi.y;
    if (width_ > 0)
    {
        nx0 = std::min(nx0, x0_);
        ny0 = std::min(ny0, y0_);
        nx1 = std::max(nx1, x0_ + width_ - 1);
        ny1 = std::max(ny1, y0_ + height_ - 1);
    }
    std::int64_t const nw = std::int64_t(nx1) - nx0 + 1;
    std::int64_t const nh = std::int64_t(ny1) - ny0 + 1;
    if (nw <= 0 || nh <= 0 || std::size_t(nw) * std::size_t(nh) > max_cells)
        throw std::length_error("SiteGrid: lattice window too large");

    std::vector<Cell> cells(std::size_t(nw * nh));
    for (std::int32_t y = 0; y < height_; ++y)
    {
        std::size_t const src = std::size_t(y) * width_;
        std::size_t const dst = std::size_t(y + y0_ - ny0) * nw + (x0_ - nx0);
        std::copy_n(cells_.begin() + src, width_, cells.begin() + dst);
    }
    cells_ = std::move(cells);
    x0_ = nx0;
    y0_ = ny0;
    width_ = std::int32_t(nw);
    height_ = std::int32_t(nh);
}

void SiteGrid::grow_to_include(Site s)
{
    // Grow by at least half the current extent in every direction so that a
    // walk drifting along the strip triggers only logarithmically many copies.
    std::int32_t const mx = std::max(width_ / 2, 16);
    std::int32_t const my = std::max(height_ / 2, 16);
    Site lo{std::min(s.x, x0_), std::min(s.y, y0_)};
    Site hi{std::max(s.x, x0_ + width_ - 1), std::max(s.y, y0_ + height_ - 1)};
    if (s.x < x0_)
        lo.x -= mx;
    if (s.x >= x0_ + width_)
        hi.x += mx;
    if (s.y < y0_)
        lo.y -= my;
    if (s.y >= y0_ + height_)
        hi.y += my;
    reserve(lo, hi);
}

void SiteGrid::clear()
{
    if (++epoch_ == 0)
    {
        for (auto& c : cells_)
            c.occ = 0;
        epoch_ = 1;
    }
    size_ = 0;
}

bool SiteGrid::insert(Site s)
{
    auto idx = index(s);
    if (idx == npos)
    {
        grow_to_include(s);
        idx = index(s);
    }
    if (cells_[idx].occ == epoch_)
        return false;
    cells_[idx].occ = epoch_;
    ++size_;
    return true;
}

void SiteGrid::begin_search()
{
    if (++search_ > max_search)
    {
        for (auto& c : cells_)
            c.mark = 0;
        search_ = 1;
    }
}

std::size_t SiteGrid::grow_for(Site s)
{
    grow_to_include(s);
    return index(s);
}

}  // namespace skw
