#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "skw/geometry.hpp"
#include "skw/rng.hpp"
#include "skw/site_grid.hpp"
#include "skw/transition.hpp"

namespace skw
{
enum class SiteStatus
{
    Occupied,
    Trapping,
    Allowable
};

std::string_view to_string(SiteStatus s);

//! Self-avoiding path grown from the origin.
struct WalkState
{
    SiteGrid occupancy;
    std::vector<Site> path;
    Site current{0, 0};
    //! Unit lattice vector of the last step; empty before the first step.
    std::optional<Site> heading;

    //! Reset to the single-site walk at the origin.
    void reset();
};

//! Statuses of the front, left and right neighbors of the current site.
struct NeighborStatuses
{
    std::array<Site, 3> sites;
    std::array<SiteStatus, 3> status;
    //! Whether each neighbor lies outside the domain (an exit).
    std::array<bool, 3> exits;

    SiteStatus operator[](RelativeDirection d) const { return status[int(d)]; }
};

//---------------------------------------------------------------------------//
/*!
 * Generator of smart kinetic walks in one domain at one lattice spacing.
 *
 * A walker is a reusable worker: it owns the walk state and the scratch
 * buffers of the trap search, and produces one exit record per run() call.
 * Each run samples a fresh lattice rotation.
 *
 * Trap detection. A free neighbor is trapping iff no 4-connected path of
 * free in-domain sites leads from it to the exterior. The candidates are
 * first grouped by connectivity through the eight sites surrounding the
 * current position. If the current site was entered from the interior
 * (no candidate is an exit), at least one group must reach the exterior,
 * so a single group is allowable without any search. Otherwise the groups
 * are flood-filled in lockstep: groups that meet are merged, a group that
 * touches the exterior is allowable, and a group whose fill runs dry is a
 * trap. The cost is bounded by the size of the smallest enclosed pocket.
 */
class Walker
{
  public:
    Walker(Domain const& domain, TransitionTable const& table, double spacing);

    Domain const& domain() const { return domain_; }
    TransitionTable const& table() const { return table_; }
    double spacing() const { return spacing_; }
    LatticeEmbedding const& embedding() const { return embedding_; }
    WalkState const& state() const { return state_; }

    //! Run one complete walk with a freshly sampled rotation.
    ExitRecord run(StreamRng& rng);

    //// STEPWISE INTERFACE ////

    //! Reset to the origin with the given lattice rotation.
    void start(double rotation);

    //! Load an arbitrary self-avoiding path (at least two sites).
    void load(std::span<Site const> path, double rotation);

    //! Uniform move to one of the four neighbors of the origin.
    void first_step(double u);

    //! One SKW step; returns the exit record if the walk left the domain.
    std::optional<ExitRecord> step(double u);

    //! Classify front, left and right neighbors of the current site.
    NeighborStatuses classify_neighbors();

    //! Status of one lattice neighbor of the current site.
    SiteStatus site_status(Site site);

    bool inside(Site s) const
    {
        return contains(domain_, embedding_.to_plane(s));
    }

  private:
    // Conservative lattice-frame interior test: true only for sites whose
    // whole 5x5 neighborhood is inside, with a margin far above rounding.
    struct DeepInterior
    {
        bool disk{true};
        double cx{0}, cy{0}, r2{-1};
        double sin_a{0}, cos_a{1}, lo{0}, hi{0};

        bool operator()(Site s) const
        {
            if (disk)
            {
                double const dx = s.x - cx;
                double const dy = s.y - cy;
                return dx * dx + dy * dy < r2;
            }
            double const v = sin_a * s.x + cos_a * s.y;
            return v > lo && v < hi;
        }
    };

    void update_interior();
    void require_admissible() const;
    void advance(Site next);
    void resolve_groups(NeighborStatuses& out, std::array<int, 3> const& group,
                        int n_groups, bool guaranteed);

    Domain domain_;
    TransitionTable table_;
    double spacing_;
    LatticeEmbedding embedding_;
    DeepInterior deep_;
    WalkState state_;

    // Lockstep flood fill scratch.
    std::array<std::vector<Site>, 3> queues_;
};

/*!
 * Exit record of an ordinary nearest-neighbor random walk (no avoidance)
 * from the origin, with a freshly sampled lattice rotation.
 */
ExitRecord run_plain_walk(Domain const& domain, double spacing, StreamRng& rng);

}  // namespace skw
