#include "skw/walker.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "skw/errors.hpp"

namespace skw
{
namespace
{
constexpr std::array<Site, 4> lattice_dirs{
    Site{1, 0}, Site{0, 1}, Site{-1, 0}, Site{0, -1}};

bool is_unit(Site d)
{
    return std::abs(d.x) + std::abs(d.y) == 1;
}

// Tiny union-find over at most three labels.
struct Labels
{
    std::array<int, 3> parent{0, 1, 2};

    int find(int i) const
    {
        while (parent[i] != i)
            i = parent[i];
        return i;
    }
    void unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a != b)
            parent[b] = a;
    }
};

double distance_to_boundary(Domain const& domain, Point p)
{
    if (domain.is_disk())
    {
        auto const& d = domain.disk();
        return d.radius - std::hypot(p.x - d.center.x, p.y - d.center.y);
    }
    auto const& s = domain.strip();
    return std::min(s.top - p.y, p.y - s.bottom);
}
}  // namespace

std::string_view to_string(SiteStatus s)
{
    switch (s)
    {
        case SiteStatus::Occupied:
            return "occupied";
        case SiteStatus::Trapping:
            return "trapping";
        case SiteStatus::Allowable:
            return "allowable";
    }
    return "?";
}

void WalkState::reset()
{
    occupancy.clear();
    path.clear();
    current = {0, 0};
    heading.reset();
    occupancy.insert(current);
    path.push_back(current);
}

//---------------------------------------------------------------------------//
Walker::Walker(Domain const& domain, TransitionTable const& table,
               double spacing)
    : domain_(domain), table_(table), spacing_(spacing), embedding_(spacing, 0)
{
    // Pre-size the occupancy window to cover the whole domain (disk) or a
    // square of the strip's width (the strip window grows on demand).
    double extent = 0;
    if (domain_.is_disk())
    {
        auto const& d = domain_.disk();
        extent = std::hypot(d.center.x, d.center.y) + d.radius;
    }
    else
    {
        extent = domain_.strip().width();
    }
    auto const b = std::int32_t(std::ceil(extent / spacing_)) + 2;
    state_.occupancy.reserve({-b, -b}, {b, b});
    state_.reset();
    update_interior();
}

void Walker::update_interior()
{
    constexpr double margin = 2.5;
    double const a = embedding_.rotation();
    deep_ = {};
    if (domain_.is_disk())
    {
        auto const& d = domain_.disk();
        Point const c = embedding_.to_lattice(d.center);
        double const r = d.radius / spacing_ - margin;
        deep_.disk = true;
        deep_.cx = c.x;
        deep_.cy = c.y;
        deep_.r2 = r > 0 ? r * r : -1;
    }
    else
    {
        auto const& st = domain_.strip();
        deep_.disk = false;
        deep_.sin_a = std::sin(a);
        deep_.cos_a = std::cos(a);
        deep_.lo = st.bottom / spacing_ + margin;
        deep_.hi = st.top / spacing_ - margin;
    }
}

void Walker::require_admissible() const
{
    for (Site d : lattice_dirs)
    {
        if (!inside(d))
        {
            std::ostringstream os;
            os << "lattice spacing " << spacing_
               << " is too coarse: a neighbor of the origin lies outside "
               << domain_.describe();
            throw ConfigError(os.str());
        }
    }
}

void Walker::start(double rotation)
{
    embedding_ = LatticeEmbedding(spacing_, rotation);
    update_interior();
    state_.reset();
}

void Walker::load(std::span<Site const> path, double rotation)
{
    if (path.size() < 2)
        throw std::invalid_argument("Walker::load: need at least two sites");
    embedding_ = LatticeEmbedding(spacing_, rotation);
    update_interior();
    state_.occupancy.clear();
    state_.path.clear();
    for (std::size_t i = 0; i < path.size(); ++i)
    {
        if (i > 0 && !is_unit(path[i] - path[i - 1]))
            throw std::invalid_argument("Walker::load: path is not connected");
        if (!inside(path[i]))
            throw std::invalid_argument("Walker::load: path leaves the domain");
        if (!state_.occupancy.insert(path[i]))
            throw std::invalid_argument("Walker::load: path is not "
                                        "self-avoiding");
        state_.path.push_back(path[i]);
    }
    state_.current = path.back();
    state_.heading = path.back() - path[path.size() - 2];
}

void Walker::advance(Site next)
{
    state_.heading = next - state_.current;
    state_.current = next;
    state_.occupancy.insert(next);
    state_.path.push_back(next);
}

void Walker::first_step(double u)
{
    require_admissible();
    if (state_.path.size() != 1)
        throw std::logic_error("first_step: walk already started");
    auto const k = std::min(int(4 * u), 3);
    advance(lattice_dirs[k]);
}

//---------------------------------------------------------------------------//
NeighborStatuses Walker::classify_neighbors()
{
    if (!state_.heading)
        throw std::logic_error("classify_neighbors: walk has not started");

    Site const c = state_.current;
    Site const h = *state_.heading;
    Site const l = rotate_ccw(h);
    Site const r = rotate_cw(h);
    auto const& occ = state_.occupancy;

    NeighborStatuses out;
    out.sites = {c + h, c + l, c + r};
    std::array<bool, 3> free{};
    bool any_exit = false;
    bool const deep = deep_(c);
    for (int k = 0; k < 3; ++k)
    {
        Site const s = out.sites[k];
        out.exits[k] = !deep && !inside(s);
        if (out.exits[k])
        {
            out.status[k] = SiteStatus::Allowable;
            any_exit = true;
        }
        else if (occ.contains(s))
        {
            out.status[k] = SiteStatus::Occupied;
        }
        else
        {
            out.status[k] = SiteStatus::Allowable;
            free[k] = true;
        }
    }

    auto free_site = [&](Site s) {
        return !occ.contains(s) && (deep || inside(s));
    };

    // Connectivity through the ring of eight sites around c. The back site
    // is occupied, so left and right can only be joined via the front.
    constexpr int F = 0, L = 1, R = 2;
    Labels labels;
    if (free[F] && free[L] && free_site(c + h + l))
        labels.unite(F, L);
    if (free[F] && free[R] && free_site(c + h + r))
        labels.unite(F, R);

    std::array<int, 3> group{-1, -1, -1};
    std::array<int, 3> root_to_group{-1, -1, -1};
    int n_groups = 0;
    for (int k = 0; k < 3; ++k)
    {
        if (!free[k])
            continue;
        int const root = labels.find(k);
        if (root_to_group[root] < 0)
            root_to_group[root] = n_groups++;
        group[k] = root_to_group[root];
    }

    // Entered from the interior: some free neighbor must lead outside.
    bool const guaranteed = !any_exit;
    if (n_groups == 0 || (guaranteed && n_groups == 1))
        return out;

    resolve_groups(out, group, n_groups, guaranteed);
    return out;
}

void Walker::resolve_groups(NeighborStatuses& out,
                            std::array<int, 3> const& group, int n_groups,
                            bool guaranteed)
{
    enum class Fill
    {
        Open,
        Exterior,
        Trapped
    };

    auto& grid = state_.occupancy;
    grid.begin_search();
    std::array<std::size_t, 3> head{0, 0, 0};
    for (int g = 0; g < n_groups; ++g)
        queues_[g].clear();
    for (int k = 0; k < 3; ++k)
    {
        if (group[k] < 0)
            continue;
        grid.set_mark(out.sites[k], group[k]);
        queues_[group[k]].push_back(out.sites[k]);
    }

    Labels labels;
    std::array<Fill, 3> fill{Fill::Open, Fill::Open, Fill::Open};
    // Sites expanded per component per round; fairness only matters up to
    // a constant factor.
    constexpr int batch = 8;

    while (true)
    {
        int open = 0;
        int last_open = -1;
        bool any_exterior = false;
        for (int g = 0; g < n_groups; ++g)
        {
            if (labels.find(g) != g)
                continue;
            if (fill[g] == Fill::Exterior)
                any_exterior = true;
            if (fill[g] == Fill::Open)
            {
                ++open;
                last_open = g;
            }
        }
        if (open == 0)
            break;
        if (guaranteed && open == 1 && !any_exterior)
        {
            // Everything else is sealed, so this one is the way out.
            fill[last_open] = Fill::Exterior;
            break;
        }

        for (int g = 0; g < n_groups; ++g)
        {
            if (labels.find(g) != g)
                continue;
            for (int b = 0; b < batch && fill[g] == Fill::Open
                            && labels.find(g) == g;
                 ++b)
            {
                // Pop one site from any queue belonging to this component.
                int member = -1;
                for (int m = 0; m < n_groups; ++m)
                {
                    if (head[m] < queues_[m].size() && labels.find(m) == g)
                    {
                        member = m;
                        break;
                    }
                }
                if (member < 0)
                {
                    fill[g] = Fill::Trapped;
                    break;
                }
                Site const s = queues_[member][head[member]++];
                bool const deep = deep_(s);

                for (Site d : lattice_dirs)
                {
                    Site const n = s + d;
                    if (!deep && !inside(n))
                    {
                        fill[g] = Fill::Exterior;
                        break;
                    }
                    int const p = grid.probe(n);
                    if (p == SiteGrid::probe_occupied)
                        continue;
                    if (p == SiteGrid::probe_unmarked)
                    {
                        grid.set_mark(n, g);
                        queues_[g].push_back(n);
                        continue;
                    }
                    int const other = labels.find(p);
                    if (other != g)
                    {
                        // Components meet: same connected region.
                        bool const other_out = fill[other] == Fill::Exterior;
                        labels.parent[other] = g;
                        if (other_out)
                        {
                            fill[g] = Fill::Exterior;
                            break;
                        }
                    }
                }
            }
        }
    }

    for (int k = 0; k < 3; ++k)
    {
        if (group[k] < 0)
            continue;
        out.status[k] = fill[labels.find(group[k])] == Fill::Exterior
                            ? SiteStatus::Allowable
                            : SiteStatus::Trapping;
    }
}

SiteStatus Walker::site_status(Site site)
{
    Site const c = state_.current;
    if (!is_unit(site - c))
        throw std::invalid_argument("site_status: not a neighbor of the "
                                    "current site");
    if (!state_.heading)
    {
        if (!inside(site))
            return SiteStatus::Allowable;
        return state_.occupancy.contains(site) ? SiteStatus::Occupied
                                               : SiteStatus::Allowable;
    }
    if (site == c - *state_.heading)
        return SiteStatus::Occupied;
    auto const ns = classify_neighbors();
    for (int k = 0; k < 3; ++k)
    {
        if (ns.sites[k] == site)
            return ns.status[k];
    }
    throw std::logic_error("site_status: unreachable");
}

std::optional<ExitRecord> Walker::step(double u)
{
    auto const ns = classify_neighbors();
    auto const blocked = [&](int k) {
        return ns.status[k] != SiteStatus::Allowable;
    };
    StepCase const sc = classify_step(blocked(0), blocked(1), blocked(2));
    if (sc.kind == StepCase::Kind::DeadEnd)
    {
        std::ostringstream os;
        os << "walk trapped at site (" << state_.current.x << ", "
           << state_.current.y << ") after " << state_.path.size() - 1
           << " steps (rotation " << embedding_.rotation() << ", spacing "
           << spacing_ << ")";
        throw InvariantViolation(os.str());
    }
    auto const dir = int(sample_step(table_, sc, u));
    Site const next = ns.sites[dir];
    if (ns.exits[dir])
        return make_exit_record(domain_, embedding_.to_plane(next));
    advance(next);
    return std::nullopt;
}

ExitRecord Walker::run(StreamRng& rng)
{
    start(sample_rotation(rng.uniform()));
    first_step(rng.uniform());
    while (true)
    {
        if (auto rec = step(rng.uniform()))
            return *rec;
    }
}

//---------------------------------------------------------------------------//
ExitRecord run_plain_walk(Domain const& domain, double spacing, StreamRng& rng)
{
    LatticeEmbedding const e(spacing, sample_rotation(rng.uniform()));
    Site s{0, 0};
    std::uint64_t bits = 0;
    int n_bits = 0;
    auto next_dir = [&]() {
        if (n_bits == 0)
        {
            bits = rng();
            n_bits = 64;
        }
        Site const d = lattice_dirs[bits & 3u];
        bits >>= 2;
        n_bits -= 2;
        return d;
    };

    while (true)
    {
        Point const p = e.to_plane(s);
        // Steps of length spacing cannot reach a boundary this far away.
        auto const safe = std::int64_t(distance_to_boundary(domain, p) / spacing)
                          - 1;
        if (safe >= 1)
        {
            for (std::int64_t k = 0; k < safe; ++k)
                s = s + next_dir();
            continue;
        }
        s = s + next_dir();
        Point const q = e.to_plane(s);
        if (!contains(domain, q))
            return make_exit_record(domain, q);
    }
}

}  // namespace skw
