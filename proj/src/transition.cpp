#include "skw/transition.hpp"

#include <cmath>
#include <sstream>

#include "skw/errors.hpp"

namespace skw
{
namespace
{
void require_probability(char const* name, double p)
{
    if (!(p >= 0.0 && p <= 1.0))
    {
        std::ostringstream os;
        os << "transition probability " << name << " = " << p
           << " is outside [0, 1]";
        throw ConfigError(os.str());
    }
}

void require_normalized(char const* what, double sum)
{
    if (std::abs(sum - 1.0) > TransitionTable::sum_tolerance)
    {
        std::ostringstream os;
        os.precision(17);
        os << what << " probabilities sum to " << sum << ", expected 1";
        throw ConfigError(os.str());
    }
}

bool near(double a, double b)
{
    return std::abs(a - b) <= TransitionTable::sum_tolerance;
}
}  // namespace

std::string_view to_string(RelativeDirection d)
{
    switch (d)
    {
        case RelativeDirection::Front:
            return "front";
        case RelativeDirection::Left:
            return "left";
        case RelativeDirection::Right:
            return "right";
    }
    return "?";
}

TransitionTable::TransitionTable(Entries const& e) : e_(e)
{
    require_probability("a1", e.a1);
    require_probability("a2", e.a2);
    require_probability("a3", e.a3);
    require_probability("b1", e.b1);
    require_probability("b2", e.b2);
    require_probability("c1", e.c1);
    require_probability("c2", e.c2);
    require_probability("d1", e.d1);
    require_probability("d2", e.d2);
    require_normalized("nblock (a1+a2+a3)", e.a1 + e.a2 + e.a3);
    require_normalized("left-blocked (b1+b2)", e.b1 + e.b2);
    require_normalized("right-blocked (c1+c2)", e.c1 + e.c2);
    require_normalized("front-blocked (d1+d2)", e.d1 + e.d2);
}

TransitionTable TransitionTable::mirrored() const
{
    Entries m = e_;
    std::swap(m.a2, m.a3);
    std::swap(m.b1, m.c1);
    std::swap(m.b2, m.c2);
    std::swap(m.d1, m.d2);
    return TransitionTable{m};
}

bool operator==(TransitionTable const& a, TransitionTable const& b)
{
    auto const& x = a.e_;
    auto const& y = b.e_;
    return x.a1 == y.a1 && x.a2 == y.a2 && x.a3 == y.a3 && x.b1 == y.b1
           && x.b2 == y.b2 && x.c1 == y.c1 && x.c2 == y.c2 && x.d1 == y.d1
           && x.d2 == y.d2;
}

TransitionTable uniform_table()
{
    return TransitionTable{};
}

bool is_symmetric(TransitionTable const& t)
{
    return near(t.a2(), t.a3()) && near(t.b1(), t.c1()) && near(t.d1(), 0.5)
           && near(t.d2(), 0.5);
}

StepCase classify_step(bool front_blocked, bool left_blocked, bool right_blocked)
{
    using K = StepCase::Kind;
    int const blocked = int(front_blocked) + int(left_blocked)
                        + int(right_blocked);
    switch (blocked)
    {
        case 0:
            return {K::NBlock};
        case 1:
            if (left_blocked)
                return {K::LeftBlocked};
            if (right_blocked)
                return {K::RightBlocked};
            return {K::FrontBlocked};
        case 2:
            if (!front_blocked)
                return {K::SingleAllowable, RelativeDirection::Front};
            if (!left_blocked)
                return {K::SingleAllowable, RelativeDirection::Left};
            return {K::SingleAllowable, RelativeDirection::Right};
        default:
            return {K::DeadEnd};
    }
}

int candidate_count(StepCase c)
{
    switch (c.kind)
    {
        case StepCase::Kind::NBlock:
            return 3;
        case StepCase::Kind::LeftBlocked:
        case StepCase::Kind::RightBlocked:
        case StepCase::Kind::FrontBlocked:
            return 2;
        case StepCase::Kind::SingleAllowable:
            return 1;
        case StepCase::Kind::DeadEnd:
            return 0;
    }
    return 0;
}

RelativeDirection sample_step(TransitionTable const& t, StepCase c, double u)
{
    using D = RelativeDirection;
    switch (c.kind)
    {
        case StepCase::Kind::NBlock:
            if (u < t.a1())
                return D::Front;
            return u < t.a1() + t.a2() ? D::Left : D::Right;
        case StepCase::Kind::LeftBlocked:
            return u < t.b1() ? D::Front : D::Right;
        case StepCase::Kind::RightBlocked:
            return u < t.c1() ? D::Front : D::Left;
        case StepCase::Kind::FrontBlocked:
            return u < t.d1() ? D::Left : D::Right;
        case StepCase::Kind::SingleAllowable:
            return c.only;
        case StepCase::Kind::DeadEnd:
            break;
    }
    throw InvariantViolation("sample_step called for a dead end: the walk has "
                             "no allowable neighbor");
}

}  // namespace skw
