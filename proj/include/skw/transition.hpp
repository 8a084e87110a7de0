#pragma once

#include <array>
#include <string_view>

namespace skw
{
//! Step direction measured relative to the heading of the previous step.
enum class RelativeDirection
{
    Front,
    Left,
    Right
};

std::string_view to_string(RelativeDirection d);

//---------------------------------------------------------------------------//
/*!
 * Per-step transition probabilities of the smart kinetic walk.
 *
 * The four non-trivial local situations each carry their own distribution:
 *  - nblock (all three of front/left/right allowable): a1, a2, a3
 *  - left blocked: b1 (front), b2 (right)
 *  - right blocked: c1 (front), c2 (left)
 *  - front blocked: d1 (left), d2 (right)
 *
 * Instances are validated on construction and immutable afterwards.
 */
class TransitionTable
{
  public:
    static constexpr double sum_tolerance = 1e-12;

    struct Entries
    {
        double a1{1.0 / 3}, a2{1.0 / 3}, a3{1.0 / 3};
        double b1{0.5}, b2{0.5};
        double c1{0.5}, c2{0.5};
        double d1{0.5}, d2{0.5};
    };

    //! Uniform table (the original SKW).
    TransitionTable() = default;

    //! Validating constructor; throws ConfigError.
    explicit TransitionTable(Entries const& e);

    Entries const& entries() const { return e_; }

    double a1() const { return e_.a1; }
    double a2() const { return e_.a2; }
    double a3() const { return e_.a3; }
    double b1() const { return e_.b1; }
    double b2() const { return e_.b2; }
    double c1() const { return e_.c1; }
    double c2() const { return e_.c2; }
    double d1() const { return e_.d1; }
    double d2() const { return e_.d2; }

    //! Exchange left and right: (a2,a3), (b,c), (d1,d2).
    TransitionTable mirrored() const;

    friend bool operator==(TransitionTable const& a, TransitionTable const& b);

  private:
    Entries e_;
};

TransitionTable uniform_table();

//! a2 = a3, b1 = c1 and d1 = d2 = 1/2, each within the sum tolerance.
bool is_symmetric(TransitionTable const& t);

//---------------------------------------------------------------------------//
//! Local configuration of blocked candidates, as seen from the heading.
struct StepCase
{
    enum class Kind
    {
        NBlock,
        LeftBlocked,
        RightBlocked,
        FrontBlocked,
        SingleAllowable,
        DeadEnd
    };

    Kind kind{Kind::NBlock};
    //! Only meaningful for SingleAllowable.
    RelativeDirection only{RelativeDirection::Front};

    friend bool operator==(StepCase const&, StepCase const&) = default;
};

StepCase classify_step(bool front_blocked, bool left_blocked, bool right_blocked);

//! Number of candidate directions for a case (0 for DeadEnd).
int candidate_count(StepCase c);

/*!
 * Pick a direction for the given case using one uniform deviate in [0, 1).
 *
 * Candidates are laid out cumulatively in the fixed order Front, Left, Right
 * so that the result is a deterministic function of u. Throws
 * InvariantViolation for DeadEnd.
 */
RelativeDirection sample_step(TransitionTable const& t, StepCase c, double u);

}  // namespace skw
