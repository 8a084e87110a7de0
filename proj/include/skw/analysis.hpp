#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "skw/engine.hpp"
#include "skw/geometry.hpp"
#include "skw/rng.hpp"
#include "skw/transition.hpp"

namespace skw
{
//! F - H on the bin-edge grid of one run, with binomial standard errors.
struct DifferenceCurve
{
    std::vector<double> theta;
    std::vector<double> F;
    std::vector<double> H;
    std::vector<double> diff;
    std::vector<double> sigma;
    double spacing{0};
    std::uint64_t n{0};
    //! Free-form tag (domain/table) used to catch mixing unrelated curves.
    std::string label;

    std::size_t size() const { return theta.size(); }
};

/*!
 * diff[k] = F(theta_k) - H(theta_k) and sigma[k] = sqrt(F(1 - F) / n) on the
 * n_bins + 1 bin edges. Throws std::invalid_argument for an empty
 * accumulator.
 */
DifferenceCurve difference_curve(EcdfAccumulator const& acc,
                                 Domain const& domain, double spacing,
                                 std::string label = {});

//! Half-width 2*sigma of the pointwise error bars.
std::vector<double> error_band(DifferenceCurve const& curve);

//! Fraction of grid points where |diff| <= 2 sigma.
double band_coverage(DifferenceCurve const& curve);

double max_abs_diff(DifferenceCurve const& curve);

//! Trapezoidal integral of |diff| over theta.
double l1_norm(DifferenceCurve const& curve);

//---------------------------------------------------------------------------//
struct CollapseReport
{
    double reference_spacing{0};
    //! reference_spacing / spacing, per input curve.
    std::vector<double> factors;
    //! factor * diff, per input curve.
    std::vector<std::vector<double>> rescaled;
    double max_discrepancy{0};
    //! Where the maximum occurred: grid index and the two curve indices.
    std::size_t worst_index{0};
    std::array<std::size_t, 2> worst_pair{0, 0};
    double threshold{3};
    bool pass{false};
};

/*!
 * Multiply each curve by (smallest spacing / its spacing) and compare all
 * pairs pointwise in units of their combined rescaled 2-sigma bars.
 *
 * Requires at least two curves with identical grids and distinct spacings;
 * throws std::invalid_argument otherwise.
 */
CollapseReport rescale_and_collapse(std::span<DifferenceCurve const> curves,
                                    double threshold = 3.0);

//! Max |diff| per spacing and ratios between consecutive spacings.
struct ConvergenceReport
{
    std::vector<double> spacings;
    std::vector<double> max_abs;
    //! max_abs[i] / max_abs[i + 1], spacings sorted in decreasing order.
    std::vector<double> ratios;
};

ConvergenceReport convergence_report(std::span<DifferenceCurve const> curves);

//---------------------------------------------------------------------------//
struct Interval
{
    double lo{0};
    double hi{0};

    bool overlaps(Interval const& o) const { return lo <= o.hi && o.lo <= hi; }
};

struct BootstrapOptions
{
    int replicates{1000};
    double level{0.95};
    std::uint64_t seed{20170801};
};

//! L1 norms of table X over table Y on two domains.
struct RatioReport
{
    std::array<double, 2> ratio{0, 0};
    std::array<Interval, 2> interval;
    std::array<double, 2> l1_x{0, 0};
    std::array<double, 2> l1_y{0, 0};
    bool pass{false};
};

/*!
 * Domain independence of the correction constant, tested through
 * r_D = L1(F_X - H) / L1(F_Y - H) on each of two domains.
 *
 * Intervals come from a percentile bootstrap that resamples each histogram
 * multinomially. pass iff the two intervals overlap.
 * acc_x[d], acc_y[d] are the runs on domains[d].
 */
RatioReport ratio_from_accumulators(std::array<EcdfAccumulator, 2> const& acc_x,
                                    std::array<EcdfAccumulator, 2> const& acc_y,
                                    std::array<Domain, 2> const& domains,
                                    BootstrapOptions const& opts = {});

struct RatioTestConfig
{
    TransitionTable table_x;
    TransitionTable table_y;
    std::array<Domain, 2> domains{reference_disk(), reference_strip()};
    double spacing{0.01};
    std::uint64_t n_samples{1'000'000};
    int n_bins{1000};
    std::uint64_t seed{1};
    int n_workers{0};
    BootstrapOptions bootstrap;
};

/*!
 * Run the four simulations and evaluate ratio_from_accumulators.
 * Throws ConfigError if either table is asymmetric.
 */
RatioReport cross_domain_ratio_test(RatioTestConfig const& cfg);

//---------------------------------------------------------------------------//
struct ShapeReport
{
    std::vector<double> norms;
    double max_discrepancy{0};
    std::size_t worst_index{0};
    double threshold{3};
    bool pass{false};
};

/*!
 * Normalize each curve by its L1 norm and compare all pairs pointwise in
 * units of their combined normalized 2-sigma bars. Throws for fewer than
 * two curves, mismatched grids or a zero-norm curve.
 */
ShapeReport shape_universality_test(std::span<DifferenceCurve const> curves,
                                    double threshold = 3.0);

//---------------------------------------------------------------------------//
//! Multinomial resample of n draws with the given (unnormalized) weights.
EcdfAccumulator multinomial_histogram(std::span<double const> weights,
                                      std::uint64_t n, StreamRng& rng);

//! Histogram of n exact draws from harmonic measure on the domain.
EcdfAccumulator sample_harmonic_histogram(Domain const& domain, int n_bins,
                                          std::uint64_t n, StreamRng& rng);

}  // namespace skw
