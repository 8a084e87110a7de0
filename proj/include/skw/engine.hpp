#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "skw/geometry.hpp"
#include "skw/transition.hpp"

namespace skw
{
enum class WalkModel
{
    //! Smart kinetic walk.
    Skw,
    //! Ordinary nearest-neighbor random walk, used as a harmonic-measure check.
    Plain
};

std::string_view to_string(WalkModel m);

struct RunConfig
{
    Domain domain{reference_disk()};
    TransitionTable table;
    double spacing{0.04};
    std::uint64_t n_samples{1'000'000};
    int n_bins{1000};
    std::uint64_t seed{1};
    //! 0 selects the machine's hardware concurrency.
    int n_workers{0};
    WalkModel model{WalkModel::Skw};
    //! Keep every exit parameter (in sample order); for small runs only.
    bool record_thetas{false};

    //! Throws ConfigError describing the first violated constraint.
    void validate() const;
};

//---------------------------------------------------------------------------//
/*!
 * Histogram of exit parameters over n equal bins of [0, 2pi).
 *
 * Accumulators from different workers merge by counter-wise addition.
 * Walks that aborted on an invariant violation are counted separately.
 */
class EcdfAccumulator
{
  public:
    explicit EcdfAccumulator(int n_bins);

    int n_bins() const { return int(counts_.size()); }
    double bin_width() const { return two_pi / n_bins(); }

    //! Bin index floor(theta / bin_width), clamped into range.
    int bin_of(double theta) const;

    void add(double theta);
    void add_count(int bin, std::uint64_t count);
    void add_abort() { ++aborted_; }

    std::span<std::uint64_t const> counts() const { return counts_; }
    //! Walks processed (binned plus aborted).
    std::uint64_t total() const { return binned_ + aborted_; }
    std::uint64_t binned() const { return binned_; }
    std::uint64_t aborted() const { return aborted_; }

    //! Counter-wise sum; throws std::invalid_argument on bin mismatch.
    EcdfAccumulator& merge(EcdfAccumulator const& other);

    //! Bin edges 0, w, 2w, ..., 2pi (n_bins + 1 values).
    std::vector<double> bin_edges() const;

    friend bool operator==(EcdfAccumulator const&, EcdfAccumulator const&)
        = default;

  private:
    std::vector<std::uint64_t> counts_;
    std::uint64_t binned_{0};
    std::uint64_t aborted_{0};
};

EcdfAccumulator merge(EcdfAccumulator a, EcdfAccumulator const& b);

/*!
 * Empirical CDF at the given parameters: fraction of binned samples lying in
 * bins entirely below theta. Exact at bin edges. Throws on empty input.
 */
std::vector<double> ecdf(EcdfAccumulator const& acc,
                         std::span<double const> theta_grid);

//---------------------------------------------------------------------------//
struct RunStats
{
    double wall_seconds{0};
    std::uint64_t max_path_length{0};
    std::uint64_t total_path_length{0};
    int workers_used{1};
    //! First few abort diagnostics.
    std::vector<std::string> abort_messages;
};

struct RunResult
{
    EcdfAccumulator acc;
    RunStats stats;
    //! Exit parameters in sample order when RunConfig::record_thetas.
    std::vector<double> thetas;
};

/*!
 * Run n_samples independent walks and bin their exit parameters.
 *
 * Walk i draws from random stream (seed, i) only, so the histogram is
 * identical for any number of workers. Aborted walks are counted in the
 * result; callers decide whether that fails the run.
 */
RunResult run_experiment(RunConfig const& cfg);

//! Default parallelism (at least 1).
int default_workers();

}  // namespace skw
