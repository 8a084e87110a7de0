#include "skw/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "skw/errors.hpp"
#include "skw/rng.hpp"
#include "skw/walker.hpp"

namespace skw
{
namespace
{
constexpr std::uint64_t chunk_size = 256;
constexpr std::size_t max_abort_messages = 8;
}  // namespace

std::string_view to_string(WalkModel m)
{
    return m == WalkModel::Skw ? "skw" : "plain";
}

void RunConfig::validate() const
{
    if (n_samples < 1)
        throw ConfigError("n_samples must be at least 1");
    if (n_bins < 2)
        throw ConfigError("n_bins must be at least 2");
    if (n_workers < 0)
        throw ConfigError("n_workers must be non-negative");
    if (!(spacing > 0))
        throw ConfigError("lattice spacing must be positive");
    // All four neighbors of the origin must be inside for every rotation.
    if (!(spacing < domain.inradius_at_origin()))
    {
        std::ostringstream os;
        os << "lattice spacing " << spacing << " is not smaller than the "
           << "distance " << domain.inradius_at_origin()
           << " from the origin to the boundary of " << domain.describe();
        throw ConfigError(os.str());
    }
}

//---------------------------------------------------------------------------//
EcdfAccumulator::EcdfAccumulator(int n_bins)
{
    if (n_bins < 1)
        throw std::invalid_argument("EcdfAccumulator: need at least one bin");
    counts_.assign(std::size_t(n_bins), 0);
}

int EcdfAccumulator::bin_of(double theta) const
{
    auto const k = int(std::floor(theta / bin_width()));
    return std::clamp(k, 0, n_bins() - 1);
}

void EcdfAccumulator::add(double theta)
{
    ++counts_[std::size_t(bin_of(theta))];
    ++binned_;
}

void EcdfAccumulator::add_count(int bin, std::uint64_t count)
{
    counts_.at(std::size_t(bin)) += count;
    binned_ += count;
}

EcdfAccumulator& EcdfAccumulator::merge(EcdfAccumulator const& other)
{
    if (other.n_bins() != n_bins())
        throw std::invalid_argument("EcdfAccumulator::merge: bin counts "
                                    "differ");
    for (std::size_t k = 0; k < counts_.size(); ++k)
        counts_[k] += other.counts_[k];
    binned_ += other.binned_;
    aborted_ += other.aborted_;
    return *this;
}

std::vector<double> EcdfAccumulator::bin_edges() const
{
    std::vector<double> edges(counts_.size() + 1);
    for (std::size_t k = 0; k < edges.size(); ++k)
        edges[k] = two_pi * double(k) / double(counts_.size());
    edges.back() = two_pi;
    return edges;
}

EcdfAccumulator merge(EcdfAccumulator a, EcdfAccumulator const& b)
{
    a.merge(b);
    return a;
}

std::vector<double> ecdf(EcdfAccumulator const& acc,
                         std::span<double const> theta_grid)
{
    if (acc.binned() == 0)
        throw std::invalid_argument("ecdf: accumulator is empty");

    auto const counts = acc.counts();
    std::vector<std::uint64_t> cumulative(counts.size() + 1, 0);
    for (std::size_t k = 0; k < counts.size(); ++k)
        cumulative[k + 1] = cumulative[k] + counts[k];

    double const n = double(acc.binned());
    double const w = acc.bin_width();
    std::vector<double> out;
    out.reserve(theta_grid.size());
    for (double t : theta_grid)
    {
        std::size_t full = 0;
        if (t >= two_pi)
            full = counts.size();
        else if (t > 0)
        {
            // Number of bins whose upper edge k*w is <= t; guard rounding
            // so that t == edge k counts exactly k bins.
            auto k = std::size_t(std::floor(t / w));
            while (k < counts.size() && two_pi * double(k + 1) / counts.size() <= t)
                ++k;
            while (k > 0 && two_pi * double(k) / counts.size() > t)
                --k;
            full = std::min(k, counts.size());
        }
        out.push_back(double(cumulative[full]) / n);
    }
    return out;
}

//---------------------------------------------------------------------------//
int default_workers()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

RunResult run_experiment(RunConfig const& cfg)
{
    cfg.validate();
    auto const t0 = std::chrono::steady_clock::now();

    int const workers = int(std::min<std::uint64_t>(
        cfg.n_workers > 0 ? cfg.n_workers : default_workers(),
        (cfg.n_samples + chunk_size - 1) / chunk_size));

    RunResult result{EcdfAccumulator(cfg.n_bins), {}, {}};
    if (cfg.record_thetas)
        result.thetas.assign(cfg.n_samples, 0.0);

    std::atomic<std::uint64_t> next_chunk{0};
    std::mutex merge_mutex;
    std::exception_ptr failure;

    auto work = [&]() {
        try
        {
            EcdfAccumulator local(cfg.n_bins);
            RunStats local_stats;
            std::optional<Walker> walker;
            if (cfg.model == WalkModel::Skw)
                walker.emplace(cfg.domain, cfg.table, cfg.spacing);

            while (true)
            {
                std::uint64_t const begin = chunk_size * next_chunk++;
                if (begin >= cfg.n_samples)
                    break;
                std::uint64_t const end = std::min(begin + chunk_size,
                                                   cfg.n_samples);
                for (std::uint64_t i = begin; i < end; ++i)
                {
                    StreamRng rng(cfg.seed, i);
                    try
                    {
                        ExitRecord rec;
                        if (walker)
                        {
                            rec = walker->run(rng);
                            auto const len = std::uint64_t(
                                walker->state().path.size());
                            local_stats.max_path_length = std::max(
                                local_stats.max_path_length, len);
                            local_stats.total_path_length += len;
                        }
                        else
                        {
                            rec = run_plain_walk(cfg.domain, cfg.spacing, rng);
                        }
                        local.add(rec.theta);
                        if (cfg.record_thetas)
                            result.thetas[i] = rec.theta;
                    }
                    catch (InvariantViolation const& e)
                    {
                        local.add_abort();
                        if (local_stats.abort_messages.size()
                            < max_abort_messages)
                        {
                            local_stats.abort_messages.push_back(
                                "walk " + std::to_string(i) + ": " + e.what());
                        }
                    }
                }
            }

            std::lock_guard lock(merge_mutex);
            result.acc.merge(local);
            auto& s = result.stats;
            s.max_path_length = std::max(s.max_path_length,
                                         local_stats.max_path_length);
            s.total_path_length += local_stats.total_path_length;
            for (auto& m : local_stats.abort_messages)
            {
                if (s.abort_messages.size() < max_abort_messages)
                    s.abort_messages.push_back(std::move(m));
            }
        }
        catch (...)
        {
            std::lock_guard lock(merge_mutex);
            if (!failure)
                failure = std::current_exception();
            next_chunk = cfg.n_samples;  // stop the others early
        }
    };

    if (workers <= 1)
    {
        work();
    }
    else
    {
        std::vector<std::jthread> pool;
        pool.reserve(std::size_t(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work);
    }
    if (failure)
        std::rethrow_exception(failure);

    // Abort messages arrive in scheduling order; sort for reproducible logs.
    std::sort(result.stats.abort_messages.begin(),
              result.stats.abort_messages.end());
    result.stats.workers_used = std::max(workers, 1);
    result.stats.wall_seconds = std::chrono::duration<double>(
                                    std::chrono::steady_clock::now() - t0)
                                    .count();
    return result;
}

}  // namespace skw
