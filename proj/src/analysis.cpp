#include "skw/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "skw/errors.hpp"
#include "skw/harmonic.hpp"

namespace skw
{
namespace
{
void require_same_grid(DifferenceCurve const& a, DifferenceCurve const& b)
{
    if (a.theta != b.theta)
        throw std::invalid_argument("difference curves use different grids");
}

double trapezoid_abs(std::span<double const> x, std::span<double const> y)
{
    double sum = 0;
    for (std::size_t k = 1; k < x.size(); ++k)
        sum += 0.5 * (x[k] - x[k - 1]) * (std::abs(y[k]) + std::abs(y[k - 1]));
    return sum;
}

// Pairwise standardized distance; 0/0 (both bars and difference vanish)
// counts as agreement.
double standardized(double delta, double band_a, double band_b)
{
    double const denom = std::hypot(band_a, band_b);
    if (denom == 0)
        return delta == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(delta) / denom;
}

std::vector<double> harmonic_on_edges(Domain const& domain, int n_bins)
{
    std::vector<double> h(std::size_t(n_bins) + 1);
    for (int k = 0; k <= n_bins; ++k)
        h[std::size_t(k)] = harmonic_cdf(domain, two_pi * k / n_bins);
    h.back() = 1.0;
    return h;
}

double l1_from_counts(std::span<std::uint64_t const> counts,
                      std::span<double const> h, double bin_width)
{
    double const n = double(std::accumulate(counts.begin(), counts.end(),
                                            std::uint64_t{0}));
    double sum = 0;
    double prev = 0;  // |F - H| at theta = 0 is zero
    std::uint64_t cum = 0;
    for (std::size_t k = 0; k < counts.size(); ++k)
    {
        cum += counts[k];
        double const cur = std::abs(double(cum) / n - h[k + 1]);
        sum += 0.5 * bin_width * (prev + cur);
        prev = cur;
    }
    return sum;
}

double percentile(std::vector<double> v, double q)
{
    std::sort(v.begin(), v.end());
    double const pos = q * double(v.size() - 1);
    auto const lo = std::size_t(std::floor(pos));
    auto const hi = std::min(lo + 1, v.size() - 1);
    double const frac = pos - double(lo);
    return v[lo] * (1 - frac) + v[hi] * frac;
}
}  // namespace

//---------------------------------------------------------------------------//
DifferenceCurve difference_curve(EcdfAccumulator const& acc,
                                 Domain const& domain, double spacing,
                                 std::string label)
{
    if (acc.binned() == 0)
        throw std::invalid_argument("difference_curve: accumulator is empty");

    DifferenceCurve c;
    c.theta = acc.bin_edges();
    c.F = ecdf(acc, c.theta);
    c.H = harmonic_on_edges(domain, acc.n_bins());
    c.spacing = spacing;
    c.n = acc.binned();
    c.label = std::move(label);
    c.diff.resize(c.size());
    c.sigma.resize(c.size());
    for (std::size_t k = 0; k < c.size(); ++k)
    {
        c.diff[k] = c.F[k] - c.H[k];
        c.sigma[k] = std::sqrt(c.F[k] * (1 - c.F[k]) / double(c.n));
    }
    // Both distributions end at 1.
    c.diff.back() = 0;
    return c;
}

std::vector<double> error_band(DifferenceCurve const& curve)
{
    std::vector<double> band(curve.sigma.size());
    std::transform(curve.sigma.begin(), curve.sigma.end(), band.begin(),
                   [](double s) { return 2 * s; });
    return band;
}

double band_coverage(DifferenceCurve const& curve)
{
    std::size_t inside = 0;
    for (std::size_t k = 0; k < curve.size(); ++k)
    {
        if (std::abs(curve.diff[k]) <= 2 * curve.sigma[k])
            ++inside;
    }
    return double(inside) / double(curve.size());
}

double max_abs_diff(DifferenceCurve const& curve)
{
    double m = 0;
    for (double d : curve.diff)
        m = std::max(m, std::abs(d));
    return m;
}

double l1_norm(DifferenceCurve const& curve)
{
    return trapezoid_abs(curve.theta, curve.diff);
}

//---------------------------------------------------------------------------//
CollapseReport rescale_and_collapse(std::span<DifferenceCurve const> curves,
                                    double threshold)
{
    if (curves.size() < 2)
        throw std::invalid_argument("collapse test needs at least two curves");
    for (std::size_t i = 0; i < curves.size(); ++i)
    {
        require_same_grid(curves[0], curves[i]);
        if (curves[i].label != curves[0].label)
            throw std::invalid_argument("collapse test mixes '" + curves[0].label
                                        + "' and '" + curves[i].label + "'");
        if (!(curves[i].spacing > 0))
            throw std::invalid_argument("collapse test: spacing must be "
                                        "positive");
        for (std::size_t j = 0; j < i; ++j)
        {
            if (curves[i].spacing == curves[j].spacing)
                throw std::invalid_argument("collapse test: duplicate "
                                            "spacing");
        }
    }

    CollapseReport rep;
    rep.threshold = threshold;
    rep.reference_spacing = std::min_element(curves.begin(), curves.end(),
                                             [](auto const& a, auto const& b) {
                                                 return a.spacing < b.spacing;
                                             })
                                ->spacing;
    for (auto const& c : curves)
    {
        double const f = rep.reference_spacing / c.spacing;
        rep.factors.push_back(f);
        std::vector<double> r(c.size());
        std::transform(c.diff.begin(), c.diff.end(), r.begin(),
                       [f](double d) { return f * d; });
        rep.rescaled.push_back(std::move(r));
    }

    std::size_t const m = curves[0].size();
    for (std::size_t i = 0; i < curves.size(); ++i)
    {
        for (std::size_t j = i + 1; j < curves.size(); ++j)
        {
            for (std::size_t k = 0; k < m; ++k)
            {
                double const z = standardized(
                    rep.rescaled[i][k] - rep.rescaled[j][k],
                    rep.factors[i] * 2 * curves[i].sigma[k],
                    rep.factors[j] * 2 * curves[j].sigma[k]);
                if (z > rep.max_discrepancy)
                {
                    rep.max_discrepancy = z;
                    rep.worst_index = k;
                    rep.worst_pair = {i, j};
                }
            }
        }
    }
    rep.pass = rep.max_discrepancy <= threshold;
    return rep;
}

ConvergenceReport convergence_report(std::span<DifferenceCurve const> curves)
{
    std::vector<DifferenceCurve const*> sorted;
    for (auto const& c : curves)
        sorted.push_back(&c);
    std::sort(sorted.begin(), sorted.end(),
              [](auto* a, auto* b) { return a->spacing > b->spacing; });

    ConvergenceReport rep;
    for (auto const* c : sorted)
    {
        rep.spacings.push_back(c->spacing);
        rep.max_abs.push_back(max_abs_diff(*c));
    }
    for (std::size_t i = 0; i + 1 < rep.max_abs.size(); ++i)
        rep.ratios.push_back(rep.max_abs[i] / rep.max_abs[i + 1]);
    return rep;
}

//---------------------------------------------------------------------------//
EcdfAccumulator multinomial_histogram(std::span<double const> weights,
                                      std::uint64_t n, StreamRng& rng)
{
    EcdfAccumulator acc(int(weights.size()));
    double remaining_w = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::uint64_t remaining_n = n;
    for (std::size_t k = 0; k < weights.size() && remaining_n > 0; ++k)
    {
        std::uint64_t draw = remaining_n;
        if (k + 1 < weights.size())
        {
            double const p = remaining_w > 0
                                 ? std::clamp(weights[k] / remaining_w, 0.0, 1.0)
                                 : 0.0;
            std::binomial_distribution<std::uint64_t> binom(remaining_n, p);
            draw = binom(rng);
        }
        acc.add_count(int(k), draw);
        remaining_n -= draw;
        remaining_w -= weights[k];
    }
    return acc;
}

EcdfAccumulator sample_harmonic_histogram(Domain const& domain, int n_bins,
                                          std::uint64_t n, StreamRng& rng)
{
    auto const h = harmonic_on_edges(domain, n_bins);
    std::vector<double> p(static_cast<std::size_t>(n_bins));
    for (std::size_t k = 0; k < p.size(); ++k)
        p[k] = std::max(0.0, h[k + 1] - h[k]);
    return multinomial_histogram(p, n, rng);
}

RatioReport ratio_from_accumulators(std::array<EcdfAccumulator, 2> const& acc_x,
                                    std::array<EcdfAccumulator, 2> const& acc_y,
                                    std::array<Domain, 2> const& domains,
                                    BootstrapOptions const& opts)
{
    if (opts.replicates < 2)
        throw std::invalid_argument("bootstrap needs at least two replicates");

    RatioReport rep;
    for (std::size_t d = 0; d < 2; ++d)
    {
        auto const& ax = acc_x[d];
        auto const& ay = acc_y[d];
        if (ax.n_bins() != ay.n_bins())
            throw std::invalid_argument("ratio test: bin counts differ");
        if (ax.binned() == 0 || ay.binned() == 0)
            throw std::invalid_argument("ratio test: empty accumulator");

        auto const h = harmonic_on_edges(domains[d], ax.n_bins());
        double const w = ax.bin_width();
        rep.l1_x[d] = l1_from_counts(ax.counts(), h, w);
        rep.l1_y[d] = l1_from_counts(ay.counts(), h, w);
        if (rep.l1_y[d] == 0)
            throw std::invalid_argument("ratio test: reference curve has zero "
                                        "L1 norm");
        rep.ratio[d] = rep.l1_x[d] / rep.l1_y[d];

        auto to_weights = [](EcdfAccumulator const& a) {
            std::vector<double> p(a.counts().begin(), a.counts().end());
            return p;
        };
        auto const px = to_weights(ax);
        auto const py = to_weights(ay);

        std::vector<double> boot;
        boot.reserve(std::size_t(opts.replicates));
        for (int b = 0; b < opts.replicates; ++b)
        {
            StreamRng rx(derive_seed(opts.seed, 2 * d), std::uint64_t(b));
            StreamRng ry(derive_seed(opts.seed, 2 * d + 1), std::uint64_t(b));
            auto const bx = multinomial_histogram(px, ax.binned(), rx);
            auto const by = multinomial_histogram(py, ay.binned(), ry);
            double const ly = l1_from_counts(by.counts(), h, w);
            if (ly > 0)
                boot.push_back(l1_from_counts(bx.counts(), h, w) / ly);
        }
        if (boot.size() < 2)
            throw std::runtime_error("ratio test: degenerate bootstrap");
        double const tail = 0.5 * (1 - opts.level);
        rep.interval[d] = {percentile(boot, tail), percentile(boot, 1 - tail)};
    }
    rep.pass = rep.interval[0].overlaps(rep.interval[1]);
    return rep;
}

RatioReport cross_domain_ratio_test(RatioTestConfig const& cfg)
{
    if (!is_symmetric(cfg.table_x) || !is_symmetric(cfg.table_y))
        throw ConfigError("cross-domain ratio test requires symmetric "
                          "transition tables");

    std::array<EcdfAccumulator, 2> ax{EcdfAccumulator(cfg.n_bins),
                                      EcdfAccumulator(cfg.n_bins)};
    std::array<EcdfAccumulator, 2> ay = ax;
    for (std::size_t d = 0; d < 2; ++d)
    {
        RunConfig run;
        run.domain = cfg.domains[d];
        run.spacing = cfg.spacing;
        run.n_samples = cfg.n_samples;
        run.n_bins = cfg.n_bins;
        run.seed = cfg.seed;
        run.n_workers = cfg.n_workers;

        run.table = cfg.table_x;
        ax[d] = run_experiment(run).acc;
        run.table = cfg.table_y;
        ay[d] = run_experiment(run).acc;
        if (ax[d].aborted() || ay[d].aborted())
            throw InvariantViolation("ratio test: walks aborted");
    }
    return ratio_from_accumulators(ax, ay, cfg.domains, cfg.bootstrap);
}

//---------------------------------------------------------------------------//
ShapeReport shape_universality_test(std::span<DifferenceCurve const> curves,
                                    double threshold)
{
    if (curves.size() < 2)
        throw std::invalid_argument("shape test needs at least two curves");
    ShapeReport rep;
    rep.threshold = threshold;
    for (auto const& c : curves)
    {
        require_same_grid(curves[0], c);
        double const norm = l1_norm(c);
        if (!(norm > 0))
            throw std::invalid_argument("shape test: curve has zero L1 norm");
        rep.norms.push_back(norm);
    }

    for (std::size_t i = 0; i < curves.size(); ++i)
    {
        for (std::size_t j = i + 1; j < curves.size(); ++j)
        {
            auto const& a = curves[i];
            auto const& b = curves[j];
            for (std::size_t k = 0; k < a.size(); ++k)
            {
                double const z = standardized(
                    a.diff[k] / rep.norms[i] - b.diff[k] / rep.norms[j],
                    2 * a.sigma[k] / rep.norms[i], 2 * b.sigma[k] / rep.norms[j]);
                if (z > rep.max_discrepancy)
                {
                    rep.max_discrepancy = z;
                    rep.worst_index = k;
                }
            }
        }
    }
    rep.pass = rep.max_discrepancy <= threshold;
    return rep;
}

}  // namespace skw
