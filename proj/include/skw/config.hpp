#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "skw/engine.hpp"

namespace skw
{
using Json = nlohmann::json;

std::string_view code_version();

//// RUN CONFIGURATIONS ////

//! Canonical JSON form; n_workers and record_thetas are execution details
//! and are not part of it.
Json to_json(RunConfig const& cfg);
Json to_json(Domain const& domain);
Json to_json(TransitionTable const& table);

/*!
 * Parse a run configuration. Missing table entries default to the uniform
 * table; missing run fields take the RunConfig defaults.
 *
 * Throws ParseError for malformed structure (unknown keys, wrong types) and
 * ConfigError for well-formed but invalid values.
 */
RunConfig run_config_from_json(Json const& j);
Domain domain_from_json(Json const& j);
TransitionTable table_from_json(Json const& j);

//! Byte-stable serialization: canonical_text(parse(canonical_text(c))) is
//! identical to canonical_text(c).
std::string canonical_text(RunConfig const& cfg);

//! 16 hex digits identifying the simulation outcome of a configuration.
std::string config_hash(RunConfig const& cfg);

//! Short human label for a domain/table pair, used to keep unrelated curves
//! apart.
std::string curve_label(RunConfig const& cfg);

//! Parse JSON text; throws ParseError with the source name on failure.
Json parse_json(std::string const& text, std::string const& source);
//! Read and parse a JSON file; throws MissingInput if it cannot be read.
Json read_json_file(std::filesystem::path const& path);

//// ACCUMULATOR FILES ////

struct AccumulatorFile
{
    RunConfig config;
    EcdfAccumulator acc{2};
    RunStats stats;
    std::string version;
    std::string hash;
};

std::filesystem::path accumulator_path(std::filesystem::path const& dir,
                                       RunConfig const& cfg);
//! JSON with the configuration echo, provenance and the bin counts.
void write_accumulator_file(std::filesystem::path const& path,
                            RunConfig const& cfg, RunResult const& result);
//! Throws MissingInput, ParseError or ConfigError.
AccumulatorFile read_accumulator_file(std::filesystem::path const& path);

//! CSV with columns theta,F on the bin edges.
void write_ecdf_csv(std::filesystem::path const& path,
                    EcdfAccumulator const& acc);

//// RECIPES ////

struct RecipeRun
{
    std::string label;
    RunConfig config;
};

struct Analysis
{
    enum class Kind
    {
        Difference,
        Convergence,
        Collapse,
        Ratio,
        Shape
    };
    Kind kind{Kind::Difference};
    //! Run labels; for Ratio these are x on domain 1, x on domain 2, y on
    //! domain 1, y on domain 2.
    std::vector<std::string> runs;
    double threshold{3.0};
    int replicates{1000};
    //! Documented outcome ("pass" or "fail") if the recipe states one.
    std::optional<bool> expect_pass;
    //! Convergence only: accepted range of consecutive max|diff| ratios.
    std::optional<std::pair<double, double>> ratio_range;
};

std::string_view to_string(Analysis::Kind k);

struct Recipe
{
    std::string name;
    std::string description;
    std::vector<RecipeRun> runs;
    std::vector<Analysis> analyses;
    std::optional<std::string> out_dir;

    RecipeRun const& run(std::string const& label) const;
};

/*!
 * Parse a recipe. Each run is the "defaults" object overlaid with the run's
 * own fields. Consistency rules (unique labels, known references, collapse
 * runs sharing domain/table/bins with distinct spacings, symmetric ratio
 * tables) are checked here. Throws UsageError for a recipe without runs,
 * ParseError for malformed structure and ConfigError for invalid values.
 */
Recipe recipe_from_json(Json const& j, std::string const& fallback_name);

//! Apply command-line overrides to every run. Run i gets seed + i.
void override_runs(Recipe& recipe, std::optional<int> n_bins,
                   std::optional<std::uint64_t> seed,
                   std::optional<std::uint64_t> n_samples);

}  // namespace skw
