#include "skw/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "skw/analysis.hpp"
#include "skw/config.hpp"
#include "skw/errors.hpp"

#ifndef SKW_DEFAULT_RECIPE_DIR
#    define SKW_DEFAULT_RECIPE_DIR "recipes"
#endif

namespace skw::cli
{
namespace
{
namespace fs = std::filesystem;

struct Options
{
    std::string config;
    std::string recipe;
    std::string out_dir;
    int workers{0};
    bool force{false};
    int bins{0};
    std::uint64_t seed{0};
    std::uint64_t samples{0};
    double threshold{0};
    // Which numeric overrides were given on the command line.
    bool has_bins{false}, has_seed{false}, has_samples{false},
        has_threshold{false};

    // oracle
    std::string domain{"D1"};
    double spacing{0.005};
    double bound{0.004};
    bool has_domain{false}, has_spacing{false};
};

fs::path recipe_dir()
{
    if (char const* e = std::getenv(recipe_dir_env); e && *e)
        return e;
    return SKW_DEFAULT_RECIPE_DIR;
}

fs::path resolve_recipe(std::string const& name)
{
    fs::path const direct(name);
    if (fs::is_regular_file(direct))
        return direct;
    fs::path const shipped = recipe_dir() / (name + ".json");
    if (fs::is_regular_file(shipped))
        return shipped;
    throw MissingInput("no recipe '" + name + "' (not a file, and no "
                       + shipped.string() + "); see 'skw list-recipes'");
}

fs::path resolve_out_dir(Options const& o,
                         std::optional<std::string> const& from_recipe)
{
    if (!o.out_dir.empty())
        return o.out_dir;
    if (char const* e = std::getenv(out_dir_env); e && *e)
        return e;
    if (from_recipe)
        return *from_recipe;
    return "skw_out";
}

// A --config file may hold a single run configuration or a whole recipe.
Recipe load_recipe(Options const& o)
{
    if (!o.config.empty() && !o.recipe.empty())
        throw UsageError("give either --config or --recipe, not both");
    if (o.config.empty() && o.recipe.empty())
        throw UsageError("one of --config or --recipe is required");

    fs::path const path = o.recipe.empty() ? fs::path(o.config)
                                           : resolve_recipe(o.recipe);
    Json const j = read_json_file(path);
    Recipe r;
    if (j.is_object() && (j.contains("runs") || j.contains("analyses")))
    {
        r = recipe_from_json(j, path.stem().string());
    }
    else
    {
        r.name = path.stem().string();
        r.runs.push_back({"run", run_config_from_json(j)});
    }
    override_runs(r, o.has_bins ? std::optional(o.bins) : std::nullopt,
                  o.has_seed ? std::optional(o.seed) : std::nullopt,
                  o.has_samples ? std::optional(o.samples) : std::nullopt);
    return r;
}

std::string describe_run(RecipeRun const& run)
{
    std::ostringstream os;
    os << run.label << ": " << curve_label(run.config)
       << " spacing=" << run.config.spacing << " n=" << run.config.n_samples
       << " bins=" << run.config.n_bins << " seed=" << run.config.seed;
    return os.str();
}

void require_clean(RunResult const& result, std::ostream& err)
{
    if (result.acc.aborted() == 0)
        return;
    for (auto const& m : result.stats.abort_messages)
        err << "  " << m << "\n";
    throw InvariantViolation(std::to_string(result.acc.aborted())
                             + " walks aborted on an invariant violation");
}

//---------------------------------------------------------------------------//
int cmd_simulate(Options const& o, std::ostream& out, std::ostream& err)
{
    auto const recipe = load_recipe(o);
    auto const dir = resolve_out_dir(o, recipe.out_dir);
    fs::create_directories(dir);

    std::set<std::string> seen;
    for (auto const& run : recipe.runs)
    {
        RunConfig cfg = run.config;
        cfg.n_workers = o.workers;
        auto const path = accumulator_path(dir, cfg);
        if (!seen.insert(config_hash(cfg)).second)
            continue;
        if (fs::exists(path) && !o.force)
        {
            out << "skip " << run.label << ": " << path.string()
                << " exists (use --force to recompute)\n";
            continue;
        }
        out << "run " << describe_run(run) << "\n" << std::flush;
        auto const result = run_experiment(cfg);
        require_clean(result, err);
        write_accumulator_file(path, cfg, result);
        auto csv = path;
        csv.replace_extension(".csv");
        write_ecdf_csv(csv, result.acc);
        out << "  wrote " << path.string() << " (" << std::fixed
            << std::setprecision(1) << result.stats.wall_seconds << " s, "
            << result.stats.workers_used
            << (result.stats.workers_used == 1 ? " worker)\n" : " workers)\n")
            << std::defaultfloat << std::setprecision(6);
    }
    return exit_ok;
}

//---------------------------------------------------------------------------//
struct Loaded
{
    AccumulatorFile file;
    DifferenceCurve curve;
    double rescale{1.0};
};

Json interval_json(Interval const& i)
{
    return Json::array({i.lo, i.hi});
}

int cmd_analyze(Options const& o, std::ostream& out, std::ostream&)
{
    auto recipe = load_recipe(o);
    if (recipe.analyses.empty())
    {
        Analysis a;
        for (auto const& r : recipe.runs)
            a.runs.push_back(r.label);
        recipe.analyses.push_back(a);
    }
    if (o.has_threshold)
    {
        if (!(o.threshold > 0))
            throw ConfigError("--threshold must be positive");
        for (auto& a : recipe.analyses)
            a.threshold = o.threshold;
    }
    auto const dir = resolve_out_dir(o, recipe.out_dir);

    std::map<std::string, Loaded> loaded;
    auto load = [&](std::string const& label) -> Loaded& {
        if (auto it = loaded.find(label); it != loaded.end())
            return it->second;
        auto const& run = recipe.run(label);
        auto const path = accumulator_path(dir, run.config);
        if (!fs::exists(path))
            throw MissingInput("no accumulator for run '" + label + "' ("
                               + path.string() + "); run 'skw simulate' on "
                               "this recipe first");
        Loaded l{read_accumulator_file(path), {}, 1.0};
        if (l.file.acc.aborted())
            throw InvariantViolation("accumulator " + path.string()
                                     + " records aborted walks");
        l.curve = difference_curve(l.file.acc, run.config.domain,
                                   run.config.spacing,
                                   curve_label(run.config));
        return loaded.emplace(label, std::move(l)).first->second;
    };
    auto curves_of = [&](Analysis const& a) {
        std::vector<DifferenceCurve> v;
        for (auto const& label : a.runs)
            v.push_back(load(label).curve);
        return v;
    };
    auto verdict = [](Json& j, Analysis const& a, bool pass) {
        j["pass"] = pass;
        if (a.expect_pass)
        {
            j["expected"] = *a.expect_pass ? "pass" : "fail";
            j["as_expected"] = pass == *a.expect_pass;
        }
    };
    auto verdict_text = [](Analysis const& a, bool pass) {
        std::string s = pass ? "pass" : "fail";
        if (a.expect_pass)
            s += pass == *a.expect_pass ? " (as expected)"
                                        : " (NOT as expected)";
        return s;
    };

    // Fail on missing inputs before printing any verdicts.
    for (auto const& a : recipe.analyses)
    {
        for (auto const& label : a.runs)
            load(label);
    }

    Json report;
    report["recipe"] = recipe.name;
    report["description"] = recipe.description;
    report["version"] = code_version();
    report["analyses"] = Json::array();

    for (auto const& a : recipe.analyses)
    {
        Json j;
        j["type"] = to_string(a.kind);
        j["runs"] = a.runs;
        out << to_string(a.kind) << " [";
        for (std::size_t i = 0; i < a.runs.size(); ++i)
            out << (i ? " " : "") << a.runs[i];
        out << "]: ";

        using K = Analysis::Kind;
        if (a.kind == K::Difference)
        {
            Json per = Json::object();
            for (auto const& label : a.runs)
            {
                auto const& c = load(label).curve;
                per[label] = {{"spacing", c.spacing},
                              {"n", c.n},
                              {"max_abs_diff", max_abs_diff(c)},
                              {"l1_norm", l1_norm(c)},
                              {"band_coverage", band_coverage(c)}};
            }
            j["curves"] = per;
            out << a.runs.size() << " difference curves\n";
            for (auto const& label : a.runs)
            {
                out << "  " << label << ": max|F-H| = "
                    << per[label]["max_abs_diff"].get<double>()
                    << ", L1 = " << per[label]["l1_norm"].get<double>()
                    << "\n";
            }
        }
        else if (a.kind == K::Convergence)
        {
            auto const rep = convergence_report(curves_of(a));
            j["spacings"] = rep.spacings;
            j["max_abs_diff"] = rep.max_abs;
            j["ratios"] = rep.ratios;
            out << "max|F-H| ratios";
            for (double r : rep.ratios)
                out << " " << r;
            if (a.ratio_range)
            {
                bool const pass = std::all_of(
                    rep.ratios.begin(), rep.ratios.end(), [&](double r) {
                        return r >= a.ratio_range->first
                               && r <= a.ratio_range->second;
                    });
                j["ratio_range"] = {a.ratio_range->first, a.ratio_range->second};
                verdict(j, a, pass);
                out << " in [" << a.ratio_range->first << ", "
                    << a.ratio_range->second << "]: " << verdict_text(a, pass);
            }
            out << "\n";
        }
        else if (a.kind == K::Collapse)
        {
            auto const curves = curves_of(a);
            auto const rep = rescale_and_collapse(curves, a.threshold);
            for (std::size_t i = 0; i < a.runs.size(); ++i)
            {
                auto& l = load(a.runs[i]);
                if (l.rescale == 1.0)
                    l.rescale = rep.factors[i];
            }
            j["reference_spacing"] = rep.reference_spacing;
            j["factors"] = rep.factors;
            j["max_discrepancy"] = rep.max_discrepancy;
            j["worst_theta"] = curves[0].theta[rep.worst_index];
            j["worst_pair"] = {a.runs[rep.worst_pair[0]],
                               a.runs[rep.worst_pair[1]]};
            j["threshold"] = rep.threshold;
            verdict(j, a, rep.pass);
            out << "max discrepancy " << rep.max_discrepancy << " (threshold "
                << rep.threshold << "): " << verdict_text(a, rep.pass) << "\n";
        }
        else if (a.kind == K::Ratio)
        {
            std::array<EcdfAccumulator, 2> const ax{load(a.runs[0]).file.acc,
                                                    load(a.runs[1]).file.acc};
            std::array<EcdfAccumulator, 2> const ay{load(a.runs[2]).file.acc,
                                                    load(a.runs[3]).file.acc};
            std::array<Domain, 2> const doms{
                recipe.run(a.runs[0]).config.domain,
                recipe.run(a.runs[1]).config.domain};
            BootstrapOptions opts;
            opts.replicates = a.replicates;
            opts.seed = derive_seed(recipe.run(a.runs[0]).config.seed, 0xB007);
            auto const rep = ratio_from_accumulators(ax, ay, doms, opts);
            j["x"] = {a.runs[0], a.runs[1]};
            j["y"] = {a.runs[2], a.runs[3]};
            j["ratio"] = rep.ratio;
            j["interval"] = {interval_json(rep.interval[0]),
                             interval_json(rep.interval[1])};
            j["l1_x"] = rep.l1_x;
            j["l1_y"] = rep.l1_y;
            j["replicates"] = a.replicates;
            verdict(j, a, rep.pass);
            out << "r1 = " << rep.ratio[0] << " [" << rep.interval[0].lo
                << ", " << rep.interval[0].hi << "], r2 = " << rep.ratio[1]
                << " [" << rep.interval[1].lo << ", " << rep.interval[1].hi
                << "]: " << verdict_text(a, rep.pass) << "\n";
        }
        else if (a.kind == K::Shape)
        {
            auto const curves = curves_of(a);
            auto const rep = shape_universality_test(curves, a.threshold);
            j["norms"] = rep.norms;
            j["max_discrepancy"] = rep.max_discrepancy;
            j["worst_theta"] = curves[0].theta[rep.worst_index];
            j["threshold"] = rep.threshold;
            verdict(j, a, rep.pass);
            out << "max discrepancy " << rep.max_discrepancy << " (threshold "
                << rep.threshold << "): " << verdict_text(a, rep.pass) << "\n";
        }
        report["analyses"].push_back(j);
    }

    fs::create_directories(dir);
    Json runs = Json::object();
    for (auto const& [label, l] : loaded)
    {
        auto const& c = l.curve;
        auto const csv = dir / (recipe.name + "_" + label + ".csv");
        std::ofstream f(csv);
        if (!f)
            throw std::runtime_error("cannot write " + csv.string());
        f.precision(12);
        f << "theta,F,H,diff,sigma,rescaled_diff\n";
        for (std::size_t k = 0; k < c.size(); ++k)
        {
            f << c.theta[k] << ',' << c.F[k] << ',' << c.H[k] << ','
              << c.diff[k] << ',' << c.sigma[k] << ',' << l.rescale * c.diff[k]
              << '\n';
        }
        runs[label] = {{"config", to_json(l.file.config)},
                       {"config_hash", l.file.hash},
                       {"produced_by", l.file.version},
                       {"csv", csv.string()},
                       {"rescale_factor", l.rescale}};
    }
    report["runs"] = runs;
    auto const path = dir / (recipe.name + "_report.json");
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot write " + path.string());
    f << report.dump(2) << "\n";
    out << "report: " << path.string() << "\n";
    return exit_ok;
}

//---------------------------------------------------------------------------//
Domain parse_domain_arg(std::string const& s)
{
    if (s == "D1" || s == "d1")
        return reference_disk();
    if (s == "D2" || s == "d2")
        return reference_strip();
    auto const colon = s.find(':');
    if (colon == std::string::npos)
        throw ParseError("domain '" + s + "': expected D1, D2, "
                         "disk:cx,cy,r or strip:top,bottom");
    std::string const kind = s.substr(0, colon);
    std::vector<double> v;
    std::stringstream ss(s.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ','))
    {
        try
        {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        }
        catch (std::exception const&)
        {
            throw ParseError("domain '" + s + "': bad number '" + item + "'");
        }
    }
    if (kind == "disk" && v.size() == 3)
        return Domain(DiskDomain{{v[0], v[1]}, v[2]});
    if (kind == "strip" && v.size() == 2)
        return Domain(StripDomain{v[0], v[1]});
    throw ParseError("domain '" + s + "': expected disk:cx,cy,r or "
                     "strip:top,bottom");
}

int cmd_oracle(Options const& o, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    cfg.n_samples = 1'000'000;
    cfg.spacing = o.spacing;
    if (!o.config.empty())
        cfg = run_config_from_json(read_json_file(o.config));
    if (o.has_domain || o.config.empty())
        cfg.domain = parse_domain_arg(o.domain);
    if (o.has_spacing)
        cfg.spacing = o.spacing;
    if (o.has_samples)
        cfg.n_samples = o.samples;
    if (o.has_bins)
        cfg.n_bins = o.bins;
    if (o.has_seed)
        cfg.seed = o.seed;
    if (!(o.bound > 0))
        throw ConfigError("--bound must be positive");
    cfg.model = WalkModel::Plain;
    cfg.n_workers = o.workers;
    cfg.validate();

    out << "oracle: plain random walk on " << cfg.domain.describe()
        << " spacing=" << cfg.spacing << " n=" << cfg.n_samples << "\n"
        << std::flush;
    auto const result = run_experiment(cfg);
    require_clean(result, err);
    auto const c = difference_curve(result.acc, cfg.domain, cfg.spacing,
                                    curve_label(cfg));
    double max_sigma = 0;
    for (double s : c.sigma)
        max_sigma = std::max(max_sigma, s);
    double const sup = max_abs_diff(c);
    bool const pass = sup < o.bound;
    out << "sup|F-H| = " << sup << ", 4 sigma = " << 4 * max_sigma
        << ", bound = " << o.bound << ": " << (pass ? "pass" : "fail") << "\n";

    bool const keep = !o.out_dir.empty() || std::getenv(out_dir_env);
    if (keep)
    {
        auto const dir = resolve_out_dir(o, std::nullopt);
        fs::create_directories(dir);
        auto const acc_path = accumulator_path(dir, cfg);
        write_accumulator_file(acc_path, cfg, result);
        Json j{{"config", to_json(cfg)},
               {"version", code_version()},
               {"sup_abs_diff", sup},
               {"four_sigma", 4 * max_sigma},
               {"bound", o.bound},
               {"pass", pass},
               {"wall_seconds", result.stats.wall_seconds},
               {"accumulator", acc_path.string()}};
        auto const path = dir / ("oracle_" + config_hash(cfg) + ".json");
        std::ofstream f(path);
        f << j.dump(2) << "\n";
        out << "report: " << path.string() << "\n";
    }
    return pass ? exit_ok : exit_check_failed;
}

//---------------------------------------------------------------------------//
int cmd_list_recipes(std::ostream& out)
{
    auto const dir = recipe_dir();
    if (!fs::is_directory(dir))
        throw MissingInput("recipe directory " + dir.string()
                           + " does not exist");
    std::vector<fs::path> files;
    for (auto const& e : fs::directory_iterator(dir))
    {
        if (e.path().extension() == ".json")
            files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (auto const& p : files)
    {
        out << std::left << std::setw(10) << p.stem().string();
        try
        {
            auto const r = recipe_from_json(read_json_file(p),
                                            p.stem().string());
            out << r.runs.size() << " runs, " << r.analyses.size()
                << " analyses  " << r.description << "\n";
        }
        catch (std::exception const& e)
        {
            out << "(invalid: " << e.what() << ")\n";
        }
    }
    out << "recipe directory: " << dir.string() << "\n";
    return exit_ok;
}

}  // namespace

//---------------------------------------------------------------------------//
int run(std::vector<std::string> const& args, std::ostream& out,
        std::ostream& err)
{
    Options o;
    CLI::App app{"Smart kinetic walk exit-distribution laboratory", "skw"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(code_version()));

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out-dir", o.out_dir,
                        std::string("Output directory (default: $")
                            + out_dir_env + ", else the recipe's, else "
                            "skw_out)");
        cmd->add_option("--workers", o.workers,
                        "Worker threads (0 = all cores)")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--bins", o.bins, "Override the number of bins")
            ->each([&](std::string const&) { o.has_bins = true; });
        cmd->add_option("--seed", o.seed, "Override the master seed")
            ->each([&](std::string const&) { o.has_seed = true; });
        cmd->add_option("--samples", o.samples, "Override the sample count")
            ->each([&](std::string const&) { o.has_samples = true; });
    };

    auto* sim = app.add_subcommand("simulate", "Run the walks of a config "
                                               "or recipe");
    sim->add_option("--config", o.config, "Run configuration or recipe file");
    sim->add_option("--recipe", o.recipe, "Shipped recipe name or file");
    sim->add_flag("--force", o.force, "Recompute existing results");
    add_common(sim);

    auto* ana = app.add_subcommand("analyze", "Compare results with harmonic "
                                              "measure");
    ana->add_option("--config", o.config, "Run configuration or recipe file");
    ana->add_option("--recipe", o.recipe, "Shipped recipe name or file");
    ana->add_option("--threshold", o.threshold,
                    "Override collapse/shape thresholds")
        ->each([&](std::string const&) { o.has_threshold = true; });
    add_common(ana);

    auto* ora = app.add_subcommand("oracle", "Plain random walk versus "
                                             "harmonic measure");
    ora->add_option("--config", o.config, "Run configuration file");
    ora->add_option("--domain", o.domain,
                    "D1, D2, disk:cx,cy,r or strip:top,bottom")
        ->each([&](std::string const&) { o.has_domain = true; });
    ora->add_option("--spacing", o.spacing, "Lattice spacing")
        ->each([&](std::string const&) { o.has_spacing = true; });
    ora->add_option("--bound", o.bound, "Pass if sup|F-H| is below this");
    add_common(ora);

    auto* lst = app.add_subcommand("list-recipes", "Show shipped recipes");

    std::vector<char const*> argv;
    for (auto const& a : args)
        argv.push_back(a.c_str());
    try
    {
        app.parse(int(argv.size()), argv.data());
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try
    {
        if (sim->parsed())
            return cmd_simulate(o, out, err);
        if (ana->parsed())
            return cmd_analyze(o, out, err);
        if (ora->parsed())
            return cmd_oracle(o, out, err);
        if (lst->parsed())
            return cmd_list_recipes(out);
        return exit_usage;
    }
    catch (UsageError const& e)
    {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    }
    catch (ParseError const& e)
    {
        err << "parse error: " << e.what() << "\n";
        return exit_parse;
    }
    catch (ConfigError const& e)
    {
        err << "invalid configuration: " << e.what() << "\n";
        return exit_validation;
    }
    catch (InvariantViolation const& e)
    {
        err << "invariant violation: " << e.what() << "\n";
        return exit_invariant;
    }
    catch (MissingInput const& e)
    {
        err << "missing input: " << e.what() << "\n";
        return exit_missing_input;
    }
    catch (std::exception const& e)
    {
        err << "error: " << e.what() << "\n";
        return exit_internal;
    }
}

}  // namespace skw::cli
