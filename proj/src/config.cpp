#include "skw/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "skw/errors.hpp"

namespace skw
{
namespace
{
constexpr char const* accumulator_format = "skw-accumulator/1";

void check_keys(Json const& j, std::set<std::string> const& allowed,
                std::string const& where)
{
    if (!j.is_object())
        throw ParseError(where + ": expected an object");
    for (auto const& [key, value] : j.items())
    {
        if (!allowed.count(key))
            throw ParseError(where + ": unknown key '" + key + "'");
    }
}

template<class T>
T get_as(Json const& j, char const* key, std::string const& where)
{
    try
    {
        return j.at(key).get<T>();
    }
    catch (Json::exception const& e)
    {
        throw ParseError(where + "." + key + ": " + e.what());
    }
}

template<class T>
void read_optional(Json const& j, char const* key, T& out,
                   std::string const& where)
{
    if (j.contains(key))
        out = get_as<T>(j, key, where);
}

// Counts must be non-negative integers; JSON lets users write -5 or 1e6.
std::uint64_t get_count(Json const& j, char const* key,
                        std::string const& where)
{
    auto const& v = j.at(key);
    if (v.is_number_unsigned())
        return v.get<std::uint64_t>();
    if (v.is_number_integer())
        throw ConfigError(where + "." + key + " must be non-negative");
    if (v.is_number_float())
    {
        double const d = v.get<double>();
        if (d >= 0 && d < 1.8e19 && d == std::floor(d))
            return std::uint64_t(d);
        throw ConfigError(where + "." + key + " must be a non-negative "
                          "integer");
    }
    throw ParseError(where + "." + key + ": expected a number");
}

std::uint64_t fnv1a(std::string const& s)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s)
    {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

WalkModel model_from_string(std::string const& s)
{
    if (s == "skw")
        return WalkModel::Skw;
    if (s == "plain")
        return WalkModel::Plain;
    throw ConfigError("model must be 'skw' or 'plain', not '" + s + "'");
}

// Overlay b on a; nested "table" objects merge key by key.
Json overlay(Json a, Json const& b)
{
    for (auto const& [key, value] : b.items())
    {
        if (key == "table" && a.contains("table") && a["table"].is_object()
            && value.is_object())
        {
            for (auto const& [k, v] : value.items())
                a["table"][k] = v;
        }
        else
        {
            a[key] = value;
        }
    }
    return a;
}

std::string format_number(double x)
{
    std::ostringstream os;
    os << x;
    return os.str();
}
}  // namespace

std::string_view code_version()
{
    return "skw 1.0.0";
}

//---------------------------------------------------------------------------//
Json to_json(Domain const& domain)
{
    if (domain.is_disk())
    {
        auto const& d = domain.disk();
        return {{"kind", "disk"},
                {"center_x", d.center.x},
                {"center_y", d.center.y},
                {"radius", d.radius}};
    }
    auto const& s = domain.strip();
    return {{"kind", "strip"}, {"top", s.top}, {"bottom", s.bottom}};
}

Json to_json(TransitionTable const& t)
{
    return {{"a1", t.a1()}, {"a2", t.a2()}, {"a3", t.a3()},
            {"b1", t.b1()}, {"b2", t.b2()}, {"c1", t.c1()},
            {"c2", t.c2()}, {"d1", t.d1()}, {"d2", t.d2()}};
}

Json to_json(RunConfig const& cfg)
{
    return {{"domain", to_json(cfg.domain)},
            {"table", to_json(cfg.table)},
            {"spacing", cfg.spacing},
            {"n_samples", cfg.n_samples},
            {"n_bins", cfg.n_bins},
            {"seed", cfg.seed},
            {"model", std::string(to_string(cfg.model))}};
}

Domain domain_from_json(Json const& j)
{
    std::string const where = "domain";
    if (j.is_string())
    {
        auto const s = j.get<std::string>();
        if (s == "D1")
            return reference_disk();
        if (s == "D2")
            return reference_strip();
        throw ConfigError("unknown domain name '" + s + "' (use D1 or D2)");
    }
    check_keys(j, {"kind", "center_x", "center_y", "radius", "top", "bottom"},
               where);
    auto const kind = get_as<std::string>(j, "kind", where);
    if (kind == "disk")
    {
        check_keys(j, {"kind", "center_x", "center_y", "radius"}, where);
        return Domain(DiskDomain{{get_as<double>(j, "center_x", where),
                                  get_as<double>(j, "center_y", where)},
                                 get_as<double>(j, "radius", where)});
    }
    if (kind == "strip")
    {
        check_keys(j, {"kind", "top", "bottom"}, where);
        return Domain(StripDomain{get_as<double>(j, "top", where),
                                  get_as<double>(j, "bottom", where)});
    }
    throw ConfigError("domain kind must be 'disk' or 'strip', not '" + kind
                      + "'");
}

TransitionTable table_from_json(Json const& j)
{
    std::string const where = "table";
    check_keys(j, {"a1", "a2", "a3", "b1", "b2", "c1", "c2", "d1", "d2"},
               where);
    TransitionTable::Entries e;
    read_optional(j, "a1", e.a1, where);
    read_optional(j, "a2", e.a2, where);
    read_optional(j, "a3", e.a3, where);
    read_optional(j, "b1", e.b1, where);
    read_optional(j, "b2", e.b2, where);
    read_optional(j, "c1", e.c1, where);
    read_optional(j, "c2", e.c2, where);
    read_optional(j, "d1", e.d1, where);
    read_optional(j, "d2", e.d2, where);
    return TransitionTable(e);
}

RunConfig run_config_from_json(Json const& j)
{
    std::string const where = "config";
    check_keys(j, {"domain", "table", "spacing", "n_samples", "n_bins", "seed",
                   "model"},
               where);
    RunConfig cfg;
    if (j.contains("domain"))
        cfg.domain = domain_from_json(j.at("domain"));
    if (j.contains("table"))
        cfg.table = table_from_json(j.at("table"));
    read_optional(j, "spacing", cfg.spacing, where);
    if (j.contains("n_samples"))
        cfg.n_samples = get_count(j, "n_samples", where);
    if (j.contains("n_bins"))
    {
        auto const n = get_count(j, "n_bins", where);
        if (n > 10'000'000)
            throw ConfigError("n_bins is unreasonably large");
        cfg.n_bins = int(n);
    }
    if (j.contains("seed"))
        cfg.seed = get_count(j, "seed", where);
    if (j.contains("model"))
        cfg.model = model_from_string(get_as<std::string>(j, "model", where));
    cfg.validate();
    return cfg;
}

std::string canonical_text(RunConfig const& cfg)
{
    return to_json(cfg).dump(2) + "\n";
}

std::string config_hash(RunConfig const& cfg)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(to_json(cfg).dump())));
    return buf;
}

std::string curve_label(RunConfig const& cfg)
{
    std::ostringstream os;
    os << cfg.domain.describe() << " [" << to_string(cfg.model);
    if (cfg.model == WalkModel::Skw)
    {
        auto const& t = cfg.table;
        os << " a=" << format_number(t.a1()) << "/" << format_number(t.a2())
           << "/" << format_number(t.a3()) << " b=" << format_number(t.b1())
           << "/" << format_number(t.b2()) << " c=" << format_number(t.c1())
           << "/" << format_number(t.c2()) << " d=" << format_number(t.d1())
           << "/" << format_number(t.d2());
    }
    os << "]";
    return os.str();
}

Json parse_json(std::string const& text, std::string const& source)
{
    try
    {
        return Json::parse(text);
    }
    catch (Json::parse_error const& e)
    {
        throw ParseError(source + ": " + e.what());
    }
}

Json read_json_file(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in)
        throw MissingInput("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str(), path.string());
}

//---------------------------------------------------------------------------//
std::filesystem::path accumulator_path(std::filesystem::path const& dir,
                                       RunConfig const& cfg)
{
    return dir / ("acc_" + config_hash(cfg) + ".json");
}

void write_accumulator_file(std::filesystem::path const& path,
                            RunConfig const& cfg, RunResult const& result)
{
    auto const& acc = result.acc;
    auto const& st = result.stats;
    Json j;
    j["format"] = accumulator_format;
    j["version"] = code_version();
    j["config"] = to_json(cfg);
    j["config_hash"] = config_hash(cfg);
    j["label"] = curve_label(cfg);
    j["stats"] = {{"wall_seconds", st.wall_seconds},
                  {"workers_used", st.workers_used},
                  {"max_path_length", st.max_path_length},
                  {"total_path_length", st.total_path_length},
                  {"abort_messages", st.abort_messages}};
    j["total"] = acc.total();
    j["binned"] = acc.binned();
    j["aborted"] = acc.aborted();
    j["n_bins"] = acc.n_bins();
    j["counts"] = std::vector<std::uint64_t>(acc.counts().begin(),
                                             acc.counts().end());

    // Write then rename so an interrupted run never leaves a valid-looking
    // partial file behind.
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        out << j.dump(1) << "\n";
        if (!out)
            throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

AccumulatorFile read_accumulator_file(std::filesystem::path const& path)
{
    auto const j = read_json_file(path);
    std::string const where = path.string();
    try
    {
        if (j.value("format", "") != accumulator_format)
            throw ParseError(where + ": not an accumulator file");
        AccumulatorFile f;
        f.config = run_config_from_json(j.at("config"));
        f.version = j.at("version").get<std::string>();
        f.hash = j.at("config_hash").get<std::string>();
        if (f.hash != config_hash(f.config))
            throw ParseError(where + ": config hash does not match its "
                             "configuration");
        auto const counts = j.at("counts").get<std::vector<std::uint64_t>>();
        if (int(counts.size()) != f.config.n_bins
            || j.at("n_bins").get<int>() != f.config.n_bins)
            throw ParseError(where + ": bin count does not match the "
                             "configuration");
        f.acc = EcdfAccumulator(f.config.n_bins);
        for (std::size_t k = 0; k < counts.size(); ++k)
            f.acc.add_count(int(k), counts[k]);
        auto const aborted = j.at("aborted").get<std::uint64_t>();
        for (std::uint64_t i = 0; i < aborted; ++i)
            f.acc.add_abort();
        if (f.acc.binned() != j.at("binned").get<std::uint64_t>()
            || f.acc.total() != j.at("total").get<std::uint64_t>())
            throw ParseError(where + ": counts do not add up to the recorded "
                             "totals");

        auto const& st = j.at("stats");
        f.stats.wall_seconds = st.at("wall_seconds").get<double>();
        f.stats.workers_used = st.at("workers_used").get<int>();
        f.stats.max_path_length = st.at("max_path_length").get<std::uint64_t>();
        f.stats.total_path_length
            = st.at("total_path_length").get<std::uint64_t>();
        f.stats.abort_messages
            = st.at("abort_messages").get<std::vector<std::string>>();
        return f;
    }
    catch (Json::exception const& e)
    {
        throw ParseError(where + ": " + e.what());
    }
}

void write_ecdf_csv(std::filesystem::path const& path,
                    EcdfAccumulator const& acc)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    auto const edges = acc.bin_edges();
    auto const f = ecdf(acc, edges);
    out.precision(17);
    out << "theta,F\n";
    for (std::size_t k = 0; k < edges.size(); ++k)
        out << edges[k] << ',' << f[k] << '\n';
}

//---------------------------------------------------------------------------//
std::string_view to_string(Analysis::Kind k)
{
    switch (k)
    {
        case Analysis::Kind::Difference:
            return "difference";
        case Analysis::Kind::Convergence:
            return "convergence";
        case Analysis::Kind::Collapse:
            return "collapse";
        case Analysis::Kind::Ratio:
            return "ratio";
        case Analysis::Kind::Shape:
            return "shape";
    }
    return "?";
}

RecipeRun const& Recipe::run(std::string const& label) const
{
    for (auto const& r : runs)
    {
        if (r.label == label)
            return r;
    }
    throw ConfigError("recipe '" + name + "' has no run labeled '" + label
                      + "'");
}

namespace
{
Analysis analysis_from_json(Json const& j, std::size_t index)
{
    std::string const where = "analyses[" + std::to_string(index) + "]";
    check_keys(j, {"type", "runs", "x", "y", "threshold", "replicates",
                   "expect", "ratio_range"},
               where);
    Analysis a;
    auto const type = get_as<std::string>(j, "type", where);
    using K = Analysis::Kind;
    if (type == "difference")
        a.kind = K::Difference;
    else if (type == "convergence")
        a.kind = K::Convergence;
    else if (type == "collapse")
        a.kind = K::Collapse;
    else if (type == "ratio")
        a.kind = K::Ratio;
    else if (type == "shape")
        a.kind = K::Shape;
    else
        throw ConfigError(where + ": unknown analysis type '" + type + "'");

    if (a.kind == K::Ratio)
    {
        auto const x = get_as<std::vector<std::string>>(j, "x", where);
        auto const y = get_as<std::vector<std::string>>(j, "y", where);
        if (x.size() != 2 || y.size() != 2)
            throw ConfigError(where + ": ratio needs two x and two y runs "
                              "(one per domain)");
        a.runs = {x[0], x[1], y[0], y[1]};
    }
    else
    {
        a.runs = get_as<std::vector<std::string>>(j, "runs", where);
        if (a.runs.empty())
            throw ConfigError(where + ": no runs listed");
    }
    read_optional(j, "threshold", a.threshold, where);
    read_optional(j, "replicates", a.replicates, where);
    if (!(a.threshold > 0))
        throw ConfigError(where + ": threshold must be positive");
    if (a.replicates < 2)
        throw ConfigError(where + ": replicates must be at least 2");
    if (j.contains("expect"))
    {
        auto const e = get_as<std::string>(j, "expect", where);
        if (e != "pass" && e != "fail")
            throw ConfigError(where + ": expect must be 'pass' or 'fail'");
        a.expect_pass = e == "pass";
    }
    if (j.contains("ratio_range"))
    {
        auto const r = get_as<std::vector<double>>(j, "ratio_range", where);
        if (r.size() != 2 || !(r[0] <= r[1]))
            throw ConfigError(where + ": ratio_range must be [lo, hi]");
        a.ratio_range = std::pair{r[0], r[1]};
    }
    return a;
}

void check_analysis(Recipe const& r, Analysis const& a, std::size_t index)
{
    std::string const where = "analyses[" + std::to_string(index) + "] ("
                              + std::string(to_string(a.kind)) + ")";
    std::vector<RecipeRun const*> runs;
    for (auto const& label : a.runs)
        runs.push_back(&r.run(label));

    using K = Analysis::Kind;
    auto const& first = runs.front()->config;
    for (auto const* run : runs)
    {
        if (run->config.n_bins != first.n_bins)
            throw ConfigError(where + ": runs use different n_bins");
    }
    if (a.kind == K::Collapse || a.kind == K::Convergence)
    {
        if (runs.size() < 2)
            throw ConfigError(where + ": needs at least two runs");
        std::set<double> spacings;
        for (auto const* run : runs)
        {
            if (curve_label(run->config) != curve_label(first))
                throw ConfigError(where + ": runs must share domain and "
                                  "table");
            if (!spacings.insert(run->config.spacing).second)
                throw ConfigError(where + ": lattice spacings must be "
                                  "distinct");
        }
    }
    if (a.kind == K::Shape && runs.size() < 2)
        throw ConfigError(where + ": needs at least two runs");
    if (a.kind == K::Ratio)
    {
        for (auto const* run : runs)
        {
            if (!is_symmetric(run->config.table))
                throw ConfigError(where + ": run '" + run->label
                                  + "' has an asymmetric table");
        }
        auto same_domain = [](RunConfig const& x, RunConfig const& y) {
            return to_json(x.domain) == to_json(y.domain);
        };
        if (!same_domain(runs[0]->config, runs[2]->config)
            || !same_domain(runs[1]->config, runs[3]->config))
            throw ConfigError(where + ": x and y runs must pair up by domain");
    }
}
}  // namespace

Recipe recipe_from_json(Json const& j, std::string const& fallback_name)
{
    check_keys(j, {"name", "description", "defaults", "runs", "analyses",
                   "out_dir"},
               "recipe");
    Recipe r;
    r.name = j.value("name", fallback_name);
    r.description = j.value("description", "");
    if (j.contains("out_dir"))
        r.out_dir = get_as<std::string>(j, "out_dir", "recipe");

    if (!j.contains("runs") || !j.at("runs").is_array()
        || j.at("runs").empty())
        throw UsageError("recipe '" + r.name + "' lists no runs");

    Json const defaults = j.value("defaults", Json::object());
    if (!defaults.is_object())
        throw ParseError("recipe.defaults: expected an object");
    std::set<std::string> labels;
    std::size_t index = 0;
    for (auto const& item : j.at("runs"))
    {
        std::string const where = "runs[" + std::to_string(index++) + "]";
        if (!item.is_object())
            throw ParseError(where + ": expected an object");
        RecipeRun run;
        run.label = get_as<std::string>(item, "label", where);
        if (!labels.insert(run.label).second)
            throw ConfigError(where + ": duplicate label '" + run.label + "'");
        Json fields = item;
        fields.erase("label");
        try
        {
            run.config = run_config_from_json(overlay(defaults, fields));
        }
        catch (ConfigError const& e)
        {
            throw ConfigError(where + " (" + run.label + "): " + e.what());
        }
        r.runs.push_back(std::move(run));
    }

    if (j.contains("analyses"))
    {
        if (!j.at("analyses").is_array())
            throw ParseError("recipe.analyses: expected an array");
        index = 0;
        for (auto const& item : j.at("analyses"))
        {
            r.analyses.push_back(analysis_from_json(item, index));
            check_analysis(r, r.analyses.back(), index);
            ++index;
        }
    }
    return r;
}

void override_runs(Recipe& recipe, std::optional<int> n_bins,
                   std::optional<std::uint64_t> seed,
                   std::optional<std::uint64_t> n_samples)
{
    std::uint64_t index = 0;
    for (auto& run : recipe.runs)
    {
        if (n_bins)
            run.config.n_bins = *n_bins;
        // Runs keep distinct seeds so compared runs stay independent.
        if (seed)
            run.config.seed = *seed + index++;
        if (n_samples)
            run.config.n_samples = *n_samples;
        run.config.validate();
    }
}

}  // namespace skw
