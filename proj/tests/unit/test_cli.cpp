#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "skw/cli.hpp"
#include "skw/config.hpp"

using namespace skw;
namespace fs = std::filesystem;

namespace
{
struct Outcome
{
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "skw");
    std::ostringstream out, err;
    int const code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct Scratch
{
    fs::path dir;
    explicit Scratch(std::string const& name)
        : dir(fs::temp_directory_path() / ("skw_test_cli_" + name))
    {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }

    std::string write(std::string const& name, std::string const& text) const
    {
        std::ofstream(dir / name) << text;
        return (dir / name).string();
    }
    std::string out() const { return (dir / "out").string(); }
};

std::size_t count_files(fs::path const& dir, std::string const& prefix)
{
    std::size_t n = 0;
    if (!fs::exists(dir))
        return 0;
    for (auto const& e : fs::directory_iterator(dir))
        n += e.path().filename().string().rfind(prefix, 0) == 0;
    return n;
}

constexpr char const* small_run = R"({"domain": "D1", "spacing": 0.08,
    "n_samples": 400, "n_bins": 40, "seed": 9})";

constexpr char const* small_recipe = R"({
    "name": "mini",
    "defaults": {"domain": "D2", "table": {"a1": 0.9, "a2": 0.05,
                 "a3": 0.05}, "n_samples": 600, "n_bins": 40},
    "runs": [
        {"label": "coarse", "spacing": 0.08, "seed": 1},
        {"label": "fine", "spacing": 0.04, "seed": 2}
    ],
    "analyses": [
        {"type": "difference", "runs": ["coarse", "fine"]},
        {"type": "convergence", "runs": ["coarse", "fine"]},
        {"type": "collapse", "runs": ["coarse", "fine"], "expect": "pass"}
    ]
})";
}  // namespace

TEST_SUITE("cli")
{
    TEST_CASE("usage errors")
    {
        CHECK(run_cli({}).code == cli::exit_usage);
        CHECK(run_cli({"frobnicate"}).code == cli::exit_usage);
        CHECK(run_cli({"simulate"}).code == cli::exit_usage);
        CHECK(run_cli({"simulate", "--workers", "-2", "--config", "x"}).code
              == cli::exit_usage);
        CHECK(run_cli({"simulate", "--config", "a", "--recipe", "b"}).code
              == cli::exit_usage);
        CHECK(run_cli({"--help"}).code == cli::exit_ok);
        CHECK(run_cli({"simulate", "--help"}).code == cli::exit_ok);
    }

    TEST_CASE("empty recipe is a usage error")
    {
        Scratch s("empty");
        auto const path = s.write("empty.json", R"({"name": "e", "runs": []})");
        auto const r = run_cli({"simulate", "--config", path});
        CHECK(r.code == cli::exit_usage);
        CHECK(r.err.find("no runs") != std::string::npos);
    }

    TEST_CASE("parse and validation errors")
    {
        Scratch s("errors");
        auto const broken = s.write("broken.json", "{\"spacing\": ");
        CHECK(run_cli({"simulate", "--config", broken}).code
              == cli::exit_parse);
        auto const typo = s.write("typo.json", R"({"spcing": 0.1})");
        CHECK(run_cli({"simulate", "--config", typo}).code
              == cli::exit_parse);
        auto const table = s.write(
            "table.json", R"({"table": {"a1": 0.8, "a2": 0.3, "a3": 0.3}})");
        CHECK(run_cli({"simulate", "--config", table, "--out-dir", s.out()})
                  .code
              == cli::exit_validation);
        auto const small = s.write("small.json", small_run);
        CHECK(run_cli({"simulate", "--config", small, "--bins", "0"}).code
              == cli::exit_validation);
        CHECK(count_files(s.out(), "acc_") == 0);
    }

    TEST_CASE("missing inputs")
    {
        Scratch s("missing");
        CHECK(run_cli({"simulate", "--config", (s.dir / "nope.json").string()})
                  .code
              == cli::exit_missing_input);
        CHECK(run_cli({"simulate", "--recipe", "no_such_recipe"}).code
              == cli::exit_missing_input);
        auto const small = s.write("small.json", small_run);
        auto const r = run_cli({"analyze", "--config", small, "--out-dir",
                                s.out()});
        CHECK(r.code == cli::exit_missing_input);
        CHECK(r.err.find("simulate") != std::string::npos);
        CHECK(r.out.empty());
    }

    TEST_CASE("simulate skips existing results unless forced")
    {
        Scratch s("force");
        auto const small = s.write("small.json", small_run);
        auto first = run_cli({"simulate", "--config", small, "--out-dir",
                              s.out()});
        REQUIRE(first.code == cli::exit_ok);
        CHECK(count_files(s.out(), "acc_") == 2);

        auto const cfg = run_config_from_json(read_json_file(small));
        auto const acc = accumulator_path(s.out(), cfg);
        REQUIRE(fs::exists(acc));
        auto const stamp = fs::last_write_time(acc);
        auto const original = read_accumulator_file(acc).acc;

        auto second = run_cli({"simulate", "--config", small, "--out-dir",
                               s.out()});
        CHECK(second.code == cli::exit_ok);
        CHECK(second.out.find("skip") != std::string::npos);
        CHECK(fs::last_write_time(acc) == stamp);

        auto forced = run_cli({"simulate", "--config", small, "--out-dir",
                               s.out(), "--force", "--workers", "2"});
        CHECK(forced.code == cli::exit_ok);
        CHECK(forced.out.find("skip") == std::string::npos);
        CHECK(read_accumulator_file(acc).acc == original);

        // A different seed is a different result file.
        CHECK(run_cli({"simulate", "--config", small, "--out-dir", s.out(),
                       "--seed", "10"})
                  .code
              == cli::exit_ok);
        CHECK(count_files(s.out(), "acc_") == 4);
    }

    TEST_CASE("output directory from the environment")
    {
        Scratch s("env");
        auto const small = s.write("small.json", small_run);
        auto const env_dir = s.dir / "from_env";
        ::setenv(cli::out_dir_env, env_dir.c_str(), 1);
        auto const r = run_cli({"simulate", "--config", small});
        CHECK(r.code == cli::exit_ok);
        CHECK(count_files(env_dir, "acc_") == 2);
        // The flag wins over the environment.
        auto const r2 = run_cli({"simulate", "--config", small, "--out-dir",
                                 s.out()});
        CHECK(r2.code == cli::exit_ok);
        CHECK(count_files(s.out(), "acc_") == 2);
        ::unsetenv(cli::out_dir_env);
    }

    TEST_CASE("recipe simulate then analyze")
    {
        Scratch s("recipe");
        auto const path = s.write("mini.json", small_recipe);
        auto const sim = run_cli({"simulate", "--config", path, "--out-dir",
                                  s.out()});
        REQUIRE(sim.code == cli::exit_ok);
        CHECK(count_files(s.out(), "acc_") == 4);

        auto const ana = run_cli({"analyze", "--config", path, "--out-dir",
                                  s.out()});
        REQUIRE(ana.code == cli::exit_ok);
        CHECK(ana.out.find("collapse") != std::string::npos);
        auto const report = read_json_file(fs::path(s.out())
                                           / "mini_report.json");
        REQUIRE(report["analyses"].size() == 3);
        CHECK(report["analyses"][2]["type"] == "collapse");
        CHECK(report["analyses"][2].contains("max_discrepancy"));
        CHECK(report["analyses"][2]["expected"] == "pass");
        CHECK(report["runs"]["fine"]["rescale_factor"] == 1.0);
        CHECK(report["runs"]["coarse"]["rescale_factor"] == 0.5);

        std::ifstream csv(fs::path(s.out()) / "mini_coarse.csv");
        std::string header;
        std::getline(csv, header);
        CHECK(header == "theta,F,H,diff,sigma,rescaled_diff");
        int rows = 0;
        for (std::string line; std::getline(csv, line);)
            ++rows;
        CHECK(rows == 41);

        // Overrides change which results analyze needs.
        CHECK(run_cli({"analyze", "--config", path, "--out-dir", s.out(),
                       "--bins", "20"})
                  .code
              == cli::exit_missing_input);
    }

    TEST_CASE("oracle command")
    {
        Scratch s("oracle");
        auto const r = run_cli({"oracle", "--domain", "strip:0.5,-0.5",
                                "--spacing", "0.05", "--samples", "20000",
                                "--bins", "50", "--bound", "0.05",
                                "--out-dir", s.out()});
        CHECK(r.code == cli::exit_ok);
        CHECK(r.out.find("pass") != std::string::npos);
        CHECK(count_files(s.out(), "oracle_") == 1);

        auto const tight = run_cli({"oracle", "--domain", "D1", "--spacing",
                                    "0.1", "--samples", "2000", "--bins",
                                    "50", "--bound", "1e-9"});
        CHECK(tight.code == cli::exit_check_failed);
        CHECK(run_cli({"oracle", "--domain", "ellipse:1,2"}).code
              == cli::exit_parse);
        CHECK(run_cli({"oracle", "--domain", "disk:0,0,-1"}).code
              == cli::exit_validation);
    }

    TEST_CASE("list recipes")
    {
        auto const r = run_cli({"list-recipes"});
        CHECK(r.code == cli::exit_ok);
        for (char const* name : {"fig3", "fig4", "fig5", "fig6", "fig7", "fig8",
                                 "table1"})
            CHECK(r.out.find(name) != std::string::npos);
        CHECK(r.out.find("invalid") == std::string::npos);
    }
}
