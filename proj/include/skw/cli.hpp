#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace skw::cli
{
//! Process exit codes.
enum ExitCode : int
{
    exit_ok = 0,
    exit_internal = 1,
    exit_usage = 2,
    exit_parse = 3,
    exit_validation = 4,
    exit_invariant = 5,
    exit_missing_input = 6,
    //! The oracle check ran but did not meet its bound.
    exit_check_failed = 7
};

//! Environment variable that overrides the default output directory.
inline constexpr char const* out_dir_env = "SKW_OUT_DIR";
//! Environment variable that overrides the shipped recipe directory.
inline constexpr char const* recipe_dir_env = "SKW_RECIPE_DIR";

/*!
 * Run the command line (args[0] is the program name) and return the exit
 * code. Never throws.
 */
int run(std::vector<std::string> const& args, std::ostream& out,
        std::ostream& err);

}  // namespace skw::cli
