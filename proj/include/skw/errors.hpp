#pragma once

#include <stdexcept>
#include <string>

namespace skw
{
// Bad user input: malformed tables, inadmissible lattice spacing, etc.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// A walk reached a state the model forbids (e.g. zero allowable neighbors).
class InvariantViolation : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

// Required input file or record is absent or does not match what was asked.
class MissingInput : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Text that could not be parsed at all (as opposed to parsed-but-invalid).
class ParseError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Command or recipe that asks for nothing sensible (e.g. no runs).
class UsageError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};
}  // namespace skw
