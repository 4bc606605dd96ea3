#pragma once

#include <stdexcept>
#include <string>

namespace qstrip {

// Invalid configuration (bad mesh counts, incompatible options, ...).
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure at runtime (solver breakdown, violated scheme
// invariant, ...). The CLI maps this to exit code 3.
class NumericsError : public std::runtime_error {
public:
    explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

// File I/O failure. The CLI maps this to exit code 4.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qstrip
