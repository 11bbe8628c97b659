#pragma once

#include <stdexcept>
#include <string>

namespace sfwm {

/// Query outside a provider/model validity domain. Never extrapolated over.
class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

/// Malformed configuration or data file (schema, units, missing fields).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: unphysical growth, refused oracle result, NaN.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem-level read/write failure.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sfwm
