#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rrcover {

// Requested structure would exceed a configured size guard.
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Iterative computation did not converge; carries the last iterate for diagnostics.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, std::vector<double> last_iterate)
        : std::runtime_error(what), last_iterate_(std::move(last_iterate)) {}

    const std::vector<double>& last_iterate() const { return last_iterate_; }

private:
    std::vector<double> last_iterate_;
};

// A node path could not be followed; the message names the failing step.
class PathError : public std::runtime_error {
public:
    explicit PathError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rrcover
