#pragma once

#include <stdexcept>
#include <string>

namespace protoglad {

// Malformed or inconsistent input data (bad files, dimension mismatches, ...).
class DataError : public std::runtime_error {

public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised by detect() when no cluster passes the similarity threshold.
// Carries the gamma value of the first rejected candidate pair so callers
// can suggest a workable tau.
class ZeroClusterError : public std::runtime_error {

public:
    ZeroClusterError(double first_gamma, const std::string& msg)
        : std::runtime_error(msg), first_gamma_(first_gamma) {}

    double first_gamma() const { return first_gamma_; }

private:
    double first_gamma_ = 0.0;
};

} // namespace protoglad
