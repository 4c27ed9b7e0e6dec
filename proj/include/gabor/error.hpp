#pragma once

#include <stdexcept>
#include <string>

namespace gabor {

/// Invalid lattice, shape mismatch or otherwise malformed input.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The system (g, a, b) has no positive lower frame bound at working precision.
class NotAFrameError : public std::runtime_error {
public:
    NotAFrameError(const std::string& what, double lower, double upper)
        : std::runtime_error(what), lower_(lower), upper_(upper) {}

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }

private:
    double lower_;
    double upper_;
};

/// A scalar function was evaluated outside its domain (e.g. s^{-1/2} at s = 0).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An iteration ran out of steps before reaching its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, int iterations) : std::runtime_error(what), iterations_(iterations) {}

    int iterations() const noexcept { return iterations_; }

private:
    int iterations_;
};

/// Malformed window or report file.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace gabor
