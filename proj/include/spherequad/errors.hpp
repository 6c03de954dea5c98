#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spherequad {

/// A parameter outside its admissible domain (a, b, alpha, beta, u, v, counts).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Closed-form expression evaluated where its denominator vanishes.
class SingularParameterError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

/// An iterative solve that did not converge. Carries the per-attempt trace.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what, std::vector<std::string> trace = {})
        : std::runtime_error(what), trace_(std::move(trace)) {}

    const std::vector<std::string>& trace() const noexcept { return trace_; }

private:
    std::vector<std::string> trace_;
};

/// A multi-patch spline whose patches do not connect along edges.
class TopologyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace spherequad
