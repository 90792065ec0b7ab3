#pragma once

#include <stdexcept>
#include <string>

namespace respars {

// Malformed input documents: edge lists, oracle dumps, pair files.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Violated operation preconditions: disconnected inputs, out-of-range
// parameters, dimension mismatches, dense-size limits.
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// An iterative solve failed to reach its tolerance where the caller
// required convergence.
class SolveError : public std::runtime_error {
public:
    explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace respars
