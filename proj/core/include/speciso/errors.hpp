#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace speciso {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Caller passed an argument outside the documented domain.
class ParameterError : public Error {
public:
    using Error::Error;
};

// A mesh failed one of the structural checks (manifoldness, orientation,
// degenerate faces, out-of-range indices).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Mesh file could not be parsed. Carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line = -1)
        : Error(line >= 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

// File extension / magic did not match any supported format.
class FormatError : public Error {
public:
    using Error::Error;
};

// Mesh connectivity is unusable for the requested operation
// (e.g. intrinsic distances on a disconnected mesh).
class TopologyError : public Error {
public:
    using Error::Error;
};

// Geometric quantity collapsed (zero area element, zero enclosed volume).
class DegenerateGeometryError : public Error {
public:
    using Error::Error;
};

// Iterative eigensolver ran out of iterations before certifying the
// requested eigenvalues. Carries how many leading pairs were certified and
// the best eigenvalue/residual estimates at the point of failure.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, int converged,
                     std::vector<double> partial_eigenvalues = {},
                     std::vector<double> partial_residuals = {})
        : Error(msg),
          converged_(converged),
          partial_eigenvalues_(std::move(partial_eigenvalues)),
          partial_residuals_(std::move(partial_residuals)) {}
    int converged() const { return converged_; }
    const std::vector<double>& partial_eigenvalues() const {
        return partial_eigenvalues_;
    }
    const std::vector<double>& partial_residuals() const {
        return partial_residuals_;
    }

private:
    int converged_;
    std::vector<double> partial_eigenvalues_;
    std::vector<double> partial_residuals_;
};

// A documented precondition of an algorithm does not hold for the input.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Two inputs that must describe the same object disagree
// (e.g. distance matrix size vs. weight vector size).
class InconsistentInputError : public Error {
public:
    using Error::Error;
};

// Rayleigh quotient requested for a function that is zero in the mass norm.
class ZeroFunctionError : public Error {
public:
    using Error::Error;
};

// Certification radius too large: the greedy center selection could not
// place the required number of centers.
class RadiusTooLargeError : public Error {
public:
    using Error::Error;
};

// An internal postcondition audit failed. Indicates a bug, not bad input.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace speciso
