#pragma once

#include <stdexcept>
#include <string>

namespace sphere_eq {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid sizes, angles, indices or tolerances passed by the caller.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A pointwise evaluator produced a non-finite value.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// The grid cannot resolve the requested spectral degree.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// A precondition on the mathematical input was violated (wrong extremum
/// kind, trivial state not a root, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

/// The input field is constant, so extrema are undefined.
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Gradient-flow relaxation blew up.
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// Malformed field file. Carries the 1-based line number where parsing failed.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line);
    int line() const noexcept { return line_; }

private:
    int line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// "%.3e" formatting for residuals quoted in error messages.
std::string format_sci(double v);

}  // namespace sphere_eq
