#ifndef CKS_ERRORS_HPP
#define CKS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cks {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Adaptive quadrature ran out of subdivisions before reaching rel_tol.
struct QuadratureNotConverged : Error {
    using Error::Error;
};

// A closed-form path was asked for an alpha it does not cover.
struct WrongAlpha : Error {
    using Error::Error;
};

// Spectral coefficients fail the conjugate-symmetry check for a real field.
struct NotConjugateSymmetric : Error {
    using Error::Error;
};

// Remap requested at an instant where the shear shift is not an exact
// re-indexing of the mode lattice.
struct RemapOffSchedule : Error {
    using Error::Error;
};

// Step size fell below dt_min; treated as a blow-up symptom by the driver.
struct StepUnderflow : Error {
    using Error::Error;
};

// A coefficient became NaN or infinite.
struct NonFinite : Error {
    using Error::Error;
};

// Argument outside the documented domain of a function.
struct DomainError : Error {
    using Error::Error;
};

// A log-log fit was asked to fit values that are not strictly positive.
struct NonPositiveData : Error {
    using Error::Error;
};

// Two runs compared by a verdict function were produced under different
// preconditions (grid, alpha, initial data).
struct MismatchedExperiments : Error {
    using Error::Error;
};

// A synthesis grid cannot resolve the requested kernel or field.
struct GridTooSmall : Error {
    using Error::Error;
};

// Malformed config text; carries the 1-based line number.
struct ParseError : Error {
    int line;
    ParseError(int line_, const std::string& msg)
        : Error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

// A config value is outside its admissible range; carries the key.
struct ValidationError : Error {
    std::string key;
    ValidationError(const std::string& key_, const std::string& msg)
        : Error(key_ + ": " + msg), key(key_) {}
};

// Filesystem-level failure (open/read/write).
struct IoError : Error {
    using Error::Error;
};

// A binary snapshot is corrupt, truncated, or has the wrong magic/version.
struct FormatError : Error {
    using Error::Error;
};

} // namespace cks

#endif
