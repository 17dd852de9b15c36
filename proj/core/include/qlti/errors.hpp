#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qlti {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input: bad file schema, shape mismatch, invalid parameter domain.
class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& what) : Error(what) {}
};

// A numeric postcondition failed: residual above tolerance, completion failure,
// log-branch failure. Carries enough context to locate the offending frequency.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(what) {}
};

// A guarded degeneracy was hit: transfer-function pole proximity, near-singular
// spectral density, indefinite-metric normalization breakdown.
class DegeneracyError : public Error {
public:
    explicit DegeneracyError(const std::string& what) : Error(what) {}
};

// Collector for non-fatal diagnostics (rank-tolerance ambiguity, off-grid
// interpolation, log-branch proximity). Operations that can warn accept an
// optional pointer; a null collector drops the messages.
struct Diagnostics {
    std::vector<std::string> warnings;
    void warn(std::string msg) { warnings.push_back(std::move(msg)); }
};

} // namespace qlti
