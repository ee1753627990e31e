#pragma once

#include <stdexcept>
#include <string>

namespace adopt {

// Invalid primitives or malformed scenario input. `field` names the offending
// entry (e.g. "worker.sigma") so the CLI can print a field-level diagnostic.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// Numerical solver failed to meet its convergence contract.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace adopt
