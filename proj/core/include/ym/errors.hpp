#pragma once

#include <stdexcept>
#include <string>

namespace ym {

// Common base so the CLI can catch everything from the pipeline at one place.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// quadrature
class NonFinite : public Error {
public:
    using Error::Error;
};
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

// covering
class EnergyDropUnverified : public Error {
public:
    using Error::Error;
};
class PigeonholeExhausted : public Error {
public:
    using Error::Error;
};
class InvariantViolation : public Error {
public:
    InvariantViolation(const std::string& axiom, const std::string& witness)
        : Error("invariant " + axiom + " violated: " + witness), axiom_(axiom) {}
    const std::string& axiom() const { return axiom_; }

private:
    std::string axiom_;
};
class StageOverflow : public Error {
public:
    using Error::Error;
};

// measure
class AtomHit : public Error {
public:
    using Error::Error;
};
class NonIntegrable : public Error {
public:
    using Error::Error;
};

// gauge
class SolverDiverged : public Error {
public:
    using Error::Error;
};
class ResolutionTooCoarse : public Error {
public:
    using Error::Error;
};
class GramSingular : public Error {
public:
    using Error::Error;
};

// verify
class ClumpBudget : public Error {
public:
    using Error::Error;
};

// cli / config
class ConfigInvalid : public Error {
public:
    explicit ConfigInvalid(const std::string& field, const std::string& why)
        : Error("invalid config field '" + field + "': " + why), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};
class UnknownKind : public Error {
public:
    using Error::Error;
};
class ExperimentFailed : public Error {
public:
    ExperimentFailed(const std::string& check, double margin)
        : Error("experiment check failed: " + check + " (margin " + std::to_string(margin) + ")") {}
};

} // namespace ym
