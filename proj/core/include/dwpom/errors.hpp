#pragma once

#include <stdexcept>
#include <string>

namespace dwpom {

// Base for all library errors. `code()` is a stable, module-qualified
// identifier (e.g. "model_core.singular_design") used by the CLI for
// error reporting and exit status mapping.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct SingularDesignError : Error {
    explicit SingularDesignError(const std::string& what)
        : Error("model_core.singular_design", what) {}
};

struct NonConvergenceError : Error {
    explicit NonConvergenceError(const std::string& what)
        : Error("model_core.non_convergence", what) {}
};

struct DegenerateOutcomeError : Error {
    explicit DegenerateOutcomeError(const std::string& what)
        : Error("model_core.degenerate_outcome", what) {}
};

struct DegenerateCutError : Error {
    explicit DegenerateCutError(const std::string& what)
        : Error("model_core.degenerate_cut", what) {}
};

struct NoDiscordantPairsError : Error {
    explicit NoDiscordantPairsError(const std::string& what)
        : Error("propensity.no_discordant_pairs", what) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& what)
        : Error("propensity.domain", what) {}
};

struct MissingKappasError : Error {
    explicit MissingKappasError(const std::string& what)
        : Error("balancing.missing_kappas", what) {}
};

struct DimensionMismatchError : Error {
    explicit DimensionMismatchError(const std::string& what)
        : Error("policy.dimension_mismatch", what) {}
};

struct LengthMismatchError : Error {
    explicit LengthMismatchError(const std::string& what)
        : Error("policy.length_mismatch", what) {}
};

struct FoldDegenerateError : Error {
    explicit FoldDegenerateError(const std::string& what)
        : Error("estimator.fold_degenerate", what) {}
};

struct AllDrawsDegenerateError : Error {
    explicit AllDrawsDegenerateError(const std::string& what)
        : Error("dynamics.all_draws_degenerate", what) {}
};

struct ReplicateBudgetError : Error {
    explicit ReplicateBudgetError(const std::string& what)
        : Error("simulation.replicate_budget", what) {}
};

struct SchemaError : Error {
    explicit SchemaError(const std::string& what)
        : Error("data.schema", what) {}
};

struct UsageError : Error {
    explicit UsageError(const std::string& what)
        : Error("cli.usage", what) {}
};

}  // namespace dwpom
