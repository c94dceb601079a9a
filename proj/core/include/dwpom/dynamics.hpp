#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dwpom/model_spec.hpp"
#include "dwpom/policy.hpp"
#include "dwpom/rng.hpp"
#include "dwpom/wpom.hpp"

namespace dwpom {

// Ordinal pseudo-utility distribution: the outcome the household would see
// under treatment configuration d_star, evaluated at the fitted model.
CategoryProbs pseudo_utility_probs(const PomFit& fit, const DesignRow& row,
                                   const TreatmentConfig& d_star);

struct PseudoUtilityDraws {
    Eigen::MatrixXi draws;  // R x H, values in {1,2,3}
    int replications() const { return static_cast<int>(draws.rows()); }
};

// R independent categorical draws per household from the given per-household
// probabilities (H x 3).
PseudoUtilityDraws sample_pseudo_utilities(const Eigen::MatrixXd& probs, int replications,
                                           Rng& rng);

struct StageEstimate {
    PomFit averaged;     // zeta/beta/blips averaged over the pseudo-outcome draws
    int draws_used = 0;  // 1 at the terminal stage
    int brant_warnings = 0;
    int brant_tests = 0;
    std::vector<std::string> warnings;

    BlipParams blips() const { return {averaged.xi, averaged.psi, averaged.phi}; }
};

struct DwpomResult {
    std::vector<StageEstimate> per_stage;  // ordered first stage -> last stage
};

struct DwpomOptions {
    int replications = 25;        // pseudo-outcome draws per non-terminal stage
    std::uint64_t seed = 42;
    bool strict_brant = false;    // abort instead of warn on a failed test
    double brant_alpha = 0.05;
    WeightScheme scheme = WeightScheme::AdjustedOverlap_M4;
};

// Backward-induction dynamic fit over K stages. specs[j] describes stage
// j+1; the terminal stage regresses the observed outcome `u`, earlier
// stages regress pseudo-utilities drawn from the next stage's fitted model
// at its estimated optimal configurations, averaging estimates over the
// draws. Each draw is screened with the Brant-Wald test; failures are
// recorded as warnings (or abort in strict mode).
DwpomResult dwpom_fit(const Dataset& panel, const std::vector<ModelSpec>& specs,
                      const DwpomOptions& options);

DwpomResult dwpom_fit(const std::vector<StageInputs>& stages, const Eigen::VectorXi& u,
                      const DwpomOptions& options);

// Estimated optimal configurations per household at one stage.
std::vector<TreatmentConfig> stage_decisions(const StageInputs& inputs,
                                             const BlipParams& blips);

}  // namespace dwpom
