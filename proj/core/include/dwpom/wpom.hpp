#pragma once

#include <cstdint>
#include <vector>

#include "dwpom/balancing.hpp"
#include "dwpom/model_spec.hpp"
#include "dwpom/policy.hpp"
#include "dwpom/pom.hpp"

namespace dwpom {

struct WpomResult {
    PomFit step1_fit;   // overlap-weighted (or single) fit
    PomFit final_fit;   // adjusted-weight refit; equals step1_fit except for m4
    WeightScheme scheme = WeightScheme::AdjustedOverlap_M4;
    Eigen::VectorXd per_household_weights;  // likelihood weights of the final fit

    BlipParams blips() const { return {final_fit.xi, final_fit.psi, final_fit.phi}; }
};

// Single-stage weighted proportional odds fit: marginal propensities and
// the pairwise odds ratio are estimated first, balancing weights of the
// requested scheme attach to each household's likelihood contribution, and
// for the adjusted scheme the model is refit with weights that fold in the
// adjustment factors evaluated at the first-pass estimates.
WpomResult wpom_fit(const StageInputs& inputs, const Eigen::VectorXi& u,
                    WeightScheme scheme);

inline WpomResult wpom_fit(const Dataset& data, const ModelSpec& spec,
                           WeightScheme scheme) {
    return wpom_fit(resolve_spec(data, spec), data.int_col("u"), scheme);
}

struct CvWpomResult {
    PomFit averaged;           // parameter-wise mean over the K fold fits
    Eigen::VectorXd fold_sd;   // per-parameter standard deviation across folds
    std::vector<PomFit> fold_fits;
};

// K-fold variant: households are partitioned by a seeded shuffle, the model
// is fit on each leave-one-fold-out training set, and parameter estimates
// are averaged over the K fits.
CvWpomResult cv_wpom(const StageInputs& inputs, const Eigen::VectorXi& u,
                     WeightScheme scheme, int k_folds, std::uint64_t seed);

// As above with caller-supplied fold ids in [0, k_folds).
CvWpomResult cv_wpom_with_folds(const StageInputs& inputs, const Eigen::VectorXi& u,
                                WeightScheme scheme, int k_folds,
                                const std::vector<int>& fold_of);

// Per-role baseline that ignores the partner's treatment: an ordinal
// cumulative-logit model of u per role with that role's treatment-blip
// block only. The implied regime treats a member exactly when the fitted
// role blip is positive.
struct UnawareSpec {
    std::vector<std::string> beta_cols_s;
    std::vector<std::string> beta_cols_r;
    std::vector<std::string> blip_cols_s;
    std::vector<std::string> blip_cols_r;
    int stage = 1;
};

struct UnawareFit {
    PomFit fit_s;
    PomFit fit_r;
};

UnawareFit interference_unaware_fit(const Dataset& data, const UnawareSpec& spec);

std::vector<TreatmentConfig> unaware_decide(const UnawareFit& fit, const Dataset& data,
                                            const UnawareSpec& spec);

// Row subset of resolved stage inputs (used by cross-validation).
StageInputs subset_inputs(const StageInputs& inputs, const std::vector<int>& rows);

}  // namespace dwpom
