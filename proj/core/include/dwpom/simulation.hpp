#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dwpom/data.hpp"
#include "dwpom/dynamics.hpp"
#include "dwpom/model_spec.hpp"
#include "dwpom/policy.hpp"
#include "dwpom/rng.hpp"
#include "dwpom/wpom.hpp"

namespace dwpom {

// One categorical draw of a household's treatment pair from its joint
// propensity table.
TreatmentConfig gen_correlated_treatments(double p_s, double p_r, double tau, Rng& rng);

// Data-generating truths carried alongside a simulated dataset.
struct GroundTruth {
    std::vector<BlipParams> blips;                       // one per stage
    std::vector<std::vector<TreatmentConfig>> optimal;   // per stage, per household
    Eigen::VectorXd mu;                                  // latent outcome means
};

struct SimulatedData {
    Dataset data;
    GroundTruth truth;
};

// Knobs for oracle tests; the defaults reproduce the reference process.
struct Study1Truth {
    BlipParams blips;
    bool zero_treatment_free = false;
    Study1Truth();
};

// Single-stage couples process: four covariates per individual, correlated
// treatments from a log-linear odds ratio model, and a three-category
// household outcome from a cumulative-logit latent mean. Derived feature
// columns used by the correctly specified estimators are materialized.
SimulatedData gen_study1(int households, std::uint64_t seed, int replicate,
                         const Study1Truth& truth = {});

// Two-stage couples panel with stage-two covariates drifting from stage
// one; terminal outcome only.
SimulatedData gen_study2(int households, std::uint64_t seed, int replicate);

// Estimator column selections. Scenario semantics: 1 = both models
// misspecified, 2 = treatment-free correct only, 3 = treatment model
// correct only, 4 = both correct.
ModelSpec study1_spec(int scenario);
UnawareSpec study1_unaware_spec();
// Case 1: both stages treatment-model-correct, treatment-free misspecified.
// Case 2: stage 2 as case 1; stage 1 treatment-free correct, treatment
// model misspecified.
std::vector<ModelSpec> study2_specs(int study_case);

enum class Study { Study1a, Study1b, Study2 };

const char* study_name(Study study);

struct MonteCarloConfig {
    Study study = Study::Study1b;
    int households = 500;
    int replicates = 100;
    int scenario = 3;        // study 1b
    int study2_case = 1;     // study 2
    std::vector<WeightScheme> schemes = {WeightScheme::AdjustedOverlap_M4};
    bool include_unaware = true;   // study 1a extras
    bool include_cv = false;
    int cv_folds = 20;
    int replications = 25;   // pseudo-outcome draws (study 2)
    std::uint64_t seed = 42;
    int threads = 0;         // 0 = hardware concurrency
    double failure_budget = 0.05;
};

struct MetricRow {
    std::string scheme;
    std::string metric;
    double mean = 0.0;
    double sd = 0.0;
    int n = 0;
};

struct MonteCarloSummary {
    MonteCarloConfig config;
    std::vector<MetricRow> rows;
    int replicates_failed = 0;
    std::vector<std::string> failure_messages;

    const MetricRow& row(const std::string& scheme, const std::string& metric) const;
    double mean(const std::string& scheme, const std::string& metric) const {
        return row(scheme, metric).mean;
    }
};

// Generate, fit and score `replicates` independent datasets; aggregates are
// means and standard deviations over the successful replicates. Replicates
// run on a worker pool but the result is independent of scheduling. Fails
// when more than failure_budget of the replicates error out.
MonteCarloSummary run_monte_carlo(const MonteCarloConfig& cfg);

}  // namespace dwpom
