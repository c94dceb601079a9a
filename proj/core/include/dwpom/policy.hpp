#pragma once

#include <vector>

#include <Eigen/Dense>

namespace dwpom {

struct TreatmentConfig {
    int a_s = 0;
    int a_r = 0;

    friend bool operator==(const TreatmentConfig&, const TreatmentConfig&) = default;
};

struct BlipParams {
    Eigen::VectorXd xi;
    Eigen::VectorXd psi;
    Eigen::VectorXd phi;
};

struct RegimeMetrics {
    double otr_household = 0.0;
    double otr_individual = 0.0;
    double mean_regret = 0.0;
};

struct ValueOdds {
    double or_u3 = 1.0;
    double or_u_ge2 = 1.0;
};

// Household blip: a_s xi'x_xi + a_r psi'x_psi + a_s a_r phi'x_phi, the
// effect of the configuration relative to (0,0).
double blip_value(const TreatmentConfig& config, const Eigen::VectorXd& x_xi,
                  const Eigen::VectorXd& x_psi, const Eigen::VectorXd& x_phi,
                  const BlipParams& params);

// Argmax of the blip over the four configurations. Exact ties are broken
// toward fewer treated members, then (1,0) over (0,1).
TreatmentConfig optimal_config(const Eigen::VectorXd& x_xi, const Eigen::VectorXd& x_psi,
                               const Eigen::VectorXd& x_phi, const BlipParams& params);

// Blip loss of prescribing `config` instead of the optimal configuration.
double regret(const TreatmentConfig& config, const Eigen::VectorXd& x_xi,
              const Eigen::VectorXd& x_psi, const Eigen::VectorXd& x_phi,
              const BlipParams& params);

// Household/individual optimal-treatment rates of `estimated` against
// `truth`, and mean regret of the estimated configurations under the true
// blip parameters evaluated on the given tailoring blocks (one row per
// household).
RegimeMetrics regime_metrics(const std::vector<TreatmentConfig>& estimated,
                             const std::vector<TreatmentConfig>& truth,
                             const BlipParams& true_params, const Eigen::MatrixXd& x_xi,
                             const Eigen::MatrixXd& x_psi, const Eigen::MatrixXd& x_phi);

// Odds of U = 3 (and of U >= 2) among predicted vs observed outcomes, with
// a +0.5 continuity correction applied to all cells whenever any count is
// zero.
ValueOdds value_odds_ratio(const Eigen::VectorXi& predicted_u,
                           const Eigen::VectorXi& observed_u);

}  // namespace dwpom
