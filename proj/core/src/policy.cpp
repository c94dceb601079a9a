#include "dwpom/policy.hpp"

#include "dwpom/errors.hpp"

namespace dwpom {

namespace {

void check_dims(const Eigen::VectorXd& x_xi, const Eigen::VectorXd& x_psi,
                const Eigen::VectorXd& x_phi, const BlipParams& params) {
    if (x_xi.size() != params.xi.size() || x_psi.size() != params.psi.size() ||
        x_phi.size() != params.phi.size()) {
        throw DimensionMismatchError("blip: tailoring block sizes do not match parameters");
    }
}

}  // namespace

double blip_value(const TreatmentConfig& config, const Eigen::VectorXd& x_xi,
                  const Eigen::VectorXd& x_psi, const Eigen::VectorXd& x_phi,
                  const BlipParams& params) {
    check_dims(x_xi, x_psi, x_phi, params);
    double value = 0.0;
    if (config.a_s) value += params.xi.dot(x_xi);
    if (config.a_r) value += params.psi.dot(x_psi);
    if (config.a_s && config.a_r) value += params.phi.dot(x_phi);
    return value;
}

TreatmentConfig optimal_config(const Eigen::VectorXd& x_xi, const Eigen::VectorXd& x_psi,
                               const Eigen::VectorXd& x_phi, const BlipParams& params) {
    check_dims(x_xi, x_psi, x_phi, params);
    const double bs = params.xi.dot(x_xi);
    const double br = params.psi.dot(x_psi);
    const double bb = params.phi.dot(x_phi);

    // Candidates in tie-break order: fewest treated first, then (1,0)
    // before (0,1). A strictly larger blip is required to displace an
    // earlier candidate.
    const TreatmentConfig order[4] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    const double values[4] = {0.0, bs, br, bs + br + bb};
    int best = 0;
    for (int i = 1; i < 4; ++i) {
        if (values[i] > values[best]) best = i;
    }
    return order[best];
}

double regret(const TreatmentConfig& config, const Eigen::VectorXd& x_xi,
              const Eigen::VectorXd& x_psi, const Eigen::VectorXd& x_phi,
              const BlipParams& params) {
    const TreatmentConfig opt = optimal_config(x_xi, x_psi, x_phi, params);
    return blip_value(opt, x_xi, x_psi, x_phi, params) -
           blip_value(config, x_xi, x_psi, x_phi, params);
}

RegimeMetrics regime_metrics(const std::vector<TreatmentConfig>& estimated,
                             const std::vector<TreatmentConfig>& truth,
                             const BlipParams& true_params, const Eigen::MatrixXd& x_xi,
                             const Eigen::MatrixXd& x_psi, const Eigen::MatrixXd& x_phi) {
    const std::size_t H = estimated.size();
    if (truth.size() != H || static_cast<std::size_t>(x_xi.rows()) != H ||
        static_cast<std::size_t>(x_psi.rows()) != H ||
        static_cast<std::size_t>(x_phi.rows()) != H) {
        throw LengthMismatchError("regime metrics: input lengths differ");
    }
    if (H == 0) {
        throw LengthMismatchError("regime metrics: empty inputs");
    }

    RegimeMetrics m;
    for (std::size_t h = 0; h < H; ++h) {
        const auto i = static_cast<Eigen::Index>(h);
        const bool s_ok = estimated[h].a_s == truth[h].a_s;
        const bool r_ok = estimated[h].a_r == truth[h].a_r;
        m.otr_household += (s_ok && r_ok) ? 1.0 : 0.0;
        m.otr_individual += (s_ok ? 1.0 : 0.0) + (r_ok ? 1.0 : 0.0);
        m.mean_regret += regret(estimated[h], x_xi.row(i), x_psi.row(i), x_phi.row(i),
                                true_params);
    }
    m.otr_household /= static_cast<double>(H);
    m.otr_individual /= static_cast<double>(2 * H);
    m.mean_regret /= static_cast<double>(H);
    return m;
}

namespace {

double odds_ratio_with_correction(double pred_hits, double obs_hits, double n) {
    double correction = 0.0;
    if (pred_hits == 0.0 || pred_hits == n || obs_hits == 0.0 || obs_hits == n) {
        correction = 0.5;
    }
    const double odd_pred = (pred_hits + correction) / (n - pred_hits + correction);
    const double odd_obs = (obs_hits + correction) / (n - obs_hits + correction);
    return odd_pred / odd_obs;
}

}  // namespace

ValueOdds value_odds_ratio(const Eigen::VectorXi& predicted_u,
                           const Eigen::VectorXi& observed_u) {
    const Eigen::Index H = predicted_u.size();
    if (observed_u.size() != H || H == 0) {
        throw LengthMismatchError("value odds: input lengths differ or empty");
    }
    double pred3 = 0.0, obs3 = 0.0, pred_ge2 = 0.0, obs_ge2 = 0.0;
    for (Eigen::Index h = 0; h < H; ++h) {
        pred3 += predicted_u[h] == 3 ? 1.0 : 0.0;
        obs3 += observed_u[h] == 3 ? 1.0 : 0.0;
        pred_ge2 += predicted_u[h] >= 2 ? 1.0 : 0.0;
        obs_ge2 += observed_u[h] >= 2 ? 1.0 : 0.0;
    }
    const double n = static_cast<double>(H);
    ValueOdds v;
    v.or_u3 = odds_ratio_with_correction(pred3, obs3, n);
    v.or_u_ge2 = odds_ratio_with_correction(pred_ge2, obs_ge2, n);
    return v;
}

}  // namespace dwpom
