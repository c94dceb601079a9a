#pragma once

#include <Eigen/Dense>

namespace dwpom {

// One household's regressor blocks for the household proportional odds
// model. Treatment-free regressors go in `beta`; the tailoring blocks
// carry their own constant column when the model wants one.
struct DesignRow {
    Eigen::VectorXd beta;
    Eigen::VectorXd xi;
    Eigen::VectorXd psi;
    Eigen::VectorXd phi;
    int a_s = 0;
    int a_r = 0;
};

// Column-blocked design for a whole dataset; the row-wise view of the
// same information as a list of DesignRow.
struct PomDesign {
    Eigen::MatrixXd beta_X;  // H x p_beta (may have zero columns)
    Eigen::MatrixXd xi_X;    // H x p_xi
    Eigen::MatrixXd psi_X;   // H x p_psi
    Eigen::MatrixXd phi_X;   // H x p_phi
    Eigen::VectorXi a_s;
    Eigen::VectorXi a_r;

    Eigen::Index households() const { return a_s.size(); }
    Eigen::Index n_slopes() const {
        return beta_X.cols() + xi_X.cols() + psi_X.cols() + phi_X.cols();
    }
    DesignRow row(Eigen::Index h) const;
};

struct PomFit {
    double zeta1 = 0.0;
    double zeta2 = 0.0;
    Eigen::VectorXd beta;
    Eigen::VectorXd xi;
    Eigen::VectorXd psi;
    Eigen::VectorXd phi;
    bool converged = false;
    bool separation = false;
    int iterations = 0;
    double max_grad_norm = 0.0;
};

// Cumulative-logit linear predictors eta_c = zeta_c - (beta'x + gamma).
// eta2 >= eta1 always since zeta2 > zeta1.
struct LinearPredictors {
    double eta1 = 0.0;
    double eta2 = 0.0;
};

struct CategoryProbs {
    double p1 = 0.0;
    double p2 = 0.0;
    double p3 = 0.0;
};

struct PomOptions {
    int max_iterations = 100;
    int max_halvings = 30;
    double grad_tol = 1e-8;
    double rel_loglik_tol = 1e-12;
    double separation_coef = 30.0;
};

// Predictors for an arbitrary treatment configuration (the blip part uses
// the given a_s, a_r rather than the observed ones).
LinearPredictors linear_predictors(const PomFit& fit, const DesignRow& row,
                                   int a_s, int a_r);
inline LinearPredictors linear_predictors(const PomFit& fit, const DesignRow& row) {
    return linear_predictors(fit, row, row.a_s, row.a_r);
}
CategoryProbs category_probs(const LinearPredictors& eta);

// Weighted multinomial cumulative-logit log-likelihood at the natural
// parameter vector (zeta1, zeta2, slopes); slopes ordered beta, xi, psi, phi.
double pom_loglik(const PomDesign& design, const Eigen::VectorXi& u,
                  const Eigen::VectorXd& w, const Eigen::VectorXd& params);

// Analytic score (gradient of pom_loglik) in the same parameter order.
Eigen::VectorXd pom_score(const PomDesign& design, const Eigen::VectorXi& u,
                          const Eigen::VectorXd& w, const Eigen::VectorXd& params);

Eigen::VectorXd pack_params(const PomFit& fit);

// Full slope design [x_beta, a_s x_xi, a_r x_psi, a_s a_r x_phi].
Eigen::MatrixXd slope_design(const PomDesign& design);

// Weighted maximum likelihood for the household POM. Outcomes are coded
// 1, 2, 3. Newton-Raphson with step halving; the cutpoint gap is kept
// positive by an internal log reparameterization.
PomFit fit_weighted_pom(const PomDesign& design, const Eigen::VectorXi& u,
                        const Eigen::VectorXd& w, const PomOptions& options = {});

}  // namespace dwpom
