#pragma once

#include <Eigen/Dense>

namespace dwpom {

struct LogisticFit {
    Eigen::VectorXd coef;
    bool converged = false;
    bool separation = false;
    int iterations = 0;
    double max_grad_norm = 0.0;

    double predict(const Eigen::VectorXd& x) const;
};

struct LogisticOptions {
    int max_iterations = 100;
    int max_halvings = 30;
    double grad_tol = 1e-8;
    double rel_loglik_tol = 1e-12;
    double separation_coef = 30.0;
};

// Weighted log-likelihood and its gradient, exposed for testing against
// finite differences.
double logistic_loglik(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& w, const Eigen::VectorXd& coef);
Eigen::VectorXd logistic_score(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const Eigen::VectorXd& w, const Eigen::VectorXd& coef);

// Newton-Raphson with step-halving for the weighted logistic likelihood.
// The caller supplies the intercept column explicitly. Throws
// SingularDesignError when the weighted information is rank deficient and
// NonConvergenceError after max_iterations. Complete separation is reported
// via the separation flag with converged left false.
LogisticFit fit_weighted_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& w,
                                  const LogisticOptions& options = {});

}  // namespace dwpom
