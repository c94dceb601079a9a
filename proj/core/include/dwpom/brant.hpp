#pragma once

#include <Eigen/Dense>

namespace dwpom {

struct BrantResult {
    double chi2 = 0.0;
    int df = 0;
    double pvalue = 1.0;
};

// Brant (1990) test of the proportional odds assumption for a
// three-category outcome: fits the two cutpoint-specific binary logistic
// regressions of I(u > c) on the shared regressors X (no intercept column;
// one is added internally), assembles the joint covariance of their slope
// vectors from the shared fitted probabilities, and Wald-tests slope
// equality. df equals the number of shared slopes.
BrantResult brant_wald(const Eigen::MatrixXd& X, const Eigen::VectorXi& u);

}  // namespace dwpom
