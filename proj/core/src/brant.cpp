#include "dwpom/brant.hpp"

#include "dwpom/errors.hpp"
#include "dwpom/logistic.hpp"
#include "dwpom/math.hpp"

namespace dwpom {

BrantResult brant_wald(const Eigen::MatrixXd& X, const Eigen::VectorXi& u) {
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    if (u.size() != n) {
        throw DegenerateCutError("brant: row count mismatch");
    }
    int counts[3] = {0, 0, 0};
    for (Eigen::Index i = 0; i < n; ++i) {
        if (u[i] < 1 || u[i] > 3) throw DegenerateCutError("brant: outcome must be 1, 2 or 3");
        ++counts[u[i] - 1];
    }
    if (counts[0] == 0 || counts[1] == 0 || counts[2] == 0) {
        throw DegenerateCutError("brant: all three outcome categories must be present");
    }

    Eigen::MatrixXd Xt(n, p + 1);
    Xt.col(0).setOnes();
    Xt.rightCols(p) = X;

    // Binary collapsings y_c = I(u > c) for the two cutpoints.
    Eigen::MatrixXd Y(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        Y(i, 0) = u[i] > 1 ? 1.0 : 0.0;
        Y(i, 1) = u[i] > 2 ? 1.0 : 0.0;
    }
    for (int c = 0; c < 2; ++c) {
        const double s = Y.col(c).sum();
        if (s <= 0.0 || s >= static_cast<double>(n)) {
            throw DegenerateCutError("brant: a binary split of the outcome is constant");
        }
    }

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    LogisticFit fits[2];
    Eigen::MatrixXd pi(n, 2);
    for (int c = 0; c < 2; ++c) {
        fits[c] = fit_weighted_logistic(Xt, Y.col(c), ones);
        pi.col(c) = (Xt * fits[c].coef).unaryExpr([](double e) { return expit(e); });
    }

    // Information and cross blocks from the shared fitted probabilities:
    // for j <= l, cov(Z_j, Z_l) = pi_l (1 - pi_j).
    auto weighted_gram = [&](const Eigen::VectorXd& d) {
        return Eigen::MatrixXd(Xt.transpose() * d.asDiagonal() * Xt);
    };
    const Eigen::VectorXd w11 = pi.col(0).array() * (1.0 - pi.col(0).array());
    const Eigen::VectorXd w22 = pi.col(1).array() * (1.0 - pi.col(1).array());
    const Eigen::VectorXd w12 = pi.col(1).array() * (1.0 - pi.col(0).array());

    const Eigen::MatrixXd inv11 = weighted_gram(w11).inverse();
    const Eigen::MatrixXd inv22 = weighted_gram(w22).inverse();
    const Eigen::MatrixXd v12_full = inv11 * weighted_gram(w12) * inv22;

    // Slope sub-blocks (drop the intercept row/column).
    const Eigen::MatrixXd v11 = inv11.block(1, 1, p, p);
    const Eigen::MatrixXd v22 = inv22.block(1, 1, p, p);
    const Eigen::MatrixXd v12 = v12_full.block(1, 1, p, p);

    const Eigen::VectorXd d = fits[0].coef.tail(p) - fits[1].coef.tail(p);
    const Eigen::MatrixXd vd = v11 - v12 - v12.transpose() + v22;

    BrantResult result;
    result.df = static_cast<int>(p);
    result.chi2 = d.dot(vd.ldlt().solve(d));
    if (result.chi2 < 0.0) result.chi2 = 0.0;
    result.pvalue = chi_squared_sf(result.chi2, result.df);
    return result;
}

}  // namespace dwpom
