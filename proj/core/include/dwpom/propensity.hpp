#pragma once

#include <Eigen/Dense>

#include "dwpom/logistic.hpp"

namespace dwpom {

// Joint distribution of a household's treatment pair. Cell (a_s, a_r):
// pi11 = P(1,1), pi10 = P(1,0), pi01 = P(0,1), pi00 = P(0,0).
struct PropensityTable {
    double pi00 = 0.0;
    double pi10 = 0.0;
    double pi01 = 0.0;
    double pi11 = 0.0;

    double cell(int a_s, int a_r) const {
        return a_s ? (a_r ? pi11 : pi10) : (a_r ? pi01 : pi00);
    }
    double p_s() const { return pi10 + pi11; }
    double p_r() const { return pi01 + pi11; }
};

enum class Pooling { Pooled, PerRole };

// Marginal treatment propensity: logistic model on individual rows. Under
// pooled fitting both household members share one coefficient vector.
struct MarginalPropensityModel {
    LogisticFit pooled;
    LogisticFit role_s;
    LogisticFit role_r;
    Pooling pooling = Pooling::Pooled;

    double prob_s(const Eigen::VectorXd& x) const {
        return pooling == Pooling::Pooled ? pooled.predict(x) : role_s.predict(x);
    }
    double prob_r(const Eigen::VectorXd& x) const {
        return pooling == Pooling::Pooled ? pooled.predict(x) : role_r.predict(x);
    }
};

// Log-linear pairwise odds ratio between the two members' treatments:
// tau = exp(o' x_pair).
struct OddsRatioModel {
    Eigen::VectorXd o;
    bool converged = false;
    int iterations = 0;

    double tau(const Eigen::VectorXd& x_pair) const { return std::exp(o.dot(x_pair)); }
};

// Joint success probability P(A_s=1, A_r=1) from the marginals and the
// odds ratio. For |tau - 1| <= 1e-9 the independence product is used.
// The result always lies within the Frechet bounds.
double lipsitz_joint(double p_s, double p_r, double tau);

// Exact 2x2 table implied by (p_s, p_r, tau); no positivity clipping.
PropensityTable joint_cells(double p_s, double p_r, double tau);

// Table with each cell clipped to [1e-6, 1 - 1e-6] and renormalized,
// bounding the magnitude of any downstream inverse-probability weight.
PropensityTable propensity_table(double p_s, double p_r, double tau);

// (pi11 pi00) / (pi10 pi01); inverse of lipsitz_joint over exact tables.
double table_odds_ratio(const PropensityTable& table);

// Stacked-individual logistic fit of treatment on covariates. Xs and Xr are
// the per-role design matrices (intercept column included by the caller);
// as, ar are the observed treatments.
MarginalPropensityModel fit_marginal_propensity(const Eigen::MatrixXd& Xs,
                                                const Eigen::MatrixXd& Xr,
                                                const Eigen::VectorXi& as,
                                                const Eigen::VectorXi& ar,
                                                Pooling pooling = Pooling::Pooled);

struct OddsRatioOptions {
    int max_iterations = 100;
    int max_halvings = 30;
    double grad_tol = 1e-7;   // on the mean per-household score
    double rel_loglik_tol = 1e-12;
};

// Two-stage profile fit of the odds-ratio coefficients: the fitted marginal
// probabilities ps, pr are held fixed and o maximizes the bivariate
// Bernoulli likelihood of the observed pairs, with cell probabilities from
// lipsitz_joint. Newton iteration; the score is assembled from central
// finite differences of the exact cell probabilities.
OddsRatioModel fit_odds_ratio_model(const Eigen::MatrixXd& Xpair,
                                    const Eigen::VectorXi& as, const Eigen::VectorXi& ar,
                                    const Eigen::VectorXd& ps, const Eigen::VectorXd& pr,
                                    const OddsRatioOptions& options = {});

}  // namespace dwpom
