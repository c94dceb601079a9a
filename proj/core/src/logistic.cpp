#include "dwpom/logistic.hpp"

#include <cmath>
#include <limits>

#include "dwpom/errors.hpp"
#include "dwpom/math.hpp"

namespace dwpom {

namespace {

void validate_inputs(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& w) {
    if (X.rows() != y.size() || X.rows() != w.size()) {
        throw SingularDesignError("logistic: row count mismatch between X, y, w");
    }
    if (X.rows() == 0 || X.cols() == 0) {
        throw SingularDesignError("logistic: empty design");
    }
    double wsum = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (!(w[i] >= 0.0) || !std::isfinite(w[i])) {
            throw SingularDesignError("logistic: weights must be finite and nonnegative");
        }
        wsum += w[i];
    }
    if (wsum <= 0.0) {
        throw SingularDesignError("logistic: weights sum to zero");
    }
}

}  // namespace

double LogisticFit::predict(const Eigen::VectorXd& x) const {
    return expit(coef.dot(x));
}

double logistic_loglik(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& w, const Eigen::VectorXd& coef) {
    const Eigen::VectorXd eta = X * coef;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        // y*eta - log(1+exp(eta)), stable in both tails
        const double e = eta[i];
        const double log1pe = e > 0.0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
        ll += w[i] * (y[i] * e - log1pe);
    }
    return ll;
}

Eigen::VectorXd logistic_score(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const Eigen::VectorXd& w, const Eigen::VectorXd& coef) {
    const Eigen::VectorXd eta = X * coef;
    Eigen::VectorXd resid(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        resid[i] = w[i] * (y[i] - expit(eta[i]));
    }
    return X.transpose() * resid;
}

LogisticFit fit_weighted_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& w, const LogisticOptions& options) {
    validate_inputs(X, y, w);
    const Eigen::Index p = X.cols();

    LogisticFit fit;
    fit.coef = Eigen::VectorXd::Zero(p);

    double loglik = logistic_loglik(X, y, w, fit.coef);
    double prev_grad_norm = std::numeric_limits<double>::infinity();

    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        const Eigen::VectorXd eta = X * fit.coef;
        Eigen::VectorXd resid(X.rows());
        Eigen::VectorXd info_w(X.rows());
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            const double p1 = expit(eta[i]);
            resid[i] = w[i] * (y[i] - p1);
            info_w[i] = w[i] * p1 * (1.0 - p1);
        }
        const Eigen::VectorXd grad = X.transpose() * resid;
        const double grad_norm = grad.lpNorm<Eigen::Infinity>();
        fit.iterations = iter - 1;
        fit.max_grad_norm = grad_norm;

        if (grad_norm <= options.grad_tol) {
            fit.converged = true;
            return fit;
        }
        if (fit.coef.lpNorm<Eigen::Infinity>() > options.separation_coef &&
            grad_norm < prev_grad_norm) {
            fit.separation = true;
            return fit;
        }
        prev_grad_norm = grad_norm;

        const Eigen::MatrixXd info = X.transpose() * info_w.asDiagonal() * X;
        if (iter == 1) {
            Eigen::FullPivLU<Eigen::MatrixXd> lu(info);
            lu.setThreshold(1e-10);
            if (lu.rank() < p) {
                throw SingularDesignError("logistic: weighted information is rank deficient");
            }
        }
        Eigen::VectorXd step = info.ldlt().solve(grad);
        if (!step.allFinite()) {
            throw SingularDesignError("logistic: Newton step not finite");
        }

        double scale = 1.0;
        bool improved = false;
        for (int h = 0; h <= options.max_halvings; ++h) {
            const Eigen::VectorXd cand = fit.coef + scale * step;
            const double ll = logistic_loglik(X, y, w, cand);
            if (std::isfinite(ll) && ll >= loglik) {
                const double rel_change =
                    std::abs(ll - loglik) / (std::abs(loglik) + 1e-300);
                fit.coef = cand;
                loglik = ll;
                improved = true;
                if (rel_change <= options.rel_loglik_tol) {
                    fit.iterations = iter;
                    fit.max_grad_norm =
                        logistic_score(X, y, w, fit.coef).lpNorm<Eigen::Infinity>();
                    fit.converged = true;
                    return fit;
                }
                break;
            }
            scale *= 0.5;
        }
        if (!improved) {
            throw NonConvergenceError("logistic: step halving failed to improve likelihood");
        }
    }
    throw NonConvergenceError("logistic: no convergence after max iterations");
}

}  // namespace dwpom
