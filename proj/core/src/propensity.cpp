#include "dwpom/propensity.hpp"

#include <algorithm>
#include <cmath>

#include "dwpom/errors.hpp"
#include "dwpom/math.hpp"

namespace dwpom {

namespace {

constexpr double kCellClip = 1e-6;
constexpr double kTauUnitBand = 1e-9;

void check_joint_inputs(double p_s, double p_r, double tau) {
    if (!(p_s > 0.0 && p_s < 1.0) || !(p_r > 0.0 && p_r < 1.0)) {
        throw DomainError("joint propensity: marginals must lie strictly in (0,1)");
    }
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw DomainError("joint propensity: odds ratio must be positive and finite");
    }
}

}  // namespace

double lipsitz_joint(double p_s, double p_r, double tau) {
    check_joint_inputs(p_s, p_r, tau);
    if (std::abs(tau - 1.0) <= kTauUnitBand) {
        return p_s * p_r;
    }
    const double b = 1.0 - (1.0 - tau) * (p_s + p_r);
    const double disc = b * b - 4.0 * tau * (tau - 1.0) * p_s * p_r;
    const double root = std::sqrt(std::max(disc, 0.0));
    // The minus-sqrt root is the only one in [0,1]. Near tau = 1 the direct
    // form cancels, so it is rewritten against its conjugate whenever b >= 0.
    double p11;
    if (b >= 0.0) {
        p11 = 2.0 * tau * p_s * p_r / (b + root);
    } else {
        p11 = (b - root) / (2.0 * (tau - 1.0));
    }
    const double lo = std::max(0.0, p_s + p_r - 1.0);
    const double hi = std::min(p_s, p_r);
    return std::clamp(p11, lo, hi);
}

PropensityTable joint_cells(double p_s, double p_r, double tau) {
    const double p11 = lipsitz_joint(p_s, p_r, tau);
    PropensityTable t;
    t.pi11 = p11;
    t.pi10 = p_s - p11;
    t.pi01 = p_r - p11;
    t.pi00 = 1.0 - p_s - p_r + p11;
    return t;
}

PropensityTable propensity_table(double p_s, double p_r, double tau) {
    PropensityTable t = joint_cells(p_s, p_r, tau);
    t.pi00 = std::clamp(t.pi00, kCellClip, 1.0 - kCellClip);
    t.pi10 = std::clamp(t.pi10, kCellClip, 1.0 - kCellClip);
    t.pi01 = std::clamp(t.pi01, kCellClip, 1.0 - kCellClip);
    t.pi11 = std::clamp(t.pi11, kCellClip, 1.0 - kCellClip);
    const double s = t.pi00 + t.pi10 + t.pi01 + t.pi11;
    t.pi00 /= s;
    t.pi10 /= s;
    t.pi01 /= s;
    t.pi11 /= s;
    return t;
}

double table_odds_ratio(const PropensityTable& table) {
    if (table.pi00 <= 0.0 || table.pi10 <= 0.0 || table.pi01 <= 0.0 ||
        table.pi11 <= 0.0) {
        throw DomainError("table odds ratio: all cells must be positive");
    }
    return (table.pi11 * table.pi00) / (table.pi10 * table.pi01);
}

MarginalPropensityModel fit_marginal_propensity(const Eigen::MatrixXd& Xs,
                                                const Eigen::MatrixXd& Xr,
                                                const Eigen::VectorXi& as,
                                                const Eigen::VectorXi& ar,
                                                Pooling pooling) {
    const Eigen::Index H = Xs.rows();
    if (Xr.rows() != H || as.size() != H || ar.size() != H ||
        Xs.cols() != Xr.cols()) {
        throw SchemaError("marginal propensity: inconsistent input shapes");
    }
    MarginalPropensityModel model;
    model.pooling = pooling;
    const Eigen::VectorXd w1 = Eigen::VectorXd::Ones(H);
    if (pooling == Pooling::Pooled) {
        Eigen::MatrixXd X(2 * H, Xs.cols());
        X.topRows(H) = Xs;
        X.bottomRows(H) = Xr;
        Eigen::VectorXd y(2 * H);
        y.head(H) = as.cast<double>();
        y.tail(H) = ar.cast<double>();
        model.pooled = fit_weighted_logistic(X, y, Eigen::VectorXd::Ones(2 * H));
    } else {
        model.role_s = fit_weighted_logistic(Xs, as.cast<double>(), w1);
        model.role_r = fit_weighted_logistic(Xr, ar.cast<double>(), w1);
    }
    return model;
}

namespace {

double pair_loglik(const Eigen::MatrixXd& Xpair, const Eigen::VectorXi& as,
                   const Eigen::VectorXi& ar, const Eigen::VectorXd& ps,
                   const Eigen::VectorXd& pr, const Eigen::VectorXd& o) {
    const Eigen::Index H = Xpair.rows();
    double ll = 0.0;
    for (Eigen::Index h = 0; h < H; ++h) {
        const double tau = std::exp(o.dot(Xpair.row(h)));
        const PropensityTable t = propensity_table(ps[h], pr[h], tau);
        ll += std::log(t.cell(as[h], ar[h]));
    }
    return ll / static_cast<double>(H);
}

// Mean score assembled from central finite differences of the exact cell
// probabilities in each coordinate of o.
Eigen::VectorXd pair_score(const Eigen::MatrixXd& Xpair, const Eigen::VectorXi& as,
                           const Eigen::VectorXi& ar, const Eigen::VectorXd& ps,
                           const Eigen::VectorXd& pr, const Eigen::VectorXd& o) {
    const Eigen::Index H = Xpair.rows();
    const Eigen::Index m = o.size();
    Eigen::VectorXd score = Eigen::VectorXd::Zero(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double h0 = 1e-6 * std::max(1.0, std::abs(o[j]));
        Eigen::VectorXd op = o, om = o;
        op[j] += h0;
        om[j] -= h0;
        double acc = 0.0;
        for (Eigen::Index h = 0; h < H; ++h) {
            const double tp = std::exp(op.dot(Xpair.row(h)));
            const double tm = std::exp(om.dot(Xpair.row(h)));
            const double cell = propensity_table(ps[h], pr[h],
                                                 std::exp(o.dot(Xpair.row(h))))
                                    .cell(as[h], ar[h]);
            const double dcell = (propensity_table(ps[h], pr[h], tp).cell(as[h], ar[h]) -
                                  propensity_table(ps[h], pr[h], tm).cell(as[h], ar[h])) /
                                 (2.0 * h0);
            acc += dcell / cell;
        }
        score[j] = acc / static_cast<double>(H);
    }
    return score;
}

}  // namespace

OddsRatioModel fit_odds_ratio_model(const Eigen::MatrixXd& Xpair,
                                    const Eigen::VectorXi& as, const Eigen::VectorXi& ar,
                                    const Eigen::VectorXd& ps, const Eigen::VectorXd& pr,
                                    const OddsRatioOptions& options) {
    const Eigen::Index H = Xpair.rows();
    const Eigen::Index m = Xpair.cols();
    if (as.size() != H || ar.size() != H || ps.size() != H || pr.size() != H) {
        throw SchemaError("odds ratio fit: inconsistent input shapes");
    }
    Eigen::Index discordant = 0;
    Eigen::Index concordant = 0;
    for (Eigen::Index h = 0; h < H; ++h) {
        (as[h] != ar[h] ? discordant : concordant)++;
    }
    if (discordant == 0) {
        throw NoDiscordantPairsError("odds ratio fit: no discordant treatment pairs");
    }
    if (concordant == 0) {
        throw NoDiscordantPairsError("odds ratio fit: no concordant treatment pairs");
    }

    OddsRatioModel model;
    model.o = Eigen::VectorXd::Zero(m);
    double loglik = pair_loglik(Xpair, as, ar, ps, pr, model.o);

    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        const Eigen::VectorXd grad = pair_score(Xpair, as, ar, ps, pr, model.o);
        model.iterations = iter - 1;
        if (grad.lpNorm<Eigen::Infinity>() <= options.grad_tol) {
            model.converged = true;
            return model;
        }

        // Hessian by forward differences of the score.
        Eigen::MatrixXd hess(m, m);
        for (Eigen::Index j = 0; j < m; ++j) {
            const double h0 = 1e-4 * std::max(1.0, std::abs(model.o[j]));
            Eigen::VectorXd op = model.o;
            op[j] += h0;
            hess.col(j) = (pair_score(Xpair, as, ar, ps, pr, op) - grad) / h0;
        }
        hess = 0.5 * (hess + hess.transpose().eval());

        Eigen::VectorXd step = hess.ldlt().solve(-grad);
        if (!step.allFinite()) {
            throw SingularDesignError("odds ratio fit: Newton step not finite");
        }

        double scale = 1.0;
        bool improved = false;
        for (int h = 0; h <= options.max_halvings; ++h) {
            const Eigen::VectorXd cand = model.o + scale * step;
            const double ll = pair_loglik(Xpair, as, ar, ps, pr, cand);
            if (std::isfinite(ll) && ll >= loglik) {
                const double rel_change = std::abs(ll - loglik) / (std::abs(loglik) + 1e-300);
                model.o = cand;
                loglik = ll;
                improved = true;
                if (rel_change <= options.rel_loglik_tol) {
                    model.iterations = iter;
                    model.converged = true;
                    return model;
                }
                break;
            }
            scale *= 0.5;
        }
        if (!improved) {
            throw NonConvergenceError("odds ratio fit: step halving failed");
        }
    }
    throw NonConvergenceError("odds ratio fit: no convergence after max iterations");
}

}  // namespace dwpom
