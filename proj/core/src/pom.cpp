#include "dwpom/pom.hpp"

#include <cmath>
#include <limits>

#include "dwpom/errors.hpp"
#include "dwpom/math.hpp"

namespace dwpom {

Eigen::MatrixXd slope_design(const PomDesign& d) {
    const Eigen::Index H = d.households();
    Eigen::MatrixXd Z(H, d.n_slopes());
    Eigen::Index c = 0;
    if (d.beta_X.cols() > 0) {
        Z.middleCols(c, d.beta_X.cols()) = d.beta_X;
        c += d.beta_X.cols();
    }
    for (Eigen::Index j = 0; j < d.xi_X.cols(); ++j, ++c) {
        Z.col(c) = d.xi_X.col(j).cwiseProduct(d.a_s.cast<double>());
    }
    for (Eigen::Index j = 0; j < d.psi_X.cols(); ++j, ++c) {
        Z.col(c) = d.psi_X.col(j).cwiseProduct(d.a_r.cast<double>());
    }
    const Eigen::VectorXd both = (d.a_s.array() * d.a_r.array()).cast<double>();
    for (Eigen::Index j = 0; j < d.phi_X.cols(); ++j, ++c) {
        Z.col(c) = d.phi_X.col(j).cwiseProduct(both);
    }
    return Z;
}

namespace {

struct EtaDerivs {
    double loglik = 0.0;
    double g1 = 0.0, g2 = 0.0;          // d loglik / d eta_c
    double h11 = 0.0, h12 = 0.0, h22 = 0.0;  // second derivatives
};

// Per-household derivatives of log P(U=u) with respect to (eta1, eta2).
EtaDerivs eta_derivs(int u, double eta1, double eta2) {
    EtaDerivs out;
    const double s1 = expit(eta1);
    const double s2 = expit(eta2);
    const double d1 = s1 * (1.0 - s1);
    const double d2 = s2 * (1.0 - s2);
    constexpr double tiny = 1e-300;
    switch (u) {
        case 1: {
            out.loglik = std::log(std::max(s1, tiny));
            out.g1 = 1.0 - s1;
            out.h11 = -d1;
            break;
        }
        case 2: {
            const double D = std::max(s2 - s1, tiny);
            out.loglik = std::log(D);
            out.g1 = -d1 / D;
            out.g2 = d2 / D;
            out.h11 = -d1 * (1.0 - 2.0 * s1) / D - d1 * d1 / (D * D);
            out.h22 = d2 * (1.0 - 2.0 * s2) / D - d2 * d2 / (D * D);
            out.h12 = d1 * d2 / (D * D);
            break;
        }
        case 3: {
            out.loglik = std::log(std::max(1.0 - s2, tiny));
            out.g2 = -s2;
            out.h22 = -d2;
            break;
        }
        default:
            throw DegenerateOutcomeError("pom: outcome must be 1, 2 or 3");
    }
    return out;
}

struct Objective {
    double loglik = 0.0;
    Eigen::VectorXd grad;    // natural parameters (zeta1, zeta2, slopes)
    Eigen::MatrixXd hess;
};

Objective evaluate(const Eigen::MatrixXd& Z, const Eigen::VectorXi& u,
                   const Eigen::VectorXd& w, double zeta1, double zeta2,
                   const Eigen::VectorXd& slopes, bool want_hessian) {
    const Eigen::Index H = Z.rows();
    const Eigen::Index p = Z.cols();
    Objective obj;
    obj.grad = Eigen::VectorXd::Zero(2 + p);
    if (want_hessian) obj.hess = Eigen::MatrixXd::Zero(2 + p, 2 + p);

    const Eigen::VectorXd t = Z * slopes;
    Eigen::VectorXd slope_g = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd zw1 = Eigen::VectorXd::Zero(H);  // weights for zeta1-slope cross terms
    Eigen::VectorXd zw2 = Eigen::VectorXd::Zero(H);
    Eigen::VectorXd zws = Eigen::VectorXd::Zero(H);  // weights for slope-slope terms

    for (Eigen::Index h = 0; h < H; ++h) {
        if (w[h] == 0.0) continue;
        const EtaDerivs d = eta_derivs(u[h], zeta1 - t[h], zeta2 - t[h]);
        obj.loglik += w[h] * d.loglik;
        obj.grad[0] += w[h] * d.g1;
        obj.grad[1] += w[h] * d.g2;
        const double gsum = d.g1 + d.g2;
        slope_g -= w[h] * gsum * Z.row(h).transpose();
        if (want_hessian) {
            obj.hess(0, 0) += w[h] * d.h11;
            obj.hess(0, 1) += w[h] * d.h12;
            obj.hess(1, 1) += w[h] * d.h22;
            zw1[h] = -w[h] * (d.h11 + d.h12);
            zw2[h] = -w[h] * (d.h12 + d.h22);
            zws[h] = w[h] * (d.h11 + 2.0 * d.h12 + d.h22);
        }
    }
    obj.grad.tail(p) = slope_g;

    if (want_hessian) {
        obj.hess(1, 0) = obj.hess(0, 1);
        const Eigen::VectorXd cross1 = Z.transpose() * zw1;
        const Eigen::VectorXd cross2 = Z.transpose() * zw2;
        obj.hess.block(0, 2, 1, p) = cross1.transpose();
        obj.hess.block(1, 2, 1, p) = cross2.transpose();
        obj.hess.block(2, 0, p, 1) = cross1;
        obj.hess.block(2, 1, p, 1) = cross2;
        obj.hess.block(2, 2, p, p) = Z.transpose() * zws.asDiagonal() * Z;
    }
    return obj;
}

void unpack(const Eigen::VectorXd& params, const PomDesign& d, PomFit& fit) {
    fit.zeta1 = params[0];
    fit.zeta2 = params[1];
    Eigen::Index c = 2;
    fit.beta = params.segment(c, d.beta_X.cols());
    c += d.beta_X.cols();
    fit.xi = params.segment(c, d.xi_X.cols());
    c += d.xi_X.cols();
    fit.psi = params.segment(c, d.psi_X.cols());
    c += d.psi_X.cols();
    fit.phi = params.segment(c, d.phi_X.cols());
}

}  // namespace

DesignRow PomDesign::row(Eigen::Index h) const {
    DesignRow r;
    r.beta = beta_X.row(h);
    r.xi = xi_X.row(h);
    r.psi = psi_X.row(h);
    r.phi = phi_X.row(h);
    r.a_s = a_s[h];
    r.a_r = a_r[h];
    return r;
}

LinearPredictors linear_predictors(const PomFit& fit, const DesignRow& row,
                                   int a_s, int a_r) {
    double t = 0.0;
    if (fit.beta.size() > 0) t += fit.beta.dot(row.beta);
    if (a_s) t += fit.xi.dot(row.xi);
    if (a_r) t += fit.psi.dot(row.psi);
    if (a_s && a_r) t += fit.phi.dot(row.phi);
    return {fit.zeta1 - t, fit.zeta2 - t};
}

CategoryProbs category_probs(const LinearPredictors& eta) {
    const double c1 = expit(eta.eta1);
    const double c2 = expit(eta.eta2);
    return {c1, c2 - c1, 1.0 - c2};
}

double pom_loglik(const PomDesign& design, const Eigen::VectorXi& u,
                  const Eigen::VectorXd& w, const Eigen::VectorXd& params) {
    const Eigen::MatrixXd Z = slope_design(design);
    return evaluate(Z, u, w, params[0], params[1], params.tail(Z.cols()), false).loglik;
}

Eigen::VectorXd pom_score(const PomDesign& design, const Eigen::VectorXi& u,
                          const Eigen::VectorXd& w, const Eigen::VectorXd& params) {
    const Eigen::MatrixXd Z = slope_design(design);
    return evaluate(Z, u, w, params[0], params[1], params.tail(Z.cols()), false).grad;
}

Eigen::VectorXd pack_params(const PomFit& fit) {
    Eigen::VectorXd params(2 + fit.beta.size() + fit.xi.size() + fit.psi.size() +
                           fit.phi.size());
    params[0] = fit.zeta1;
    params[1] = fit.zeta2;
    Eigen::Index c = 2;
    params.segment(c, fit.beta.size()) = fit.beta;
    c += fit.beta.size();
    params.segment(c, fit.xi.size()) = fit.xi;
    c += fit.xi.size();
    params.segment(c, fit.psi.size()) = fit.psi;
    c += fit.psi.size();
    params.segment(c, fit.phi.size()) = fit.phi;
    return params;
}

PomFit fit_weighted_pom(const PomDesign& design, const Eigen::VectorXi& u,
                        const Eigen::VectorXd& w, const PomOptions& options) {
    const Eigen::Index H = design.households();
    const Eigen::Index p = design.n_slopes();
    if (u.size() != H || w.size() != H) {
        throw DegenerateOutcomeError("pom: row count mismatch between design, u, w");
    }

    double mass1 = 0.0, mass2 = 0.0, mass3 = 0.0;
    for (Eigen::Index h = 0; h < H; ++h) {
        if (!(w[h] >= 0.0) || !std::isfinite(w[h])) {
            throw DegenerateOutcomeError("pom: weights must be finite and nonnegative");
        }
        if (u[h] == 1) mass1 += w[h];
        else if (u[h] == 2) mass2 += w[h];
        else if (u[h] == 3) mass3 += w[h];
        else throw DegenerateOutcomeError("pom: outcome must be 1, 2 or 3");
    }
    if (mass1 <= 0.0 || mass2 <= 0.0 || mass3 <= 0.0) {
        throw DegenerateOutcomeError("pom: a category has zero weighted mass");
    }

    const Eigen::MatrixXd Z = slope_design(design);
    const double total = mass1 + mass2 + mass3;

    // Internal parameters: (zeta1, delta, slopes) with zeta2 = zeta1 + exp(delta).
    // Start at the weighted empirical cumulative logits with zero slopes.
    const double z1_0 = logit(mass1 / total);
    const double z2_0 = logit((mass1 + mass2) / total);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(2 + p);
    theta[0] = z1_0;
    theta[1] = std::log(z2_0 - z1_0);

    auto natural = [&](const Eigen::VectorXd& th) {
        Eigen::VectorXd nat = th;
        nat[1] = th[0] + std::exp(th[1]);
        return nat;
    };

    PomFit fit;
    Eigen::VectorXd nat = natural(theta);
    Objective obj = evaluate(Z, u, w, nat[0], nat[1], nat.tail(p), true);
    double prev_grad_norm = std::numeric_limits<double>::infinity();

    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        const double grad_norm = obj.grad.lpNorm<Eigen::Infinity>();
        fit.iterations = iter - 1;
        fit.max_grad_norm = grad_norm;
        if (grad_norm <= options.grad_tol) {
            fit.converged = true;
            break;
        }
        if (nat.tail(p).lpNorm<Eigen::Infinity>() > options.separation_coef &&
            grad_norm < prev_grad_norm) {
            fit.separation = true;
            break;
        }
        prev_grad_norm = grad_norm;

        // Chain rule into the (zeta1, delta, slopes) parameterization.
        const double egap = std::exp(theta[1]);
        Eigen::VectorXd grad_int = obj.grad;
        grad_int[0] = obj.grad[0] + obj.grad[1];
        grad_int[1] = obj.grad[1] * egap;

        Eigen::MatrixXd J = Eigen::MatrixXd::Identity(2 + p, 2 + p);
        J(1, 0) = 1.0;
        J(1, 1) = egap;
        Eigen::MatrixXd hess_int = J.transpose() * obj.hess * J;
        hess_int(1, 1) += obj.grad[1] * egap;

        if (iter == 1) {
            Eigen::FullPivLU<Eigen::MatrixXd> lu(hess_int);
            lu.setThreshold(1e-10);
            if (lu.rank() < 2 + p) {
                throw SingularDesignError("pom: weighted information is rank deficient");
            }
        }
        Eigen::VectorXd step = hess_int.ldlt().solve(-grad_int);
        if (!step.allFinite()) {
            throw SingularDesignError("pom: Newton step not finite");
        }

        double scale = 1.0;
        bool improved = false;
        for (int h = 0; h <= options.max_halvings; ++h) {
            const Eigen::VectorXd cand = theta + scale * step;
            const Eigen::VectorXd cand_nat = natural(cand);
            const Objective cand_obj =
                evaluate(Z, u, w, cand_nat[0], cand_nat[1], cand_nat.tail(p), true);
            if (std::isfinite(cand_obj.loglik) && cand_obj.loglik >= obj.loglik) {
                const double rel_change = std::abs(cand_obj.loglik - obj.loglik) /
                                          (std::abs(obj.loglik) + 1e-300);
                theta = cand;
                nat = cand_nat;
                obj = cand_obj;
                improved = true;
                if (rel_change <= options.rel_loglik_tol) {
                    fit.iterations = iter;
                    fit.max_grad_norm = obj.grad.lpNorm<Eigen::Infinity>();
                    fit.converged = true;
                    unpack(nat, design, fit);
                    return fit;
                }
                break;
            }
            scale *= 0.5;
        }
        if (!improved) {
            throw NonConvergenceError("pom: step halving failed to improve likelihood");
        }
        if (iter == options.max_iterations) {
            throw NonConvergenceError("pom: no convergence after max iterations");
        }
    }

    unpack(nat, design, fit);
    return fit;
}

}  // namespace dwpom
