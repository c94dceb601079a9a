#include "dwpom/wpom.hpp"

#include <cassert>
#include <cmath>

#include "dwpom/errors.hpp"
#include "dwpom/rng.hpp"

namespace dwpom {

namespace {

// Likelihood weights for the observed configurations, rescaled to mean one
// for conditioning (the fit is invariant to the scale).
Eigen::VectorXd observed_weights(const std::vector<ConfigWeights>& all,
                                 const Eigen::VectorXi& a_s, const Eigen::VectorXi& a_r) {
    const Eigen::Index H = a_s.size();
    Eigen::VectorXd w(H);
    for (Eigen::Index h = 0; h < H; ++h) {
        w[h] = all[static_cast<std::size_t>(h)][config_index(a_s[h], a_r[h])];
    }
    const double mean = w.mean();
    if (mean > 0.0) w /= mean;
    return w;
}

std::vector<PropensityTable> fitted_tables(const StageInputs& in, WeightScheme scheme) {
    const Eigen::Index H = in.design.households();
    const MarginalPropensityModel marginal = fit_marginal_propensity(
        in.prop_Xs, in.prop_Xr, in.design.a_s, in.design.a_r);

    Eigen::VectorXd ps(H), pr(H);
    for (Eigen::Index h = 0; h < H; ++h) {
        ps[h] = marginal.prob_s(in.prop_Xs.row(h));
        pr[h] = marginal.prob_r(in.prop_Xr.row(h));
    }

    std::vector<PropensityTable> tables(static_cast<std::size_t>(H));
    if (scheme == WeightScheme::Independence_M1) {
        for (Eigen::Index h = 0; h < H; ++h) {
            tables[static_cast<std::size_t>(h)] = propensity_table(ps[h], pr[h], 1.0);
        }
        return tables;
    }
    const OddsRatioModel assoc =
        fit_odds_ratio_model(in.or_X, in.design.a_s, in.design.a_r, ps, pr);
    for (Eigen::Index h = 0; h < H; ++h) {
        tables[static_cast<std::size_t>(h)] =
            propensity_table(ps[h], pr[h], assoc.tau(in.or_X.row(h)));
    }
    return tables;
}

}  // namespace

WpomResult wpom_fit(const StageInputs& in, const Eigen::VectorXi& u, WeightScheme scheme) {
    const Eigen::Index H = in.design.households();
    WpomResult result;
    result.scheme = scheme;

    if (scheme == WeightScheme::None_M0) {
        const Eigen::VectorXd w = Eigen::VectorXd::Ones(H);
        result.step1_fit = fit_weighted_pom(in.design, u, w);
        result.final_fit = result.step1_fit;
        result.per_household_weights = w;
        return result;
    }

    const std::vector<PropensityTable> tables = fitted_tables(in, scheme);

    // The adjusted scheme starts from plain overlap weights; the adjustment
    // factors need the first-pass estimates.
    const WeightScheme step1_scheme = scheme == WeightScheme::AdjustedOverlap_M4
                                          ? WeightScheme::Overlap_M3
                                          : scheme;
    std::vector<ConfigWeights> weights(static_cast<std::size_t>(H));
    for (Eigen::Index h = 0; h < H; ++h) {
        weights[static_cast<std::size_t>(h)] =
            weights_for(step1_scheme, tables[static_cast<std::size_t>(h)]);
    }
    Eigen::VectorXd w = observed_weights(weights, in.design.a_s, in.design.a_r);
    result.step1_fit = fit_weighted_pom(in.design, u, w);

    if (scheme != WeightScheme::AdjustedOverlap_M4) {
        result.final_fit = result.step1_fit;
        result.per_household_weights = w;
        return result;
    }

    for (Eigen::Index h = 0; h < H; ++h) {
        const AdjustmentFactors k =
            adjustment_factors(result.step1_fit, in.design.row(h));
        weights[static_cast<std::size_t>(h)] =
            weights_for(WeightScheme::AdjustedOverlap_M4,
                        tables[static_cast<std::size_t>(h)], &k);
        assert(check_balancing_criterion(tables[static_cast<std::size_t>(h)],
                                         weights[static_cast<std::size_t>(h)],
                                         &k) < 1e-10);
    }
    w = observed_weights(weights, in.design.a_s, in.design.a_r);
    result.final_fit = fit_weighted_pom(in.design, u, w);
    result.per_household_weights = w;
    return result;
}

StageInputs subset_inputs(const StageInputs& in, const std::vector<int>& rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    StageInputs out;
    out.design.beta_X.resize(n, in.design.beta_X.cols());
    out.design.xi_X.resize(n, in.design.xi_X.cols());
    out.design.psi_X.resize(n, in.design.psi_X.cols());
    out.design.phi_X.resize(n, in.design.phi_X.cols());
    out.design.a_s.resize(n);
    out.design.a_r.resize(n);
    out.prop_Xs.resize(n, in.prop_Xs.cols());
    out.prop_Xr.resize(n, in.prop_Xr.cols());
    out.or_X.resize(n, in.or_X.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto r = static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)]);
        out.design.beta_X.row(i) = in.design.beta_X.row(r);
        out.design.xi_X.row(i) = in.design.xi_X.row(r);
        out.design.psi_X.row(i) = in.design.psi_X.row(r);
        out.design.phi_X.row(i) = in.design.phi_X.row(r);
        out.design.a_s[i] = in.design.a_s[r];
        out.design.a_r[i] = in.design.a_r[r];
        out.prop_Xs.row(i) = in.prop_Xs.row(r);
        out.prop_Xr.row(i) = in.prop_Xr.row(r);
        out.or_X.row(i) = in.or_X.row(r);
    }
    return out;
}

namespace {

CvWpomResult cv_impl(const StageInputs& in, const Eigen::VectorXi& u, WeightScheme scheme,
                     int k_folds, const std::vector<int>& fold_of) {
    const Eigen::Index H = in.design.households();
    CvWpomResult result;
    Eigen::MatrixXd params;
    for (int k = 0; k < k_folds; ++k) {
        std::vector<int> train;
        train.reserve(static_cast<std::size_t>(H));
        for (Eigen::Index h = 0; h < H; ++h) {
            if (fold_of[static_cast<std::size_t>(h)] != k) {
                train.push_back(static_cast<int>(h));
            }
        }
        if (train.empty() || train.size() == static_cast<std::size_t>(H)) {
            throw FoldDegenerateError("cv: fold " + std::to_string(k) +
                                      " leaves an empty or full training set");
        }
        const StageInputs sub = subset_inputs(in, train);
        Eigen::VectorXi u_sub(static_cast<Eigen::Index>(train.size()));
        for (std::size_t i = 0; i < train.size(); ++i) {
            u_sub[static_cast<Eigen::Index>(i)] = u[train[i]];
        }
        try {
            const WpomResult fit = wpom_fit(sub, u_sub, scheme);
            result.fold_fits.push_back(fit.final_fit);
        } catch (const Error& e) {
            throw FoldDegenerateError("cv: fold " + std::to_string(k) +
                                      " failed: " + e.what());
        }
        const Eigen::VectorXd packed = pack_params(result.fold_fits.back());
        if (params.size() == 0) params.resize(packed.size(), k_folds);
        params.col(k) = packed;
    }

    const Eigen::VectorXd mean = params.rowwise().mean();
    Eigen::VectorXd sd = Eigen::VectorXd::Zero(params.rows());
    if (k_folds > 1) {
        for (Eigen::Index j = 0; j < params.rows(); ++j) {
            const double m = mean[j];
            double acc = 0.0;
            for (int k = 0; k < k_folds; ++k) acc += (params(j, k) - m) * (params(j, k) - m);
            sd[j] = std::sqrt(acc / static_cast<double>(k_folds - 1));
        }
    }
    result.fold_sd = sd;

    PomFit avg = result.fold_fits.front();
    avg.zeta1 = mean[0];
    avg.zeta2 = mean[1];
    Eigen::Index c = 2;
    avg.beta = mean.segment(c, avg.beta.size());
    c += avg.beta.size();
    avg.xi = mean.segment(c, avg.xi.size());
    c += avg.xi.size();
    avg.psi = mean.segment(c, avg.psi.size());
    c += avg.psi.size();
    avg.phi = mean.segment(c, avg.phi.size());
    for (const PomFit& f : result.fold_fits) avg.converged = avg.converged && f.converged;
    result.averaged = avg;
    return result;
}

}  // namespace

CvWpomResult cv_wpom(const StageInputs& in, const Eigen::VectorXi& u, WeightScheme scheme,
                     int k_folds, std::uint64_t seed) {
    const Eigen::Index H = in.design.households();
    if (k_folds < 2 || static_cast<Eigen::Index>(k_folds) > H) {
        throw FoldDegenerateError("cv: fold count must lie in [2, households]");
    }
    Rng rng = Rng::stream(seed, 0x666f6c64ULL);
    const std::vector<int> perm = rng.permutation(static_cast<int>(H));
    std::vector<int> fold_of(static_cast<std::size_t>(H));
    for (Eigen::Index h = 0; h < H; ++h) {
        fold_of[static_cast<std::size_t>(perm[static_cast<std::size_t>(h)])] =
            static_cast<int>(h % k_folds);
    }
    return cv_impl(in, u, scheme, k_folds, fold_of);
}

CvWpomResult cv_wpom_with_folds(const StageInputs& in, const Eigen::VectorXi& u,
                                WeightScheme scheme, int k_folds,
                                const std::vector<int>& fold_of) {
    if (fold_of.size() != static_cast<std::size_t>(in.design.households())) {
        throw FoldDegenerateError("cv: fold assignment length mismatch");
    }
    if (k_folds < 2) {
        throw FoldDegenerateError("cv: fold count must be at least 2");
    }
    return cv_impl(in, u, scheme, k_folds, fold_of);
}

UnawareFit interference_unaware_fit(const Dataset& data, const UnawareSpec& spec) {
    const std::string a_s = "a" + std::to_string(spec.stage) + "_s";
    const std::string a_r = "a" + std::to_string(spec.stage) + "_r";
    const Eigen::VectorXi u = data.int_col("u");
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(data.rows());

    auto role_fit = [&](const std::vector<std::string>& beta_cols,
                        const std::vector<std::string>& blip_cols,
                        const std::string& a_col) {
        PomDesign d;
        d.beta_X = select_columns(data, beta_cols);
        d.xi_X = select_columns(data, blip_cols);
        d.psi_X.resize(data.rows(), 0);
        d.phi_X.resize(data.rows(), 0);
        d.a_s = data.int_col(a_col);
        d.a_r = Eigen::VectorXi::Zero(data.rows());
        return fit_weighted_pom(d, u, ones);
    };
    UnawareFit fit;
    fit.fit_s = role_fit(spec.beta_cols_s, spec.blip_cols_s, a_s);
    fit.fit_r = role_fit(spec.beta_cols_r, spec.blip_cols_r, a_r);
    return fit;
}

std::vector<TreatmentConfig> unaware_decide(const UnawareFit& fit, const Dataset& data,
                                            const UnawareSpec& spec) {
    const Eigen::MatrixXd xs = select_columns(data, spec.blip_cols_s);
    const Eigen::MatrixXd xr = select_columns(data, spec.blip_cols_r);
    std::vector<TreatmentConfig> configs(static_cast<std::size_t>(data.rows()));
    for (Eigen::Index h = 0; h < data.rows(); ++h) {
        TreatmentConfig c;
        c.a_s = fit.fit_s.xi.dot(xs.row(h)) > 0.0 ? 1 : 0;
        c.a_r = fit.fit_r.xi.dot(xr.row(h)) > 0.0 ? 1 : 0;
        configs[static_cast<std::size_t>(h)] = c;
    }
    return configs;
}

}  // namespace dwpom
