#include "dwpom/balancing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dwpom/errors.hpp"
#include "dwpom/math.hpp"

namespace dwpom {

const char* scheme_name(WeightScheme scheme) {
    switch (scheme) {
        case WeightScheme::None_M0: return "m0";
        case WeightScheme::Independence_M1: return "m1";
        case WeightScheme::Ipw_M2: return "m2";
        case WeightScheme::Overlap_M3: return "m3";
        case WeightScheme::AdjustedOverlap_M4: return "m4";
    }
    return "?";
}

std::optional<WeightScheme> parse_scheme(const std::string& name) {
    if (name == "m0") return WeightScheme::None_M0;
    if (name == "m1") return WeightScheme::Independence_M1;
    if (name == "m2") return WeightScheme::Ipw_M2;
    if (name == "m3") return WeightScheme::Overlap_M3;
    if (name == "m4") return WeightScheme::AdjustedOverlap_M4;
    return std::nullopt;
}

double kappa(const LinearPredictors& eta) {
    const double s1 = expit(eta.eta1);
    const double s2 = expit(eta.eta2);
    return s2 * (1.0 - s1) * (1.0 - s2 + s1);
}

AdjustmentFactors adjustment_factors(const PomFit& fit, const DesignRow& row) {
    AdjustmentFactors k;
    k.kappa00 = kappa(linear_predictors(fit, row, 0, 0));
    k.kappa10 = kappa(linear_predictors(fit, row, 1, 0));
    k.kappa01 = kappa(linear_predictors(fit, row, 0, 1));
    k.kappa11 = kappa(linear_predictors(fit, row, 1, 1));
    return k;
}

ConfigWeights weights_for(WeightScheme scheme, const PropensityTable& table,
                          const AdjustmentFactors* kappas) {
    if (scheme == WeightScheme::AdjustedOverlap_M4 && kappas == nullptr) {
        throw MissingKappasError("weights: adjusted overlap scheme requires kappas");
    }
    ConfigWeights w{1.0, 1.0, 1.0, 1.0};
    switch (scheme) {
        case WeightScheme::None_M0:
            break;
        case WeightScheme::Independence_M1: {
            const double ps = table.p_s();
            const double pr = table.p_r();
            for (int as = 0; as < 2; ++as)
                for (int ar = 0; ar < 2; ++ar)
                    w[config_index(as, ar)] =
                        std::abs(as - ps) * std::abs(ar - pr);
            break;
        }
        case WeightScheme::Ipw_M2: {
            const double norm = 1.0 / table.pi00 + 1.0 / table.pi10 +
                                1.0 / table.pi01 + 1.0 / table.pi11;
            for (int as = 0; as < 2; ++as)
                for (int ar = 0; ar < 2; ++ar)
                    w[config_index(as, ar)] = 1.0 / (table.cell(as, ar) * norm);
            break;
        }
        case WeightScheme::Overlap_M3:
        case WeightScheme::AdjustedOverlap_M4: {
            const double prod = table.pi00 * table.pi10 * table.pi01 * table.pi11;
            for (int as = 0; as < 2; ++as)
                for (int ar = 0; ar < 2; ++ar)
                    w[config_index(as, ar)] = prod / table.cell(as, ar);
            if (scheme == WeightScheme::AdjustedOverlap_M4) {
                const double kprod = kappas->kappa00 * kappas->kappa10 *
                                     kappas->kappa01 * kappas->kappa11;
                for (int as = 0; as < 2; ++as)
                    for (int ar = 0; ar < 2; ++ar)
                        w[config_index(as, ar)] *= kprod / kappas->at(as, ar);
            }
            break;
        }
    }
    return w;
}

double check_balancing_criterion(const PropensityTable& table, const ConfigWeights& w,
                                 const AdjustmentFactors* kappas) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double sum = 0.0;
    for (int as = 0; as < 2; ++as) {
        for (int ar = 0; ar < 2; ++ar) {
            double q = table.cell(as, ar) * w[config_index(as, ar)];
            if (kappas != nullptr) q *= kappas->at(as, ar);
            lo = std::min(lo, q);
            hi = std::max(hi, q);
            sum += q;
        }
    }
    return (hi - lo) / (sum / 4.0);
}

}  // namespace dwpom
