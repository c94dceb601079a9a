#pragma once

#include <array>
#include <optional>

#include "dwpom/pom.hpp"
#include "dwpom/propensity.hpp"

namespace dwpom {

enum class WeightScheme { None_M0, Independence_M1, Ipw_M2, Overlap_M3, AdjustedOverlap_M4 };

const char* scheme_name(WeightScheme scheme);
std::optional<WeightScheme> parse_scheme(const std::string& name);

// Adjustment factors kappa(a_s, a_r, x) for the four treatment
// configurations of one household, each in (0,1).
struct AdjustmentFactors {
    double kappa00 = 0.0;
    double kappa10 = 0.0;
    double kappa01 = 0.0;
    double kappa11 = 0.0;

    double at(int a_s, int a_r) const {
        return a_s ? (a_r ? kappa11 : kappa10) : (a_r ? kappa01 : kappa00);
    }
};

// Nonlinearity adjustment factor of the cumulative-logit link:
//   expit(eta2) [1 - expit(eta1)] [1 - expit(eta2) + expit(eta1)],
// identically the product over categories of [1 - P(U = c)].
double kappa(const LinearPredictors& eta);

AdjustmentFactors adjustment_factors(const PomFit& fit, const DesignRow& row);

// Weights for the four configurations, ordered (0,0), (1,0), (0,1), (1,1).
using ConfigWeights = std::array<double, 4>;

inline int config_index(int a_s, int a_r) { return a_s + 2 * a_r; }

// Balancing weights for one household under the given scheme. kappas are
// required exactly when scheme == AdjustedOverlap_M4.
ConfigWeights weights_for(WeightScheme scheme, const PropensityTable& table,
                          const AdjustmentFactors* kappas = nullptr);

// Max relative spread of pi^a * w(a) (* kappa(a) when provided) over the
// four configurations; zero for weights satisfying the balancing criterion.
double check_balancing_criterion(const PropensityTable& table, const ConfigWeights& w,
                                 const AdjustmentFactors* kappas = nullptr);

}  // namespace dwpom
