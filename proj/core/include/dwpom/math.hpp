#pragma once

#include <cmath>

namespace dwpom {

// Overflow-safe inverse logit. Saturates cleanly for |x| beyond ~745.
inline double expit(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

inline double logit(double p) { return std::log(p / (1.0 - p)); }

// Upper tail probability of the chi-square distribution with df degrees
// of freedom. Implemented in math.cpp on top of Boost.Math.
double chi_squared_sf(double x, int df);

}  // namespace dwpom
