#include "dwpom/math.hpp"

#include <boost/math/distributions/chi_squared.hpp>

namespace dwpom {

double chi_squared_sf(double x, int df) {
    if (x <= 0.0) return 1.0;
    boost::math::chi_squared dist(static_cast<double>(df));
    return boost::math::cdf(boost::math::complement(dist, x));
}

}  // namespace dwpom
