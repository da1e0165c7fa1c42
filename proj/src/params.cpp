#include "crossflow/params.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace crossflow {

void require_rates(const ModelParams& p) {
    const double vals[] = {p.alpha, p.gamma0, p.gamma1, p.gamma2};
    for (double v : vals)
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("model rates must be finite and nonnegative");
}

bool validate_cfl(const ModelParams& p) {
    require_rates(p);
    double side = 2.0 * p.gamma0 + p.gamma1 + p.gamma2;
    return p.alpha * std::max(1.0, side) <= 1.0;
}

RegimeCheck validate_entropy_regime(const ModelParams& p) {
    require_rates(p);
    RegimeCheck rc;
    char buf[192];
    bool g0_ok = p.gamma0 > 0.125 && p.gamma0 < 1.0;
    if (!g0_ok) {
        std::snprintf(buf, sizeof buf,
                      "gamma0 = %g lies outside (1/8, 1); entropy dissipation bound unavailable",
                      p.gamma0);
        rc.ok = false;
        rc.warnings.emplace_back(buf);
    }
    double drift = std::abs(p.gamma1 - p.gamma2);
    double bound = std::min(2.0 * p.gamma0 - 0.25, (1.0 - p.gamma0) / 2.0) / 33.0;
    if (!(drift < bound)) {
        std::snprintf(buf, sizeof buf,
                      "|gamma1 - gamma2| = %g is not below min{2*gamma0 - 1/4, (1 - gamma0)/2}/33 = %g; "
                      "at-most-linear entropy growth is not guaranteed",
                      drift, bound);
        rc.ok = false;
        rc.warnings.emplace_back(buf);
    }
    return rc;
}

} // namespace crossflow
