#include "cks/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace cks {

namespace {

// Evaluate P_m and P_{m-1} at x via the three-term recurrence.
void legendre(int m, double x, double& pm, double& pm1) {
    double p0 = 1.0, p1 = x;
    for (int k = 1; k < m; ++k) {
        double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
    }
    pm = p1;
    pm1 = p0;
}

GaussRule build_rule() {
    GaussRule r{};
    const int m = GaussRule::order;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton on P_m.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double pm = 0.0, pm1 = 0.0, dpm = 0.0;
        for (int it = 0; it < 100; ++it) {
            legendre(m, x, pm, pm1);
            dpm = m * (x * pm - pm1) / (x * x - 1.0);
            double dx = pm / dpm;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        legendre(m, x, pm, pm1);
        dpm = m * (x * pm - pm1) / (x * x - 1.0);
        r.node[i] = x;
        r.weight[i] = 2.0 / ((1.0 - x * x) * dpm * dpm);
    }
    return r;
}

} // namespace

const GaussRule& gauss_rule() {
    static const GaussRule rule = build_rule();
    return rule;
}

} // namespace cks
