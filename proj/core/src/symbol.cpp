#include "cks/symbol.hpp"

#include <cmath>
#include <vector>

#include "cks/quadrature.hpp"

namespace cks {

namespace {

void check_sign(int shear_sign) {
    if (shear_sign != 1 && shear_sign != -1)
        throw DomainError("shear_sign must be +1 or -1");
}

void check_interval(double t0, double t1) {
    if (!std::isfinite(t0) || !std::isfinite(t1) || t1 < t0)
        throw DomainError("time interval must be finite with t1 >= t0");
}

} // namespace

double theta(const FreqPoint& p, double s, const FlowParams& flow,
             int shear_sign) {
    check_sign(shear_sign);
    const double drift = p.eta + shear_sign * flow.A * s * p.xi;
    return p.xi * p.xi + drift * drift + p.zeta * p.zeta;
}

double accumulated_symbol_alpha2(const FreqPoint& p, double t0, double t1,
                                 const FlowParams& flow, int shear_sign) {
    check_sign(shear_sign);
    check_interval(t0, t1);
    if (flow.alpha != 2.0)
        throw WrongAlpha("closed form requires alpha == 2");
    const double dt = t1 - t0;
    const double c = shear_sign * flow.A * p.xi;
    if (c == 0.0)
        return (p.xi * p.xi + p.eta * p.eta + p.zeta * p.zeta) * dt;
    // d/ds (eta + c s)^3 / (3 c) = (eta + c s)^2
    const double u1 = p.eta + c * t1;
    const double u0 = p.eta + c * t0;
    return (p.xi * p.xi + p.zeta * p.zeta) * dt +
           (u1 * u1 * u1 - u0 * u0 * u0) / (3.0 * c);
}

double accumulated_symbol_quad(const FreqPoint& p, double t0, double t1,
                               const FlowParams& flow, int shear_sign,
                               const QuadratureConfig& q) {
    check_sign(shear_sign);
    check_interval(t0, t1);
    if (t0 == t1) return 0.0;
    const double half_alpha = 0.5 * flow.alpha;
    auto integrand = [&](double s) {
        const double drift = p.eta + shear_sign * flow.A * s * p.xi;
        const double th = p.xi * p.xi + drift * drift + p.zeta * p.zeta;
        return std::pow(th, half_alpha);
    };
    // theta is smooth except where it bottoms out; split there.
    std::vector<double> presplit;
    const double c = shear_sign * flow.A * p.xi;
    if (c != 0.0) {
        const double s_star = -p.eta / c;
        if (s_star > t0 && s_star < t1) presplit.push_back(s_star);
    }
    return integrate_adaptive(integrand, t0, t1, q.rel_tol,
                              q.max_subdivisions, presplit);
}

double accumulated_symbol(const FreqPoint& p, double t0, double t1,
                          const FlowParams& flow, int shear_sign,
                          const QuadratureConfig& q) {
    check_sign(shear_sign);
    check_interval(t0, t1);
    if (t0 == t1) return 0.0;
    if (p.xi == 0.0 || flow.A == 0.0) {
        // theta does not depend on s.
        const double th = theta(p, t0, flow, shear_sign);
        return std::pow(th, 0.5 * flow.alpha) * (t1 - t0);
    }
    if (flow.alpha == 2.0)
        return accumulated_symbol_alpha2(p, t0, t1, flow, shear_sign);
    return accumulated_symbol_quad(p, t0, t1, flow, shear_sign, q);
}

double green_hat(const FreqPoint& p, double t, const FlowParams& flow,
                 int shear_sign, const QuadratureConfig& q) {
    if (!(t >= 0.0))
        throw DomainError("green_hat requires t >= 0");
    return std::exp(-accumulated_symbol(p, 0.0, t, flow, shear_sign, q));
}

} // namespace cks
