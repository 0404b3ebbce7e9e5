#ifndef CKS_QUADRATURE_HPP
#define CKS_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "cks/errors.hpp"

namespace cks {

// Nodes and weights of the 10-point Gauss-Legendre rule on [-1,1],
// computed once at startup by Newton iteration on the Legendre recurrence.
struct GaussRule {
    static constexpr int order = 10;
    std::array<double, order> node;
    std::array<double, order> weight;
};

const GaussRule& gauss_rule();

namespace detail {

template <class F>
double gauss_panel(F&& f, double a, double b) {
    const GaussRule& gl = gauss_rule();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < GaussRule::order; ++i)
        sum += gl.weight[i] * f(mid + half * gl.node[i]);
    return half * sum;
}

} // namespace detail

// Composite Gauss-Legendre integration of f over [a,b] with adaptive
// bisection: a panel is accepted when its bisected refinement agrees with
// the unbisected estimate to rel_tol. presplit lists interior points the
// integrand should be split at up front (e.g. the minimizer of a kink).
// Throws QuadratureNotConverged once max_subdivisions bisections are spent.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol,
                          int max_subdivisions,
                          const std::vector<double>& presplit = {}) {
    if (a == b) return 0.0;

    struct Seg {
        double a, b, coarse;
    };
    std::vector<Seg> stack;
    stack.reserve(64);

    double prev = a;
    for (double p : presplit) {
        if (p > a && p < b) {
            stack.push_back({prev, p, detail::gauss_panel(f, prev, p)});
            prev = p;
        }
    }
    stack.push_back({prev, b, detail::gauss_panel(f, prev, b)});

    double total = 0.0;
    int splits = 0;
    const double width_floor = 1e-14 * (std::fabs(a) + std::fabs(b) + std::fabs(b - a));
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (s.a + s.b);
        const double left = detail::gauss_panel(f, s.a, mid);
        const double right = detail::gauss_panel(f, mid, s.b);
        const double fine = left + right;
        const double err = std::fabs(fine - s.coarse);
        if (err <= rel_tol * std::fabs(fine) || err <= 1e-300 ||
            (s.b - s.a) <= width_floor) {
            total += fine;
            continue;
        }
        if (++splits > max_subdivisions)
            throw QuadratureNotConverged(
                "adaptive Gauss-Legendre exhausted " +
                std::to_string(max_subdivisions) + " subdivisions");
        stack.push_back({s.a, mid, left});
        stack.push_back({mid, s.b, right});
    }
    return total;
}

} // namespace cks

#endif
