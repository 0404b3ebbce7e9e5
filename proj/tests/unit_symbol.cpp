#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cks/quadrature.hpp"
#include "cks/symbol.hpp"

using namespace cks;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (double(rng() >> 11) * 0x1p-53);
}

} // namespace

TEST_CASE("gauss rule integrates known integrals") {
    // int_0^1 sqrt(1+s^2) ds = (sqrt(2) + asinh 1) / 2
    const double exact = 0.5 * (std::sqrt(2.0) + std::asinh(1.0));
    const double got = integrate_adaptive(
        [](double s) { return std::sqrt(1.0 + s * s); }, 0.0, 1.0, 1e-12,
        2000);
    CHECK(got == doctest::Approx(exact).epsilon(1e-12));

    const double s2 = integrate_adaptive([](double s) { return std::sin(s); },
                                         0.0, std::numbers::pi, 1e-12, 2000);
    CHECK(s2 == doctest::Approx(2.0).epsilon(1e-11));

    CHECK(integrate_adaptive([](double) { return 1.0; }, 3.0, 3.0, 1e-10,
                             10) == 0.0);
}

TEST_CASE("quadrature runs out of subdivisions on a hostile integrand") {
    // A narrow spike needs more bisections than allowed here.
    auto spike = [](double s) { return 1.0 / (1e-12 + s * s); };
    CHECK_THROWS_AS(integrate_adaptive(spike, -1.0, 1.0, 1e-10, 3),
                    QuadratureNotConverged);
}

TEST_CASE("theta is the drifted quadratic") {
    FlowParams flow(4.0, 2.0);
    FreqPoint p(1.0, 2.0, 3.0);
    CHECK(theta(p, 0.5, flow, +1) == doctest::Approx(26.0));  // 1+(2+2)^2+9
    CHECK(theta(p, 0.5, flow, -1) == doctest::Approx(10.0));  // 1+0+9
    CHECK(theta(p, 0.0, flow, +1) == doctest::Approx(14.0));
}

TEST_CASE("closed form alpha=2 spot values") {
    FlowParams flow(1.0, 2.0);
    // xi=1, eta=zeta=0, sign -1: int_0^1 (1 + s^2) ds = 4/3.
    const double h = accumulated_symbol_alpha2(FreqPoint(1, 0, 0), 0.0, 1.0,
                                               flow, -1);
    CHECK(h == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(green_hat(FreqPoint(1, 0, 0), 1.0, flow, -1) ==
          doctest::Approx(std::exp(-4.0 / 3.0)).epsilon(1e-12));

    CHECK_THROWS_AS(accumulated_symbol_alpha2(FreqPoint(1, 0, 0), 0.0, 1.0,
                                              FlowParams(1.0, 1.5), -1),
                    WrongAlpha);
}

TEST_CASE("quadrature route matches the alpha=2 closed form") {
    std::mt19937_64 rng(7);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        FreqPoint p(uniform(rng, -10, 10), uniform(rng, -10, 10),
                    uniform(rng, -10, 10));
        FlowParams flow(uniform(rng, 0, 100), 2.0);
        const double t = uniform(rng, 0, 10);
        const double quad = accumulated_symbol_quad(p, 0.0, t, flow, -1);
        const double exact = accumulated_symbol_alpha2(p, 0.0, t, flow, -1);
        worst = std::max(worst,
                         std::fabs(quad - exact) / std::max(exact, 1e-30));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("additivity over adjacent intervals") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        FreqPoint p(uniform(rng, -5, 5), uniform(rng, -5, 5),
                    uniform(rng, -5, 5));
        FlowParams flow(uniform(rng, 0, 20), uniform(rng, 1.01, 2.0));
        const double t1 = uniform(rng, 0, 2), t2 = t1 + uniform(rng, 0, 2);
        const double whole = accumulated_symbol(p, 0.0, t2, flow, -1);
        const double parts = accumulated_symbol(p, 0.0, t1, flow, -1) +
                             accumulated_symbol(p, t1, t2, flow, -1);
        CHECK(std::fabs(whole - parts) <= 2e-10 * std::max(whole, 1e-30) +
                                              1e-14);
    }
}

TEST_CASE("monotone in t; green_hat non-increasing") {
    FlowParams flow(3.0, 1.5);
    FreqPoint p(2.0, -1.0, 0.5);
    double prev_h = 0.0, prev_g = 1.0;
    for (int i = 1; i <= 20; ++i) {
        const double t = 0.25 * i;
        const double h = accumulated_symbol(p, 0.0, t, flow, -1);
        const double g = green_hat(p, t, flow, -1);
        CHECK(h >= prev_h);
        CHECK(g <= prev_g + 1e-15);
        prev_h = h;
        prev_g = g;
    }
}

TEST_CASE("shear-shift characteristic") {
    // Shifting eta by sign*A*tau*xi replays the integral tau later.
    std::mt19937_64 rng(13);
    for (int sign : {-1, +1})
        for (int i = 0; i < 50; ++i) {
            const double xi = uniform(rng, -3, 3), eta = uniform(rng, -3, 3),
                         zeta = uniform(rng, -3, 3);
            FlowParams flow(uniform(rng, 0.1, 10), uniform(rng, 1.1, 2.0));
            const double tau = uniform(rng, 0, 2);
            const double t0 = uniform(rng, 0, 1), t1 = t0 + uniform(rng, 0, 2);
            const double shifted = accumulated_symbol(
                FreqPoint(xi, eta + sign * flow.A * tau * xi, zeta), t0, t1,
                flow, sign);
            const double later =
                accumulated_symbol(FreqPoint(xi, eta, zeta), t0 + tau,
                                   t1 + tau, flow, sign);
            CHECK(shifted ==
                  doctest::Approx(later).epsilon(5e-10).scale(1e-30));
        }
}

TEST_CASE("A=0 and xi=0 reduce to a constant symbol") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 50; ++i) {
        const double eta = uniform(rng, -5, 5), zeta = uniform(rng, -5, 5);
        const double alpha = uniform(rng, 1.1, 2.0);
        const double t = uniform(rng, 0.01, 4);

        FlowParams still(0.0, alpha);
        FreqPoint p(uniform(rng, -5, 5), eta, zeta);
        const double k2 = p.xi * p.xi + eta * eta + zeta * zeta;
        CHECK(accumulated_symbol(p, 0.0, t, still, -1) ==
              doctest::Approx(t * std::pow(k2, 0.5 * alpha)).epsilon(1e-12));

        FlowParams sheared(uniform(rng, 0.1, 50), alpha);
        FreqPoint q(0.0, eta, zeta);
        const double q2 = eta * eta + zeta * zeta;
        CHECK(accumulated_symbol(q, 0.0, t, sheared, -1) ==
              doctest::Approx(t * std::pow(q2, 0.5 * alpha)).epsilon(1e-12));
    }
}

TEST_CASE("symbol is even under full frequency reflection") {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 50; ++i) {
        FreqPoint p(uniform(rng, -4, 4), uniform(rng, -4, 4),
                    uniform(rng, -4, 4));
        FlowParams flow(uniform(rng, 0, 10), uniform(rng, 1.1, 2.0));
        const double t = uniform(rng, 0.1, 3);
        const double a = accumulated_symbol(p, 0.0, t, flow, -1);
        const double b = accumulated_symbol(
            FreqPoint(-p.xi, -p.eta, -p.zeta), 0.0, t, flow, -1);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("parameter domains are enforced") {
    CHECK_THROWS_AS(FlowParams(-1.0, 2.0), DomainError);
    CHECK_THROWS_AS(FlowParams(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(FlowParams(1.0, 2.5), DomainError);
    CHECK_THROWS_AS(QuadratureConfig(1e-3), DomainError);
    CHECK_THROWS_AS(QuadratureConfig(1e-10, 0), DomainError);
    CHECK_THROWS_AS(FreqPoint(std::nan(""), 0.0, 0.0), DomainError);
}
