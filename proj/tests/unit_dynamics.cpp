#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "cks/init.hpp"
#include "cks/interaction.hpp"
#include "cks/propagator.hpp"
#include "cks/spectral.hpp"
#include "cks/stepper.hpp"

using namespace cks;

namespace {

const double pi = std::numbers::pi;

GridSpec cube(int n) {
    return GridSpec({n, n, n}, {2 * pi, 2 * pi, 2 * pi});
}

Field cosine_x(const GridSpec& g, int m) {
    Field f(g);
    for (int ix = 0; ix < g.n[0]; ++ix) {
        const double c = std::cos(m * g.coordinate(0, ix));
        for (int iy = 0; iy < g.n[1]; ++iy)
            for (int iz = 0; iz < g.n[2]; ++iz) f.at(ix, iy, iz) = c;
    }
    return f;
}

double max_abs_diff(const Field& a, const Field& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i)
        worst = std::max(worst, std::fabs(a.v[i] - b.v[i]));
    return worst;
}

} // namespace

TEST_CASE("drift of a single cosine is the classic -sin") {
    GridSpec g = cube(16);
    ShearFrame frame{0.0, FlowParams(0.0, 2.0)};
    SpectralField n_hat = to_spectral(cosine_x(g, 1));
    VectorField b = attractive_field(n_hat, frame, 0.0);

    Field want(g);
    for (int ix = 0; ix < 16; ++ix) {
        const double s = -std::sin(g.coordinate(0, ix));
        for (int iy = 0; iy < 16; ++iy)
            for (int iz = 0; iz < 16; ++iz) want.at(ix, iy, iz) = s;
    }
    CHECK(max_abs_diff(b.x, want) <= 1e-12);
    CHECK(lp_norm(b.y, std::numeric_limits<double>::infinity()) <= 1e-13);
    CHECK(lp_norm(b.z, std::numeric_limits<double>::infinity()) <= 1e-13);
}

TEST_CASE("kernel is homogeneous of degree -1 in the wavenumber") {
    GridSpec g = cube(16);
    ShearFrame frame{0.0, FlowParams(0.0, 2.0)};
    for (int m : {1, 2, 5}) {
        SpectralField n_hat(g);
        n_hat.mode(0, m, 0) = {0.0, -0.5};
        n_hat.mode(0, -m, 0) = {0.0, 0.5};
        VectorField b = attractive_field(n_hat, frame, 0.0);
        SpectralField by = to_spectral(b.y);
        CHECK(std::abs(by.mode(0, m, 0)) ==
              doctest::Approx(0.5 / m).epsilon(1e-12));
    }
}

TEST_CASE("B is linear in the density") {
    GridSpec g = cube(12);
    ShearFrame frame{0.0, FlowParams(2.0, 1.5)};
    SpectralField n_hat = to_spectral(
        gaussian_bump(g, 1.0, 0.6, {pi, pi, pi}));
    SpectralField scaled = n_hat;
    for (auto& c : scaled.c) c *= 3.0;
    VectorField b1 = attractive_field(n_hat, frame, 0.4);
    VectorField b3 = attractive_field(scaled, frame, 0.4);
    for (std::size_t i = 0; i < b1.x.v.size(); ++i) {
        CHECK(b3.x.v[i] == doctest::Approx(3.0 * b1.x.v[i]).epsilon(1e-12));
        CHECK(b3.y.v[i] == doctest::Approx(3.0 * b1.y.v[i]).epsilon(1e-12));
    }
}

TEST_CASE("nonlinear term of cos x is cos 2x") {
    GridSpec g = cube(16);
    ShearFrame frame{0.0, FlowParams(0.0, 2.0)};
    SpectralField n_hat = to_spectral(cosine_x(g, 1));
    SpectralField rhs = nonlinear_rhs(n_hat, frame, 0.0);

    Field got = to_physical(rhs);
    CHECK(max_abs_diff(got, cosine_x(g, 2)) <= 1e-12);
}

TEST_CASE("nonlinear zero mode vanishes identically") {
    GridSpec g = cube(12);
    ShearFrame frame{0.0, FlowParams(3.0, 1.5)};
    SpectralField n_hat = to_spectral(random_modes(g, 2.0, 10, 4));
    SpectralField rhs = nonlinear_rhs(n_hat, frame, 0.7);
    CHECK(rhs.at(0, 0, 0).real() == 0.0);
    CHECK(rhs.at(0, 0, 0).imag() == 0.0);
}

TEST_CASE("nonlinear_eval repeats nonlinear_rhs and reports extrema") {
    GridSpec g = cube(12);
    ShearFrame frame{0.0, FlowParams(1.0, 2.0)};
    SpectralField n_hat = to_spectral(gaussian_bump(g, 2.0, 0.7, {pi, pi, pi}));
    NonlinearEval ev = nonlinear_eval(n_hat, frame, 0.0);
    SpectralField rhs = nonlinear_rhs(n_hat, frame, 0.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < rhs.c.size(); ++i)
        worst = std::max(worst, std::abs(rhs.c[i] - ev.rhs.c[i]));
    CHECK(worst <= 1e-14);

    VectorField b = attractive_field(n_hat, frame, 0.0);
    CHECK(ev.max_b == doctest::Approx(max_magnitude(b)).epsilon(1e-12));
    Field f = to_physical(n_hat);
    double mn = f.v[0], mx = f.v[0];
    for (double v : f.v) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    CHECK(ev.min_n == doctest::Approx(mn).epsilon(1e-12));
    CHECK(ev.max_n == doctest::Approx(mx).epsilon(1e-12));
}

TEST_CASE("step size control follows the advective formula") {
    GridSpec g = cube(64);
    StepConfig cfg;
    cfg.dt_max = 1.0;
    cfg.cfl = 0.5;
    SimState s{ShearFrame{0.0, FlowParams(0.0, 2.0)}, SpectralField(g), 0.0};

    // dt = min(1, 0.5 * (2 pi / 64) / 10) ~ 4.909e-3
    CHECK(select_dt(s, cfg, 10.0) ==
          doctest::Approx(0.5 * (2 * pi / 64) / 10.0).epsilon(1e-12));
    // B = 0: capped by dt_max (A = 0 has no remap deadline).
    CHECK(select_dt(s, cfg, 0.0) == doctest::Approx(1.0));
    // Halving the field: the advective candidate doubles.
    CHECK(select_dt(s, cfg, 5.0) ==
          doctest::Approx(2 * select_dt(s, cfg, 10.0)).epsilon(1e-12));

    // The remap deadline caps the step when shear is on.
    SimState sheared{ShearFrame{0.0, FlowParams(2.0, 2.0)}, SpectralField(g),
                     0.4};
    CHECK(select_dt(sheared, cfg, 0.0) == doctest::Approx(0.1));

    cfg.dt_min = 1e-3;
    CHECK_THROWS_AS(select_dt(s, cfg, 1e6), StepUnderflow);
}

TEST_CASE("constant density is a fixed point and keeps its mass bits") {
    GridSpec g = cube(12);
    SpectralField s(g);
    s.mode(0, 0, 0) = {0.7, 0.0};
    SimState state{ShearFrame{0.0, FlowParams(1.0, 1.5)}, std::move(s), 0.0};
    StepConfig cfg;
    const double bits = state.n_hat.at(0, 0, 0).real();
    for (int i = 0; i < 5; ++i) step(state, 0.05, cfg);
    CHECK(state.n_hat.at(0, 0, 0).real() == bits);
    for (int mx = 0; mx < 12; ++mx)
        for (int my = 0; my < 12; ++my)
            for (int mz = 0; mz < 12; ++mz)
                if (mx || my || mz)
                    CHECK(std::abs(state.n_hat.at(mx, my, mz)) == 0.0);
}

TEST_CASE("mass is conserved through steps and remaps") {
    GridSpec g = cube(24);
    FlowParams flow(3.0, 1.5);
    Field n0 = gaussian_bump(g, 2.0, 0.6, {pi, pi, pi});
    StepConfig cfg;
    cfg.dt_max = 5e-3;
    RunResult res = run(n0, flow, cfg, 0.5, 0.05);
    REQUIRE(res.status.outcome == StepOutcome::ok);
    const double m0 = res.series.rows.front().mass;
    for (const auto& row : res.series.rows)
        CHECK(std::fabs(row.mass - m0) <= 1e-10 * std::fabs(m0));
    // that horizon crosses the remap at t = 1/3
    CHECK(res.series.rows.back().t == doctest::Approx(0.5));
}

TEST_CASE("heun self-convergence is second order") {
    GridSpec g = cube(16);
    FlowParams flow(1.0, 2.0);
    Field n0 = gaussian_bump(g, 4.0, 0.8, {pi, pi, pi});
    SpectralField base = to_spectral(n0);
    dealias(base);
    StepConfig cfg;

    const double T = 0.25;
    auto advance = [&](int steps) {
        SimState s{ShearFrame{0.0, flow}, base, 0.0};
        const double dt = T / steps;
        for (int i = 0; i < steps; ++i) step(s, dt, cfg);
        return s.n_hat;
    };
    SpectralField ref = advance(256);
    auto err = [&](int steps) {
        SpectralField got = advance(steps);
        double e2 = 0.0, r2 = 0.0;
        for (std::size_t i = 0; i < ref.c.size(); ++i) {
            e2 += std::norm(got.c[i] - ref.c[i]);
            r2 += std::norm(ref.c[i]);
        }
        return std::sqrt(e2 / r2);
    };
    const double e8 = err(8), e16 = err(16), e32 = err(32);
    const double order = std::log2(e16 / e32);
    CHECK(std::log2(e8 / e16) > 1.7);
    CHECK(order >= 1.9);
    CHECK(order <= 2.6);
}

TEST_CASE("blow-up detector semantics") {
    StepConfig cfg;
    cfg.blowup_factor = 10.0;
    cfg.lp_monitor = 4.0;
    TimeSeries s;
    auto row = [](double t, double l4) {
        TimeSeriesRow r{};
        r.t = t;
        r.l4 = l4;
        return r;
    };
    s.rows = {row(0, 1.0), row(1, 0.5), row(2, 0.25)};
    CHECK(!detect_blowup(s, cfg).has_value());

    s.rows = {row(0, 1.0), row(1, 5.0), row(2, 11.0), row(3, 50.0)};
    auto hit = detect_blowup(s, cfg);
    REQUIRE(hit.has_value());
    CHECK(*hit == doctest::Approx(2.0));
}

TEST_CASE("runs stay put on zero data and report blow-up as a status") {
    GridSpec g = cube(16);
    StepConfig cfg;
    RunResult zero =
        run(Field(g), FlowParams(2.0, 1.5), cfg, 0.3, 0.1);
    CHECK(zero.status.outcome == StepOutcome::ok);
    for (const auto& row : zero.series.rows) {
        CHECK(row.l2 == 0.0);
        CHECK(row.mass == 0.0);
    }

    // A supercritical bump must trip the detector, not throw.
    GridSpec gb({32, 32, 32}, {4 * pi, 4 * pi, 4 * pi});
    Field hot = gaussian_bump(gb, 80.0, 0.5, {2 * pi, 2 * pi, 2 * pi});
    StepConfig hot_cfg;
    hot_cfg.blowup_factor = 2.0;
    RunResult res = run(hot, FlowParams(0.0, 1.5), hot_cfg, 5.0, 0.01);
    CHECK(res.status.outcome == StepOutcome::blowup_detected);
    CHECK(res.status.t < 5.0);
    CHECK(res.series.rows.back().l4 >=
          2.0 * res.series.rows.front().l4 * (1 - 1e-9));
}

TEST_CASE("linear-only run equals the exact propagator") {
    GridSpec g = cube(16);
    FlowParams flow(4.0, 1.5);
    Field n0 = gaussian_bump(g, 1.5, 0.7, {pi, pi, pi});
    StepConfig cfg;
    cfg.linear_only = true;
    cfg.dt_max = 0.02;  // force many steps and one remap (t = 0.25)
    RunResult res = run(n0, flow, cfg, 0.4, 0.1);
    REQUIRE(res.status.outcome == StepOutcome::ok);

    SpectralField want = to_spectral(n0);
    dealias(want);
    SimState direct{ShearFrame{0.0, flow}, std::move(want), 0.0};
    apply_propagator(direct, 0.25);
    remap(direct);
    apply_propagator(direct, 0.4);

    double worst = 0.0;
    for (std::size_t i = 0; i < direct.n_hat.c.size(); ++i) {
        const double mag = std::abs(direct.n_hat.c[i]);
        if (mag < 1e-13) continue;
        worst = std::max(
            worst, std::abs(direct.n_hat.c[i] - res.state.n_hat.c[i]) / mag);
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("negative initial data warns but still runs") {
    GridSpec g = cube(12);
    Field f(g);
    for (std::size_t i = 0; i < f.v.size(); ++i)
        f.v[i] = (i % 2 == 0) ? 1.0 : -0.2;
    StepConfig cfg;
    RunResult res = run(f, FlowParams(0.0, 2.0), cfg, 0.05, 0.05);
    CHECK(res.status.outcome == StepOutcome::ok);
    REQUIRE(!res.warnings.empty());
    CHECK(res.warnings.front().find("negative") != std::string::npos);
}
