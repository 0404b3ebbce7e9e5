#include "cks/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cks/interaction.hpp"
#include "cks/spectral.hpp"

namespace cks {

double axis_spread(const Field& f, int axis) {
    if (axis < 0 || axis > 2) throw DomainError("axis must be 0, 1 or 2");
    const GridSpec& g = f.grid;
    const double L = g.box[axis];
    // Mass-weighted circular mean along the axis, then the mean periodic
    // distance from it.
    const auto& n = g.n;
    double cs = 0.0, sn = 0.0, wsum = 0.0;
    std::vector<double> marginal(n[axis], 0.0);
    for (int ix = 0; ix < n[0]; ++ix)
        for (int iy = 0; iy < n[1]; ++iy)
            for (int iz = 0; iz < n[2]; ++iz) {
                const int idx = axis == 0 ? ix : axis == 1 ? iy : iz;
                marginal[idx] += std::fabs(f.at(ix, iy, iz));
            }
    for (int i = 0; i < n[axis]; ++i) {
        const double ang = 2.0 * std::numbers::pi * i / n[axis];
        cs += marginal[i] * std::cos(ang);
        sn += marginal[i] * std::sin(ang);
        wsum += marginal[i];
    }
    if (wsum <= 0.0) return 0.0;
    const double center =
        std::fmod(std::atan2(sn, cs) / (2.0 * std::numbers::pi) + 1.0, 1.0) *
        L;
    double spread = 0.0;
    for (int i = 0; i < n[axis]; ++i) {
        double d = std::fabs(g.coordinate(axis, i) - center);
        d = std::min(d, L - d);
        spread += marginal[i] * d;
    }
    return spread / wsum;
}

TimeSeriesRow record(const SimState& state,
                     const std::vector<std::pair<double, double>>&
                         fractional_orders,
                     double remap_loss_cum) {
    TimeSeriesRow row{};
    row.t = state.t;
    row.remap_loss = remap_loss_cum;

    const Field f = to_physical(state.n_hat);
    row.mass = mass(f);
    row.min_value = *std::min_element(f.v.begin(), f.v.end());
    row.l1 = lp_norm(f, 1.0);
    row.l2 = lp_norm(f, 2.0);
    row.l4 = lp_norm(f, 4.0);
    row.linf = lp_norm(f, std::numeric_limits<double>::infinity());

    // Fractional norms use the laboratory wavenumbers of the frame modes.
    const double sigma =
        state.frame.flow.A * (state.t - state.frame.t_ref);
    for (const auto& [s_ord, p_ord] : fractional_orders) {
        if (!(s_ord >= 0.0)) throw DomainError("fractional order must be >= 0");
        SpectralField weighted = state.n_hat;
        apply_multiplier(weighted, [s_ord, sigma](int, int, int, double kx,
                                                  double ky, double kz) {
            const double ky_eff = ky - sigma * kx;
            const double k2 = kx * kx + ky_eff * ky_eff + kz * kz;
            return std::complex<double>(std::pow(k2, 0.5 * s_ord), 0.0);
        });
        row.fractional.push_back(lp_norm(to_physical(weighted), p_ord));
    }

    const VectorField b = attractive_field(state.n_hat, state.frame, state.t);
    row.max_b = max_magnitude(b);

    // Transverse spread relative to the uniform-distribution saturation L/4.
    const double sy = axis_spread(f, 1) / (state.n_hat.grid.box[1] / 4.0);
    const double sz = axis_spread(f, 2) / (state.n_hat.grid.box[2] / 4.0);
    row.spread_yz = 0.5 * (sy + sz);
    return row;
}

double theoretical_rate(double p, double alpha, double deriv_order) {
    if (!(p >= 1.0)) throw DomainError("p must be >= 1");
    if (!(alpha > 1.0) || !(alpha <= 2.0))
        throw DomainError("alpha must lie in (1,2]");
    if (!(deriv_order >= 0.0))
        throw DomainError("derivative order must be >= 0");
    const double one_minus = std::isinf(p) ? 1.0 : 1.0 - 1.0 / p;
    return -(3.0 / alpha + 1.0) * one_minus - deriv_order / alpha;
}

namespace {

double column_value(const TimeSeries& series, const TimeSeriesRow& row,
                    const std::string& column) {
    if (column == "mass") return row.mass;
    if (column == "min") return row.min_value;
    if (column == "l1") return row.l1;
    if (column == "l2") return row.l2;
    if (column == "l4") return row.l4;
    if (column == "linf") return row.linf;
    if (column == "max_b") return row.max_b;
    if (column.rfind("frac", 0) == 0) {
        const std::size_t i = std::stoul(column.substr(4));
        if (i >= series.fractional_orders.size())
            throw DomainError("no fractional norm " + column);
        return row.fractional[i];
    }
    throw DomainError("unknown series column " + column);
}

} // namespace

DecayFit fit_pairs(const std::vector<std::pair<double, double>>& samples) {
    std::vector<double> xs, ys;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& [x, v] : samples) {
        if (!(v > 0.0))
            throw NonPositiveData("fit value is not positive at abscissa " +
                                  std::to_string(x));
        if (!(x > 0.0))
            throw DomainError("log-log fit needs positive abscissae");
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        xs.push_back(std::log(x));
        ys.push_back(std::log(v));
    }
    const int m = int(xs.size());
    if (m < 5) throw DomainError("fit window holds fewer than 5 samples");

    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < m; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < m; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) throw DomainError("fit window has no abscissa spread");
    DecayFit fit{};
    fit.t_lo = lo;
    fit.t_hi = hi;
    fit.samples = m;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (int i = 0; i < m; ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
    }
    // Constant data leaves syy at rounding level; report a perfect flat fit
    // rather than the 0/0 it would otherwise produce.
    const double flat_floor = 1e-28 * m * std::max(1.0, my * my);
    fit.r2 = syy <= flat_floor ? 1.0 : 1.0 - ss_res / syy;
    return fit;
}

DecayFit fit_decay(const TimeSeries& series, const std::string& column,
                   double t_lo, double t_hi, FitAbscissa abscissa) {
    std::vector<std::pair<double, double>> pairs;
    for (const auto& row : series.rows) {
        if (row.t < t_lo || row.t > t_hi) continue;
        const double v = column_value(series, row, column);
        if (!(v > 0.0))
            throw NonPositiveData("column " + column +
                                  " is not positive at t = " +
                                  std::to_string(row.t));
        const double x =
            abscissa == FitAbscissa::one_plus_t ? 1.0 + row.t : row.t;
        pairs.emplace_back(x, v);
    }
    if (int(pairs.size()) < 5)
        throw DomainError("fit window holds fewer than 5 samples");
    DecayFit fit = fit_pairs(pairs);
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    return fit;
}

SuppressionVerdict suppression_verdict(const RunSummary& unsheared,
                                       const RunSummary& sheared) {
    auto close = [](double a, double b) {
        return std::fabs(a - b) <= 1e-12 * std::max({1.0, std::fabs(a),
                                                     std::fabs(b)});
    };
    if (!(unsheared.grid == sheared.grid))
        throw MismatchedExperiments("grids differ");
    if (unsheared.alpha != sheared.alpha)
        throw MismatchedExperiments("alpha differs");
    if (unsheared.lp_monitor != sheared.lp_monitor)
        throw MismatchedExperiments("monitored norms differ");
    if (!close(unsheared.initial_mass, sheared.initial_mass) ||
        !close(unsheared.initial_monitor, sheared.initial_monitor))
        throw MismatchedExperiments("initial data differs");
    if (unsheared.A != 0.0)
        throw MismatchedExperiments("first run must have A == 0");

    SuppressionVerdict v{};
    if (unsheared.status.outcome != StepOutcome::blowup_detected) {
        v.suppressed = false;
        v.reason = "unsheared run did not blow up (status " +
                   std::string(outcome_name(unsheared.status.outcome)) + ")";
        return v;
    }
    if (sheared.status.outcome != StepOutcome::ok) {
        v.suppressed = false;
        v.reason = "sheared run ended with status " +
                   std::string(outcome_name(sheared.status.outcome)) +
                   " at t = " + std::to_string(sheared.status.t);
        return v;
    }
    const auto& rows = sheared.series.rows;
    double final_mon = 0.0;
    if (!rows.empty()) {
        const auto& last = rows.back();
        final_mon = sheared.lp_monitor == 1.0   ? last.l1
                    : sheared.lp_monitor == 2.0 ? last.l2
                    : sheared.lp_monitor == 4.0 ? last.l4
                                                : last.linf;
    }
    if (final_mon > 0.5 * sheared.initial_monitor) {
        v.suppressed = false;
        v.reason = "sheared run completed but only decayed to " +
                   std::to_string(final_mon / sheared.initial_monitor) +
                   " of its initial monitored norm";
        return v;
    }
    v.suppressed = true;
    v.reason = "unsheared run blew up at t = " +
               std::to_string(unsheared.status.t) +
               "; sheared run completed and decayed below half its initial "
               "monitored norm";
    return v;
}

double boundary_window_end(const TimeSeries& series, double t_default) {
    for (const auto& row : series.rows)
        if (row.spread_yz >= 0.5) return row.t;
    return series.rows.empty() ? t_default : series.rows.back().t;
}

} // namespace cks
