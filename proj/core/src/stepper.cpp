#include "cks/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "cks/interaction.hpp"
#include "cks/propagator.hpp"
#include "cks/spectral.hpp"

namespace cks {

const char* outcome_name(StepOutcome o) {
    switch (o) {
        case StepOutcome::ok: return "ok";
        case StepOutcome::blowup_detected: return "blowup_detected";
        case StepOutcome::step_underflow: return "step_underflow";
        case StepOutcome::nonfinite: return "nonfinite";
    }
    return "unknown";
}

void StepConfig::validate() const {
    if (!(dt_max > 0.0) || !(dt_min > 0.0) || dt_max < dt_min)
        throw DomainError("need 0 < dt_min <= dt_max");
    if (!(cfl > 0.0) || !(cfl <= 1.0))
        throw DomainError("cfl must lie in (0,1]");
    if (!(blowup_factor > 1.0))
        throw DomainError("blowup_factor must exceed 1");
    if (lp_monitor != 1.0 && lp_monitor != 2.0 && lp_monitor != 4.0 &&
        !std::isinf(lp_monitor))
        throw DomainError("lp_monitor must be 1, 2, 4 or inf");
}

namespace {

double monitored_value(const TimeSeriesRow& row, double p) {
    if (p == 1.0) return row.l1;
    if (p == 2.0) return row.l2;
    if (p == 4.0) return row.l4;
    return row.linf;
}

void check_finite(const SpectralField& s, double t) {
    for (const auto& c : s.c)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw NonFinite("non-finite coefficient at t = " +
                            std::to_string(t));
}

// Heun step with the first nonlinear stage passed in (null in linear mode).
void step_with(SimState& state, double dt, const StepConfig& cfg,
               const SpectralField* n1) {
    const double t0 = state.t;
    const double t1 = t0 + dt;
    const auto factors =
        propagator_factors(state.n_hat.grid, state.frame, t0, t1, cfg.quad);
    if (n1 == nullptr) {
        for (std::size_t i = 0; i < factors.size(); ++i)
            state.n_hat.c[i] *= factors[i];
        state.t = t1;
        return;
    }
    SpectralField stage(state.n_hat.grid);
    SpectralField pn1(state.n_hat.grid);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        stage.c[i] = factors[i] * (state.n_hat.c[i] + dt * n1->c[i]);
        pn1.c[i] = factors[i] * n1->c[i];
    }
    SpectralField n2 = nonlinear_rhs(stage, state.frame, t1);
    for (std::size_t i = 0; i < factors.size(); ++i)
        state.n_hat.c[i] = stage.c[i] + 0.5 * dt * (n2.c[i] - pn1.c[i]);
    state.t = t1;
    check_finite(state.n_hat, t1);
}

} // namespace

double select_dt(const SimState& state, const StepConfig& cfg, double max_b) {
    cfg.validate();
    const GridSpec& grid = state.n_hat.grid;
    double dx_min = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a)
        dx_min = std::min(dx_min, grid.box[a] / grid.n[a]);
    double dt = std::min(cfg.dt_max,
                         cfg.cfl * dx_min / std::max(max_b, 1e-30));
    dt = std::min(dt, next_remap_time(grid, state.frame, state.t) - state.t);
    if (dt < cfg.dt_min)
        throw StepUnderflow("selected dt " + std::to_string(dt) +
                            " fell below dt_min");
    return dt;
}

void step(SimState& state, double dt, const StepConfig& cfg) {
    cfg.validate();
    if (!(dt > 0.0)) throw DomainError("step needs dt > 0");
    if (cfg.linear_only) {
        step_with(state, dt, cfg, nullptr);
        return;
    }
    SpectralField n1 = nonlinear_rhs(state.n_hat, state.frame, state.t);
    step_with(state, dt, cfg, &n1);
}

std::optional<double> detect_blowup(const TimeSeries& series,
                                    const StepConfig& cfg) {
    if (series.rows.empty()) return std::nullopt;
    const double initial = monitored_value(series.rows.front(), cfg.lp_monitor);
    for (const auto& row : series.rows) {
        const double v = monitored_value(row, cfg.lp_monitor);
        if (!std::isfinite(v) || v > cfg.blowup_factor * initial)
            return row.t;
    }
    return std::nullopt;
}

RunResult run_state(SimState state, const StepConfig& cfg, double T,
                    double record_every,
                    const std::vector<std::pair<double, double>>&
                        fractional_orders,
                    const RecordHook& on_record) {
    cfg.validate();
    if (!(record_every > 0.0)) throw DomainError("record_every must be > 0");
    if (T < state.t) throw DomainError("T must be >= start time");

    RunResult out{TimeSeries{fractional_orders, {}}, std::move(state),
                  StepStatus{}, {}};
    SimState& s = out.state;
    const GridSpec& grid = s.n_hat.grid;

    // A square dealias band loses its sheared corners at every remap; say so
    // once so the caller can pick a taller spectral box in y if that matters.
    if (s.frame.flow.A > 0.0 &&
        grid.n[0] / 3 + grid.n[1] / 3 > grid.n[1] / 2)
        out.warnings.push_back(
            "shear headroom: dealias-corner modes can be dropped at remaps");

    double remap_loss_cum = 0.0;
    bool warned_negative = false;
    auto do_record = [&]() {
        TimeSeriesRow row = record(s, fractional_orders, remap_loss_cum);
        out.series.rows.push_back(row);
        if (on_record) on_record(s, row);
        if (!warned_negative && row.min_value < -1e-3 * row.linf) {
            out.warnings.push_back("density went noticeably negative (min " +
                                   std::to_string(row.min_value) + ")");
            warned_negative = true;
        }
    };
    do_record();
    const double monitor0 =
        monitored_value(out.series.rows.front(), cfg.lp_monitor);

    const double t_start = s.t;
    long rec_idx = 1;
    double next_rec = t_start + record_every;
    double next_remap = next_remap_time(grid, s.frame, s.t);

    try {
        while (s.t < T) {
            std::optional<SpectralField> n1;
            double max_b = 0.0;
            if (!cfg.linear_only) {
                NonlinearEval ev = nonlinear_eval(s.n_hat, s.frame, s.t);
                n1.emplace(std::move(ev.rhs));
                max_b = ev.max_b;
            }
            // select_dt already caps the step at the next remap instant.
            double target = s.t + select_dt(s, cfg, max_b);
            target = std::min({target, next_remap, next_rec, T});
            const bool at_remap = target == next_remap;
            const bool at_record = target == next_rec || target == T;

            step_with(s, target - s.t, cfg, n1 ? &*n1 : nullptr);
            s.t = target; // land exactly on schedule boundaries

            if (at_remap) {
                RemapResult r = remap(s);
                remap_loss_cum +=
                    r.dropped_energy / std::max(r.total_energy, 1e-300);
                next_remap = next_remap_time(grid, s.frame, s.t);
            }
            if (at_record) {
                if (target == next_rec)
                    next_rec = t_start + double(++rec_idx) * record_every;
                do_record();
                const double v =
                    monitored_value(out.series.rows.back(), cfg.lp_monitor);
                if (!std::isfinite(v))
                    throw NonFinite("monitored norm at t = " +
                                    std::to_string(s.t));
                if (v > cfg.blowup_factor * monitor0) {
                    out.status = {StepOutcome::blowup_detected, s.t,
                                  "monitored norm exceeded " +
                                      std::to_string(cfg.blowup_factor) +
                                      "x its initial value"};
                    return out;
                }
            }
        }
        out.status = {StepOutcome::ok, s.t, ""};
    } catch (const StepUnderflow& e) {
        out.status = {StepOutcome::step_underflow, s.t, e.what()};
    } catch (const NonFinite& e) {
        out.status = {StepOutcome::nonfinite, s.t, e.what()};
    }
    return out;
}

RunResult run(const Field& n0, const FlowParams& flow, const StepConfig& cfg,
              double T, double record_every,
              const std::vector<std::pair<double, double>>&
                  fractional_orders,
              const RecordHook& on_record) {
    SimState state{ShearFrame{0.0, flow}, to_spectral(n0), 0.0};
    dealias(state.n_hat);
    RunResult out = run_state(std::move(state), cfg, T, record_every,
                              fractional_orders, on_record);
    double n_min = n0.v.empty() ? 0.0 : n0.v[0];
    for (double v : n0.v) n_min = std::min(n_min, v);
    if (n_min < -1e-12)
        out.warnings.insert(out.warnings.begin(),
                            "initial data has negative values");
    return out;
}

} // namespace cks
