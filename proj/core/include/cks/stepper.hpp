#ifndef CKS_STEPPER_HPP
#define CKS_STEPPER_HPP

#include <functional>
#include <optional>

#include "cks/diagnostics.hpp"
#include "cks/frame.hpp"

namespace cks {

struct StepConfig {
    double dt_max = 1e-2;
    double cfl = 0.4;       // advective step fraction, in (0, 1]
    double dt_min = 1e-9;
    double blowup_factor = 10.0; // detector threshold multiple, > 1
    double lp_monitor = 4.0;     // p of the monitored norm: 1, 2, 4 or inf
    bool linear_only = false;
    QuadratureConfig quad{};

    void validate() const;
};

// Largest admissible step from the current state:
//   min(dt_max, cfl * dx_min / max(|B|, eps), time to the next remap).
// Throws StepUnderflow when the result falls below dt_min.
double select_dt(const SimState& state, const StepConfig& cfg, double max_b);

// One step of the exponential Heun scheme over [state.t, state.t + dt]:
//   a      = P (n + dt N(n, t))
//   n_new  = a + dt/2 (N(a, t+dt) - P N(n, t))
// with P the exact linear propagator over the step. The zero mode is
// preserved bit for bit. Throws NonFinite if any coefficient degenerates.
void step(SimState& state, double dt, const StepConfig& cfg);

// First time at which the monitored norm exceeds blowup_factor times its
// initial value, if any.
std::optional<double> detect_blowup(const TimeSeries& series,
                                    const StepConfig& cfg);

struct RunResult {
    TimeSeries series;
    SimState state;
    StepStatus status;
    std::vector<std::string> warnings;
};

using RecordHook =
    std::function<void(const SimState&, const TimeSeriesRow&)>;

// Drive the simulation from state.t to T, recording every record_every time
// units (plus the first and last instants), remapping the frame at every
// shear-aligned instant, and stopping early with the appropriate status on
// blow-up detection, step underflow or non-finite data. Numerical blow-up
// is reported through the status, never thrown.
RunResult run_state(SimState state, const StepConfig& cfg, double T,
                    double record_every,
                    const std::vector<std::pair<double, double>>&
                        fractional_orders = {{0.4, 2.0}},
                    const RecordHook& on_record = nullptr);

// Same, starting at t = 0 from physical initial data (dealiased once).
// Warns (does not reject) when the initial minimum is significantly
// negative.
RunResult run(const Field& n0, const FlowParams& flow, const StepConfig& cfg,
              double T, double record_every,
              const std::vector<std::pair<double, double>>&
                  fractional_orders = {{0.4, 2.0}},
              const RecordHook& on_record = nullptr);

} // namespace cks

#endif
