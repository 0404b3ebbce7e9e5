#ifndef CKS_DIAGNOSTICS_HPP
#define CKS_DIAGNOSTICS_HPP

#include <string>
#include <utility>
#include <vector>

#include "cks/frame.hpp"
#include "cks/status.hpp"

namespace cks {

struct TimeSeriesRow {
    double t;
    double mass;
    double min_value;
    double l1, l2, l4, linf;
    std::vector<double> fractional; // one per configured (s, p) pair
    double remap_loss;              // cumulative dropped energy fraction
    double max_b;
    // Transverse spread relative to uniform saturation (not a CSV column;
    // consumed by boundary_window_end).
    double spread_yz = 0.0;
};

struct TimeSeries {
    // Orders (s, p) of the recorded fractional norms || |k|^s n ||_p.
    std::vector<std::pair<double, double>> fractional_orders;
    std::vector<TimeSeriesRow> rows;
};

// Evaluate one row of diagnostics. Norms are computed on the frame samples;
// at fixed y the frame differs from the laboratory field by an x-translation,
// so every L^p norm, the mass and the extrema agree exactly with their
// laboratory values. Fractional norms apply |K|^s with the laboratory
// wavenumbers carried by the frame modes at state.t.
TimeSeriesRow record(const SimState& state,
                     const std::vector<std::pair<double, double>>&
                         fractional_orders,
                     double remap_loss_cum);

// Decay exponent of Theorem-style L^p bounds:
//   -(3/alpha + 1) (1 - 1/p) - deriv_order / alpha.
// p in [1, inf], alpha in (1, 2], deriv_order >= 0 (may be fractional).
double theoretical_rate(double p, double alpha, double deriv_order);

enum class FitAbscissa { one_plus_t, plain_t };

struct DecayFit {
    double t_lo, t_hi;   // window actually used
    int samples;         // >= 5
    double slope;        // d log(value) / d log(abscissa)
    double intercept;
    double r2;
};

// Least-squares power-law fit of a series column over t in [t_lo, t_hi].
// Columns: t is fitted against "mass", "min", "l1", "l2", "l4", "linf",
// "max_b" or "fracI" with I the 0-based position in fractional_orders
// ("frac0" is the first). Throws NonPositiveData if any value in the window
// is <= 0 and DomainError when fewer than 5 samples fall inside the window.
DecayFit fit_decay(const TimeSeries& series, const std::string& column,
                   double t_lo, double t_hi,
                   FitAbscissa abscissa = FitAbscissa::one_plus_t);

// Shared fit core: log-log least squares over raw positive (abscissa,
// value) pairs. Same error contract as fit_decay; t_lo/t_hi in the result
// are the abscissa extremes.
DecayFit fit_pairs(const std::vector<std::pair<double, double>>& samples);

// Everything suppression_verdict needs to know about one finished run.
struct RunSummary {
    GridSpec grid;
    double alpha;
    double A;
    double lp_monitor;
    double initial_mass;
    double initial_monitor; // monitored norm at t = 0
    StepStatus status;
    TimeSeries series;
};

struct SuppressionVerdict {
    bool suppressed;
    std::string reason;
};

// Compare an unsheared run against a sheared run of the same experiment.
// Suppressed means: the A = 0 run triggered the blow-up detector while the
// sheared run completed and ended below half its initial monitored norm.
// Throws MismatchedExperiments unless grid, alpha, monitor and initial data
// agree.
SuppressionVerdict suppression_verdict(const RunSummary& unsheared,
                                       const RunSummary& sheared);

// End of the window on which a finite box imitates whole space: the time
// at which the transverse (y, z) mass-weighted spread reaches half of its
// uniform-distribution saturation value. The x direction is shear-periodic
// by construction and not consulted. Returns the last series time if the
// spread never gets there.
double boundary_window_end(const TimeSeries& series, double t_default);

// Mass-weighted mean periodic distance of |f| from its circular mean along
// one axis (0, 1 or 2); saturates at box/4 for a uniform field.
double axis_spread(const Field& f, int axis);

} // namespace cks

#endif
