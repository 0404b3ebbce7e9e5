#ifndef CKS_PROPAGATOR_HPP
#define CKS_PROPAGATOR_HPP

#include <vector>

#include "cks/frame.hpp"
#include "cks/symbol.hpp"

namespace cks {

// Laboratory wavenumber carried by a frame mode at time t.
FreqPoint effective_wavenumber(const FreqPoint& frame_mode,
                               const ShearFrame& frame, double t);

// Per-mode damping factors exp(-H) of the linear evolution from t0 to t1,
// in the storage order of a SpectralField on this grid. The zero mode gets
// exactly 1.
std::vector<double> propagator_factors(const GridSpec& grid,
                                       const ShearFrame& frame, double t0,
                                       double t1,
                                       const QuadratureConfig& q =
                                           QuadratureConfig());

// Advance the linear part exactly: multiply every coefficient by exp(-H)
// over [state.t, t1] and set state.t = t1. Mass (the zero mode) is
// untouched bit for bit.
void apply_propagator(SimState& state, double t1,
                      const QuadratureConfig& q = QuadratureConfig());

struct RemapResult {
    double dropped_energy; // sum |c|^2 of modes without a lattice slot
    double total_energy;   // sum |c|^2 before the remap
};

// Re-index the frame to t_ref = state.t. Allowed only when the accumulated
// shear shift moves every mode onto the lattice, i.e. A*(t - t_ref) is an
// integer multiple of Lx/Ly (throws RemapOffSchedule beyond 1e-12).
// Modes shifted past the resolved band are dropped and their energy
// reported; nothing wraps around.
RemapResult remap(SimState& state);

// Earliest remap-eligible instant strictly after t for this frame, or
// +infinity when A == 0.
double next_remap_time(const GridSpec& grid, const ShearFrame& frame,
                       double t);

// Laboratory-space value of the field at a point, by direct summation over
// all modes. O(N) per point; meant for spot checks.
double lab_point_value(const SimState& state, double x, double y, double z);

} // namespace cks

#endif
