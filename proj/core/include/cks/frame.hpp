#ifndef CKS_FRAME_HPP
#define CKS_FRAME_HPP

#include "cks/field.hpp"
#include "cks/flow.hpp"

namespace cks {

// Shear-following frame: coefficients are stored against the mode lattice
// that coincided with the laboratory lattice at time t_ref. A frame mode
// (xi, eta, zeta) corresponds at time t to the laboratory plane wave with
// wavenumber (xi, eta - A*(t - t_ref)*xi, zeta).
struct ShearFrame {
    double t_ref;
    FlowParams flow;
};

// Complete solver state: frame, spectral coefficients, current time.
struct SimState {
    ShearFrame frame;
    SpectralField n_hat;
    double t;
};

} // namespace cks

#endif
