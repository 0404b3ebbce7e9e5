#ifndef CKS_INTERACTION_HPP
#define CKS_INTERACTION_HPP

#include "cks/frame.hpp"
#include "cks/spectral.hpp"

namespace cks {

// Attractive drift B(n) = grad (-Delta)^{-1} n, evaluated with the
// laboratory wavenumbers carried by the frame modes at time t:
// Bhat_i = i K_i / |K|^2 nhat. The zero mode (and the partnerless Nyquist
// rows) map to zero, so B is mean-free and curl-free by construction.
VectorField attractive_field(const SpectralField& n_hat,
                             const ShearFrame& frame, double t);

// N(n) = -div(n B(n)): products formed pointwise in physical space, the
// divergence taken in laboratory wavenumbers, dealiased once afterwards.
// The zero mode of the result is exactly zero.
SpectralField nonlinear_rhs(const SpectralField& n_hat,
                            const ShearFrame& frame, double t);

// Same as nonlinear_rhs but also reports max |B| and the min/max of the
// physical-space density, which the step-size control and diagnostics
// would otherwise recompute.
struct NonlinearEval {
    SpectralField rhs;
    double max_b;
    double min_n;
    double max_n;
};
NonlinearEval nonlinear_eval(const SpectralField& n_hat,
                             const ShearFrame& frame, double t);

} // namespace cks

#endif
