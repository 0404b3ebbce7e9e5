#ifndef CKS_SYMBOL_HPP
#define CKS_SYMBOL_HPP

#include "cks/flow.hpp"

namespace cks {

// Instantaneous dissipation symbol along a shear characteristic:
//   theta(p, s) = xi^2 + (eta + shear_sign*A*s*xi)^2 + zeta^2.
// shear_sign selects the orientation of the frequency drift; the moving
// frame used by the solver takes -1, the stationary-frame representation
// takes +1.
double theta(const FreqPoint& p, double s, const FlowParams& flow,
             int shear_sign);

// Time-integrated symbol H(p; t0, t1) = integral of theta(p,s)^(alpha/2)
// over s in [t0, t1]. Uses exact fast paths (theta constant in s when
// xi == 0 or A == 0; polynomial antiderivative when alpha == 2) and
// adaptive Gauss-Legendre quadrature otherwise, pre-split at the
// minimizer of theta.
double accumulated_symbol(const FreqPoint& p, double t0, double t1,
                          const FlowParams& flow, int shear_sign,
                          const QuadratureConfig& q = QuadratureConfig());

// The same integral forced through the adaptive quadrature with no
// closed-form shortcut. Public so the two routes can be cross-checked.
double accumulated_symbol_quad(const FreqPoint& p, double t0, double t1,
                               const FlowParams& flow, int shear_sign,
                               const QuadratureConfig& q = QuadratureConfig());

// Closed form of H at alpha == 2. Throws WrongAlpha for any other alpha.
double accumulated_symbol_alpha2(const FreqPoint& p, double t0, double t1,
                                 const FlowParams& flow, int shear_sign);

// Frequency-space Green's function factor exp(-H(p; 0, t)).
double green_hat(const FreqPoint& p, double t, const FlowParams& flow,
                 int shear_sign,
                 const QuadratureConfig& q = QuadratureConfig());

} // namespace cks

#endif
