#ifndef CKS_FLOW_HPP
#define CKS_FLOW_HPP

#include <cmath>

#include "cks/errors.hpp"

namespace cks {

// Background Couette flow (A*y, 0, 0) and dissipation order alpha.
// alpha is the exponent of the fractional Laplacian (-Delta)^(alpha/2),
// restricted to (1, 2]; A >= 0 is the shear rate.
struct FlowParams {
    double A;
    double alpha;

    FlowParams(double A_, double alpha_) : A(A_), alpha(alpha_) {
        if (!(A >= 0.0) || !std::isfinite(A))
            throw DomainError("shear rate A must be finite and >= 0");
        if (!(alpha > 1.0) || !(alpha <= 2.0))
            throw DomainError("alpha must lie in (1,2]");
    }
};

// One point in frequency space. Components are physical wavenumbers.
struct FreqPoint {
    double xi;   // streamwise
    double eta;  // shearwise
    double zeta; // spanwise

    FreqPoint(double xi_, double eta_, double zeta_)
        : xi(xi_), eta(eta_), zeta(zeta_) {
        if (!std::isfinite(xi) || !std::isfinite(eta) || !std::isfinite(zeta))
            throw DomainError("frequency components must be finite");
    }
};

// Controls for the adaptive quadrature used by the time-integrated symbol.
struct QuadratureConfig {
    double rel_tol;
    int max_subdivisions;

    explicit QuadratureConfig(double rel_tol_ = 1e-10, int max_subdivisions_ = 2000)
        : rel_tol(rel_tol_), max_subdivisions(max_subdivisions_) {
        if (!(rel_tol > 0.0) || !(rel_tol <= 1e-4))
            throw DomainError("rel_tol must lie in (0, 1e-4]");
        if (max_subdivisions < 1)
            throw DomainError("max_subdivisions must be >= 1");
    }
};

} // namespace cks

#endif
