#ifndef CKS_SPECTRAL_HPP
#define CKS_SPECTRAL_HPP

#include <complex>
#include <functional>

#include "cks/field.hpp"

namespace cks {

// Forward transform: c_k = (1/N) sum_j f_j exp(-i k.x_j), so the zero
// coefficient is the mean value and mass(f) == volume * c_0 exactly.
SpectralField to_spectral(const Field& f);

// Inverse transform: f_j = sum_k c_k exp(+i k.x_j). Checks conjugate
// symmetry to 1e-10 relative to the largest coefficient and throws
// NotConjugateSymmetric on failure; the imaginary residue of the synthesis
// is checked and discarded.
Field to_physical(const SpectralField& s);

// Zero every mode with |k_i| > n_i/3 on any axis (two-thirds rule).
void dealias(SpectralField& s);

// Multiply each coefficient in place by f(mx,my,mz,kx,ky,kz) where
// (mx,my,mz) are signed integer modes and (kx,ky,kz) the physical
// wavenumbers. The caller keeps real fields real by supplying a
// multiplier with m(-k) == conj(m(k)).
void apply_multiplier(
    SpectralField& s,
    const std::function<std::complex<double>(int, int, int, double, double,
                                             double)>& f);

// Riemann-sum L^p norm, exact for band-limited fields on their own grid.
// p >= 1; p == infinity gives the max norm.
double lp_norm(const Field& f, double p);

// Riemann-sum integral of f over the box.
double mass(const Field& f);

// || |k|^s f ||_p : applies the isotropic multiplier |k|^s in frequency
// space (zero mode killed for s > 0) and takes the L^p norm. s >= 0.
double fractional_norm(const Field& f, double s, double p);

// Max over grid points of the Euclidean magnitude of a vector field.
double max_magnitude(const VectorField& b);

} // namespace cks

#endif
