#include "cks/interaction.hpp"

#include <cmath>

namespace cks {

namespace {

// Visit every mode with its laboratory wavenumber at time t. Nyquist rows
// are reported with on_nyquist = true; odd multipliers must vanish there
// to keep conjugate symmetry.
template <class F>
void for_each_lab_mode(const GridSpec& grid, const ShearFrame& frame,
                       double t, F&& f) {
    const auto& n = grid.n;
    const double sigma = frame.flow.A * (t - frame.t_ref);
    for (int mx = 0; mx < n[0]; ++mx) {
        const int sx = GridSpec::signed_mode(mx, n[0]);
        const double kx = grid.fundamental(0) * sx;
        for (int my = 0; my < n[1]; ++my) {
            const int sy = GridSpec::signed_mode(my, n[1]);
            const double ky = grid.fundamental(1) * sy - sigma * kx;
            for (int mz = 0; mz < n[2]; ++mz) {
                const int sz = GridSpec::signed_mode(mz, n[2]);
                const double kz = grid.fundamental(2) * sz;
                const bool nyquist = sx == -n[0] / 2 || sy == -n[1] / 2 ||
                                     sz == -n[2] / 2;
                f(grid.index(mx, my, mz), kx, ky, kz, nyquist);
            }
        }
    }
}

} // namespace

VectorField attractive_field(const SpectralField& n_hat,
                             const ShearFrame& frame, double t) {
    const GridSpec& grid = n_hat.grid;
    SpectralField bx(grid), by(grid), bz(grid);
    for_each_lab_mode(grid, frame, t,
                      [&](std::size_t i, double kx, double ky, double kz,
                          bool nyquist) {
                          const double k2 = kx * kx + ky * ky + kz * kz;
                          if (k2 == 0.0 || nyquist) return;
                          const std::complex<double> phi =
                              n_hat.c[i] / k2;
                          bx.c[i] = std::complex<double>(0.0, kx) * phi;
                          by.c[i] = std::complex<double>(0.0, ky) * phi;
                          bz.c[i] = std::complex<double>(0.0, kz) * phi;
                      });
    VectorField b(grid);
    b.x = to_physical(bx);
    b.y = to_physical(by);
    b.z = to_physical(bz);
    return b;
}

NonlinearEval nonlinear_eval(const SpectralField& n_hat,
                             const ShearFrame& frame, double t) {
    const GridSpec& grid = n_hat.grid;
    const Field n_phys = to_physical(n_hat);
    const VectorField b = attractive_field(n_hat, frame, t);

    double max_b = 0.0, min_n = n_phys.v[0], max_n = n_phys.v[0];
    Field qx(grid), qy(grid), qz(grid);
    for (std::size_t i = 0; i < n_phys.v.size(); ++i) {
        const double nv = n_phys.v[i];
        min_n = std::min(min_n, nv);
        max_n = std::max(max_n, nv);
        const double b2 = b.x.v[i] * b.x.v[i] + b.y.v[i] * b.y.v[i] +
                          b.z.v[i] * b.z.v[i];
        max_b = std::max(max_b, b2);
        qx.v[i] = nv * b.x.v[i];
        qy.v[i] = nv * b.y.v[i];
        qz.v[i] = nv * b.z.v[i];
    }
    max_b = std::sqrt(max_b);

    SpectralField fx = to_spectral(qx);
    SpectralField fy = to_spectral(qy);
    SpectralField fz = to_spectral(qz);
    SpectralField rhs(grid);
    for_each_lab_mode(grid, frame, t,
                      [&](std::size_t i, double kx, double ky, double kz,
                          bool nyquist) {
                          if (nyquist) return;
                          // N = -div(n B) = -i K . qhat
                          const std::complex<double> div =
                              std::complex<double>(0.0, kx) * fx.c[i] +
                              std::complex<double>(0.0, ky) * fy.c[i] +
                              std::complex<double>(0.0, kz) * fz.c[i];
                          rhs.c[i] = -div;
                      });
    dealias(rhs);
    rhs.c[0] = 0.0;
    return {std::move(rhs), max_b, min_n, max_n};
}

SpectralField nonlinear_rhs(const SpectralField& n_hat,
                            const ShearFrame& frame, double t) {
    return nonlinear_eval(n_hat, frame, t).rhs;
}

} // namespace cks
