#include "cks/propagator.hpp"

#include <cmath>
#include <complex>
#include <limits>

namespace cks {

FreqPoint effective_wavenumber(const FreqPoint& frame_mode,
                               const ShearFrame& frame, double t) {
    const double sigma = frame.flow.A * (t - frame.t_ref);
    return FreqPoint(frame_mode.xi, frame_mode.eta - sigma * frame_mode.xi,
                     frame_mode.zeta);
}

std::vector<double> propagator_factors(const GridSpec& grid,
                                       const ShearFrame& frame, double t0,
                                       double t1, const QuadratureConfig& q) {
    if (t1 < t0)
        throw DomainError("propagator interval must have t1 >= t0");
    const auto& n = grid.n;
    std::vector<double> factors(grid.size(), 1.0);
    // In frame coordinates the laboratory wavenumber at time s is
    // (xi, eta - A*(s - t_ref)*xi, zeta), so H over [t0,t1] equals the
    // accumulated symbol with shear_sign = -1 on [t0 - t_ref, t1 - t_ref].
    const double u0 = t0 - frame.t_ref;
    const double u1 = t1 - frame.t_ref;
    for (int mx = 0; mx < n[0]; ++mx) {
        const double kx = grid.wavenumber(0, mx);
        for (int my = 0; my < n[1]; ++my) {
            const double ky = grid.wavenumber(1, my);
            for (int mz = 0; mz < n[2]; ++mz) {
                if (mx == 0 && my == 0 && mz == 0) continue;
                const double kz = grid.wavenumber(2, mz);
                const double h = accumulated_symbol(
                    FreqPoint(kx, ky, kz), u0, u1, frame.flow, -1, q);
                factors[grid.index(mx, my, mz)] = std::exp(-h);
            }
        }
    }
    return factors;
}

void apply_propagator(SimState& state, double t1, const QuadratureConfig& q) {
    const auto factors =
        propagator_factors(state.n_hat.grid, state.frame, state.t, t1, q);
    for (std::size_t i = 0; i < factors.size(); ++i)
        if (factors[i] != 1.0) state.n_hat.c[i] *= factors[i];
    state.t = t1;
}

RemapResult remap(SimState& state) {
    const GridSpec& grid = state.n_hat.grid;
    const double sigma = state.frame.flow.A * (state.t - state.frame.t_ref);
    // sigma * (2pi/Lx) must be an integer multiple of 2pi/Ly.
    const double j_real = sigma * grid.box[1] / grid.box[0];
    const double j_round = std::round(j_real);
    if (std::fabs(j_real - j_round) > 1e-12 * std::max(1.0, std::fabs(j_real)))
        throw RemapOffSchedule("shear shift " + std::to_string(j_real) +
                               " lattice units is not an integer");
    const long j = long(j_round);

    RemapResult res{0.0, 0.0};
    for (const auto& c : state.n_hat.c) res.total_energy += std::norm(c);
    if (j != 0) {
        const auto& n = grid.n;
        SpectralField out(grid);
        for (int mx = 0; mx < n[0]; ++mx) {
            const int kx = GridSpec::signed_mode(mx, n[0]);
            for (int my = 0; my < n[1]; ++my) {
                const int ky = GridSpec::signed_mode(my, n[1]);
                for (int mz = 0; mz < n[2]; ++mz) {
                    const auto c = state.n_hat.c[grid.index(mx, my, mz)];
                    if (c == std::complex<double>(0.0, 0.0)) continue;
                    const long ky_new = ky - j * kx;
                    // Nyquist rows have no conjugate partner once sheared;
                    // they and out-of-band targets are dropped, not wrapped.
                    if (kx == -n[0] / 2 || ky == -n[1] / 2 ||
                        ky_new <= -n[1] / 2 || ky_new >= n[1] / 2) {
                        res.dropped_energy += std::norm(c);
                        continue;
                    }
                    out.mode(kx, int(ky_new),
                             GridSpec::signed_mode(mz, n[2])) = c;
                }
            }
        }
        state.n_hat = std::move(out);
    }
    state.frame.t_ref = state.t;
    return res;
}

double next_remap_time(const GridSpec& grid, const ShearFrame& frame,
                       double t) {
    if (frame.flow.A == 0.0) return std::numeric_limits<double>::infinity();
    const double interval = grid.box[0] / (frame.flow.A * grid.box[1]);
    const double elapsed = t - frame.t_ref;
    long j = long(std::floor(elapsed / interval)) + 1;
    double next = frame.t_ref + double(j) * interval;
    // Guard against roundoff placing "next" at or before t.
    while (next <= t + 1e-14 * std::max(1.0, std::fabs(t))) {
        ++j;
        next = frame.t_ref + double(j) * interval;
    }
    return next;
}

double lab_point_value(const SimState& state, double x, double y, double z) {
    const GridSpec& grid = state.n_hat.grid;
    const auto& n = grid.n;
    const double sigma =
        state.frame.flow.A * (state.t - state.frame.t_ref);
    std::complex<double> sum = 0.0;
    for (int mx = 0; mx < n[0]; ++mx) {
        const double kx = grid.wavenumber(0, mx);
        for (int my = 0; my < n[1]; ++my) {
            const double ky = grid.wavenumber(1, my) - sigma * kx;
            for (int mz = 0; mz < n[2]; ++mz) {
                const auto c = state.n_hat.c[grid.index(mx, my, mz)];
                if (c == std::complex<double>(0.0, 0.0)) continue;
                const double kz = grid.wavenumber(2, mz);
                const double phase = kx * x + ky * y + kz * z;
                sum += c * std::complex<double>(std::cos(phase),
                                                std::sin(phase));
            }
        }
    }
    return sum.real();
}

} // namespace cks
