#include "cks/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace cks {

namespace {

// FFTW plans are cached per (dims, direction). Plans are created with
// FFTW_ESTIMATE for run-to-run determinism and FFTW_UNALIGNED so they can
// execute on whatever buffers the caller owns.
class PlanCache {
  public:
    fftw_plan get(const std::array<int, 3>& n, int sign) {
        std::scoped_lock lock(mu_);
        auto key = std::make_pair(n, sign);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        std::vector<std::complex<double>> scratch_in(
            std::size_t(n[0]) * n[1] * n[2]);
        std::vector<std::complex<double>> scratch_out(scratch_in.size());
        fftw_plan p = fftw_plan_dft_3d(
            n[0], n[1], n[2],
            reinterpret_cast<fftw_complex*>(scratch_in.data()),
            reinterpret_cast<fftw_complex*>(scratch_out.data()), sign,
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p) throw Error("fftw plan creation failed");
        cache_.emplace(key, p);
        return p;
    }

  private:
    std::mutex mu_;
    std::map<std::pair<std::array<int, 3>, int>, fftw_plan> cache_;
};

PlanCache& plans() {
    static PlanCache cache;
    return cache;
}

void run_plan(const std::array<int, 3>& n, int sign,
              std::complex<double>* in, std::complex<double>* out) {
    fftw_plan p = plans().get(n, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in),
                     reinterpret_cast<fftw_complex*>(out));
}

} // namespace

SpectralField to_spectral(const Field& f) {
    SpectralField s(f.grid);
    std::vector<std::complex<double>> in(f.v.size());
    for (std::size_t i = 0; i < f.v.size(); ++i) in[i] = f.v[i];
    run_plan(f.grid.n, FFTW_FORWARD, in.data(), s.c.data());
    const double scale = 1.0 / double(f.grid.size());
    for (auto& c : s.c) c *= scale;
    return s;
}

Field to_physical(const SpectralField& s) {
    const auto& n = s.grid.n;
    double cmax = 0.0;
    for (const auto& c : s.c) cmax = std::max(cmax, std::abs(c));
    const double tol = 1e-10 * std::max(cmax, 1e-300);
    for (int mx = 0; mx < n[0]; ++mx) {
        const int px = mx == 0 ? 0 : n[0] - mx;
        for (int my = 0; my < n[1]; ++my) {
            const int py = my == 0 ? 0 : n[1] - my;
            for (int mz = 0; mz < n[2]; ++mz) {
                const int pz = mz == 0 ? 0 : n[2] - mz;
                const auto a = s.c[s.grid.index(mx, my, mz)];
                const auto b = s.c[s.grid.index(px, py, pz)];
                if (std::abs(a - std::conj(b)) > tol)
                    throw NotConjugateSymmetric(
                        "coefficients are not conjugate-symmetric at mode (" +
                        std::to_string(GridSpec::signed_mode(mx, n[0])) + "," +
                        std::to_string(GridSpec::signed_mode(my, n[1])) + "," +
                        std::to_string(GridSpec::signed_mode(mz, n[2])) + ")");
            }
        }
    }
    std::vector<std::complex<double>> out(s.c.size());
    // The backward transform is unnormalized, matching the plain synthesis
    // sum f_j = sum_k c_k exp(+i k.x_j).
    run_plan(n, FFTW_BACKWARD,
             const_cast<std::complex<double>*>(s.c.data()), out.data());
    Field f(s.grid);
    double remax = 0.0, immax = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        f.v[i] = out[i].real();
        remax = std::max(remax, std::fabs(out[i].real()));
        immax = std::max(immax, std::fabs(out[i].imag()));
    }
    if (immax > 1e-10 * std::max(remax, 1e-300))
        throw NotConjugateSymmetric("synthesis produced an imaginary part");
    return f;
}

void dealias(SpectralField& s) {
    const auto& n = s.grid.n;
    for (int mx = 0; mx < n[0]; ++mx) {
        const bool kill_x = 3 * std::abs(GridSpec::signed_mode(mx, n[0])) > n[0];
        for (int my = 0; my < n[1]; ++my) {
            const bool kill_y =
                kill_x || 3 * std::abs(GridSpec::signed_mode(my, n[1])) > n[1];
            for (int mz = 0; mz < n[2]; ++mz) {
                if (kill_y ||
                    3 * std::abs(GridSpec::signed_mode(mz, n[2])) > n[2])
                    s.c[s.grid.index(mx, my, mz)] = 0.0;
            }
        }
    }
}

void apply_multiplier(
    SpectralField& s,
    const std::function<std::complex<double>(int, int, int, double, double,
                                             double)>& f) {
    const auto& n = s.grid.n;
    const double fx = s.grid.fundamental(0);
    const double fy = s.grid.fundamental(1);
    const double fz = s.grid.fundamental(2);
    for (int mx = 0; mx < n[0]; ++mx) {
        const int kx = GridSpec::signed_mode(mx, n[0]);
        for (int my = 0; my < n[1]; ++my) {
            const int ky = GridSpec::signed_mode(my, n[1]);
            for (int mz = 0; mz < n[2]; ++mz) {
                const int kz = GridSpec::signed_mode(mz, n[2]);
                s.c[s.grid.index(mx, my, mz)] *=
                    f(kx, ky, kz, fx * kx, fy * ky, fz * kz);
            }
        }
    }
}

double lp_norm(const Field& f, double p) {
    if (!(p >= 1.0))
        throw DomainError("lp_norm requires p >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : f.v) m = std::max(m, std::fabs(x));
        return m;
    }
    double sum = 0.0;
    if (p == 1.0) {
        for (double x : f.v) sum += std::fabs(x);
    } else if (p == 2.0) {
        for (double x : f.v) sum += x * x;
    } else if (p == 4.0) {
        for (double x : f.v) {
            double x2 = x * x;
            sum += x2 * x2;
        }
    } else {
        for (double x : f.v) sum += std::pow(std::fabs(x), p);
    }
    return std::pow(sum * f.grid.dvol(), 1.0 / p);
}

double mass(const Field& f) {
    double sum = 0.0;
    for (double x : f.v) sum += x;
    return sum * f.grid.dvol();
}

double fractional_norm(const Field& f, double s, double p) {
    if (!(s >= 0.0))
        throw DomainError("fractional order must be >= 0");
    if (s == 0.0) return lp_norm(f, p);
    SpectralField sp = to_spectral(f);
    apply_multiplier(sp, [s](int, int, int, double kx, double ky, double kz) {
        const double k2 = kx * kx + ky * ky + kz * kz;
        return std::complex<double>(std::pow(k2, 0.5 * s), 0.0);
    });
    return lp_norm(to_physical(sp), p);
}

double max_magnitude(const VectorField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < b.x.v.size(); ++i) {
        const double s = b.x.v[i] * b.x.v[i] + b.y.v[i] * b.y.v[i] +
                         b.z.v[i] * b.z.v[i];
        m = std::max(m, s);
    }
    return std::sqrt(m);
}

} // namespace cks
