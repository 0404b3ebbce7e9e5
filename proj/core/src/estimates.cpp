#include "cks/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

#include "cks/csv.hpp"
#include "cks/errors.hpp"
#include "cks/field.hpp"
#include "cks/quadrature.hpp"
#include "cks/spectral.hpp"

namespace cks {

// ---- sampled inequalities -------------------------------------------------

const char* inequality_name(InequalityId id) {
    switch (id) {
    case InequalityId::moment_lower: return "moment_lower";
    case InequalityId::moment_upper: return "moment_upper";
    case InequalityId::damped_weight_bound: return "damped_weight_bound";
    case InequalityId::shifted_modulus_bound: return "shifted_modulus_bound";
    }
    return "?";
}

double shear_moment(double eta, double xi, double A, double t, double g) {
    if (!(t > 0.0)) throw DomainError("shear_moment needs t > 0");
    if (!(g > -1.0)) throw DomainError("shear_moment needs exponent > -1");
    const double c = A * xi;
    if (c == 0.0) return std::pow(std::fabs(eta), g) * t;
    auto f = [g](double x) { return std::pow(std::fabs(x), g); };
    // Short sweep with no interior zero: Simpson instead of the subtractive
    // antiderivative difference.
    if (std::fabs(c) * t < 1e-3 * std::fabs(eta))
        return t / 6.0 *
               (f(eta) + 4.0 * f(eta + 0.5 * c * t) + f(eta + c * t));
    auto F = [g, c](double x) {
        return std::copysign(std::pow(std::fabs(x), g + 1.0), x) /
               ((g + 1.0) * c);
    };
    return F(eta + c * t) - F(eta);
}

namespace {

double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1p-53;
}

double log_uniform(std::mt19937_64& rng) {
    return std::pow(10.0, -3.0 + 6.0 * uniform01(rng));
}

double rand_sign(std::mt19937_64& rng) {
    return uniform01(rng) < 0.5 ? -1.0 : 1.0;
}

// LHS/RHS of the inequality at one sample; false when the ratio is
// undefined there (RHS vanishes or a power diverges).
bool inequality_ratio(InequalityId id, double ex, double xi, double eta,
                      double A, double t, double* out) {
    switch (id) {
    case InequalityId::moment_lower: {
        const double rhs = (std::pow(std::fabs(eta), ex) +
                            std::pow(A * t, ex) * std::pow(std::fabs(xi), ex)) *
                           t;
        if (!(rhs > 0.0) || !std::isfinite(rhs)) return false;
        const double lhs = shear_moment(eta, xi, A, t, ex);
        if (!std::isfinite(lhs)) return false;
        *out = lhs / rhs;
        return true;
    }
    case InequalityId::moment_upper: {
        const double base = std::fabs(eta) + A * t * std::fabs(xi);
        if (!(base > 0.0)) return false;
        const double rhs = std::pow(base, ex) * t;
        const double lhs = shear_moment(eta, xi, A, t, ex);
        if (!std::isfinite(lhs) || !std::isfinite(rhs) || !(rhs > 0.0))
            return false;
        *out = lhs / rhs;
        return true;
    }
    case InequalityId::damped_weight_bound: {
        const double shift = eta + A * t * xi;
        const double rhs = xi * xi + shift * shift;
        if (!(rhs > 0.0)) return false;
        const double damp = 1.0 + A * t;
        *out = (xi * xi + (eta / damp) * (eta / damp)) / rhs;
        return true;
    }
    case InequalityId::shifted_modulus_bound: {
        const double damp = 1.0 + A * t;
        const double rhs = damp * damp * xi * xi + eta * eta;
        if (!(rhs > 0.0)) return false;
        const double shift = eta + A * t * xi;
        *out = (xi * xi + shift * shift) / rhs;
        return true;
    }
    }
    return false;
}

} // namespace

EmpiricalConstant sample_inequality(InequalityId id, double exponent,
                                    long sample_count, std::uint64_t seed,
                                    SampleManifold manifold) {
    if (sample_count < 10000)
        throw DomainError("sample_count must be >= 10000");
    if (id == InequalityId::moment_lower && !(exponent >= 0.0))
        throw DomainError("moment_lower needs exponent >= 0");
    if (id == InequalityId::moment_upper &&
        !(exponent > -1.0 && exponent < 0.0))
        throw DomainError("moment_upper needs exponent in (-1,0)");

    const bool lower = id == InequalityId::moment_lower;
    std::mt19937_64 rng(seed);
    EmpiricalConstant ec{};
    ec.id = id;
    ec.exponent = exponent;
    ec.seed = seed;
    ec.worst_ratio = lower ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
    long considered = 0;

    auto consider = [&](double xi, double eta, double A, double t) {
        if (manifold == SampleManifold::eta_zero) eta = 0.0;
        double r;
        if (!inequality_ratio(id, exponent, xi, eta, A, t, &r)) return;
        if (!std::isfinite(r)) return;
        ++considered;
        if (lower ? r < ec.worst_ratio : r > ec.worst_ratio) {
            ec.worst_ratio = r;
            ec.witness = {xi, eta, A, t};
        }
    };

    for (long i = 0; i < sample_count; ++i)
        consider(rand_sign(rng) * log_uniform(rng),
                 rand_sign(rng) * log_uniform(rng), log_uniform(rng),
                 log_uniform(rng));

    // Deterministic adversarial rows: the cancellation line eta = -At xi,
    // the shear-free plane xi = 0, At pinned next to 1, and the stationary
    // rays of the two quadratic weight bounds.
    const long n_adv = std::min<long>(sample_count / 10, 20000);
    for (long i = 0; i < n_adv; ++i) {
        const double xi = rand_sign(rng) * log_uniform(rng);
        const double eta = rand_sign(rng) * log_uniform(rng);
        const double A = log_uniform(rng);
        const double t = log_uniform(rng);
        consider(xi, -A * t * xi, A, t);
        consider(0.0, eta, A, t);
        consider(xi, eta, A, (1.0 + 1e-6) / A);
        consider(xi, eta, A, (1.0 - 1e-6) / A);
        const double grown = 1.0 + A * t;
        const double root = std::sqrt(1.0 + grown * grown);
        consider(xi, xi * (1.0 - root), A, t);
        consider(xi, xi * (1.0 + root), A, t);
    }
    ec.sample_count = considered;
    return ec;
}

// ---- 1D engine for H = int_0^1 (m + (v + c tau)^2)^{alpha/2} dtau --------

namespace {

// phi(y) = int_0^y (1+s^2)^{alpha/2} ds. Tabulated cumulatively on a fine
// grid; inside the table an evaluation is a cubic Hermite patch between the
// stored values (the integrand supplies exact endpoint slopes), and past ymax
// the integrated asymptotic series takes over.
class PhiTable {
  public:
    explicit PhiTable(double alpha) : alpha_(alpha) {
        cum_.resize(npanels_ + 1);
        slope_.resize(npanels_ + 1);
        cum_[0] = 0.0;
        slope_[0] = 1.0;
        for (int i = 0; i < npanels_; ++i) {
            cum_[i + 1] = cum_[i] + panel(i * h_, (i + 1) * h_);
            const double y = (i + 1) * h_;
            slope_[i + 1] = std::pow(1.0 + y * y, 0.5 * alpha);
        }
        a1_ = 1.0 / (alpha + 1.0);
        a2_ = 0.5 * alpha / (alpha - 1.0);
        a3_ = 0.5 * alpha * (0.5 * alpha - 1.0) / (2.0 * (alpha - 3.0));
        c_inf_ = cum_.back() - tail(ymax_);
    }

    double operator()(double y) const {
        const double a = std::fabs(y);
        double val;
        if (a >= ymax_) {
            val = tail(a) + c_inf_;
        } else {
            // Cubic Hermite patch between stored values; the integrand is
            // the stored derivative. Patch error ~ h^4 |f'''| / 384 ~ 1e-12.
            const int i = std::min(int(a / h_), npanels_ - 1);
            const double x = a / h_ - i;
            const double x2 = x * x, x3 = x2 * x;
            val = cum_[i] * (2.0 * x3 - 3.0 * x2 + 1.0) +
                  cum_[i + 1] * (3.0 * x2 - 2.0 * x3) +
                  h_ * (slope_[i] * (x3 - 2.0 * x2 + x) +
                        slope_[i + 1] * (x3 - x2));
        }
        return std::copysign(val, y);
    }

  private:
    double tail(double y) const {
        const double p = std::pow(y, alpha_ + 1.0), y2 = y * y;
        return a1_ * p + a2_ * p / y2 + a3_ * p / (y2 * y2);
    }
    double panel(double a, double b) const {
        const GaussRule& gl = gauss_rule();
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double s = 0.0;
        for (int j = 0; j < GaussRule::order; ++j) {
            const double y = mid + half * gl.node[j];
            s += gl.weight[j] * std::pow(1.0 + y * y, 0.5 * alpha_);
        }
        return s * half;
    }

    static constexpr double ymax_ = 20.0;
    static constexpr double h_ = 0.02;
    static constexpr int npanels_ = 1000;
    double alpha_;
    std::vector<double> cum_, slope_;
    double a1_, a2_, a3_, c_inf_;
};

const PhiTable& phi_table(double alpha) {
    static std::map<double, PhiTable> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(alpha);
    if (it == cache.end()) it = cache.emplace(alpha, PhiTable(alpha)).first;
    return it->second;
}

} // namespace

double shear_time_integral(double m, double v, double c, double alpha) {
    if (!(m >= 0.0)) throw DomainError("shear_time_integral needs m >= 0");
    if (!(alpha > 1.0 && alpha <= 2.0))
        throw DomainError("alpha must lie in (1,2]");
    if (c == 0.0) return std::pow(m + v * v, 0.5 * alpha);
    if (alpha == 2.0) return m + v * v + v * c + c * c / 3.0;

    const double s = std::sqrt(m);
    const double scale = s + std::fabs(v) + std::fabs(c);
    // Narrow sweep: three-point Simpson beats the cancelling
    // antiderivative difference.
    if (std::fabs(c) < 1e-3 * scale) {
        auto f = [m, alpha](double g) {
            return std::pow(m + g * g, 0.5 * alpha);
        };
        return (f(v) + 4.0 * f(v + 0.5 * c) + f(v + c)) / 6.0;
    }
    if (s == 0.0) {
        auto F = [alpha](double g) {
            return std::copysign(std::pow(std::fabs(g), alpha + 1.0), g) /
                   (alpha + 1.0);
        };
        return (F(v + c) - F(v)) / c;
    }
    const PhiTable& phi = phi_table(alpha);
    const double pref = std::pow(m, 0.5 * (alpha + 1.0));
    return pref * (phi((v + c) / s) - phi(v / s)) / c;
}

// ---- weighted norms over R^3 ----------------------------------------------

namespace {

struct AxisNodes {
    std::vector<double> x, w;
    double shell_lo; // start of the outermost panel
};

// Uniform panels of width `inner` out to `inner_extent`, then geometric
// growth until R is covered; 10-point Gauss nodes on each panel.
AxisNodes axis_nodes(double R, double inner, double inner_extent,
                     double growth) {
    const GaussRule& gl = gauss_rule();
    AxisNodes out;
    double a = 0.0, w = inner;
    double last_lo = 0.0;
    while (a < R) {
        const double b = std::min(R, a + w);
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int j = 0; j < GaussRule::order; ++j) {
            out.x.push_back(mid + half * gl.node[j]);
            out.w.push_back(half * gl.weight[j]);
        }
        last_lo = a;
        a = b;
        if (a >= inner_extent) w *= growth;
    }
    out.shell_lo = last_lo;
    return out;
}

} // namespace

std::vector<WeightedMoments> weighted_moments(
    double alpha, double b, const std::vector<std::array<int, 3>>& weights,
    const TruncationPolicy& policy) {
    if (!(alpha > 1.0 && alpha <= 2.0))
        throw DomainError("alpha must lie in (1,2]");
    if (!(b >= 0.0) || !std::isfinite(b))
        throw DomainError("b = A t must be finite and >= 0");
    if (weights.empty()) return {};
    int kmax = 0;
    for (const auto& k : weights)
        for (int d : k) {
            if (d < 0 || d > 3)
                throw DomainError("weight exponents must lie in [0,3]");
            kmax = std::max(kmax, d);
        }

    const double eps = 1.0 / (1.0 + b);
    const double L = policy.tail_log * 1.2; // slack on the envelope cutoff
    // Worst-direction envelopes: exp(-2^-a |u|^a/(a+1)) along the sheared
    // cancellation ray, exp(-|v/2|^a) in v past the shifted strip,
    // exp(-|w|^a) in w.
    double Ru = std::pow(L * (alpha + 1.0) * std::pow(2.0, alpha),
                         1.0 / alpha);
    double Rw = std::pow(L, 1.0 / alpha);
    double Rv_tail = std::pow(L * std::pow(2.0, alpha), 1.0 / alpha);

    const std::size_t K = weights.size();
    std::vector<WeightedMoments> out(K);
    for (std::size_t q = 0; q < K; ++q) out[q].k = weights[q];

    for (int attempt = 0;; ++attempt) {
        const double Rv = Rv_tail + Ru; // covers the sheared strip |v| < b e u
        const AxisNodes ua = axis_nodes(Ru, 0.8, 8.0, 1.4);
        const AxisNodes wa = axis_nodes(Rw, 0.8, 8.0, 1.4);
        const AxisNodes vh = axis_nodes(Rv, 0.8, 8.0, 1.4);

        // Mirror v about 0; the kink of odd weights sits on a panel edge.
        std::vector<double> vx, vw;
        vx.reserve(2 * vh.x.size());
        vw.reserve(2 * vh.x.size());
        for (std::size_t i = 0; i < vh.x.size(); ++i) {
            vx.push_back(-vh.x[i]);
            vw.push_back(vh.w[i]);
        }
        for (std::size_t i = 0; i < vh.x.size(); ++i) {
            vx.push_back(vh.x[i]);
            vw.push_back(vh.w[i]);
        }

        auto powers = [kmax](const std::vector<double>& xs) {
            std::vector<std::array<double, 4>> p(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double a = std::fabs(xs[i]);
                p[i] = {1.0, a, a * a, a * a * a};
            }
            return p;
        };
        const auto up = powers(ua.x), vp = powers(vx), wp = powers(wa.x);

        std::vector<double> i1(K, 0.0), i2(K, 0.0);
        std::vector<double> s1(K, 0.0), s2(K, 0.0); // outer-shell parts

        for (std::size_t iu = 0; iu < ua.x.size(); ++iu) {
            const double u = ua.x[iu];
            const double qu = eps * u;
            const double c = b * qu;
            for (std::size_t iw = 0; iw < wa.x.size(); ++iw) {
                const double w = wa.x[iw];
                const double m = qu * qu + w * w;
                const double ww = ua.w[iu] * wa.w[iw];
                const bool shell_uw =
                    u >= ua.shell_lo || w >= wa.shell_lo;
                for (std::size_t iv = 0; iv < vx.size(); ++iv) {
                    const double H =
                        shear_time_integral(m, vx[iv], c, alpha);
                    if (H > 745.0) continue;
                    const double E = std::exp(-H);
                    const double base = ww * vw[iv];
                    const bool shell =
                        shell_uw || std::fabs(vx[iv]) >= vh.shell_lo;
                    for (std::size_t q = 0; q < K; ++q) {
                        const auto& k = weights[q];
                        const double wt =
                            up[iu][k[0]] * vp[iv][k[1]] * wp[iw][k[2]];
                        const double c1 = base * wt * E;
                        const double c2 = base * wt * wt * E * E;
                        i1[q] += c1;
                        i2[q] += c2;
                        if (shell) {
                            s1[q] += c1;
                            s2[q] += c2;
                        }
                    }
                }
            }
        }

        bool ok = true;
        for (std::size_t q = 0; q < K; ++q)
            if (!(s1[q] <= 1e-8 * i1[q]) || !(s2[q] <= 1e-8 * i2[q]))
                ok = false;
        if (ok) {
            for (std::size_t q = 0; q < K; ++q) {
                out[q].i1 = 4.0 * i1[q]; // fold the (u,v) and w reflections
                out[q].i2 = 4.0 * i2[q];
            }
            return out;
        }
        if (attempt == policy.max_refine)
            throw QuadratureNotConverged(
                "weighted moment tail check failed after " +
                std::to_string(policy.max_refine) + " radius refinements");
        Ru *= policy.safety;
        Rw *= policy.safety;
        Rv_tail *= policy.safety;
    }
}

double weighted_spectral_norm(int k1, int k2, int k3, double t,
                              const FlowParams& flow, int p,
                              const TruncationPolicy& policy) {
    if (!(t > 0.0)) throw DomainError("t must be > 0");
    if (p != 1 && p != 2) throw DomainError("p must be 1 or 2");
    const double b = flow.A * t;
    const auto mom =
        weighted_moments(flow.alpha, b, {{k1, k2, k3}}, policy)[0];
    const double k = k1 + k2 + k3;
    if (p == 1)
        return std::pow(t, -(3.0 + k) / flow.alpha) *
               std::pow(1.0 + b, -(k1 + 1.0)) * mom.i1;
    return std::pow(t, -(3.0 + 2.0 * k) / (2.0 * flow.alpha)) *
           std::pow(1.0 + b, -(k1 + 0.5)) * std::sqrt(mom.i2);
}

// ---- kernel synthesis ------------------------------------------------------

GridSpec kernel_synthesis_grid(double t, const FlowParams& flow, int n,
                               double widths) {
    if (!(t > 0.0)) throw DomainError("t must be > 0");
    if (widths == 0.0) widths = flow.alpha == 2.0 ? 24.0 : 72.0;
    if (!(widths >= 12.0))
        throw DomainError("synthesis box must span at least 12 widths");
    const double wy = std::pow(t, 1.0 / flow.alpha);
    const double wx = wy * (1.0 + flow.A * t);
    return GridSpec({n, n, n}, {widths * wx, widths * wy, widths * wy});
}

namespace {

// Lattice of (i K)^deriv Ghat2(K, t) (2 pi)^3 / V with the kernel centred
// in the box; Nyquist rows zeroed. Reports the peak magnitude and the
// largest magnitude on the outermost kept modes for the band check.
SpectralField kernel_coefficients(const std::array<int, 3>& deriv, double t,
                                  const FlowParams& flow, const GridSpec& g,
                                  double* peak_out, double* edge_out) {
    SpectralField coef(g);
    const double pref = std::pow(2.0 * std::numbers::pi, 3.0) / g.volume();
    double peak = 0.0, edge = 0.0;
    for (int mx = 0; mx < g.n[0]; ++mx) {
        const int sx = GridSpec::signed_mode(mx, g.n[0]);
        const double kx = g.fundamental(0) * sx;
        for (int my = 0; my < g.n[1]; ++my) {
            const int sy = GridSpec::signed_mode(my, g.n[1]);
            const double ky = g.fundamental(1) * sy;
            for (int mz = 0; mz < g.n[2]; ++mz) {
                const int sz = GridSpec::signed_mode(mz, g.n[2]);
                if (sx == -g.n[0] / 2 || sy == -g.n[1] / 2 ||
                    sz == -g.n[2] / 2)
                    continue; // Nyquist rows break conjugate symmetry
                const double kz = g.fundamental(2) * sz;
                const double H =
                    t * shear_time_integral(kx * kx + kz * kz, ky,
                                            flow.A * t * kx, flow.alpha);
                if (H > 745.0) continue;
                std::complex<double> val(pref * std::exp(-H), 0.0);
                for (int d = 0; d < deriv[0]; ++d)
                    val *= std::complex<double>(0.0, kx);
                for (int d = 0; d < deriv[1]; ++d)
                    val *= std::complex<double>(0.0, ky);
                for (int d = 0; d < deriv[2]; ++d)
                    val *= std::complex<double>(0.0, kz);
                if (((sx + sy + sz) & 1) != 0) val = -val; // centre shift
                coef.at(mx, my, mz) = val;
                const double mag = std::abs(val);
                peak = std::max(peak, mag);
                if (std::abs(sx) == g.n[0] / 2 - 1 ||
                    std::abs(sy) == g.n[1] / 2 - 1 ||
                    std::abs(sz) == g.n[2] / 2 - 1)
                    edge = std::max(edge, mag);
            }
        }
    }
    *peak_out = peak;
    *edge_out = edge;
    return coef;
}

// Riemann L1 with the mass in the outermost 1/24 of each axis (per side)
// tracked separately.
void l1_with_shell(const Field& f, double* total, double* shell) {
    const GridSpec& g = f.grid;
    double tot = 0.0, sh = 0.0;
    for (int ix = 0; ix < g.n[0]; ++ix) {
        const bool bx = 24 * ix < g.n[0] || 24 * ix > 23 * g.n[0];
        for (int iy = 0; iy < g.n[1]; ++iy) {
            const bool by = 24 * iy < g.n[1] || 24 * iy > 23 * g.n[1];
            for (int iz = 0; iz < g.n[2]; ++iz) {
                const bool bz = 24 * iz < g.n[2] || 24 * iz > 23 * g.n[2];
                const double a = std::fabs(f.at(ix, iy, iz));
                tot += a;
                if (bx || by || bz) sh += a;
            }
        }
    }
    *total = tot * g.dvol();
    *shell = sh * g.dvol();
}

} // namespace

double kernel_l1_norm(const std::array<int, 3>& deriv, double t,
                      const FlowParams& flow, const GridSpec& synth_grid) {
    const int order = deriv[0] + deriv[1] + deriv[2];
    for (int d : deriv)
        if (d < 0) throw DomainError("derivative orders must be >= 0");
    if (order < 1 || order > 2)
        throw DomainError("total derivative order must be 1 or 2");
    if (!(t > 0.0)) throw DomainError("t must be > 0");

    const double wy = std::pow(t, 1.0 / flow.alpha);
    const double wx = wy * (1.0 + flow.A * t);
    if (synth_grid.box[0] < 12.0 * wx || synth_grid.box[1] < 12.0 * wy ||
        synth_grid.box[2] < 12.0 * wy)
        throw GridTooSmall("synthesis box narrower than 12 kernel widths");

    double peak = 0.0, edge = 0.0;
    const SpectralField coef =
        kernel_coefficients(deriv, t, flow, synth_grid, &peak, &edge);
    if (!(edge <= 3e-6 * peak))
        throw GridTooSmall("spectral band does not cover the symbol "
                           "(edge/peak = " +
                           format_double(edge / std::max(peak, 1e-300)) +
                           ")");

    const Field f = to_physical(coef);
    double total = 0.0, shell = 0.0;
    l1_with_shell(f, &total, &shell);
    if (!(shell <= 1e-4 * total))
        throw GridTooSmall("outer shell holds " +
                           format_double(shell / std::max(total, 1e-300)) +
                           " of the norm; enlarge the box");
    return total;
}

double kernel_l1_h2_ratio(double t, const FlowParams& flow,
                          const GridSpec& g) {
    if (!(t > 0.0)) throw DomainError("t must be > 0");

    // Raw symbol values, no centring phase, no derivative weight.
    std::vector<double> gh(g.size(), 0.0);
    for (int mx = 0; mx < g.n[0]; ++mx) {
        const double kx = g.wavenumber(0, mx);
        for (int my = 0; my < g.n[1]; ++my) {
            const double ky = g.wavenumber(1, my);
            for (int mz = 0; mz < g.n[2]; ++mz) {
                const double kz = g.wavenumber(2, mz);
                const double H =
                    t * shear_time_integral(kx * kx + kz * kz, ky,
                                            flow.A * t * kx, flow.alpha);
                gh[g.index(mx, my, mz)] = H > 745.0 ? 0.0 : std::exp(-H);
            }
        }
    }

    // (1 - Lap_K) Ghat with cyclic neighbours; the wrap touches only
    // band-edge values that are already negligible.
    const double d0 = g.fundamental(0), d1 = g.fundamental(1),
                 d2 = g.fundamental(2);
    double sum2 = 0.0;
    for (int mx = 0; mx < g.n[0]; ++mx) {
        const int xp = (mx + 1) % g.n[0], xm = (mx + g.n[0] - 1) % g.n[0];
        for (int my = 0; my < g.n[1]; ++my) {
            const int yp = (my + 1) % g.n[1], ym = (my + g.n[1] - 1) % g.n[1];
            for (int mz = 0; mz < g.n[2]; ++mz) {
                const int zp = (mz + 1) % g.n[2],
                          zm = (mz + g.n[2] - 1) % g.n[2];
                const double c = gh[g.index(mx, my, mz)];
                const double lap =
                    (gh[g.index(xp, my, mz)] - 2.0 * c +
                     gh[g.index(xm, my, mz)]) /
                        (d0 * d0) +
                    (gh[g.index(mx, yp, mz)] - 2.0 * c +
                     gh[g.index(mx, ym, mz)]) /
                        (d1 * d1) +
                    (gh[g.index(mx, my, zp)] - 2.0 * c +
                     gh[g.index(mx, my, zm)]) /
                        (d2 * d2);
                const double r = c - lap;
                sum2 += r * r;
            }
        }
    }
    const double hnorm = std::sqrt(sum2 * d0 * d1 * d2);

    // L1 of the synthesized kernel itself (no derivative).
    SpectralField coef(g);
    const double pref = std::pow(2.0 * std::numbers::pi, 3.0) / g.volume();
    for (int mx = 0; mx < g.n[0]; ++mx) {
        const int sx = GridSpec::signed_mode(mx, g.n[0]);
        for (int my = 0; my < g.n[1]; ++my) {
            const int sy = GridSpec::signed_mode(my, g.n[1]);
            for (int mz = 0; mz < g.n[2]; ++mz) {
                const int sz = GridSpec::signed_mode(mz, g.n[2]);
                if (sx == -g.n[0] / 2 || sy == -g.n[1] / 2 ||
                    sz == -g.n[2] / 2)
                    continue;
                double v = pref * gh[g.index(mx, my, mz)];
                if (((sx + sy + sz) & 1) != 0) v = -v;
                coef.at(mx, my, mz) = v;
            }
        }
    }
    const Field f = to_physical(coef);
    double total = 0.0, shell = 0.0;
    l1_with_shell(f, &total, &shell);
    return total / hnorm;
}

// ---- exponent fits and the suite -------------------------------------------

DecayFit fit_exponent(const std::vector<std::pair<double, double>>& samples) {
    return fit_pairs(samples);
}

bool EstimateReport::all_pass() const {
    for (const auto& r : records)
        if (!r.pass) return false;
    return true;
}

namespace {

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    return out;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void add_record(EstimateReport& rep, const std::string& check,
                const std::string& params, double value, double expected,
                double tolerance, double r2, bool pass) {
    rep.records.push_back(
        CheckRecord{check, params, value, expected, tolerance, r2, pass});
}

void add_fit_record(EstimateReport& rep, const std::string& check,
                    const std::string& params,
                    const std::vector<std::pair<double, double>>& samples,
                    double expected, double tolerance) {
    const DecayFit fit = fit_exponent(samples);
    add_record(rep, check, params, fit.slope, expected, tolerance, fit.r2,
               std::fabs(fit.slope - expected) <= tolerance);
}

void run_inequality_checks(EstimateReport& rep, const SuiteConfig& cfg) {
    auto finite_record = [&](InequalityId id, double ex, double cap,
                             double cap_tol) {
        const EmpiricalConstant ec =
            sample_inequality(id, ex, cfg.samples, cfg.seed);
        rep.constants.push_back(ec);
        std::ostringstream params;
        params << inequality_name(id);
        if (id == InequalityId::moment_lower ||
            id == InequalityId::moment_upper)
            params << " exponent=" << format_double(ex);
        params << " samples=" << ec.sample_count;
        bool pass = std::isfinite(ec.worst_ratio) && ec.worst_ratio > 0.0;
        // The quadratic weight bounds approach their supremum 2 along the
        // stationary rays, never attaining it, and exceed 1 there.
        if (std::isfinite(cap))
            pass = pass && ec.worst_ratio <= cap + cap_tol &&
                   ec.worst_ratio >= 1.0;
        add_record(rep, "inequality-constant", params.str(), ec.worst_ratio,
                   cap, cap_tol, kNaN, pass);
    };

    for (double g : {0.5, 1.0, 1.5, 2.0})
        finite_record(InequalityId::moment_lower, g, kNaN, 0.0);
    for (double bta : {-0.25, -0.5, -0.75})
        finite_record(InequalityId::moment_upper, bta, kNaN, 0.0);
    // Both quadratic weight bounds have analytic supremum 2 along their
    // stationary rays (approached, never attained).
    finite_record(InequalityId::damped_weight_bound, 0.0, 2.0, 1e-9);
    finite_record(InequalityId::shifted_modulus_bound, 0.0, 2.0, 1e-9);

    // Closed-form spot values on the eta = 0 manifold.
    {
        const EmpiricalConstant ec =
            sample_inequality(InequalityId::moment_lower, 1.0, 10000,
                              cfg.seed, SampleManifold::eta_zero);
        add_record(rep, "inequality-spot", "moment_lower exponent=1 eta=0",
                   ec.worst_ratio, 0.5, 1e-6, kNaN,
                   std::fabs(ec.worst_ratio - 0.5) <= 1e-6);
    }
    {
        const EmpiricalConstant ec =
            sample_inequality(InequalityId::moment_upper, -0.5, 10000,
                              cfg.seed, SampleManifold::eta_zero);
        add_record(rep, "inequality-spot", "moment_upper exponent=-0.5 eta=0",
                   ec.worst_ratio, 2.0, 1e-6, kNaN,
                   std::fabs(ec.worst_ratio - 2.0) <= 1e-6);
    }
    {
        // Direct arithmetic at (xi,eta,A,t) = (1,10,10,1).
        double r = 0.0;
        const bool ok = inequality_ratio(InequalityId::damped_weight_bound,
                                         0.0, 1.0, 10.0, 10.0, 1.0, &r);
        const double expect = (1.0 + 100.0 / 121.0) / 401.0;
        add_record(rep, "inequality-spot",
                   "damped_weight_bound xi=1 eta=10 A=10 t=1", r, expect,
                   1e-9, kNaN, ok && std::fabs(r - expect) <= 1e-9);
    }
}

void run_weighted_checks(EstimateReport& rep, const SuiteConfig& cfg) {
    const std::vector<std::array<int, 3>> ks = {
        {0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    const std::vector<double> grid = logspace(1e2, 1e4, 7);

    for (double alpha : cfg.alphas) {
        // t sweep at A = 1; every (k, p) fit reuses the same scans.
        std::map<double, std::vector<WeightedMoments>> scans;
        for (double t : grid)
            scans[t] = weighted_moments(alpha, t /* b = A t, A = 1 */, ks);
        for (std::size_t q = 0; q < ks.size(); ++q) {
            const auto& k = ks[q];
            const double ksum = k[0] + k[1] + k[2];
            for (int p : {1, 2}) {
                std::vector<std::pair<double, double>> samples;
                for (double t : grid) {
                    const auto& m = scans[t][q];
                    const double b = t;
                    const double val =
                        p == 1 ? std::pow(t, -(3.0 + ksum) / alpha) *
                                     std::pow(1.0 + b, -(k[0] + 1.0)) * m.i1
                               : std::pow(t, -(3.0 + 2.0 * ksum) /
                                                 (2.0 * alpha)) *
                                     std::pow(1.0 + b, -(k[0] + 0.5)) *
                                     std::sqrt(m.i2);
                    samples.emplace_back(t, val);
                }
                const double expect =
                    p == 1 ? -(3.0 + ksum) / alpha - (k[0] + 1.0)
                           : -(3.0 + 2.0 * ksum) / (2.0 * alpha) -
                                 (k[0] + 0.5);
                std::ostringstream params;
                params << "alpha=" << format_double(alpha) << " k=" << k[0]
                       << k[1] << k[2] << " p=" << p << " A=1";
                add_fit_record(rep, "weighted-t-slope", params.str(),
                               samples, expect, 0.05);
            }
        }

        // A sweep at t = 1.
        std::map<double, std::vector<WeightedMoments>> ascans;
        for (double A : grid) ascans[A] = weighted_moments(alpha, A, ks);
        for (std::size_t q = 0; q < ks.size(); ++q) {
            const auto& k = ks[q];
            const double ksum = k[0] + k[1] + k[2];
            for (int p : {1, 2}) {
                std::vector<std::pair<double, double>> samples;
                for (double A : grid) {
                    const auto& m = ascans[A][q];
                    const double val =
                        p == 1 ? std::pow(1.0 + A, -(k[0] + 1.0)) * m.i1
                               : std::pow(1.0 + A, -(k[0] + 0.5)) *
                                     std::sqrt(m.i2);
                    samples.emplace_back(A, val);
                }
                (void)ksum;
                const double expect =
                    p == 1 ? -(k[0] + 1.0) : -(k[0] + 0.5);
                std::ostringstream params;
                params << "alpha=" << format_double(alpha) << " k=" << k[0]
                       << k[1] << k[2] << " p=" << p << " t=1";
                add_fit_record(rep, "weighted-A-slope", params.str(),
                               samples, expect, 0.05);
            }
        }
    }
}

void run_kernel_checks(EstimateReport& rep, const SuiteConfig& cfg) {
    const int n2 = std::max(32, cfg.kernel_grid / 2);
    const int nf = std::max(64, cfg.kernel_grid);

    // Closed-form magnitude at the classical exponent.
    const FlowParams heat(0.0, 2.0);
    const double c0 = 8.0 * std::pow(std::numbers::pi, 2.5);
    for (double t : {0.25, 1.0, 4.0}) {
        const double val = kernel_l1_norm(
            {1, 0, 0}, t, heat, kernel_synthesis_grid(t, heat, n2));
        const double expect = c0 / std::sqrt(t);
        add_record(rep, "kernel-oracle",
                   "alpha=2 A=0 d=100 t=" + format_double(t), val, expect,
                   0.005 * expect, kNaN,
                   std::fabs(val - expect) <= 0.005 * expect);
    }

    // Small-time slopes, shear off: no singularity beyond t^{-order/alpha}.
    struct DerivCase {
        std::array<int, 3> d;
        double order;
    };
    const std::vector<DerivCase> dcases = {
        {{1, 0, 0}, 1.0}, {{0, 1, 0}, 1.0}, {{0, 2, 0}, 2.0}};
    for (double alpha : {1.25, 1.5}) {
        const FlowParams fl(0.0, alpha);
        for (const auto& dc : dcases) {
            std::vector<std::pair<double, double>> samples;
            for (double t : logspace(1e-3, 1e-1, 5))
                samples.emplace_back(
                    t, kernel_l1_norm(dc.d, t, fl,
                                      kernel_synthesis_grid(t, fl, nf)));
            std::ostringstream params;
            params << "alpha=" << format_double(alpha) << " d=" << dc.d[0]
                   << dc.d[1] << dc.d[2] << " A=0";
            add_fit_record(rep, "kernel-t-slope", params.str(), samples,
                           -dc.order / alpha, 0.05);
        }
    }

    // Amplitude slopes at t = 1: -1 for the sheared axis, 0 across it.
    // The closed-form symbol at the classical exponent carries the whole
    // shear structure, so this sweep runs there.
    struct ACase {
        std::array<int, 3> d;
        double expect;
    };
    const std::vector<ACase> acases = {
        {{1, 0, 0}, -1.0}, {{0, 1, 0}, 0.0}, {{0, 0, 1}, 0.0}};
    for (const auto& ac : acases) {
        std::vector<std::pair<double, double>> samples;
        for (double A : logspace(10.0, 1e3, 7)) {
            const FlowParams fl(A, 2.0);
            samples.emplace_back(
                A, kernel_l1_norm(ac.d, 1.0, fl,
                                  kernel_synthesis_grid(1.0, fl, n2)));
        }
        std::ostringstream params;
        params << "alpha=2 d=" << ac.d[0] << ac.d[1] << ac.d[2] << " t=1";
        add_fit_record(rep, "kernel-A-slope", params.str(), samples,
                       ac.expect, 0.1);
    }
}

} // namespace

EstimateReport run_estimate_suite(const SuiteConfig& cfg) {
    EstimateReport rep;
    auto want = [&cfg](const char* name) {
        for (const auto& c : cfg.checks)
            if (c == "all" || c == name) return true;
        return false;
    };
    if (want("inequalities")) run_inequality_checks(rep, cfg);
    if (want("weighted")) run_weighted_checks(rep, cfg);
    if (want("kernel")) run_kernel_checks(rep, cfg);
    return rep;
}

std::string render_report_text(const EstimateReport& rep) {
    std::ostringstream out;
    out << "check                 status  value                     "
           "expected              tol        r2          parameters\n";
    for (const auto& r : rep.records) {
        std::ostringstream line;
        line << r.check;
        while (line.str().size() < 22) line << ' ';
        line << (r.pass ? "PASS  " : "FAIL  ") << "  ";
        auto put = [&line](double v, std::size_t width) {
            std::string s = std::isnan(v) ? "-" : format_double(v);
            line << s << ' ';
            for (std::size_t i = s.size() + 1; i < width; ++i) line << ' ';
        };
        put(r.value, 26);
        put(r.expected, 22);
        put(r.tolerance, 11);
        put(r.r2, 12);
        line << r.params;
        out << line.str() << '\n';
    }
    if (!rep.constants.empty()) {
        out << "\nempirical constants (extremal ratio and its witness)\n";
        for (const auto& ec : rep.constants) {
            out << "  " << inequality_name(ec.id)
                << " exponent=" << format_double(ec.exponent)
                << " samples=" << ec.sample_count
                << " worst=" << format_double(ec.worst_ratio) << " at (xi="
                << format_double(ec.witness.xi)
                << " eta=" << format_double(ec.witness.eta)
                << " A=" << format_double(ec.witness.A)
                << " t=" << format_double(ec.witness.t)
                << ") seed=" << ec.seed << '\n';
        }
    }
    return out.str();
}

void write_report_csv(const EstimateReport& rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "check,params,value,expected,tolerance,r2,pass\n";
    for (const auto& r : rep.records) {
        std::string params = r.params;
        for (char& c : params)
            if (c == ',') c = ';';
        out << r.check << ',' << params << ',' << format_double(r.value)
            << ',' << format_double(r.expected) << ','
            << format_double(r.tolerance) << ',' << format_double(r.r2)
            << ',' << (r.pass ? 1 : 0) << '\n';
    }
    if (!out) throw IoError("write to " + path + " failed");
}

} // namespace cks
