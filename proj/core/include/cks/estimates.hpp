#ifndef CKS_ESTIMATES_HPP
#define CKS_ESTIMATES_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cks/config.hpp"
#include "cks/diagnostics.hpp"
#include "cks/flow.hpp"
#include "cks/grid.hpp"

namespace cks {

// ---- sampled frequency-space inequalities -------------------------------

// The four inequality shapes checked by sampling. "lower" bounds report the
// infimum of LHS/RHS (largest admissible C on the bound's own side),
// "upper" bounds the supremum.
//   moment_lower:  int_0^t |eta+A s xi|^g ds >= C (|eta|^g + (At)^g|xi|^g) t
//   moment_upper:  int_0^t |eta+A s xi|^b ds <= C (|eta| + At|xi|)^b t,
//                  b in (-1,0)
//   damped_weight_bound:  xi^2 + (1+At)^-2 eta^2 <= C (xi^2 + (eta+At xi)^2)
//   shifted_modulus_bound: xi^2 + (eta+At xi)^2 <= C ((1+At)^2 xi^2 + eta^2)
enum class InequalityId {
    moment_lower,
    moment_upper,
    damped_weight_bound,
    shifted_modulus_bound,
};

const char* inequality_name(InequalityId id);

// Optional restriction of the sample cloud to a manifold with a closed-form
// ratio, used for exact spot checks.
enum class SampleManifold { full, eta_zero };

struct InequalityWitness {
    double xi, eta, A, t;
};

// Empirical constant of one inequality: the extremal LHS/RHS ratio over the
// sample cloud, with the sample that attained it.
struct EmpiricalConstant {
    InequalityId id;
    double exponent; // alpha-tilde or beta; unused for the weight bounds
    long sample_count;
    double worst_ratio;
    InequalityWitness witness;
    std::uint64_t seed;
};

// Analytic int_0^t |eta + A s xi|^g ds via the piecewise antiderivative of
// the linear argument; valid for g > -1 (improper but convergent across the
// zero crossing).
double shear_moment(double eta, double xi, double A, double t, double g);

// Draw sample_count log-uniform samples of (xi, eta, A, t) over
// [1e-3,1e3]^4 with random signs on xi and eta, append the deterministic
// adversarial manifolds (eta = -At xi; xi = 0; At near 1; the stationary
// rays of the weight bounds), and report the extremal ratio.
EmpiricalConstant sample_inequality(InequalityId id, double exponent,
                                    long sample_count, std::uint64_t seed,
                                    SampleManifold manifold =
                                        SampleManifold::full);

// ---- weighted norms of the Green's symbol over R^3 ----------------------

// One scan of exp(-H) in shear-scaled variables serves every requested
// weight (k1,k2,k3) and both the L1 and L2 norms. b = A t is the only flow
// parameter surviving the scaling.
struct WeightedMoments {
    std::array<int, 3> k;
    double i1; // int |u|^k1 |v|^k2 |w|^k3 exp(-H~) du dv dw
    double i2; // same with the integrand squared
};

struct TruncationPolicy {
    double tail_log = 37.0; // envelope cutoff: exp(-tail_log) ~ 8e-17
    double safety = 1.5;    // growth factor on a failed tail check
    int max_refine = 3;
};

// Scaled integrals at (alpha, b) for a batch of weights.
std::vector<WeightedMoments> weighted_moments(
    double alpha, double b, const std::vector<std::array<int, 3>>& weights,
    const TruncationPolicy& policy = {});

// || |xi|^k1 |eta|^k2 |zeta|^k3 Ghat2(.,t) ||_{L^p(R^3)}, p in {1,2}:
// the scaled integral times t^{-(3+k)/alpha} (1+At)^{-k1-1}    (p = 1)
// or                      t^{-(3+2k)/(2alpha)} (1+At)^{-k1-1/2} (p = 2).
double weighted_spectral_norm(int k1, int k2, int k3, double t,
                              const FlowParams& flow, int p,
                              const TruncationPolicy& policy = {});

// Production path for H = int_0^1 (m + (v + c tau)^2)^{alpha/2} dtau shared
// by the norm scan and the kernel synthesis; exposed for dual-route tests
// against the adaptive-quadrature symbol.
double shear_time_integral(double m, double v, double c, double alpha);

// ---- kernel synthesis ----------------------------------------------------

// Box sized to hold the kernel at time t: extent `widths` times the
// anisotropic widths t^{1/alpha}(1+At) in x and t^{1/alpha} in y, z; n
// points per axis. widths = 0 picks 24 at alpha = 2 (Gaussian tails) and
// 72 otherwise (algebraic tails need more room for the same shell bound).
GridSpec kernel_synthesis_grid(double t, const FlowParams& flow, int n,
                               double widths = 0.0);

// || d^deriv G2(.,t) ||_{L1}, |deriv| in {1,2}, by synthesizing
// (i Xi)^deriv Ghat2 on synth_grid's frequency lattice (normalization
// f(x) = int fhat exp(i Xi x) dXi), inverse transforming and Riemann
// summing |.|. Throws GridTooSmall when the extent is below 12 kernel
// widths, the spectral band does not cover the symbol's support, or the
// outermost physical shell holds more than 1e-4 of the total.
double kernel_l1_norm(const std::array<int, 3>& deriv, double t,
                      const FlowParams& flow, const GridSpec& synth_grid);

// Ratio of the synthesized ||G2||_{L1} to the frequency-side H2-type bound
// ||(1 - Lap_Xi) Ghat2||_{L2}; finite and grid-stable, continuum constant
// pi (2 pi)^{3/2} ~ 49.5.
double kernel_l1_h2_ratio(double t, const FlowParams& flow,
                          const GridSpec& synth_grid);

// ---- exponent fits and the suite -----------------------------------------

// Log-log least squares over (parameter, value) pairs; same contract as
// fit_decay (needs >= 5 samples, positive values).
DecayFit fit_exponent(const std::vector<std::pair<double, double>>& samples);

struct CheckRecord {
    std::string check;  // e.g. "weighted-t-slope"
    std::string params; // human-readable parameter tuple
    double value;
    double expected;
    double tolerance; // |value - expected| <= tolerance required
    double r2;        // NaN when no fit was involved
    bool pass;
};

struct EstimateReport {
    std::vector<CheckRecord> records;
    std::vector<EmpiricalConstant> constants;
    bool all_pass() const;
};

// Run the configured checks ("inequalities", "weighted", "kernel", or
// "all"). Failures are recorded, never thrown; deterministic given the
// seed.
EstimateReport run_estimate_suite(const SuiteConfig& cfg);

std::string render_report_text(const EstimateReport& report);
void write_report_csv(const EstimateReport& report, const std::string& path);

} // namespace cks

#endif
