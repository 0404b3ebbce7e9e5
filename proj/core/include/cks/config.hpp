#ifndef CKS_CONFIG_HPP
#define CKS_CONFIG_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cks/flow.hpp"
#include "cks/grid.hpp"
#include "cks/stepper.hpp"

namespace cks {

// Initial-data recipe. kind selects the generator:
//   gaussian - isotropic Gaussian bump of the given mass and width sigma
//   modes    - random band-limited superposition (modes count, seeded)
//   file     - real-space samples from a snapshot file
struct InitConfig {
    std::string kind = "gaussian";
    double mass = 1.0;
    double sigma = 0.5;
    std::array<double, 3> center{0.0, 0.0, 0.0}; // filled to box centre
    bool center_set = false;                     // when absent in the file
    std::uint64_t seed = 1;
    int modes = 8;
    std::string file;
};

// Parameter grids for the estimate suite.
struct SuiteConfig {
    std::vector<std::string> checks = {"all"};
    std::vector<double> alphas = {1.25, 1.5, 2.0};
    long samples = 100000;
    std::uint64_t seed = 1;
    int kernel_grid = 256; // per-axis points for fractional-alpha synthesis; halved at alpha = 2
};

// Everything a run needs, parsed from a dotted key=value file.
// Schema (defaults in parentheses):
//   grid.n        int or int,int,int       (64,64,64)   even, >= 8
//   grid.box      real or real,real,real   (2pi each)   > 0
//   flow.A        real >= 0                (0)
//   flow.alpha    real in (1,2]            (2)
//   init.kind     gaussian|modes|file      (gaussian)
//   init.mass     real > 0                 (1)
//   init.sigma    real > 0                 (0.5)
//   init.center   real,real,real           (box centre)
//   init.seed     u64                      (1)
//   init.modes    int >= 1                 (8)
//   init.file     path                     ()  required when kind=file
//   time.T             real > 0            (1)
//   time.dt_max        real > 0            (0.01)
//   time.dt_min        real > 0            (1e-9)
//   time.cfl           real in (0,1]       (0.4)
//   time.record_every  real > 0            (0.05)
//   detect.blowup_factor  real > 1         (10)
//   detect.lp_monitor     1|2|4|inf        (4)
//   diag.fractional    s:p pairs, comma separated  (0.4:2)
//   output.dir            string           (out)
//   output.snapshot_every real >= 0        (0 = final snapshot only)
//   suite.checks      names or "all"       (all)
//   suite.alphas      comma list in (1,2]  (1.25,1.5,2)
//   suite.samples     int >= 10000         (100000)
//   suite.seed        u64                  (1)
//   suite.kernel_grid even int >= 32       (256)
//   sweep.amplitudes  comma list >= 0      (0,100)
// '#' starts a comment; blank lines are ignored; unknown or duplicate keys
// are rejected.
struct ExperimentConfig {
    GridSpec grid{{64, 64, 64},
                  {6.283185307179586, 6.283185307179586, 6.283185307179586}};
    FlowParams flow{0.0, 2.0};
    InitConfig init;
    double T = 1.0;
    StepConfig step;
    double record_every = 0.05;
    std::vector<std::pair<double, double>> fractional = {{0.4, 2.0}};
    std::string output_dir = "out";
    double snapshot_every = 0.0;
    SuiteConfig suite;
    std::vector<double> sweep_amplitudes = {0.0, 100.0};
};

// Parse + validate + fill defaults. ParseError carries the 1-based line
// number; ValidationError names the offending key and the allowed range.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path); // IoError if unreadable

// Canonical echo: every key explicit, one per line, schema order.
// parse(render(c)) == c.
std::string render_config(const ExperimentConfig& cfg);

} // namespace cks

#endif
