// End-to-end checks of the command line binary: every subcommand is driven
// as a real subprocess and judged by its exit code and the files it leaves
// behind. Runs inside a scratch working directory provided by ctest.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cks/csv.hpp"
#include "cks/diagnostics.hpp"

namespace fs = std::filesystem;
using namespace cks;

namespace {

constexpr double pi = std::numbers::pi;

int run_cli(const std::string& args, const std::string& tag) {
    const std::string cmd = std::string("\"") + CKS_BIN + "\" " + args +
                            " > " + tag + "_out.txt 2> " + tag + "_err.txt";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(bool(in), "missing file: " << path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(bool(out));
    out << content;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

// |a - b| within tol, measured against max(1, |a|, |b|) so that columns
// hovering around zero compare by absolute difference.
bool close_mixed(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

// L^p norm of a mass-M Gaussian of width sigma, images negligible.
double gaussian_lp(double mass, double sigma2, double p) {
    if (std::isinf(p)) return mass * std::pow(2.0 * pi * sigma2, -1.5);
    return mass * std::pow(2.0 * pi * sigma2, -1.5 * (1.0 - 1.0 / p)) *
           std::pow(p, -1.5 / p);
}

double fit_loglog(const std::vector<std::pair<double, double>>& pts) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        const double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = double(pts.size());
    return (sxy - sx * sy / n) / (sxx - sx * sx / n);
}

} // namespace

TEST_CASE("simulate --linear-only tracks the exact heat solution") {
    fs::remove_all("lin_out");
    spit("lin.cfg",
         "grid.n = 32\n"
         "grid.box = 12.566370614359172\n" // 4 pi
         "flow.A = 0\n"
         "flow.alpha = 2\n"
         "init.mass = 2.5\n"
         "init.sigma = 1.25\n" // wide: negligible content at the dealias cut
         "time.T = 0.5\n"
         "time.dt_max = 0.05\n"
         "time.record_every = 0.025\n"
         "output.dir = lin_out\n");
    const int rc = run_cli("simulate --config lin.cfg --linear-only", "lin");
    CHECK(rc == 0);
    const std::string out = slurp("lin_out.txt");
    CHECK(contains(out, "status: ok"));
    CHECK(contains(out, "wrote lin_out/series.csv"));
    CHECK(fs::exists("lin_out/config.txt"));
    CHECK(fs::exists("lin_out/status.txt"));
    CHECK(fs::exists("lin_out/final.cks"));
    CHECK(contains(slurp("lin_out/status.txt"), "outcome ok"));

    const TimeSeries series = read_series_csv("lin_out/series.csv");
    REQUIRE(series.rows.size() == 21); // t = 0, 0.025, ..., 0.5
    for (const TimeSeriesRow& r : series.rows) {
        const double sig2 = 1.25 * 1.25 + 2.0 * r.t;
        CHECK(std::fabs(r.mass - 2.5) < 1e-12);
        CHECK(std::fabs(r.l1 - 2.5) < 1e-8);
        CHECK(r.min_value > -1e-8);
        CHECK(std::fabs(r.l2 / gaussian_lp(2.5, sig2, 2.0) - 1.0) < 1e-5);
        CHECK(std::fabs(r.l4 / gaussian_lp(2.5, sig2, 4.0) - 1.0) < 1e-5);
        CHECK(std::fabs(r.linf / gaussian_lp(2.5, sig2,
                                             std::numeric_limits<double>::infinity()) -
                        1.0) < 1e-5);
        CHECK(r.max_b > 0.0); // drift is recorded even when it is not applied
        CHECK(r.remap_loss == 0.0);
    }
}

TEST_CASE("report renders rate tables from a finished run") {
    // Relies on lin_out from the previous case; regenerate when absent.
    if (!fs::exists("lin_out/series.csv")) {
        REQUIRE(run_cli("simulate --config lin.cfg --linear-only", "lin2") == 0);
    }
    const int rc = run_cli("report --config lin.cfg", "rep");
    CHECK(rc == 0);
    const std::string csv = slurp("lin_out/rates.csv");
    const auto rows = lines_of(csv);
    REQUIRE(rows.size() >= 6);
    CHECK(rows[0] == "column,t_lo,t_hi,slope,r2,theory,difference");
    bool saw_l2 = false;
    for (const auto& row : rows) {
        if (row.rfind("l2,", 0) != 0) continue;
        saw_l2 = true;
        std::istringstream in(row);
        std::string cell;
        std::getline(in, cell, ','); // name
        std::getline(in, cell, ','); // t_lo
        CHECK(parse_double(cell) == doctest::Approx(0.25));
        std::getline(in, cell, ','); // t_hi
        CHECK(parse_double(cell) == doctest::Approx(0.5));
        std::getline(in, cell, ','); // slope: a real fit, not a placeholder
        CHECK(std::isfinite(parse_double(cell)));
        CHECK(parse_double(cell) < 0.0);
        std::getline(in, cell, ','); // r2
        CHECK(parse_double(cell) > 0.9);
        std::getline(in, cell, ','); // shear-enhanced l2 rate at alpha = 2
        CHECK(parse_double(cell) == doctest::Approx(-1.25));
    }
    CHECK(saw_l2);
    CHECK(contains(slurp("lin_out/rates.txt"), "l2"));
    CHECK(contains(slurp("rep_out.txt"), "column"));
}

TEST_CASE("identical configuration and seed give byte-identical outputs") {
    fs::remove_all("det_a");
    fs::remove_all("det_b");
    fs::remove_all("det_c");
    spit("det.cfg",
         "grid.n = 16\n"
         "flow.A = 1\n"
         "flow.alpha = 1.5\n"
         "init.kind = modes\n"
         "init.modes = 3\n"
         "time.T = 0.2\n"
         "time.dt_max = 0.005\n"
         "time.record_every = 0.05\n");
    REQUIRE(run_cli("simulate --config det.cfg --seed 77 --out det_a", "da") == 0);
    REQUIRE(run_cli("simulate --config det.cfg --seed 77 --out det_b", "db") == 0);
    CHECK(slurp("det_a/series.csv") == slurp("det_b/series.csv"));
    CHECK(slurp("det_a/final.cks") == slurp("det_b/final.cks"));

    // A different seed must actually change the run.
    REQUIRE(run_cli("simulate --config det.cfg --seed 78 --out det_c", "dc") == 0);
    CHECK(slurp("det_a/series.csv") != slurp("det_c/series.csv"));
}

TEST_CASE("resume from a snapshot reproduces the tail of the series") {
    fs::remove_all("full_out");
    fs::remove_all("res_out");
    spit("res.cfg",
         "grid.n = 16\n"
         "flow.A = 1\n"
         "flow.alpha = 1.5\n"
         "init.sigma = 0.7\n"
         "time.T = 0.5\n"
         "time.dt_max = 0.005\n"
         "time.record_every = 0.05\n"
         "output.dir = full_out\n"
         "output.snapshot_every = 0.25\n");
    REQUIRE(run_cli("simulate --config res.cfg", "full") == 0);
    REQUIRE(fs::exists("full_out/snap_000001.cks"));

    REQUIRE(run_cli("simulate --config res.cfg"
                    " --resume full_out/snap_000001.cks --out res_out",
                    "res") == 0);
    const TimeSeries full = read_series_csv("full_out/series.csv");
    const TimeSeries tail = read_series_csv("res_out/series.csv");
    REQUIRE(!tail.rows.empty());
    CHECK(tail.rows.front().t == doctest::Approx(0.25).epsilon(1e-12));
    std::size_t matched = 0;
    for (const TimeSeriesRow& r : tail.rows) {
        const TimeSeriesRow* twin = nullptr;
        for (const TimeSeriesRow& f : full.rows)
            if (std::fabs(f.t - r.t) < 1e-9) twin = &f;
        REQUIRE(twin != nullptr);
        ++matched;
        CHECK(close_mixed(r.mass, twin->mass, 1e-12));
        CHECK(close_mixed(r.min_value, twin->min_value, 1e-12));
        CHECK(close_mixed(r.l1, twin->l1, 1e-12));
        CHECK(close_mixed(r.l2, twin->l2, 1e-12));
        CHECK(close_mixed(r.l4, twin->l4, 1e-12));
        CHECK(close_mixed(r.linf, twin->linf, 1e-12));
        CHECK(close_mixed(r.max_b, twin->max_b, 1e-12));
        REQUIRE(r.fractional.size() == twin->fractional.size());
        for (std::size_t i = 0; i < r.fractional.size(); ++i)
            CHECK(close_mixed(r.fractional[i], twin->fractional[i], 1e-12));
    }
    CHECK(matched == tail.rows.size());
    CHECK(matched >= 6); // 0.25 through 0.5 every 0.05

    // A mismatched flow must be rejected before any stepping happens.
    spit("res_bad.cfg",
         "grid.n = 16\n"
         "flow.A = 2\n"
         "flow.alpha = 1.5\n"
         "time.T = 0.5\n");
    const int rc = run_cli("simulate --config res_bad.cfg"
                           " --resume full_out/snap_000001.cks --out res_bad",
                           "resbad");
    CHECK(rc == 2);
    CHECK(contains(slurp("resbad_err.txt"), "error: resume"));
}

TEST_CASE("configuration errors exit with code 2 and a message") {
    spit("bad_alpha.cfg", "flow.alpha = 3\n");
    CHECK(run_cli("simulate --config bad_alpha.cfg", "bada") == 2);
    CHECK(contains(slurp("bada_err.txt"), "error: flow.alpha"));

    spit("bad_key.cfg", "grid.nx = 4\n");
    CHECK(run_cli("simulate --config bad_key.cfg", "badk") == 2);
    CHECK(contains(slurp("badk_err.txt"), "error: grid.nx"));

    CHECK(run_cli("simulate --config does_not_exist.cfg", "badf") == 2);
    CHECK(contains(slurp("badf_err.txt"), "error:"));

    // Unknown subcommands are a usage error, not a crash.
    CHECK(run_cli("frobnicate", "badsub") != 0);
}

TEST_CASE("estimates with no selected checks emits an empty passing report") {
    fs::remove_all("est_none");
    spit("none.cfg",
         "suite.checks = none\n"
         "output.dir = est_none\n");
    CHECK(run_cli("estimates --config none.cfg", "estn") == 0);
    const auto rows = lines_of(slurp("est_none/report.csv"));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0] == "check,params,value,expected,tolerance,r2,pass");
    CHECK(fs::exists("est_none/report.txt"));
}

TEST_CASE("estimates runs the inequality bank and reports passes") {
    fs::remove_all("est_out");
    spit("est.cfg",
         "suite.checks = inequalities\n"
         "suite.samples = 10000\n"
         "suite.seed = 3\n"
         "output.dir = est_out\n");
    CHECK(run_cli("estimates --config est.cfg", "est") == 0);
    const std::string text = slurp("est_out/report.txt");
    CHECK(contains(text, "PASS"));
    CHECK(!contains(text, "FAIL"));
    CHECK(contains(text, "moment_lower"));
    CHECK(contains(text, "moment_upper"));
    const auto rows = lines_of(slurp("est_out/report.csv"));
    REQUIRE(rows.size() > 1);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i].substr(rows[i].rfind(',') + 1) == "1");
    CHECK(slurp("est_out.txt") == text); // stdout mirrors the text report
}

TEST_CASE("kernel sweep writes decay tables with the expected slopes") {
    fs::remove_all("ker_out");
    // The sheared block needs the full default grid: the tilted symbol
    // ridge leaves less band headroom than the unsheared scaling suggests.
    spit("ker.cfg",
         "suite.alphas = 2\n"
         "suite.kernel_grid = 256\n"
         "output.dir = ker_out\n");
    CHECK(run_cli("kernel --config ker.cfg", "ker") == 0);
    const auto rows = lines_of(slurp("ker_out/kernel.csv"));
    REQUIRE(rows.size() > 1);
    CHECK(rows[0] == "alpha,A,t,deriv,value");

    std::vector<std::pair<double, double>> grad_t;  // value vs t at A = 0
    std::vector<std::pair<double, double>> grad_A;  // value vs A at t = 1
    std::vector<std::pair<double, double>> span_A;  // transverse derivative
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::istringstream in(rows[i]);
        std::string alpha, A, t, deriv, value;
        std::getline(in, alpha, ',');
        std::getline(in, A, ',');
        std::getline(in, t, ',');
        std::getline(in, deriv, ',');
        std::getline(in, value, ',');
        const double v = parse_double(value);
        CHECK(std::isfinite(v));
        CHECK(v > 0.0);
        if (A == "0" && deriv == "100")
            grad_t.emplace_back(parse_double(t), v);
        if (A != "0" && deriv == "100")
            grad_A.emplace_back(parse_double(A), v);
        if (A != "0" && deriv == "010")
            span_A.emplace_back(parse_double(A), v);
    }
    REQUIRE(grad_t.size() == 6);
    REQUIRE(grad_A.size() == 7);
    REQUIRE(span_A.size() == 7);
    // Unsheared heat scaling: the x derivative decays like t^{-1/2}.
    CHECK(std::fabs(fit_loglog(grad_t) + 0.5) < 0.05);
    // Shear thins the streamwise direction one power faster ...
    CHECK(std::fabs(fit_loglog(grad_A) + 1.0) < 0.1);
    // ... and leaves the transverse derivatives alone.
    CHECK(std::fabs(fit_loglog(span_A)) < 0.1);
}

TEST_CASE("sweep compares sheared runs against the unsheared baseline") {
    fs::remove_all("swe_out");
    spit("swe.cfg",
         "grid.n = 16\n"
         "flow.alpha = 1.5\n"
         "init.sigma = 0.7\n"
         "time.T = 0.3\n"
         "time.dt_max = 0.005\n"
         "time.record_every = 0.1\n"
         "sweep.amplitudes = 0,5\n"
         "output.dir = swe_out\n");
    CHECK(run_cli("sweep --config swe.cfg", "swe") == 0);
    CHECK(fs::exists("swe_out/A_0/series.csv"));
    CHECK(fs::exists("swe_out/A_5/series.csv"));

    const auto rows = lines_of(slurp("swe_out/sweep.csv"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "A,outcome,t_end,final_monitor,suppressed");
    CHECK(rows[1].rfind("0,ok,", 0) == 0);
    CHECK(rows[2].rfind("5,ok,", 0) == 0);
    CHECK(rows[1].substr(rows[1].rfind(',') + 1) == "-");
    CHECK(rows[2].substr(rows[2].rfind(',') + 1) == "0");

    // A subcritical baseline cannot demonstrate suppression.
    const std::string verdict = slurp("swe_out/verdict.txt");
    CHECK(contains(verdict, "not suppressed"));
    CHECK(contains(verdict, "did not blow up"));
}
