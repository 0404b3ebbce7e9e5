// Command line front end: simulate | estimates | kernel | sweep | report.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cks/config.hpp"
#include "cks/csv.hpp"
#include "cks/errors.hpp"
#include "cks/estimates.hpp"
#include "cks/init.hpp"
#include "cks/snapshot.hpp"
#include "cks/spectral.hpp"
#include "cks/stepper.hpp"

namespace fs = std::filesystem;
using namespace cks;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_seed = true) {
    cmd->add_option("--config", o.config_path, "experiment config file");
    cmd->add_option("--out", o.out_dir, "output directory (overrides output.dir)");
    if (with_seed)
        cmd->add_option("--seed", o.seed, "seed override for init and suite")
            ->each([&o](const std::string&) { o.seed_set = true; });
}

ExperimentConfig load_opts(const CommonOpts& o) {
    ExperimentConfig cfg = o.config_path.empty()
                               ? parse_config_text("")
                               : load_config(o.config_path);
    if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
    if (o.seed_set) {
        cfg.init.seed = o.seed;
        cfg.suite.seed = o.seed;
    }
    return cfg;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
    if (!out) throw IoError("write to " + path + " failed");
}

std::string status_text(const RunResult& res) {
    std::ostringstream out;
    out << "outcome " << outcome_name(res.status.outcome) << '\n';
    out << "t " << format_double(res.status.t) << '\n';
    if (!res.status.detail.empty()) out << "detail " << res.status.detail << '\n';
    for (const auto& w : res.warnings) out << "warning " << w << '\n';
    return out.str();
}

StepConfig step_config(const ExperimentConfig& cfg, bool linear_only) {
    StepConfig sc = cfg.step;
    if (linear_only) sc.linear_only = true;
    return sc;
}

// Run one experiment into dir: series.csv, status.txt, config.txt, final.cks
// and periodic snapshots. Returns the result for callers that keep going.
RunResult run_experiment(const ExperimentConfig& cfg, bool linear_only,
                         const std::string& resume_path,
                         const std::string& dir) {
    fs::create_directories(dir);
    write_text(dir + "/config.txt", render_config(cfg));

    const StepConfig sc = step_config(cfg, linear_only);

    int snap_index = 0;
    double next_snap = cfg.snapshot_every > 0.0
                           ? cfg.snapshot_every
                           : std::numeric_limits<double>::infinity();
    RecordHook hook = [&](const SimState& s, const TimeSeriesRow& row) {
        if (row.t + 1e-12 < next_snap) return;
        char name[32];
        std::snprintf(name, sizeof name, "snap_%06d.cks", ++snap_index);
        write_snapshot(s, dir + "/" + name);
        while (next_snap <= row.t + 1e-12) next_snap += cfg.snapshot_every;
    };

    RunResult res = [&] {
        if (!resume_path.empty()) {
            SimState state = read_snapshot(resume_path);
            if (!(state.n_hat.grid == cfg.grid))
                throw ValidationError("resume",
                                      "snapshot grid does not match config");
            if (state.frame.flow.alpha != cfg.flow.alpha ||
                state.frame.flow.A != cfg.flow.A)
                throw ValidationError("resume",
                                      "snapshot flow does not match config");
            next_snap = cfg.snapshot_every > 0.0
                            ? (std::floor(state.t / cfg.snapshot_every) + 1.0) *
                                  cfg.snapshot_every
                            : std::numeric_limits<double>::infinity();
            return run_state(std::move(state), sc, cfg.T, cfg.record_every,
                             cfg.fractional, hook);
        }
        const Field n0 = initial_data(cfg.init, cfg.grid);
        return run(n0, cfg.flow, sc, cfg.T, cfg.record_every, cfg.fractional,
                   hook);
    }();

    write_series_csv(res.series, dir + "/series.csv");
    write_text(dir + "/status.txt", status_text(res));
    write_snapshot(res.state, dir + "/final.cks");
    return res;
}

RunSummary summarize(const ExperimentConfig& cfg, const RunResult& res) {
    double monitor0 = 0.0;
    if (!res.series.rows.empty()) {
        const TimeSeriesRow& r0 = res.series.rows.front();
        const double p = cfg.step.lp_monitor;
        monitor0 = p == 1.0 ? r0.l1
                   : p == 2.0 ? r0.l2
                   : p == 4.0 ? r0.l4
                              : r0.linf;
    }
    return RunSummary{cfg.grid,
                      cfg.flow.alpha,
                      cfg.flow.A,
                      cfg.step.lp_monitor,
                      res.series.rows.empty() ? 0.0
                                              : res.series.rows.front().mass,
                      monitor0,
                      res.status,
                      res.series};
}

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    return v;
}

int cmd_simulate(const CommonOpts& o, bool linear_only,
                 const std::string& resume_path) {
    const ExperimentConfig cfg = load_opts(o);
    const RunResult res =
        run_experiment(cfg, linear_only, resume_path, cfg.output_dir);
    std::cout << "status: " << outcome_name(res.status.outcome) << " at t="
              << format_double(res.status.t) << '\n';
    for (const auto& w : res.warnings) std::cout << "warning: " << w << '\n';
    std::cout << "wrote " << cfg.output_dir << "/series.csv ("
              << res.series.rows.size() << " rows)\n";
    return 0;
}

int cmd_estimates(const CommonOpts& o) {
    const ExperimentConfig cfg = load_opts(o);
    const EstimateReport rep = run_estimate_suite(cfg.suite);
    fs::create_directories(cfg.output_dir);
    write_report_csv(rep, cfg.output_dir + "/report.csv");
    const std::string text = render_report_text(rep);
    write_text(cfg.output_dir + "/report.txt", text);
    std::cout << text;
    if (rep.all_pass()) return 0;
    for (const auto& r : rep.records)
        if (!r.pass)
            std::cerr << "FAIL," << r.check << ',' << r.params << ','
                      << format_double(r.value) << ','
                      << format_double(r.expected) << ','
                      << format_double(r.tolerance) << '\n';
    return 1;
}

int cmd_kernel(const CommonOpts& o) {
    const ExperimentConfig cfg = load_opts(o);
    fs::create_directories(cfg.output_dir);
    std::ofstream out(cfg.output_dir + "/kernel.csv");
    if (!out) throw IoError("cannot open kernel.csv for writing");
    out << "alpha,A,t,deriv,value\n";

    const std::vector<std::array<int, 3>> derivs = {
        {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 2, 0}};
    auto emit = [&out](double alpha, double A, double t,
                       const std::array<int, 3>& d, double v) {
        out << format_double(alpha) << ',' << format_double(A) << ','
            << format_double(t) << ',' << d[0] << d[1] << d[2] << ','
            << format_double(v) << '\n';
    };

    for (double alpha : cfg.suite.alphas) {
        const int n = alpha == 2.0 ? std::max(32, cfg.suite.kernel_grid / 2)
                                   : std::max(64, cfg.suite.kernel_grid);
        const FlowParams fl(0.0, alpha);
        for (const auto& d : derivs)
            for (double t : logspace(1e-3, 4.0, 6))
                emit(alpha, 0.0, t,
                     d, kernel_l1_norm(d, t, fl, kernel_synthesis_grid(t, fl, n)));
    }
    // Shear sweep at the classical exponent.
    {
        const int n = std::max(32, cfg.suite.kernel_grid / 2);
        for (const auto& d :
             std::vector<std::array<int, 3>>{{1, 0, 0}, {0, 1, 0}})
            for (double A : logspace(10.0, 1e3, 7)) {
                const FlowParams fl(A, 2.0);
                emit(2.0, A, 1.0, d,
                     kernel_l1_norm(d, 1.0, fl,
                                    kernel_synthesis_grid(1.0, fl, n)));
            }
    }
    if (!out) throw IoError("write to kernel.csv failed");
    std::cout << "wrote " << cfg.output_dir << "/kernel.csv\n";
    return 0;
}

int cmd_sweep(const CommonOpts& o, bool linear_only) {
    const ExperimentConfig cfg = load_opts(o);
    if (cfg.sweep_amplitudes.empty())
        throw ValidationError("sweep.amplitudes", "no amplitudes configured");
    fs::create_directories(cfg.output_dir);

    std::vector<std::pair<double, RunSummary>> runs;
    for (double A : cfg.sweep_amplitudes) {
        ExperimentConfig c = cfg;
        c.flow = FlowParams(A, cfg.flow.alpha);
        std::ostringstream sub;
        sub << cfg.output_dir << "/A_" << format_double(A);
        c.output_dir = sub.str();
        const RunResult res = run_experiment(c, linear_only, "", c.output_dir);
        std::cout << "A=" << format_double(A) << ": "
                  << outcome_name(res.status.outcome) << " at t="
                  << format_double(res.status.t) << '\n';
        runs.emplace_back(A, summarize(c, res));
    }

    std::ostringstream csv, verdicts;
    csv << "A,outcome,t_end,final_monitor,suppressed\n";
    const RunSummary* base = nullptr;
    for (const auto& [A, s] : runs)
        if (A == 0.0) base = &s;
    for (const auto& [A, s] : runs) {
        const double p = s.lp_monitor;
        double fin = 0.0;
        if (!s.series.rows.empty()) {
            const TimeSeriesRow& r = s.series.rows.back();
            fin = p == 1.0 ? r.l1 : p == 2.0 ? r.l2 : p == 4.0 ? r.l4 : r.linf;
        }
        std::string sup = "-";
        if (base && A != 0.0) {
            const SuppressionVerdict v = suppression_verdict(*base, s);
            sup = v.suppressed ? "1" : "0";
            verdicts << "A=" << format_double(A) << ": "
                     << (v.suppressed ? "suppressed" : "not suppressed")
                     << " (" << v.reason << ")\n";
        }
        csv << format_double(A) << ',' << outcome_name(s.status.outcome)
            << ',' << format_double(s.status.t) << ',' << format_double(fin)
            << ',' << sup << '\n';
    }
    write_text(cfg.output_dir + "/sweep.csv", csv.str());
    write_text(cfg.output_dir + "/verdict.txt",
               verdicts.str().empty() ? std::string("no sheared run\n")
                                      : verdicts.str());
    std::cout << verdicts.str();
    return 0;
}

int cmd_report(const CommonOpts& o) {
    const ExperimentConfig cfg = load_opts(o);
    const std::string dir =
        o.out_dir.empty() ? cfg.output_dir : o.out_dir;
    const TimeSeries series = read_series_csv(dir + "/series.csv");
    if (series.rows.empty()) throw FormatError("series.csv has no rows");

    const double t_end = series.rows.back().t;
    const double t_lo = std::min(1.0, t_end / 2.0);

    struct Col {
        std::string name;
        double p;
        double s;
    };
    std::vector<Col> cols = {{"l1", 1.0, 0.0},
                             {"l2", 2.0, 0.0},
                             {"l4", 4.0, 0.0},
                             {"linf", std::numeric_limits<double>::infinity(), 0.0}};
    for (std::size_t i = 0; i < series.fractional_orders.size(); ++i)
        cols.push_back({"frac" + std::to_string(i),
                        series.fractional_orders[i].second,
                        series.fractional_orders[i].first});

    std::ostringstream table, csv;
    csv << "column,t_lo,t_hi,slope,r2,theory,difference\n";
    table << "column   fitted      r2          theory      difference   "
             "window\n";
    for (const auto& c : cols) {
        std::string fitted = "-", r2 = "-", diff = "-";
        double theory = theoretical_rate(c.p, cfg.flow.alpha, c.s);
        try {
            const DecayFit fit = fit_decay(series, c.name, t_lo, t_end);
            fitted = format_double(fit.slope);
            r2 = format_double(fit.r2);
            diff = format_double(fit.slope - theory);
            csv << c.name << ',' << format_double(fit.t_lo) << ','
                << format_double(fit.t_hi) << ',' << fitted << ',' << r2
                << ',' << format_double(theory) << ',' << diff << '\n';
        } catch (const Error& e) {
            csv << c.name << ",-,-,-,-," << format_double(theory) << ",-\n";
            fitted = std::string("(") + e.what() + ")";
        }
        std::ostringstream line;
        line << c.name;
        while (line.str().size() < 9) line << ' ';
        auto put = [&line](const std::string& s, std::size_t w) {
            line << s;
            for (std::size_t i = s.size(); i < w; ++i) line << ' ';
        };
        put(fitted, 12);
        put(r2, 12);
        put(format_double(theory), 12);
        put(diff, 13);
        line << '[' << format_double(t_lo) << ", " << format_double(t_end)
             << ']';
        table << line.str() << '\n';
    }
    fs::create_directories(dir);
    write_text(dir + "/rates.csv", csv.str());
    write_text(dir + "/rates.txt", table.str());
    std::cout << table.str();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral solver for fractional diffusion with "
                 "chemotactic drift in a Couette shear"};
    app.require_subcommand(1);

    CommonOpts sim_o, est_o, ker_o, swe_o, rep_o;
    bool linear_only = false, sweep_linear = false;
    std::string resume_path;

    CLI::App* sim = app.add_subcommand("simulate", "run one experiment");
    add_common(sim, sim_o);
    sim->add_flag("--linear-only", linear_only, "disable the nonlinear term");
    sim->add_option("--resume", resume_path, "snapshot to resume from");

    CLI::App* est = app.add_subcommand("estimates", "run the estimate suite");
    add_common(est, est_o);

    CLI::App* ker = app.add_subcommand("kernel", "kernel L1 norm sweeps");
    add_common(ker, ker_o, false);

    CLI::App* swe =
        app.add_subcommand("sweep", "suppression sweep over shear amplitudes");
    add_common(swe, swe_o);
    swe->add_flag("--linear-only", sweep_linear, "disable the nonlinear term");

    CLI::App* rep =
        app.add_subcommand("report", "render decay-rate tables from series.csv");
    add_common(rep, rep_o, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_o, linear_only, resume_path);
        if (est->parsed()) return cmd_estimates(est_o);
        if (ker->parsed()) return cmd_kernel(ker_o);
        if (swe->parsed()) return cmd_sweep(swe_o, sweep_linear);
        if (rep->parsed()) return cmd_report(rep_o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
