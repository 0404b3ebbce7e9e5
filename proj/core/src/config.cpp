#include "cks/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "cks/csv.hpp"
#include "cks/errors.hpp"

namespace cks {

namespace {

struct RawEntry {
    std::string value;
    int line;
    bool used = false;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' &&
            c != '_')
            return false;
    return true;
}

class KeyBag {
  public:
    explicit KeyBag(std::istream& in) {
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string stripped = trim(line);
            if (stripped.empty()) continue;
            const auto eq = stripped.find('=');
            if (eq == std::string::npos)
                throw ParseError(lineno, "expected key = value, got '" +
                                             stripped + "'");
            const std::string key = trim(stripped.substr(0, eq));
            if (!valid_key(key))
                throw ParseError(lineno, "malformed key '" + key + "'");
            const std::string value = trim(stripped.substr(eq + 1));
            if (entries_.count(key))
                throw ValidationError(key, "duplicate key (first at line " +
                                               std::to_string(
                                                   entries_[key].line) +
                                               ")");
            entries_[key] = RawEntry{value, lineno, false};
        }
    }

    const std::string* take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        it->second.used = true;
        return &it->second.value;
    }

    void reject_unknown() const {
        for (const auto& [key, entry] : entries_)
            if (!entry.used)
                throw ValidationError(key, "unknown key (line " +
                                               std::to_string(entry.line) +
                                               ")");
    }

  private:
    std::map<std::string, RawEntry> entries_;
};

double as_double(const std::string& key, const std::string& raw) {
    std::string s = raw;
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (s == "inf" || s == "+inf" || s == "infinity")
        return std::numeric_limits<double>::infinity();
    try {
        return parse_double(raw);
    } catch (const FormatError& e) {
        throw ValidationError(key, e.what());
    }
}

long as_long(const std::string& key, const std::string& raw) {
    const double v = as_double(key, raw);
    const long n = static_cast<long>(v);
    if (double(n) != v) throw ValidationError(key, "expected an integer");
    return n;
}

std::uint64_t as_u64(const std::string& key, const std::string& raw) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(key, "expected an unsigned integer, got '" +
                                       raw + "'");
    }
}

std::vector<std::string> split_commas(const std::string& raw) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = raw.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(trim(raw.substr(start)));
            return out;
        }
        out.push_back(trim(raw.substr(start, comma - start)));
        start = comma + 1;
    }
}

std::vector<double> as_double_list(const std::string& key,
                                   const std::string& raw) {
    std::vector<double> out;
    for (const auto& cell : split_commas(raw)) out.push_back(as_double(key, cell));
    return out;
}

void require(bool ok, const std::string& key, const std::string& range) {
    if (!ok) throw ValidationError(key, range);
}

} // namespace

ExperimentConfig parse_config(std::istream& in) {
    KeyBag bag(in);
    ExperimentConfig cfg;

    if (const auto* v = bag.take("grid.n")) {
        const auto ns = as_double_list("grid.n", *v);
        require(ns.size() == 1 || ns.size() == 3, "grid.n",
                "expected 1 or 3 integers");
        for (std::size_t i = 0; i < 3; ++i) {
            const double x = ns[ns.size() == 1 ? 0 : i];
            require(x == std::floor(x) && x >= 8 &&
                        std::fmod(x, 2.0) == 0.0,
                    "grid.n", "entries must be even integers >= 8");
            cfg.grid.n[i] = int(x);
        }
    }
    if (const auto* v = bag.take("grid.box")) {
        const auto bs = as_double_list("grid.box", *v);
        require(bs.size() == 1 || bs.size() == 3, "grid.box",
                "expected 1 or 3 reals");
        for (std::size_t i = 0; i < 3; ++i) {
            const double x = bs[bs.size() == 1 ? 0 : i];
            require(x > 0.0 && std::isfinite(x), "grid.box",
                    "entries must be positive finite reals");
            cfg.grid.box[i] = x;
        }
    }
    cfg.grid = GridSpec(cfg.grid.n, cfg.grid.box); // re-run the invariants

    double A = cfg.flow.A, alpha = cfg.flow.alpha;
    if (const auto* v = bag.take("flow.A")) {
        A = as_double("flow.A", *v);
        require(A >= 0.0 && std::isfinite(A), "flow.A", "must be >= 0");
    }
    if (const auto* v = bag.take("flow.alpha")) {
        alpha = as_double("flow.alpha", *v);
        require(alpha > 1.0 && alpha <= 2.0, "flow.alpha",
                "alpha must lie in (1,2]");
    }
    cfg.flow = FlowParams(A, alpha);

    if (const auto* v = bag.take("init.kind")) {
        require(*v == "gaussian" || *v == "modes" || *v == "file",
                "init.kind", "must be gaussian, modes or file");
        cfg.init.kind = *v;
    }
    if (const auto* v = bag.take("init.mass")) {
        cfg.init.mass = as_double("init.mass", *v);
        require(cfg.init.mass > 0.0 && std::isfinite(cfg.init.mass),
                "init.mass", "must be > 0");
    }
    if (const auto* v = bag.take("init.sigma")) {
        cfg.init.sigma = as_double("init.sigma", *v);
        require(cfg.init.sigma > 0.0 && std::isfinite(cfg.init.sigma),
                "init.sigma", "must be > 0");
    }
    if (const auto* v = bag.take("init.center")) {
        const auto cs = as_double_list("init.center", *v);
        require(cs.size() == 3, "init.center", "expected 3 reals");
        for (int i = 0; i < 3; ++i) {
            require(std::isfinite(cs[i]), "init.center", "must be finite");
            cfg.init.center[i] = cs[i];
        }
        cfg.init.center_set = true;
    }
    if (!cfg.init.center_set)
        for (int i = 0; i < 3; ++i) cfg.init.center[i] = 0.5 * cfg.grid.box[i];
    cfg.init.center_set = true;
    if (const auto* v = bag.take("init.seed"))
        cfg.init.seed = as_u64("init.seed", *v);
    if (const auto* v = bag.take("init.modes")) {
        const long m = as_long("init.modes", *v);
        require(m >= 1, "init.modes", "must be >= 1");
        cfg.init.modes = int(m);
    }
    if (const auto* v = bag.take("init.file")) cfg.init.file = *v;
    require(cfg.init.kind != "file" || !cfg.init.file.empty(), "init.file",
            "required when init.kind = file");

    if (const auto* v = bag.take("time.T")) {
        cfg.T = as_double("time.T", *v);
        require(cfg.T > 0.0 && std::isfinite(cfg.T), "time.T", "must be > 0");
    }
    if (const auto* v = bag.take("time.dt_max")) {
        cfg.step.dt_max = as_double("time.dt_max", *v);
        require(cfg.step.dt_max > 0.0 && std::isfinite(cfg.step.dt_max),
                "time.dt_max", "must be > 0");
    }
    if (const auto* v = bag.take("time.dt_min")) {
        cfg.step.dt_min = as_double("time.dt_min", *v);
        require(cfg.step.dt_min > 0.0 && cfg.step.dt_min <= cfg.step.dt_max,
                "time.dt_min", "must be in (0, dt_max]");
    }
    if (const auto* v = bag.take("time.cfl")) {
        cfg.step.cfl = as_double("time.cfl", *v);
        require(cfg.step.cfl > 0.0 && cfg.step.cfl <= 1.0, "time.cfl",
                "must lie in (0,1]");
    }
    if (const auto* v = bag.take("time.record_every")) {
        cfg.record_every = as_double("time.record_every", *v);
        require(cfg.record_every > 0.0 && std::isfinite(cfg.record_every),
                "time.record_every", "must be > 0");
    }

    if (const auto* v = bag.take("detect.blowup_factor")) {
        cfg.step.blowup_factor = as_double("detect.blowup_factor", *v);
        require(cfg.step.blowup_factor > 1.0 &&
                    std::isfinite(cfg.step.blowup_factor),
                "detect.blowup_factor", "must be > 1");
    }
    if (const auto* v = bag.take("detect.lp_monitor")) {
        cfg.step.lp_monitor = as_double("detect.lp_monitor", *v);
        const double p = cfg.step.lp_monitor;
        require(p == 1.0 || p == 2.0 || p == 4.0 || std::isinf(p),
                "detect.lp_monitor", "must be 1, 2, 4 or inf");
    }

    if (const auto* v = bag.take("diag.fractional")) {
        cfg.fractional.clear();
        if (!v->empty())
            for (const auto& cell : split_commas(*v)) {
                const auto colon = cell.find(':');
                require(colon != std::string::npos, "diag.fractional",
                        "entries must look like s:p");
                const double s =
                    as_double("diag.fractional", cell.substr(0, colon));
                const double p =
                    as_double("diag.fractional", cell.substr(colon + 1));
                require(s >= 0.0 && p >= 1.0, "diag.fractional",
                        "needs s >= 0 and p >= 1");
                cfg.fractional.emplace_back(s, p);
            }
    }

    if (const auto* v = bag.take("output.dir")) {
        require(!v->empty(), "output.dir", "must not be empty");
        cfg.output_dir = *v;
    }
    if (const auto* v = bag.take("output.snapshot_every")) {
        cfg.snapshot_every = as_double("output.snapshot_every", *v);
        require(cfg.snapshot_every >= 0.0 && std::isfinite(cfg.snapshot_every),
                "output.snapshot_every", "must be >= 0");
    }

    if (const auto* v = bag.take("suite.checks")) {
        cfg.suite.checks.clear();
        if (!v->empty())
            for (auto& name : split_commas(*v))
                if (!name.empty()) cfg.suite.checks.push_back(name);
    }
    if (const auto* v = bag.take("suite.alphas")) {
        cfg.suite.alphas = as_double_list("suite.alphas", *v);
        require(!cfg.suite.alphas.empty(), "suite.alphas",
                "must not be empty");
        for (double a : cfg.suite.alphas)
            require(a > 1.0 && a <= 2.0, "suite.alphas",
                    "alpha must lie in (1,2]");
    }
    if (const auto* v = bag.take("suite.samples")) {
        cfg.suite.samples = as_long("suite.samples", *v);
        require(cfg.suite.samples >= 10000, "suite.samples",
                "must be >= 10000");
    }
    if (const auto* v = bag.take("suite.seed"))
        cfg.suite.seed = as_u64("suite.seed", *v);
    if (const auto* v = bag.take("suite.kernel_grid")) {
        const long n = as_long("suite.kernel_grid", *v);
        require(n >= 32 && n % 2 == 0, "suite.kernel_grid",
                "must be an even integer >= 32");
        cfg.suite.kernel_grid = int(n);
    }

    if (const auto* v = bag.take("sweep.amplitudes")) {
        cfg.sweep_amplitudes = as_double_list("sweep.amplitudes", *v);
        require(!cfg.sweep_amplitudes.empty(), "sweep.amplitudes",
                "must not be empty");
        for (double a : cfg.sweep_amplitudes)
            require(a >= 0.0 && std::isfinite(a), "sweep.amplitudes",
                    "amplitudes must be >= 0");
    }

    bag.reject_unknown();
    cfg.step.validate();
    return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    return parse_config(in);
}

namespace {

std::string join(const std::vector<double>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ',';
        out += format_double(vs[i]);
    }
    return out;
}

} // namespace

std::string render_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "grid.n = " << cfg.grid.n[0] << ',' << cfg.grid.n[1] << ','
        << cfg.grid.n[2] << '\n';
    out << "grid.box = "
        << join({cfg.grid.box[0], cfg.grid.box[1], cfg.grid.box[2]}) << '\n';
    out << "flow.A = " << format_double(cfg.flow.A) << '\n';
    out << "flow.alpha = " << format_double(cfg.flow.alpha) << '\n';
    out << "init.kind = " << cfg.init.kind << '\n';
    out << "init.mass = " << format_double(cfg.init.mass) << '\n';
    out << "init.sigma = " << format_double(cfg.init.sigma) << '\n';
    out << "init.center = "
        << join({cfg.init.center[0], cfg.init.center[1], cfg.init.center[2]})
        << '\n';
    out << "init.seed = " << cfg.init.seed << '\n';
    out << "init.modes = " << cfg.init.modes << '\n';
    out << "init.file = " << cfg.init.file << '\n';
    out << "time.T = " << format_double(cfg.T) << '\n';
    out << "time.dt_max = " << format_double(cfg.step.dt_max) << '\n';
    out << "time.dt_min = " << format_double(cfg.step.dt_min) << '\n';
    out << "time.cfl = " << format_double(cfg.step.cfl) << '\n';
    out << "time.record_every = " << format_double(cfg.record_every) << '\n';
    out << "detect.blowup_factor = " << format_double(cfg.step.blowup_factor)
        << '\n';
    out << "detect.lp_monitor = "
        << (std::isinf(cfg.step.lp_monitor)
                ? std::string("inf")
                : format_double(cfg.step.lp_monitor))
        << '\n';
    out << "diag.fractional = ";
    for (std::size_t i = 0; i < cfg.fractional.size(); ++i) {
        if (i) out << ',';
        out << format_double(cfg.fractional[i].first) << ':'
            << format_double(cfg.fractional[i].second);
    }
    out << '\n';
    out << "output.dir = " << cfg.output_dir << '\n';
    out << "output.snapshot_every = " << format_double(cfg.snapshot_every)
        << '\n';
    out << "suite.checks = ";
    for (std::size_t i = 0; i < cfg.suite.checks.size(); ++i) {
        if (i) out << ',';
        out << cfg.suite.checks[i];
    }
    out << '\n';
    out << "suite.alphas = " << join(cfg.suite.alphas) << '\n';
    out << "suite.samples = " << cfg.suite.samples << '\n';
    out << "suite.seed = " << cfg.suite.seed << '\n';
    out << "suite.kernel_grid = " << cfg.suite.kernel_grid << '\n';
    out << "sweep.amplitudes = " << join(cfg.sweep_amplitudes) << '\n';
    return out.str();
}

} // namespace cks
