#include "cks/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "cks/errors.hpp"

namespace cks {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double v{};
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw FormatError("not a number: '" + s + "'");
    return v;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string frac_column_name(double s, double p) {
    return "frac_s" + format_double(s) + "_p" + format_double(p);
}

// frac_s<S>_p<P> -> (S, P)
std::pair<double, double> parse_frac_column(const std::string& name) {
    if (name.rfind("frac_s", 0) != 0)
        throw FormatError("not a fractional column: " + name);
    const std::size_t psep = name.rfind("_p");
    if (psep == std::string::npos || psep < 6)
        throw FormatError("not a fractional column: " + name);
    return {parse_double(name.substr(6, psep - 6)),
            parse_double(name.substr(psep + 2))};
}

} // namespace

void write_series_csv(const TimeSeries& series, std::ostream& out) {
    out << "t,mass,min_value,l1,l2,l4,linf";
    for (const auto& [s, p] : series.fractional_orders)
        out << ',' << frac_column_name(s, p);
    out << ",remap_loss,max_b\n";
    for (const auto& r : series.rows) {
        if (r.fractional.size() != series.fractional_orders.size())
            throw FormatError("row fractional count does not match header");
        out << format_double(r.t) << ',' << format_double(r.mass) << ','
            << format_double(r.min_value) << ',' << format_double(r.l1) << ','
            << format_double(r.l2) << ',' << format_double(r.l4) << ','
            << format_double(r.linf);
        for (double v : r.fractional) out << ',' << format_double(v);
        out << ',' << format_double(r.remap_loss) << ','
            << format_double(r.max_b) << '\n';
    }
}

void write_series_csv(const TimeSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    write_series_csv(series, out);
    if (!out) throw IoError("write to " + path + " failed");
}

TimeSeries read_series_csv(std::istream& in) {
    std::string line;
    int lineno = 0;
    auto fail = [&lineno](const std::string& msg) -> ParseError {
        return ParseError(lineno, msg);
    };

    if (!std::getline(in, line)) throw ParseError(1, "missing header row");
    lineno = 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_line(line);
    if (header.size() < 9 || header[0] != "t" || header[1] != "mass" ||
        header[2] != "min_value" || header[3] != "l1" || header[4] != "l2" ||
        header[5] != "l4" || header[6] != "linf" ||
        header[header.size() - 2] != "remap_loss" ||
        header.back() != "max_b")
        throw fail("unexpected header: " + line);

    TimeSeries series;
    for (std::size_t i = 7; i + 2 < header.size(); ++i) {
        try {
            series.fractional_orders.push_back(parse_frac_column(header[i]));
        } catch (const FormatError& e) {
            throw fail(e.what());
        }
    }

    const std::size_t ncols = header.size();
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != ncols)
            throw fail("expected " + std::to_string(ncols) + " columns, got " +
                       std::to_string(cells.size()));
        std::vector<double> vals;
        vals.reserve(ncols);
        for (const auto& cell : cells) {
            try {
                vals.push_back(parse_double(cell));
            } catch (const FormatError& e) {
                throw fail(e.what());
            }
        }
        TimeSeriesRow row{};
        row.t = vals[0];
        row.mass = vals[1];
        row.min_value = vals[2];
        row.l1 = vals[3];
        row.l2 = vals[4];
        row.l4 = vals[5];
        row.linf = vals[6];
        row.fractional.assign(vals.begin() + 7, vals.end() - 2);
        row.remap_loss = vals[ncols - 2];
        row.max_b = vals[ncols - 1];
        series.rows.push_back(std::move(row));
    }
    return series;
}

TimeSeries read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return read_series_csv(in);
}

} // namespace cks
