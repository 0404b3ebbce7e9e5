#ifndef CKS_CSV_HPP
#define CKS_CSV_HPP

#include <iosfwd>
#include <string>

#include "cks/diagnostics.hpp"

namespace cks {

// Shortest decimal string that round-trips the value ("0.1", "1e+300", ...).
std::string format_double(double v);

// Strict full-string parse; throws FormatError otherwise.
double parse_double(const std::string& s);

// Column layout:
//   t,mass,min_value,l1,l2,l4,linf,<frac...>,remap_loss,max_b
// with one fractional column frac_s<S>_p<P> per configured (s, p) pair.
// Comma separator, '.' decimal point, header row first.
void write_series_csv(const TimeSeries& series, std::ostream& out);
void write_series_csv(const TimeSeries& series, const std::string& path);

// Inverse of write_series_csv; recovers the fractional orders from the
// header. Throws ParseError (with a 1-based line number) on malformed input.
TimeSeries read_series_csv(std::istream& in);
TimeSeries read_series_csv(const std::string& path);

} // namespace cks

#endif
