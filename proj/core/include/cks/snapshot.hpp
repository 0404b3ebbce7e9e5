#ifndef CKS_SNAPSHOT_HPP
#define CKS_SNAPSHOT_HPP

#include <array>
#include <cstdint>
#include <string>

#include "cks/frame.hpp"

namespace cks {

// Binary checkpoint layout (little endian):
//   magic "CKS1" | version u32 | dims u32 x3 | box f64 x3
//   | t f64 | alpha f64 | A f64 | t_ref f64
//   | dims-product f64 real-space samples, row major, z fastest.
inline constexpr std::uint32_t snapshot_version = 1;

struct SnapshotHeader {
    std::array<std::uint32_t, 3> dims;
    std::array<double, 3> box;
    double t;
    double alpha;
    double A;
    double t_ref;
};

struct Snapshot {
    SnapshotHeader header;
    Field samples; // exactly the f64 payload, no transform applied
};

// Synthesizes the physical samples of state.n_hat and stores them verbatim;
// those bytes round trip bit-identically through read_snapshot_raw.
void write_snapshot(const SimState& state, const std::string& path);

// Header + raw payload, untouched. Throws IoError on filesystem failure and
// FormatError on bad magic, version mismatch (naming expected/found),
// truncation, trailing bytes, or a header that violates grid invariants.
Snapshot read_snapshot_raw(const std::string& path);

// Raw samples re-analysed into spectral coefficients, ready to resume.
SimState read_snapshot(const std::string& path);

} // namespace cks

#endif
