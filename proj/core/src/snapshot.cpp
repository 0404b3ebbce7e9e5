#include "cks/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "cks/errors.hpp"
#include "cks/spectral.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot layout is little endian; add byte swapping first");

namespace cks {

namespace {

constexpr char magic[4] = {'C', 'K', 'S', '1'};

template <typename T>
void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::ifstream& in, const char* what) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in)
        throw FormatError(std::string("truncated snapshot while reading ") +
                          what);
    return v;
}

} // namespace

void write_snapshot(const SimState& state, const std::string& path) {
    const Field f = to_physical(state.n_hat);
    const GridSpec& g = f.grid;

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(magic, 4);
    put(out, snapshot_version);
    for (int i = 0; i < 3; ++i) put(out, std::uint32_t(g.n[i]));
    for (int i = 0; i < 3; ++i) put(out, g.box[i]);
    put(out, state.t);
    put(out, state.frame.flow.alpha);
    put(out, state.frame.flow.A);
    put(out, state.frame.t_ref);
    out.write(reinterpret_cast<const char*>(f.v.data()),
              std::streamsize(f.v.size() * sizeof(double)));
    if (!out) throw IoError("write to " + path + " failed");
}

Snapshot read_snapshot_raw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);

    char found[4];
    in.read(found, 4);
    if (!in) throw FormatError("truncated snapshot while reading magic");
    if (std::memcmp(found, magic, 4) != 0)
        throw FormatError("bad magic: expected CKS1, found '" +
                          std::string(found, 4) + "'");
    const auto version = get<std::uint32_t>(in, "version");
    if (version != snapshot_version)
        throw FormatError("unsupported snapshot version: expected " +
                          std::to_string(snapshot_version) + ", found " +
                          std::to_string(version));

    SnapshotHeader h{};
    for (int i = 0; i < 3; ++i)
        h.dims[i] = get<std::uint32_t>(in, "dims");
    for (int i = 0; i < 3; ++i) h.box[i] = get<double>(in, "box");
    h.t = get<double>(in, "t");
    h.alpha = get<double>(in, "alpha");
    h.A = get<double>(in, "A");
    h.t_ref = get<double>(in, "t_ref");

    const GridSpec grid = [&h]() -> GridSpec {
        try {
            return GridSpec({int(h.dims[0]), int(h.dims[1]), int(h.dims[2])},
                            h.box);
        } catch (const DomainError& e) {
            throw FormatError(std::string("snapshot header invalid: ") +
                              e.what());
        }
    }();

    Field f(grid);
    in.read(reinterpret_cast<char*>(f.v.data()),
            std::streamsize(f.v.size() * sizeof(double)));
    if (std::size_t(in.gcount()) != f.v.size() * sizeof(double))
        throw FormatError("truncated snapshot payload: expected " +
                          std::to_string(f.v.size()) + " samples");
    in.peek();
    if (!in.eof()) throw FormatError("trailing bytes after payload");
    return Snapshot{h, std::move(f)};
}

SimState read_snapshot(const std::string& path) {
    Snapshot snap = read_snapshot_raw(path);
    FlowParams flow(snap.header.A, snap.header.alpha);
    SimState state{ShearFrame{snap.header.t_ref, flow},
                   to_spectral(snap.samples), snap.header.t};
    return state;
}

} // namespace cks
