#include "cks/init.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "cks/errors.hpp"
#include "cks/snapshot.hpp"

namespace cks {

namespace {

// Periodized 1D unit-mass Gaussian: sum of images until they vanish.
double periodic_gaussian(double x, double sigma, double L) {
    const int images = std::max(1, int(std::ceil(8.0 * sigma / L)) + 1);
    double sum = 0.0;
    for (int m = -images; m <= images; ++m) {
        const double d = x + m * L;
        sum += std::exp(-0.5 * d * d / (sigma * sigma));
    }
    return sum / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

// Platform-independent uniform in [0,1) from the raw 64-bit stream.
double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1p-53;
}

} // namespace

Field gaussian_bump(const GridSpec& grid, double mass, double sigma,
                    const std::array<double, 3>& center) {
    if (!(mass > 0.0) || !(sigma > 0.0))
        throw DomainError("gaussian initial data needs mass > 0, sigma > 0");
    Field f(grid);
    std::array<std::vector<double>, 3> axis;
    for (int a = 0; a < 3; ++a) {
        axis[a].resize(grid.n[a]);
        for (int i = 0; i < grid.n[a]; ++i)
            axis[a][i] = periodic_gaussian(grid.coordinate(a, i) - center[a],
                                           sigma, grid.box[a]);
    }
    for (int ix = 0; ix < grid.n[0]; ++ix)
        for (int iy = 0; iy < grid.n[1]; ++iy)
            for (int iz = 0; iz < grid.n[2]; ++iz)
                f.at(ix, iy, iz) =
                    mass * axis[0][ix] * axis[1][iy] * axis[2][iz];
    return f;
}

Field random_modes(const GridSpec& grid, double mass, int modes,
                   std::uint64_t seed) {
    if (!(mass > 0.0) || modes < 1)
        throw DomainError("mode initial data needs mass > 0, modes >= 1");
    std::mt19937_64 rng(seed);
    const double mean = mass / grid.volume();
    // Total relative amplitude 0.9 keeps the field strictly positive.
    const double amp = 0.9 / modes;

    struct Mode {
        int k[3];
        double phase;
    };
    std::vector<Mode> picked;
    while (int(picked.size()) < modes) {
        Mode m{};
        for (int a = 0; a < 3; ++a) {
            const int kmax = std::max(1, grid.n[a] / 6);
            m.k[a] = int(uniform01(rng) * (2 * kmax + 1)) - kmax;
        }
        if (m.k[0] == 0 && m.k[1] == 0 && m.k[2] == 0) continue;
        m.phase = 2.0 * std::numbers::pi * uniform01(rng);
        picked.push_back(m);
    }

    Field f(grid);
    for (int ix = 0; ix < grid.n[0]; ++ix)
        for (int iy = 0; iy < grid.n[1]; ++iy)
            for (int iz = 0; iz < grid.n[2]; ++iz) {
                double s = 1.0;
                for (const Mode& m : picked) {
                    const double arg =
                        grid.fundamental(0) * m.k[0] * grid.coordinate(0, ix) +
                        grid.fundamental(1) * m.k[1] * grid.coordinate(1, iy) +
                        grid.fundamental(2) * m.k[2] * grid.coordinate(2, iz) +
                        m.phase;
                    s += amp * std::cos(arg);
                }
                f.at(ix, iy, iz) = mean * s;
            }
    return f;
}

Field initial_data(const InitConfig& init, const GridSpec& grid) {
    if (init.kind == "gaussian")
        return gaussian_bump(grid, init.mass, init.sigma, init.center);
    if (init.kind == "modes")
        return random_modes(grid, init.mass, init.modes, init.seed);
    if (init.kind == "file") {
        Snapshot snap = read_snapshot_raw(init.file);
        if (!(snap.samples.grid == grid))
            throw ValidationError("init.file",
                                  "snapshot grid does not match grid.n/box");
        return std::move(snap.samples);
    }
    throw ValidationError("init.kind", "must be gaussian, modes or file");
}

} // namespace cks
