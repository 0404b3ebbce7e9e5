#ifndef CKS_FIELD_HPP
#define CKS_FIELD_HPP

#include <complex>
#include <vector>

#include "cks/grid.hpp"

namespace cks {

// Real samples on a GridSpec, row-major, z fastest.
struct Field {
    GridSpec grid;
    std::vector<double> v;

    explicit Field(const GridSpec& g) : grid(g), v(g.size(), 0.0) {}
    Field(const GridSpec& g, std::vector<double> values)
        : grid(g), v(std::move(values)) {
        if (v.size() != grid.size())
            throw DomainError("field sample count does not match grid");
    }
    double& at(int ix, int iy, int iz) { return v[grid.index(ix, iy, iz)]; }
    double at(int ix, int iy, int iz) const { return v[grid.index(ix, iy, iz)]; }
};

// Complex Fourier coefficients on the full mode lattice of a GridSpec,
// stored in the same row-major layout as Field with FFT index order
// (storage index m on an axis holds signed mode m or m-n).
struct SpectralField {
    GridSpec grid;
    std::vector<std::complex<double>> c;

    explicit SpectralField(const GridSpec& g) : grid(g), c(g.size(), 0.0) {}
    std::complex<double>& at(int mx, int my, int mz) {
        return c[grid.index(mx, my, mz)];
    }
    std::complex<double> at(int mx, int my, int mz) const {
        return c[grid.index(mx, my, mz)];
    }
    // Coefficient of signed mode (kx,ky,kz); modes are taken modulo nothing,
    // the caller must stay inside [-n/2, n/2).
    std::complex<double>& mode(int kx, int ky, int kz) {
        return c[grid.index(kx < 0 ? kx + grid.n[0] : kx,
                            ky < 0 ? ky + grid.n[1] : ky,
                            kz < 0 ? kz + grid.n[2] : kz)];
    }
    std::complex<double> mode(int kx, int ky, int kz) const {
        return c[grid.index(kx < 0 ? kx + grid.n[0] : kx,
                            ky < 0 ? ky + grid.n[1] : ky,
                            kz < 0 ? kz + grid.n[2] : kz)];
    }
};

// Three real fields making up a vector field on one grid.
struct VectorField {
    Field x, y, z;
    explicit VectorField(const GridSpec& g) : x(g), y(g), z(g) {}
};

} // namespace cks

#endif
