#ifndef CKS_GRID_HPP
#define CKS_GRID_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

#include "cks/errors.hpp"

namespace cks {

// A periodic box [0,Lx) x [0,Ly) x [0,Lz) sampled on an even grid.
// Storage is row-major with x slowest and z fastest.
struct GridSpec {
    std::array<int, 3> n;
    std::array<double, 3> box;

    GridSpec(std::array<int, 3> n_, std::array<double, 3> box_)
        : n(n_), box(box_) {
        for (int a = 0; a < 3; ++a) {
            if (n[a] < 8 || n[a] % 2 != 0)
                throw DomainError("grid size must be even and >= 8 per axis");
            if (!(box[a] > 0.0) || !std::isfinite(box[a]))
                throw DomainError("box length must be finite and positive");
        }
    }

    std::size_t size() const {
        return std::size_t(n[0]) * std::size_t(n[1]) * std::size_t(n[2]);
    }
    std::size_t index(int ix, int iy, int iz) const {
        return (std::size_t(ix) * n[1] + iy) * n[2] + iz;
    }
    double dvol() const {
        return (box[0] / n[0]) * (box[1] / n[1]) * (box[2] / n[2]);
    }
    double volume() const { return box[0] * box[1] * box[2]; }
    // Smallest wavenumber increment of an axis.
    double fundamental(int axis) const {
        return 2.0 * std::numbers::pi / box[axis];
    }
    // Signed integer mode of storage index m on an axis of n points:
    // 0..n/2-1 map to themselves, n/2..n-1 map to m-n.
    static int signed_mode(int m, int npts) {
        return m < npts / 2 ? m : m - npts;
    }
    // Physical wavenumber of storage index m along an axis.
    double wavenumber(int axis, int m) const {
        return fundamental(axis) * signed_mode(m, n[axis]);
    }
    // Physical coordinate of sample index i along an axis.
    double coordinate(int axis, int i) const { return box[axis] * i / n[axis]; }

    bool operator==(const GridSpec& o) const { return n == o.n && box == o.box; }
};

} // namespace cks

#endif
