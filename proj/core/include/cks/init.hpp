#ifndef CKS_INIT_HPP
#define CKS_INIT_HPP

#include "cks/config.hpp"
#include "cks/field.hpp"

namespace cks {

// Periodized isotropic Gaussian of total mass `mass` and width sigma,
// centred at `center`. Images are summed until they are negligible, so the
// continuum integral equals mass exactly.
Field gaussian_bump(const GridSpec& grid, double mass, double sigma,
                    const std::array<double, 3>& center);

// Strictly positive band-limited field of the given mass: a constant plus
// `modes` seeded cosine modes inside the dealiased band, with a total
// relative amplitude below 1 so the result never touches zero.
Field random_modes(const GridSpec& grid, double mass, int modes,
                   std::uint64_t seed);

// Dispatch on init.kind (gaussian / modes / file). For kind=file the
// snapshot samples are used verbatim and must live on `grid`.
Field initial_data(const InitConfig& init, const GridSpec& grid);

} // namespace cks

#endif
