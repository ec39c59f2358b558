#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace wavemap {

/// Equivariance winding number of the hedgehog ansatz.
struct ModelParams {
    int m = 1;  // positive integer
};

/// Cell-offset radial grid: strictly increasing radii with r[0] > 0,
/// no sample at the origin, last sample at r_max.  face[i] is the cell
/// boundary between r[i-1] and r[i]; face[0] = 0 so the innermost flux
/// vanishes identically.
struct RadialGrid {
    enum class Spacing { Uniform, Clustered };

    std::vector<double> r;
    std::vector<double> face;  // size() + 1 entries
    double r_max = 0.0;
    Spacing spacing = Spacing::Uniform;
    std::string spacing_description;

    std::size_t size() const { return r.size(); }
    double min_spacing() const;
    double max_spacing() const;
};

/// Uniform cell-offset grid r_i = (i + 1/2) dr, trimmed so the last sample
/// lands exactly on r_max.
RadialGrid make_uniform_grid(double r_max, double dr);

/// Fixed (non-adaptive) geometric clustering toward the origin: spacing starts
/// at dr_min and grows by `growth` per cell until it reaches dr_max, then stays
/// uniform out to r_max.
RadialGrid make_clustered_grid(double r_max, double dr_min, double dr_max, double growth = 1.02);

/// Grid from explicit radii (strictly increasing, radii[0] > 0).
RadialGrid make_grid_from_radii(std::vector<double> radii);

/// Validates strict monotonicity, positive first radius, and face consistency.
void validate_grid(const RadialGrid& grid);

}  // namespace wavemap
