#include "wavemap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wavemap/errors.hpp"

namespace wavemap {

double RadialGrid::min_spacing() const {
    double h = r.size() > 1 ? r[1] - r[0] : r_max;
    for (std::size_t i = 2; i < r.size(); ++i) h = std::min(h, r[i] - r[i - 1]);
    // Innermost cell extends from the origin face.
    if (!r.empty()) h = std::min(h, 2.0 * r[0]);
    return h;
}

double RadialGrid::max_spacing() const {
    double h = 0.0;
    for (std::size_t i = 1; i < r.size(); ++i) h = std::max(h, r[i] - r[i - 1]);
    return h;
}

static void fill_faces(RadialGrid& g) {
    const std::size_t n = g.r.size();
    g.face.resize(n + 1);
    g.face[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) g.face[i] = 0.5 * (g.r[i - 1] + g.r[i]);
    g.face[n] = g.r[n - 1] + 0.5 * (g.r[n - 1] - (n > 1 ? g.r[n - 2] : 0.0));
}

RadialGrid make_uniform_grid(double r_max, double dr) {
    if (!(r_max > 0.0) || !(dr > 0.0) || dr >= r_max)
        throw DomainError("make_uniform_grid: need 0 < dr < r_max");
    // r_i = (i + 1/2) dr with the count chosen so the last sample is r_max.
    auto n = static_cast<std::size_t>(std::llround(r_max / dr + 0.5));
    if (n < 4) throw DomainError("make_uniform_grid: fewer than 4 points");
    const double h = r_max / (static_cast<double>(n) - 0.5);
    RadialGrid g;
    g.r.resize(n);
    for (std::size_t i = 0; i < n; ++i) g.r[i] = (static_cast<double>(i) + 0.5) * h;
    g.r.back() = r_max;
    g.r_max = r_max;
    g.spacing = RadialGrid::Spacing::Uniform;
    std::ostringstream os;
    os << "uniform dr=" << h;
    g.spacing_description = os.str();
    fill_faces(g);
    validate_grid(g);
    return g;
}

RadialGrid make_clustered_grid(double r_max, double dr_min, double dr_max, double growth) {
    if (!(r_max > 0.0) || !(dr_min > 0.0) || dr_max < dr_min || growth <= 1.0)
        throw DomainError("make_clustered_grid: need r_max>0, 0<dr_min<=dr_max, growth>1");
    RadialGrid g;
    // Geometric phase: spacing grows until it reaches dr_max (or the domain ends).
    double h = dr_min;
    double r = 0.5 * h;
    while (h < dr_max && r + h * growth < r_max) {
        g.r.push_back(r);
        h = std::min(h * growth, dr_max);
        r += h;
    }
    g.r.push_back(r);
    // Uniform tail, with the spacing shrunk just enough to land on r_max.
    const std::size_t n_tail =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((r_max - r) / dr_max)));
    const double h_tail = (r_max - r) / static_cast<double>(n_tail);
    for (std::size_t j = 1; j <= n_tail; ++j)
        g.r.push_back(r + h_tail * static_cast<double>(j));
    g.r.back() = r_max;
    if (g.r.size() < 4) throw DomainError("make_clustered_grid: fewer than 4 points");
    g.r_max = r_max;
    g.spacing = RadialGrid::Spacing::Clustered;
    std::ostringstream os;
    os << "clustered dr_min=" << dr_min << " dr_max=" << dr_max << " growth=" << growth;
    g.spacing_description = os.str();
    fill_faces(g);
    validate_grid(g);
    return g;
}

RadialGrid make_grid_from_radii(std::vector<double> radii) {
    RadialGrid g;
    g.r = std::move(radii);
    if (g.r.empty()) throw DomainError("make_grid_from_radii: empty radii");
    g.r_max = g.r.back();
    g.spacing = RadialGrid::Spacing::Clustered;
    g.spacing_description = "explicit radii";
    fill_faces(g);
    validate_grid(g);
    return g;
}

void validate_grid(const RadialGrid& grid) {
    if (grid.r.size() < 4) throw DomainError("grid: fewer than 4 points");
    if (!(grid.r.front() > 0.0)) throw DomainError("grid: first radius must be positive");
    for (std::size_t i = 1; i < grid.r.size(); ++i)
        if (!(grid.r[i] > grid.r[i - 1])) throw DomainError("grid: radii not strictly increasing");
    if (grid.r.back() != grid.r_max) throw DomainError("grid: last radius must equal r_max");
    if (grid.face.size() != grid.r.size() + 1) throw DomainError("grid: face array inconsistent");
}

}  // namespace wavemap
