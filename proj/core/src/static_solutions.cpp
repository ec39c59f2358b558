#include "wavemap/static_solutions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wavemap/errors.hpp"

namespace wavemap {

namespace {

// chi'' from the static equation (r^2 chi')' = sin(2 chi).
double static_rhs(double r, double y, double yp) {
    return std::sin(2.0 * y) / (r * r) - 2.0 * yp / r;
}

// Odd origin series chi = a r - (2/15) a^3 r^3 + (1/35) a^5 r^5.
struct StaticSeries {
    double a, c3, c5, r_ser;
    double value(double r) const { return r * (a + r * r * (c3 + r * r * c5)); }
    double deriv(double r) const { return a + r * r * (3.0 * c3 + 5.0 * c5 * r * r); }
};

StaticSeries make_static_series(double a) {
    StaticSeries s;
    s.a = a;
    s.c3 = -(2.0 / 15.0) * a * a * a;
    s.c5 = std::pow(a, 5) / 35.0;
    s.r_ser = std::min(1e-3, 1e-2 / std::max(1.0, std::abs(a)));
    return s;
}

double static_defect(const SampledCurve& c, double r) {
    return r * r * c.second_deriv(r) + 2.0 * r * c.deriv(r) - std::sin(2.0 * c.eval(r));
}

}  // namespace

double StaticProfile::chi_at(double r) const {
    if (r < 0.0) throw DomainError("StaticProfile: r must be nonnegative");
    if (r <= r_ser) return make_static_series(a).value(r);
    if (r > r_end) throw DomainError("StaticProfile: r beyond the integrated domain");
    return curve.eval(r);
}

double StaticProfile::chi_deriv_at(double r) const {
    if (r < 0.0) throw DomainError("StaticProfile: r must be nonnegative");
    if (r <= r_ser) return make_static_series(a).deriv(r);
    if (r > r_end) throw DomainError("StaticProfile: r beyond the integrated domain");
    return curve.deriv(r);
}

StaticProfile solve_static(double a, double R_ode, const StaticOptions& opts) {
    if (!(R_ode > 0.0)) throw DomainError("solve_static: R_ode must be positive");
    StaticProfile p;
    p.a = a;
    const StaticSeries ser = make_static_series(a);
    p.r_ser = ser.r_ser;
    p.r_end = R_ode;
    OdeOptions oo;
    oo.rel_tol = oo.abs_tol = opts.ode_tol;
    p.curve = integrate_ode2(static_rhs, ser.r_ser, ser.value(ser.r_ser), ser.deriv(ser.r_ser),
                             R_ode, oo);
    double defect = 0.0;
    for (std::size_t i = 0; i + 1 < p.curve.size(); ++i) {
        const double rm = 0.5 * (p.curve.x[i] + p.curve.x[i + 1]);
        defect = std::max(defect, std::abs(static_defect(p.curve, rm)));
    }
    p.residual_norm = defect;
    return p;
}

namespace {

// Mode equation in first-order form:
//   v'' = 2 v cos(2 chi_s)/r^2 - omega^2 v - 2 v'/r.
double mode_rhs(const StaticProfile& bg, double w2, double r, double v, double vp) {
    return 2.0 * v * std::cos(2.0 * bg.chi_at(r)) / (r * r) - w2 * v - 2.0 * vp / r;
}

// Shooting function: sign of v'(R) for the regular solution v ~ r near 0.
double shoot(const StaticProfile& bg, double w2, double R, double tol) {
    const double a = bg.a;
    const double g3 = -(4.0 * a * a + w2) / 10.0;
    const double rs = std::min(1e-3, bg.r_ser);
    const double v0 = rs + g3 * rs * rs * rs;
    const double vp0 = 1.0 + 3.0 * g3 * rs * rs;
    OdeOptions oo;
    oo.rel_tol = oo.abs_tol = tol;
    auto f = [&](double r, double v, double vp) { return mode_rhs(bg, w2, r, v, vp); };
    const ShootResult res = integrate_shoot(f, rs, v0, vp0, R, oo);
    return res.yp;
}

}  // namespace

std::vector<StaticMode> omega_spectrum(const StaticProfile& profile, double w2_lo, double w2_hi,
                                       double R_ode, const OmegaOptions& opts) {
    if (!(w2_lo < w2_hi)) throw DomainError("omega_spectrum: empty range");
    if (!(w2_hi <= 0.0)) throw DomainError("omega_spectrum: range must lie in omega^2 < 0");
    if (R_ode > profile.r_end)
        throw DomainError("omega_spectrum: R_ode beyond the static profile's domain");

    // Modes shallower than the box floor cannot satisfy the outer condition
    // meaningfully at finite R_ode.
    const double floor_w2 = -std::pow(2.0 / R_ode, 2);
    const double hi = std::min(w2_hi, floor_w2);
    if (!(w2_lo < hi))
        throw DomainError("omega_spectrum: range entirely below the R_ode resolvability floor");

    // Scan grid: uniform from w2_lo up to -0.1, geometric from there to hi.
    std::vector<double> grid;
    for (double w = w2_lo; w < std::min(-0.1, hi); w += opts.coarse_step) grid.push_back(w);
    double w = std::max(w2_lo, -0.1);
    while (w < hi) {
        grid.push_back(w);
        w *= opts.geometric_factor;
    }
    grid.push_back(hi);
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.size() < 2) throw DomainError("omega_spectrum: scan grid degenerate");

    std::vector<double> fs(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        fs[i] = shoot(profile, grid[i], R_ode, opts.ode_tol);

    std::vector<StaticMode> out;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (!std::isfinite(fs[i]) || !std::isfinite(fs[i + 1])) continue;
        if (std::signbit(fs[i]) == std::signbit(fs[i + 1])) continue;
        if (i == 0 || i + 2 == grid.size())
            throw RangeAdvisoryError(
                "omega_spectrum: root in the outermost scan cell; widen the omega^2 range");
        double lo = grid[i], hi_b = grid[i + 1], flo = fs[i];
        while (hi_b - lo > opts.bisect_tol * (1.0 + std::abs(lo))) {
            const double mid = 0.5 * (lo + hi_b);
            const double fm = shoot(profile, mid, R_ode, opts.ode_tol);
            if (std::signbit(fm) == std::signbit(flo)) {
                lo = mid;
                flo = fm;
            } else {
                hi_b = mid;
            }
        }
        StaticMode m;
        m.omega_sq = 0.5 * (lo + hi_b);
        // Rebuild the mode curve at the converged eigenvalue (decaying branch;
        // truncated where roundoff contamination starts to regrow).
        const double g3 = -(4.0 * profile.a * profile.a + m.omega_sq) / 10.0;
        const double rs = std::min(1e-3, profile.r_ser);
        OdeOptions oo;
        oo.rel_tol = oo.abs_tol = opts.ode_tol;
        auto f = [&](double r, double v, double vp) {
            return mode_rhs(profile, m.omega_sq, r, v, vp);
        };
        SampledCurve c = integrate_ode2(f, rs, rs + g3 * rs * rs * rs, 1.0 + 3.0 * g3 * rs * rs,
                                        R_ode, oo);
        const double kappa = std::sqrt(-m.omega_sq);
        std::size_t cut = c.size();
        double run_min = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (c.x[j] * kappa < 2.0) continue;  // keep the core region
            const double mag = std::abs(c.y[j]);
            if (mag < run_min) {
                run_min = mag;
                cut = j + 1;
            }
        }
        c.x.resize(cut);
        c.y.resize(cut);
        c.yp.resize(cut);
        c.ypp.resize(cut);
        m.mode = std::move(c);
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace wavemap
