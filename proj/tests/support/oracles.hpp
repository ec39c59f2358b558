#pragma once

// Test-side oracles, independent of the implementation paths they check.

#include <cmath>
#include <functional>

namespace oracles {

// Adaptive Simpson quadrature on the analytic integrand.
inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-11) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Continuum energy of data given analytically: chi, dchi/dr, Pi as callables;
// integrand of the energy function for winding m.
inline double energy(const std::function<double(double)>& chi,
                     const std::function<double(double)>& dchi,
                     const std::function<double(double)>& pi, double r_max, int m,
                     double tol = 1e-11) {
    auto rho = [&](double r) {
        const double s = std::sin(chi(r));
        const double mm = static_cast<double>(m) * (m + 1);
        return 0.5 * (r * r * (pi(r) * pi(r) + dchi(r) * dchi(r)) + mm * s * s);
    };
    return integrate(rho, 0.0, r_max, tol);
}

// Exact Turok-Spergel solution chi(r,t) = 2 arctan(r/(Delta - t)) and its
// time derivative, valid for t < Delta.
inline double ts_exact_chi(double r, double t, double Delta) {
    return 2.0 * std::atan(r / (Delta - t));
}
inline double ts_exact_pi(double r, double t, double Delta) {
    const double T = Delta - t;
    return 2.0 * r / (T * T + r * r);
}

// Residual of the self-similar profile equation for an analytic candidate.
inline double ss_ode_residual(double z, double chi, double dchi, double ddchi) {
    return z * z * (z * z - 1.0) * ddchi + 2.0 * z * (z * z - 1.0) * dchi + std::sin(2.0 * chi);
}

}  // namespace oracles
