#pragma once

#include <functional>
#include <vector>

namespace wavemap {

/// Right-hand side of a scalar second-order ODE  y'' = f(x, y, y').
using Rhs2 = std::function<double(double x, double y, double yp)>;

struct OdeOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-12;
    double h_init = 0.0;   // 0 => automatic
    double h_max = 0.0;    // 0 => |x1 - x0|
    long max_steps = 4'000'000;
};

/// Dense solution of a second-order scalar ODE: values and first/second
/// derivatives stored at the accepted integration nodes, evaluated in
/// between with two-point quintic Hermite interpolation (C2, error
/// commensurate with the integration tolerance).
class SampledCurve {
  public:
    std::vector<double> x;    // strictly increasing
    std::vector<double> y;
    std::vector<double> yp;
    std::vector<double> ypp;

    double front_x() const { return x.front(); }
    double back_x() const { return x.back(); }
    std::size_t size() const { return x.size(); }

    double eval(double xq) const;
    double deriv(double xq) const;
    double second_deriv(double xq) const;

    /// Sorts nodes by x (integrations may run right-to-left).
    void normalize();
    /// Appends another curve (used to join matched shooting halves).
    void append(const SampledCurve& other);

  private:
    std::size_t locate(double xq) const;
};

/// Integrates y'' = f(x,y,y') from x0 to x1 (either direction) with an
/// adaptive Dormand-Prince 5(4) scheme, storing every accepted node.
/// Throws IntegrationError on step underflow or non-finite state.
SampledCurve integrate_ode2(const Rhs2& f, double x0, double y0, double yp0, double x1,
                            const OdeOptions& opts = {});

/// Endpoint of a shooting integration for linear problems: the state is
/// rescaled whenever it grows past 1e250, so only the direction (and the
/// accumulated log-scale) of the final state is meaningful.
struct ShootResult {
    double y;
    double yp;
    double log_scale;  // ln of the factor divided out
};

ShootResult integrate_shoot(const Rhs2& f, double x0, double y0, double yp0, double x1,
                            const OdeOptions& opts = {});

}  // namespace wavemap
