#include "wavemap/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wavemap/errors.hpp"

namespace wavemap {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

struct State {
    double y, yp;
};

struct Deriv {
    double dy, dyp;
};

template <typename F>
bool dp5_step(const F& f, double x, const State& s, double h, State& out, double& err_norm,
              double rel_tol, double abs_tol, Deriv& k1, bool have_k1) {
    if (!have_k1) k1 = {s.yp, f(x, s.y, s.yp)};

    auto stage = [&](double cx, double ay, double ayp) -> Deriv {
        return {ayp, f(x + cx * h, ay, ayp)};
    };

    Deriv k2 = stage(c2, s.y + h * a21 * k1.dy, s.yp + h * a21 * k1.dyp);
    Deriv k3 = stage(c3, s.y + h * (a31 * k1.dy + a32 * k2.dy),
                     s.yp + h * (a31 * k1.dyp + a32 * k2.dyp));
    Deriv k4 = stage(c4, s.y + h * (a41 * k1.dy + a42 * k2.dy + a43 * k3.dy),
                     s.yp + h * (a41 * k1.dyp + a42 * k2.dyp + a43 * k3.dyp));
    Deriv k5 = stage(c5, s.y + h * (a51 * k1.dy + a52 * k2.dy + a53 * k3.dy + a54 * k4.dy),
                     s.yp + h * (a51 * k1.dyp + a52 * k2.dyp + a53 * k3.dyp + a54 * k4.dyp));
    Deriv k6 = stage(1.0, s.y + h * (a61 * k1.dy + a62 * k2.dy + a63 * k3.dy + a64 * k4.dy + a65 * k5.dy),
                     s.yp + h * (a61 * k1.dyp + a62 * k2.dyp + a63 * k3.dyp + a64 * k4.dyp + a65 * k5.dyp));

    out.y = s.y + h * (b1 * k1.dy + b3 * k3.dy + b4 * k4.dy + b5 * k5.dy + b6 * k6.dy);
    out.yp = s.yp + h * (b1 * k1.dyp + b3 * k3.dyp + b4 * k4.dyp + b5 * k5.dyp + b6 * k6.dyp);

    Deriv k7 = {out.yp, f(x + h, out.y, out.yp)};

    const double ey =
        h * (e1 * k1.dy + e3 * k3.dy + e4 * k4.dy + e5 * k5.dy + e6 * k6.dy + e7 * k7.dy);
    const double eyp =
        h * (e1 * k1.dyp + e3 * k3.dyp + e4 * k4.dyp + e5 * k5.dyp + e6 * k6.dyp + e7 * k7.dyp);

    const double sy = abs_tol + rel_tol * std::max(std::abs(s.y), std::abs(out.y));
    const double syp = abs_tol + rel_tol * std::max(std::abs(s.yp), std::abs(out.yp));
    err_norm = std::sqrt(0.5 * ((ey / sy) * (ey / sy) + (eyp / syp) * (eyp / syp)));

    k1 = k7;  // FSAL
    return std::isfinite(err_norm) && std::isfinite(out.y) && std::isfinite(out.yp);
}

template <typename OnNode>
void integrate_core(const Rhs2& f, double x0, double y0, double yp0, double x1,
                    const OdeOptions& opts, bool renormalize, double* log_scale,
                    State& final_state, const OnNode& on_node) {
    const double dir = (x1 >= x0) ? 1.0 : -1.0;
    const double span = std::abs(x1 - x0);
    if (span == 0.0) {
        final_state = {y0, yp0};
        on_node(x0, y0, yp0, f(x0, y0, yp0));
        return;
    }
    const double h_max = (opts.h_max > 0.0) ? opts.h_max : span;
    double h = (opts.h_init > 0.0) ? std::min(opts.h_init, h_max) : std::min(1e-4 * span, h_max);
    const double h_floor = std::max(span * 1e-15, 1e-300);

    double x = x0;
    State s{y0, yp0};
    Deriv k1{};
    bool have_k1 = false;
    if (log_scale) *log_scale = 0.0;

    {
        const double d0 = f(x0, y0, yp0);
        if (!std::isfinite(d0) || !std::isfinite(y0) || !std::isfinite(yp0))
            throw IntegrationError("ode: non-finite initial state", x0);
        on_node(x0, y0, yp0, d0);
        k1 = {yp0, d0};
        have_k1 = true;
    }

    long steps = 0;
    while (dir * (x1 - x) > 0.0) {
        if (++steps > opts.max_steps) throw IntegrationError("ode: step budget exhausted", x);
        double h_try = std::min(h, std::abs(x1 - x));
        State out;
        double err;
        const bool ok =
            dp5_step(f, x, s, dir * h_try, out, err, opts.rel_tol, opts.abs_tol, k1, have_k1);
        have_k1 = false;  // k1 now holds f at the trial endpoint; only valid if accepted
        if (ok && err <= 1.0) {
            x += dir * h_try;
            s = out;
            have_k1 = true;
            on_node(x, s.y, s.yp, k1.dyp);
            if (renormalize) {
                const double mag = std::max(std::abs(s.y), std::abs(s.yp));
                if (mag > 1e250) {
                    s.y /= mag;
                    s.yp /= mag;
                    if (log_scale) *log_scale += std::log(mag);
                    have_k1 = false;
                }
            }
            const double grow = (err > 1e-30) ? 0.9 * std::pow(err, -0.2) : 5.0;
            h = std::min(h_try * std::clamp(grow, 0.2, 5.0), h_max);
        } else {
            const double shrink = ok ? std::max(0.9 * std::pow(err, -0.2), 0.1) : 0.1;
            h = h_try * shrink;
            have_k1 = false;
            if (h < h_floor) {
                std::ostringstream os;
                os << "ode: step size underflow at x=" << x;
                throw IntegrationError(os.str(), x);
            }
        }
    }
    final_state = s;
}

}  // namespace

SampledCurve integrate_ode2(const Rhs2& f, double x0, double y0, double yp0, double x1,
                            const OdeOptions& opts) {
    SampledCurve curve;
    State fin{};
    integrate_core(
        f, x0, y0, yp0, x1, opts, /*renormalize=*/false, nullptr, fin,
        [&](double x, double y, double yp, double ypp) {
            curve.x.push_back(x);
            curve.y.push_back(y);
            curve.yp.push_back(yp);
            curve.ypp.push_back(ypp);
        });
    curve.normalize();
    return curve;
}

ShootResult integrate_shoot(const Rhs2& f, double x0, double y0, double yp0, double x1,
                            const OdeOptions& opts) {
    State fin{};
    double log_scale = 0.0;
    integrate_core(f, x0, y0, yp0, x1, opts, /*renormalize=*/true, &log_scale, fin,
                   [](double, double, double, double) {});
    return {fin.y, fin.yp, log_scale};
}

void SampledCurve::normalize() {
    if (x.size() >= 2 && x.front() > x.back()) {
        std::reverse(x.begin(), x.end());
        std::reverse(y.begin(), y.end());
        std::reverse(yp.begin(), yp.end());
        std::reverse(ypp.begin(), ypp.end());
    }
}

void SampledCurve::append(const SampledCurve& other) {
    for (std::size_t i = 0; i < other.x.size(); ++i) {
        if (!x.empty() && other.x[i] <= x.back()) continue;
        x.push_back(other.x[i]);
        y.push_back(other.y[i]);
        yp.push_back(other.yp[i]);
        ypp.push_back(other.ypp[i]);
    }
}

std::size_t SampledCurve::locate(double xq) const {
    if (x.size() < 2) throw DomainError("SampledCurve: too few nodes");
    const double lo = x.front(), hi = x.back();
    const double slack = 1e-9 * (std::abs(lo) + std::abs(hi) + 1.0);
    if (xq < lo - slack || xq > hi + slack)
        throw DomainError("SampledCurve: query outside sampled domain");
    auto it = std::upper_bound(x.begin(), x.end(), xq);
    std::size_t i = (it == x.begin()) ? 1 : static_cast<std::size_t>(it - x.begin());
    if (i >= x.size()) i = x.size() - 1;
    return i - 1;
}

// Two-point quintic Hermite basis on s in [0,1].
namespace quintic {
inline double H0(double s) { return 1 + s * s * s * (-10 + s * (15 - 6 * s)); }
inline double H1(double s) { return s + s * s * s * (-6 + s * (8 - 3 * s)); }
inline double H2(double s) { return s * s * (0.5 + s * (-1.5 + s * (1.5 - 0.5 * s))); }
inline double H3(double s) { return s * s * s * (0.5 + s * (-1 + 0.5 * s)); }
inline double H4(double s) { return s * s * s * (-4 + s * (7 - 3 * s)); }
inline double H5(double s) { return s * s * s * (10 + s * (-15 + 6 * s)); }

inline double dH0(double s) { return s * s * (-30 + s * (60 - 30 * s)); }
inline double dH1(double s) { return 1 + s * s * (-18 + s * (32 - 15 * s)); }
inline double dH2(double s) { return s * (1 + s * (-4.5 + s * (6 - 2.5 * s))); }
inline double dH3(double s) { return s * s * (1.5 + s * (-4 + 2.5 * s)); }
inline double dH4(double s) { return s * s * (-12 + s * (28 - 15 * s)); }
inline double dH5(double s) { return s * s * (30 + s * (-60 + 30 * s)); }

inline double ddH0(double s) { return s * (-60 + s * (180 - 120 * s)); }
inline double ddH1(double s) { return s * (-36 + s * (96 - 60 * s)); }
inline double ddH2(double s) { return 1 + s * (-9 + s * (18 - 10 * s)); }
inline double ddH3(double s) { return s * (3 + s * (-12 + 10 * s)); }
inline double ddH4(double s) { return s * (-24 + s * (84 - 60 * s)); }
inline double ddH5(double s) { return s * (60 + s * (-180 + 120 * s)); }
}  // namespace quintic

double SampledCurve::eval(double xq) const {
    const std::size_t i = locate(xq);
    const double h = x[i + 1] - x[i];
    const double s = std::clamp((xq - x[i]) / h, 0.0, 1.0);
    using namespace quintic;
    return H0(s) * y[i] + H1(s) * h * yp[i] + H2(s) * h * h * ypp[i] + H3(s) * h * h * ypp[i + 1] +
           H4(s) * h * yp[i + 1] + H5(s) * y[i + 1];
}

double SampledCurve::deriv(double xq) const {
    const std::size_t i = locate(xq);
    const double h = x[i + 1] - x[i];
    const double s = std::clamp((xq - x[i]) / h, 0.0, 1.0);
    using namespace quintic;
    return (dH0(s) * y[i] + dH1(s) * h * yp[i] + dH2(s) * h * h * ypp[i] +
            dH3(s) * h * h * ypp[i + 1] + dH4(s) * h * yp[i + 1] + dH5(s) * y[i + 1]) /
           h;
}

double SampledCurve::second_deriv(double xq) const {
    const std::size_t i = locate(xq);
    const double h = x[i + 1] - x[i];
    const double s = std::clamp((xq - x[i]) / h, 0.0, 1.0);
    using namespace quintic;
    return (ddH0(s) * y[i] + ddH1(s) * h * yp[i] + ddH2(s) * h * h * ypp[i] +
            ddH3(s) * h * h * ypp[i + 1] + ddH4(s) * h * yp[i + 1] + ddH5(s) * y[i + 1]) /
           (h * h);
}

}  // namespace wavemap
