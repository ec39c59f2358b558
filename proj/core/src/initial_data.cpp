#include "wavemap/initial_data.hpp"

#include <cmath>

#include "wavemap/errors.hpp"

namespace wavemap {

namespace {

double smoothstep5(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }
double smoothstep5_deriv(double s) { return s * s * (30.0 + s * (-60.0 + 30.0 * s)); }

FieldState blank(const RadialGrid& grid) {
    FieldState s;
    s.t = 0.0;
    s.chi.assign(grid.size(), 0.0);
    s.pi.assign(grid.size(), 0.0);
    return s;
}

}  // namespace

FamilyKind family_kind_from_string(const std::string& s) {
    if (s == "gaussian") return FamilyKind::Gaussian;
    if (s == "logarithmic") return FamilyKind::Logarithmic;
    if (s == "turok-spergel" || s == "ts") return FamilyKind::TurokSpergel;
    if (s == "tanh") return FamilyKind::Tanh;
    if (s == "perturbed-static") return FamilyKind::PerturbedStatic;
    if (s == "perturbed-self-similar") return FamilyKind::PerturbedSelfSimilar;
    throw ConfigError("unknown initial-data family: " + s);
}

std::string to_string(FamilyKind k) {
    switch (k) {
        case FamilyKind::Gaussian: return "gaussian";
        case FamilyKind::Logarithmic: return "logarithmic";
        case FamilyKind::TurokSpergel: return "turok-spergel";
        case FamilyKind::Tanh: return "tanh";
        case FamilyKind::PerturbedStatic: return "perturbed-static";
        case FamilyKind::PerturbedSelfSimilar: return "perturbed-self-similar";
    }
    return "unknown";
}

FieldState gaussian(double A, double R0, double delta, const RadialGrid& grid) {
    if (!(delta > 0.0)) throw DomainError("gaussian: width must be positive");
    FieldState s = blank(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.r[i];
        const double e = A * std::exp(-(r - R0) * (r - R0) / (delta * delta));
        s.chi[i] = e;
        s.pi[i] = -2.0 * (r - R0) / (delta * delta) * e;  // chi'
    }
    return s;
}

FieldState logarithmic(double A, double R0, double delta, const RadialGrid& grid,
                       double ramp_radius) {
    if (!(R0 > 0.0)) throw DomainError("logarithmic: R0 must be positive");
    if (!(delta > 0.0)) throw DomainError("logarithmic: width must be positive");
    const bool needs_ramp = std::abs(std::log(R0)) > 0.0;
    double r_ramp = ramp_radius;
    if (r_ramp <= 0.0) r_ramp = 10.0 * (grid.r[1] - grid.r[0]);

    FieldState s = blank(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.r[i];
        const double chi = A * std::log(r + R0) / (r + delta);
        const double dchi =
            A * (1.0 / ((r + R0) * (r + delta)) - std::log(r + R0) / ((r + delta) * (r + delta)));
        if (needs_ramp && r < r_ramp) {
            const double u = r / r_ramp;
            const double w = smoothstep5(u);
            const double dw = smoothstep5_deriv(u) / r_ramp;
            s.chi[i] = w * chi;
            s.pi[i] = dw * chi + w * dchi;
        } else {
            s.chi[i] = chi;
            s.pi[i] = dchi;
        }
    }
    return s;
}

FieldState turok_spergel(double eps, double Delta, const RadialGrid& grid) {
    if (!(Delta > 0.0)) throw DomainError("turok_spergel: Delta must be positive");
    FieldState s = blank(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.r[i];
        s.chi[i] = 2.0 * eps * std::atan(r / Delta);
        s.pi[i] = 2.0 * eps * r / (Delta * Delta + r * r);
    }
    return s;
}

FieldState tanh_family(double A, double R0, double delta, const RadialGrid& grid) {
    if (!(delta > 0.0)) throw DomainError("tanh_family: width must be positive");
    FieldState s = blank(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.r[i];
        const double th = std::tanh((r - R0) / delta);
        s.chi[i] = A * 0.5 * (th + 1.0);
        s.pi[i] = A * 0.5 * (1.0 - th * th) / delta;  // chi'
    }
    return s;
}

FieldState perturbed_static(const StaticProfile& background, double Ap, double R0p, double dp,
                            const RadialGrid& grid) {
    if (!(dp > 0.0)) throw DomainError("perturbed_static: pulse width must be positive");
    FieldState s = blank(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.r[i];
        const double pulse = Ap * std::exp(-(r - R0p) * (r - R0p) / (dp * dp));
        s.chi[i] = background.chi_at(r) + pulse;
        s.pi[i] = -(r - R0p) / (dp * dp) * pulse;
    }
    return s;
}

FieldState perturbed_static(double a, double Ap, double R0p, double dp, const RadialGrid& grid) {
    const StaticProfile bg = solve_static(a, std::max(1.2 * grid.r_max, 50.0));
    return perturbed_static(bg, Ap, R0p, dp, grid);
}

FieldState perturbed_self_similar(const SelfSimilarProfile& profile, double t0, double Ap,
                                  double R0p, double dp, const RadialGrid& grid) {
    if (!(t0 < 0.0)) throw DomainError("perturbed_self_similar: t0 must be negative");
    if (!(dp > 0.0)) throw DomainError("perturbed_self_similar: pulse width must be positive");
    FieldState s = blank(grid);
    s.t = t0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.r[i];
        const double z = -r / t0;
        const double pulse = Ap * std::exp(-(r - R0p) * (r - R0p) / (dp * dp));
        s.chi[i] = profile.chi_at(z) + pulse;
        s.pi[i] = (r / (t0 * t0)) * profile.chi_deriv_at(z) - (r - R0p) / (dp * dp) * pulse;
    }
    return s;
}

FieldState perturbed_self_similar(int n, double t0, double Ap, double R0p, double dp,
                                  const RadialGrid& grid) {
    SelfSimilarOptions opts;
    opts.z_max = std::max(2.0, 1.1 * grid.r_max / std::abs(t0));
    const SelfSimilarProfile prof = solve_ab(n, opts);
    return perturbed_self_similar(prof, t0, Ap, R0p, dp, grid);
}

FieldState make_initial_data(const FamilySpec& spec, const RadialGrid& grid) {
    switch (spec.kind) {
        case FamilyKind::Gaussian:
            return gaussian(spec.amplitude, spec.r0, spec.width, grid);
        case FamilyKind::Logarithmic:
            return logarithmic(spec.amplitude, spec.r0, spec.width, grid,
                               spec.extras.ramp_radius);
        case FamilyKind::TurokSpergel:
            return turok_spergel(spec.amplitude, spec.r0, grid);
        case FamilyKind::Tanh:
            return tanh_family(spec.amplitude, spec.r0, spec.width, grid);
        case FamilyKind::PerturbedStatic:
            return perturbed_static(spec.extras.a, spec.amplitude, spec.extras.pulse_r0,
                                    spec.extras.pulse_width, grid);
        case FamilyKind::PerturbedSelfSimilar:
            return perturbed_self_similar(spec.extras.n, spec.extras.t0, spec.amplitude,
                                          spec.extras.pulse_r0, spec.extras.pulse_width, grid);
    }
    throw ConfigError("make_initial_data: unhandled family kind");
}

}  // namespace wavemap
