#pragma once

#include <string>

#include "wavemap/evolver.hpp"
#include "wavemap/self_similar.hpp"
#include "wavemap/static_solutions.hpp"

namespace wavemap {

enum class FamilyKind {
    Gaussian,
    Logarithmic,
    TurokSpergel,
    Tanh,
    PerturbedStatic,
    PerturbedSelfSimilar,
};

FamilyKind family_kind_from_string(const std::string& s);
std::string to_string(FamilyKind k);

/// One member of an initial-data family.  `amplitude` is the tuning
/// parameter (A, or epsilon for the Turok-Spergel family; the pulse
/// amplitude for the perturbed families).
struct FamilySpec {
    FamilyKind kind = FamilyKind::Gaussian;
    double amplitude = 0.0;
    double r0 = 5.0;     // R0, or Delta for Turok-Spergel
    double width = 1.0;  // delta

    struct Extras {
        double a = 1.0;           // static background parameter
        int n = 1;                // self-similar branch index
        double t0 = -1.0;         // launch time of a self-similar slice (t0 < 0)
        double pulse_r0 = 10.0;   // perturbation pulse location
        double pulse_width = 2.0;
        double ramp_radius = -1.0;  // logarithmic-data regularity ramp; <0 = auto
    } extras;
};

/// chi = A exp(-(r-R0)^2/delta^2), Pi = chi' (approximately in-going).
FieldState gaussian(double A, double R0, double delta, const RadialGrid& grid);

/// chi = A ln(r+R0)/(r+delta), Pi = chi'.  For R0 != 1 the raw data has
/// chi(0) != 0, conflicting with the origin regularity condition, so chi is
/// multiplied by a fixed smooth ramp on [0, ramp_radius] (default 10 inner
/// cells) and Pi carries the exact derivative of the ramped field.
FieldState logarithmic(double A, double R0, double delta, const RadialGrid& grid,
                       double ramp_radius = -1.0);

/// chi = 2 eps arctan(r/Delta); Pi = 2 eps r/(Delta^2 + r^2) (prescribed
/// directly, not chi').  eps=1 is the exact self-similar collapse solution.
FieldState turok_spergel(double eps, double Delta, const RadialGrid& grid);

/// chi = A [tanh((r-R0)/delta) + 1]/2, Pi = chi'.
FieldState tanh_family(double A, double R0, double delta, const RadialGrid& grid);

/// Static solution plus an in-going Gaussian pulse:
///   chi = chi_s + A_p exp(-(r-R0p)^2/dp^2),
///   Pi  = [-(r-R0p)/dp^2] A_p exp(-(r-R0p)^2/dp^2).
FieldState perturbed_static(const StaticProfile& background, double Ap, double R0p, double dp,
                            const RadialGrid& grid);
FieldState perturbed_static(double a, double Ap, double R0p, double dp, const RadialGrid& grid);

/// Self-similar slice at t0 < 0 (z = -r/t0) plus the same pulse form; Pi
/// carries the exact time derivative of the self-similar solution.  The
/// returned state starts at t = t0 so the unperturbed slice collapses at t=0.
FieldState perturbed_self_similar(const SelfSimilarProfile& profile, double t0, double Ap,
                                  double R0p, double dp, const RadialGrid& grid);
FieldState perturbed_self_similar(int n, double t0, double Ap, double R0p, double dp,
                                  const RadialGrid& grid);

/// Dispatch on the family spec (solving background profiles on demand).
FieldState make_initial_data(const FamilySpec& spec, const RadialGrid& grid);

}  // namespace wavemap
