#include "wavemap/self_similar.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wavemap/errors.hpp"

namespace wavemap {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPiHalf = 1.57079632679489661923;

// chi'' from the profile equation  z^2(z^2-1) chi'' + 2z(z^2-1) chi' + sin(2 chi) = 0.
double profile_rhs(double z, double y, double yp) {
    const double s = z * z * (z * z - 1.0);
    return -(2.0 * z * (z * z - 1.0) * yp + std::sin(2.0 * y)) / s;
}

// Odd series chi = b z + d3 z^3 + d5 z^5 near the origin.
struct LeftSeries {
    double b, d3, d5, z_ser;
    double value(double z) const { return z * (b + z * z * (d3 + z * z * d5)); }
    double deriv(double z) const { return b + z * z * (3.0 * d3 + 5.0 * d5 * z * z); }
};

LeftSeries make_left_series(double b) {
    LeftSeries s;
    s.b = b;
    s.d3 = b / 5.0 - (2.0 / 15.0) * b * b * b;
    s.d5 = ((12.0 - 4.0 * b * b) * s.d3 + (4.0 / 15.0) * std::pow(b, 5)) / 28.0;
    s.z_ser = std::min(1e-3, 1e-2 / std::max(1.0, std::abs(b)));
    return s;
}

// Taylor data of the regular solution at the singular point z=1, in u = z-1:
//   chi = pi/2 + sum a_k u^k  (a1 = c free),
// together with the series of sin(2 chi) and cos(2 chi), generated by the
// differential recurrences S' = 2 chi' C, C' = -2 chi' S.
struct RightSeries {
    std::vector<double> a, S, C;

    double psi(double u) const {
        double acc = 0.0;
        for (std::size_t k = a.size(); k-- > 1;) acc = (acc + a[k]) * u;
        return acc;
    }
    double psi_deriv(double u) const {
        double acc = 0.0;
        for (std::size_t k = a.size(); k-- > 2;) acc = (acc + k * a[k]) * u;
        return acc + a[1];
    }
};

RightSeries make_right_series(double c, int order) {
    RightSeries rs;
    const int N = std::max(order, 4);
    rs.a.assign(N + 1, 0.0);
    rs.S.assign(N + 1, 0.0);
    rs.C.assign(N + 1, 0.0);
    rs.a[1] = c;
    rs.S[0] = 0.0;
    rs.C[0] = -1.0;
    // S_1, C_1 need a_1 only.
    rs.S[1] = 2.0 * rs.a[1] * rs.C[0];
    rs.C[1] = -2.0 * rs.a[1] * rs.S[0];
    for (int j = 1; j < N; ++j) {
        // ODE coefficient of u^j fixes a_{j+1}.
        double acc = 5.0 * j * (j - 1) * rs.a[j] + 4.0 * j * rs.a[j] + rs.S[j];
        if (j >= 2) acc += (4.0 * (j - 1) * (j - 2) + 6.0 * (j - 1)) * rs.a[j - 1];
        if (j >= 3) acc += ((j - 2.0) * (j - 3.0) + 2.0 * (j - 2)) * rs.a[j - 2];
        rs.a[j + 1] = -acc / (2.0 * (j + 1) * j);
        // Advance the sin/cos series to order j+1.
        double sacc = 0.0, cacc = 0.0;
        for (int i = 0; i <= j; ++i) {
            sacc += (i + 1) * rs.a[i + 1] * rs.C[j - i];
            cacc += (i + 1) * rs.a[i + 1] * rs.S[j - i];
        }
        rs.S[j + 1] = 2.0 * sacc / (j + 1);
        rs.C[j + 1] = -2.0 * cacc / (j + 1);
    }
    return rs;
}

struct ShootEnds {
    double y, yp;
};

// Left solution at z_match, integrating out of the origin series.
ShootEnds shoot_left(double b, double z_match, double tol, SampledCurve* store) {
    const LeftSeries ls = make_left_series(b);
    OdeOptions o;
    o.rel_tol = o.abs_tol = tol;
    if (store) {
        *store = integrate_ode2(profile_rhs, ls.z_ser, ls.value(ls.z_ser), ls.deriv(ls.z_ser),
                                z_match, o);
        return {store->y.back(), store->yp.back()};
    }
    SampledCurve c = integrate_ode2(profile_rhs, ls.z_ser, ls.value(ls.z_ser), ls.deriv(ls.z_ser),
                                    z_match, o);
    return {c.y.back(), c.yp.back()};
}

// Right solution at z_match, integrating down from the z=1 series.
ShootEnds shoot_right(const RightSeries& rs, double z_ser_right, double z_match, double tol,
                      SampledCurve* store) {
    const double u = -z_ser_right;
    const double y0 = kPiHalf + rs.psi(u);
    const double yp0 = rs.psi_deriv(u);
    OdeOptions o;
    o.rel_tol = o.abs_tol = tol;
    SampledCurve c = integrate_ode2(profile_rhs, 1.0 + u, y0, yp0, z_match, o);
    const ShootEnds e{c.y.front(), c.yp.front()};  // normalized() puts z_match first
    if (store) *store = std::move(c);
    return e;
}

}  // namespace

double ts_closed_form(double z) {
    if (z < 0.0) throw DomainError("ts_closed_form: z must be nonnegative");
    return 2.0 * std::atan(z);
}

namespace {

double series_eval(const std::vector<double>& coeff, double u) {
    double acc = 0.0;
    for (std::size_t k = coeff.size(); k-- > 0;) acc = acc * u + coeff[k];
    return acc;
}

double series_eval_deriv(const std::vector<double>& coeff, double u) {
    double acc = 0.0;
    for (std::size_t k = coeff.size(); k-- > 2;) acc = (acc + k * coeff[k]) * u;
    return acc + (coeff.size() > 1 ? coeff[1] : 0.0);
}

}  // namespace

double SelfSimilarProfile::chi_at(double z) const {
    if (z < 0.0) throw DomainError("SelfSimilarProfile: z must be nonnegative");
    if (z <= z_ser) return make_left_series(b).value(z);
    if (z <= interior.back_x()) return interior.eval(z);
    if (z < 1.0 + z_ser_right) return kPiHalf + series_eval(a, z - 1.0);
    if (z <= z_max) return exterior.eval(z);
    return exterior.y.back();
}

double SelfSimilarProfile::chi_deriv_at(double z) const {
    if (z < 0.0) throw DomainError("SelfSimilarProfile: z must be nonnegative");
    if (z <= z_ser) return make_left_series(b).deriv(z);
    if (z <= interior.back_x()) return interior.deriv(z);
    if (z < 1.0 + z_ser_right) return series_eval_deriv(a, z - 1.0);
    if (z <= z_max) return exterior.deriv(z);
    return 0.0;
}

namespace {

// chi(1 - delta) - pi/2 from a left-only integration; continuous in b, with a
// sign change at every regular branch.
double left_end_offset(double b, double delta, double* slope_out = nullptr) {
    OdeOptions o;
    o.rel_tol = o.abs_tol = 1e-10;
    const LeftSeries ls = make_left_series(b);
    SampledCurve c = integrate_ode2(profile_rhs, ls.z_ser, ls.value(ls.z_ser), ls.deriv(ls.z_ser),
                                    1.0 - delta, o);
    if (slope_out) *slope_out = c.yp.back();
    return c.y.back() - kPiHalf;
}

struct MatchResidual {
    double dy, dyp;
};

MatchResidual match_residual(double b, double c, const SelfSimilarOptions& opts) {
    const RightSeries rs = make_right_series(c, opts.series_order);
    const ShootEnds L = shoot_left(b, opts.z_match, opts.ode_tol, nullptr);
    const ShootEnds R = shoot_right(rs, opts.z_ser_right, opts.z_match, opts.ode_tol, nullptr);
    return {L.y - R.y, L.yp - R.yp};
}

// Quintic smoothstep, C2 on [0,1].
double smoothstep5(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }
double smoothstep5_deriv(double s) { return s * s * (30.0 + s * (-60.0 + 30.0 * s)); }

SampledCurve build_exterior(const RightSeries& rs, const SelfSimilarOptions& opts) {
    const double u0 = opts.z_ser_right;
    OdeOptions o;
    o.rel_tol = o.abs_tol = opts.ode_tol;
    SampledCurve raw = integrate_ode2(profile_rhs, 1.0 + u0, kPiHalf + rs.psi(u0),
                                      rs.psi_deriv(u0), opts.z_max, o);
    const double t0 = 1.0 + (1.0 - opts.taper_fraction) * (opts.z_max - 1.0);
    const double len = opts.z_max - t0;

    // Blend chi' to zero over [t0, z_max] so the profile freezes smoothly.
    SampledCurve out;
    double acc = 0.0;       // integral of the tapered derivative past t0
    double y_t0 = 0.0;
    bool past = false;
    auto weight = [&](double z) { return 1.0 - smoothstep5((z - t0) / len); };
    auto weight_deriv = [&](double z) { return -smoothstep5_deriv((z - t0) / len) / len; };
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const double z = raw.x[i];
        if (z <= t0) {
            out.x.push_back(z);
            out.y.push_back(raw.y[i]);
            out.yp.push_back(raw.yp[i]);
            out.ypp.push_back(raw.ypp[i]);
            continue;
        }
        if (!past) {
            past = true;
            y_t0 = raw.eval(t0);
            out.x.push_back(t0);
            out.y.push_back(y_t0);
            out.yp.push_back(raw.deriv(t0));
            out.ypp.push_back(raw.second_deriv(t0));
        }
        // 5-point Gauss-Legendre for the cumulative tapered derivative.
        static const double gx[5] = {-0.906179845938664, -0.538469310105683, 0.0,
                                     0.538469310105683, 0.906179845938664};
        static const double gw[5] = {0.236926885056189, 0.478628670499366, 0.568888888888889,
                                     0.478628670499366, 0.236926885056189};
        const double zl = out.x.back(), zr = z;
        double seg = 0.0;
        for (int q = 0; q < 5; ++q) {
            const double zz = 0.5 * (zl + zr) + 0.5 * (zr - zl) * gx[q];
            seg += gw[q] * raw.deriv(zz) * weight(zz);
        }
        acc += 0.5 * (zr - zl) * seg;
        out.x.push_back(z);
        out.y.push_back(y_t0 + acc);
        out.yp.push_back(raw.yp[i] * weight(z));
        out.ypp.push_back(raw.ypp[i] * weight(z) + raw.yp[i] * weight_deriv(z));
    }
    // Pin the final derivative exactly to zero.
    if (!out.yp.empty()) out.yp.back() = 0.0;
    return out;
}

double profile_defect(const SampledCurve& c, double z) {
    const double s = z * z * (z * z - 1.0);
    return s * c.second_deriv(z) + 2.0 * z * (z * z - 1.0) * c.deriv(z) + std::sin(2.0 * c.eval(z));
}

}  // namespace

SelfSimilarProfile solve_ab(int n, const SelfSimilarOptions& opts) {
    if (n < 0) throw DomainError("solve_ab: branch index must be nonnegative");

    // Stage 1: scan the initial slope for sign changes of chi(1-) - pi/2.
    // The roots are ordered in b and the k-th one carries k interior
    // crossings, so the (n+1)-th sign change brackets the requested branch.
    const double delta = 1e-4;
    const double decades = std::log10(opts.b_hi / opts.b_lo);
    const int n_scan = std::max(16, static_cast<int>(decades * opts.scan_points_per_decade));
    double b_prev = opts.b_lo;
    double g_prev = left_end_offset(b_prev, delta);
    int found = 0;
    double blo = 0.0, bhi = 0.0;
    for (int i = 1; i <= n_scan && found <= n; ++i) {
        const double bb = opts.b_lo * std::pow(10.0, decades * i / n_scan);
        const double gg = left_end_offset(bb, delta);
        if (std::isfinite(gg) && std::isfinite(g_prev) && std::signbit(gg) != std::signbit(g_prev)) {
            if (found == n) {
                blo = b_prev;
                bhi = bb;
            }
            ++found;
        }
        b_prev = bb;
        g_prev = gg;
    }
    if (found <= n) {
        std::ostringstream os;
        os << "solve_ab: branch n=" << n << " not found for slopes in [" << opts.b_lo << ", "
           << opts.b_hi << "]";
        throw BranchNotFoundError(os.str());
    }

    // Bisect the bracket down to a good Newton seed.
    double glo = left_end_offset(blo, delta);
    for (int it = 0; it < 60 && (bhi - blo) > 1e-9 * blo; ++it) {
        const double mid = 0.5 * (blo + bhi);
        const double gm = left_end_offset(mid, delta);
        if (std::signbit(gm) == std::signbit(glo)) {
            blo = mid;
            glo = gm;
        } else {
            bhi = mid;
        }
    }
    double b = 0.5 * (blo + bhi);
    double c;
    left_end_offset(b, delta, &c);  // slope near z=1 seeds the right series

    // Stage 2: Newton on (b, c) for the two matching conditions at z_match.
    auto norm = [](const MatchResidual& r) {
        return std::max(std::abs(r.dy), std::abs(r.dyp));
    };
    MatchResidual R = match_residual(b, c, opts);
    const double newton_tol = 1e-11 * std::max(1.0, std::abs(c));
    for (int it = 0; it < 40 && norm(R) > newton_tol; ++it) {
        const double db = 1e-7 * std::max(std::abs(b), 1e-3);
        const double dc = 1e-7 * std::max(std::abs(c), 1e-3);
        const MatchResidual Rb = match_residual(b + db, c, opts);
        const MatchResidual Rc = match_residual(b, c + dc, opts);
        const double j00 = (Rb.dy - R.dy) / db, j01 = (Rc.dy - R.dy) / dc;
        const double j10 = (Rb.dyp - R.dyp) / db, j11 = (Rc.dyp - R.dyp) / dc;
        const double det = j00 * j11 - j01 * j10;
        if (det == 0.0 || !std::isfinite(det))
            throw BranchNotFoundError("solve_ab: singular Jacobian in the matching Newton");
        double step_b = -(R.dy * j11 - R.dyp * j01) / det;
        double step_c = -(j00 * R.dyp - j10 * R.dy) / det;
        // Damp if the residual does not decrease.
        double scale = 1.0;
        for (int d = 0; d < 8; ++d) {
            const MatchResidual Rn = match_residual(b + scale * step_b, c + scale * step_c, opts);
            if (norm(Rn) < norm(R)) {
                b += scale * step_b;
                c += scale * step_c;
                R = Rn;
                break;
            }
            scale *= 0.5;
            if (d == 7) throw BranchNotFoundError("solve_ab: matching Newton stalled");
        }
    }
    if (norm(R) > 1e3 * newton_tol)
        throw BranchNotFoundError("solve_ab: matching Newton did not converge");

    // Assemble the profile.
    SelfSimilarProfile prof;
    prof.n = n;
    prof.b = b;
    prof.c = c;
    prof.z_ser = make_left_series(b).z_ser;
    prof.z_ser_right = opts.z_ser_right;
    prof.z_max = opts.z_max;
    prof.taper_start = 1.0 + (1.0 - opts.taper_fraction) * (opts.z_max - 1.0);

    const RightSeries rs = make_right_series(c, opts.series_order);
    SampledCurve right;
    shoot_left(b, opts.z_match, opts.ode_tol, &prof.interior);
    shoot_right(rs, opts.z_ser_right, opts.z_match, opts.ode_tol, &right);
    prof.interior.append(right);
    prof.exterior = build_exterior(rs, opts);
    prof.a = rs.a;
    prof.cos2chi = rs.C;

    // Defect of the continuous representation, sampled between nodes.
    double defect = 0.0;
    for (std::size_t i = 0; i + 1 < prof.interior.size(); ++i) {
        const double zm = 0.5 * (prof.interior.x[i] + prof.interior.x[i + 1]);
        defect = std::max(defect, std::abs(profile_defect(prof.interior, zm)));
    }
    prof.residual_norm = defect;

    const int observed = count_crossings(prof);
    if (observed != n) {
        std::ostringstream os;
        os << "solve_ab: converged to a profile with " << observed << " crossings instead of "
           << n;
        throw BranchNotFoundError(os.str());
    }
    return prof;
}

int count_crossings(const SelfSimilarProfile& profile, double tangency_tol) {
    // Walk the interior nodes (the integrator resolves the boundary layer, so
    // the node set is dense wherever crossings can hide).
    const SampledCurve& c = profile.interior;
    int count = 0;
    int last_sign = 0;
    bool pending_touch = false;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double v = c.y[i] - kPiHalf;
        if (std::abs(v) <= tangency_tol) {
            pending_touch = true;
            continue;
        }
        const int s = v > 0.0 ? 1 : -1;
        if (last_sign != 0) {
            if (s != last_sign) {
                ++count;
            } else if (pending_touch) {
                throw AmbiguousCrossingError(
                    "count_crossings: tangent approach to pi/2 within tolerance");
            }
        }
        last_sign = s;
        pending_touch = false;
    }
    return count;
}

namespace {

// ---- Perturbation spectrum ----

double mode_rhs(const SelfSimilarProfile& prof, double lam, double z, double v, double vp) {
    const double z2 = z * z;
    const double s = z2 * (z2 - 1.0);
    const double p = 2.0 * z * (z2 - 1.0 - lam * z2);
    const double q = 2.0 * std::cos(2.0 * prof.chi_at(z)) + (lam * lam - lam) * z2;
    return -(p * vp + q * v) / s;
}

// Mode series at z=0: v = z + e3 z^3 + e5 z^5 (odd, normalized v'(0) = 1).
struct ModeLeft {
    double e3, e5, z_ser;
    double value(double z) const { return z * (1.0 + z * z * (e3 + z * z * e5)); }
    double deriv(double z) const { return 1.0 + z * z * (3.0 * e3 + 5.0 * e5 * z * z); }
};

ModeLeft make_mode_left(const SelfSimilarProfile& prof, double lam) {
    ModeLeft m;
    const double b = prof.b;
    const LeftSeries bg = make_left_series(b);
    m.e3 = (lam * lam - 3.0 * lam + 2.0 - 4.0 * b * b) / 10.0;
    const double q4 = (4.0 / 3.0) * std::pow(b, 4) - 8.0 * b * bg.d3;
    m.e5 = (m.e3 * (lam * lam - 7.0 * lam + 12.0 - 4.0 * b * b) + q4) / 28.0;
    m.z_ser = std::min(
        1e-3, 1e-2 / std::max({1.0, std::abs(b), std::pow(std::abs(lam) + 1.0, 0.75)}));
    return m;
}

// Mode series at z=1 from the recurrence; the background cos(2 chi) Taylor
// coefficients come with the profile.
std::vector<double> mode_right_coeffs(const SelfSimilarProfile& prof, double lam, int order) {
    const int N = std::max(order, 4);
    const auto& C = prof.cos2chi;
    auto q = [&](int m) {
        double val = (m < static_cast<int>(C.size())) ? 2.0 * C[m] : 0.0;
        const double ll = lam * lam - lam;
        if (m == 0) val += ll;
        if (m == 1) val += 2.0 * ll;
        if (m == 2) val += ll;
        return val;
    };
    const double p1 = 4.0 - 6.0 * lam, p2 = 6.0 - 6.0 * lam, p3 = 2.0 - 2.0 * lam;
    std::vector<double> e(N + 1, 0.0);
    e[0] = 1.0;
    for (int j = 0; j < N; ++j) {
        double acc = 5.0 * j * (j - 1) * e[j] + p1 * j * e[j];
        if (j >= 1) acc += (4.0 * (j - 1) * (j - 2) + p2 * (j - 1)) * e[j - 1];
        if (j >= 2) acc += ((j - 2.0) * (j - 3.0) + p3 * (j - 2)) * e[j - 2];
        for (int m = 0; m <= j; ++m) acc += q(m) * e[j - m];
        e[j + 1] = -acc / (2.0 * (j + 1) * (j - lam));
    }
    return e;
}

// The series recurrence divides by (j - lambda): integer lambda >= 0 is a
// resonance, so evaluation is nudged off the integer.
double deresonate(double lam) {
    const double r = std::round(lam);
    if (r >= -0.5 && std::abs(lam - r) < 1e-7) return r + (lam >= r ? 1e-7 : -1e-7);
    return lam;
}

// Normalized matching Wronskian at z_match.  The shooting halves are
// renormalized on the fly (the mode problem is linear and the WKB growth
// overflows doubles for strongly negative lambda); only directions enter W.
double mode_determinant(const SelfSimilarProfile& prof, double lam_in, const SpectrumOptions& o) {
    const double lam = deresonate(lam_in);
    OdeOptions oo;
    oo.rel_tol = oo.abs_tol = o.ode_tol;

    const ModeLeft ml = make_mode_left(prof, lam);
    auto f = [&](double z, double v, double vp) { return mode_rhs(prof, lam, z, v, vp); };
    const ShootResult L = integrate_shoot(f, ml.z_ser, ml.value(ml.z_ser), ml.deriv(ml.z_ser),
                                          o.z_match, oo);

    // The series radius at z=1 shrinks like 1/|lambda|.
    const std::vector<double> e = mode_right_coeffs(prof, lam, 12);
    const double u0 = -std::min(prof.z_ser_right, 1.0 / (1.0 + std::abs(lam)));
    const ShootResult R = integrate_shoot(f, 1.0 + u0, series_eval(e, u0),
                                          series_eval_deriv(e, u0), o.z_match, oo);

    const double nl = std::hypot(L.y, L.yp), nr = std::hypot(R.y, R.yp);
    return (L.y * R.yp - L.yp * R.y) / (nl * nr);
}

// Dense mode reconstruction at a converged eigenvalue.  The halves are
// joined inside the core (z ~ 1/b) where the WKB branch separation is mild,
// so the stitch is accurate for deep core-localized modes too.
void mode_curves(const SelfSimilarProfile& prof, double lam_in, const SpectrumOptions& o,
                 SampledCurve& left, SampledCurve& right, double& theta) {
    const double lam = deresonate(lam_in);
    const double z_join = std::min(o.z_match, 3.0 / std::max(1.0, prof.b));
    OdeOptions oo;
    oo.rel_tol = oo.abs_tol = o.ode_tol;
    const ModeLeft ml = make_mode_left(prof, lam);
    auto f = [&](double z, double v, double vp) { return mode_rhs(prof, lam, z, v, vp); };
    left = integrate_ode2(f, ml.z_ser, ml.value(ml.z_ser), ml.deriv(ml.z_ser), z_join, oo);
    const std::vector<double> e = mode_right_coeffs(prof, lam, 12);
    const double u0 = -std::min(prof.z_ser_right, 1.0 / (1.0 + std::abs(lam)));
    right = integrate_ode2(f, 1.0 + u0, series_eval(e, u0), series_eval_deriv(e, u0), z_join, oo);
    const double vl = left.y.back(), vpl = left.yp.back();
    const double vr = right.y.front(), vpr = right.yp.front();
    theta = (vl * vr + vpl * vpr) / (vr * vr + vpr * vpr);
}

std::vector<double> scan_roots(const SelfSimilarProfile& prof, double lo, double hi, double step,
                               const SpectrumOptions& o) {
    std::vector<double> roots;
    double x_prev = lo;
    double f_prev = mode_determinant(prof, x_prev, o);
    const int n = std::max(2, static_cast<int>(std::ceil((hi - lo) / step)));
    for (int i = 1; i <= n; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / n;
        const double fx = mode_determinant(prof, x, o);
        if (std::isfinite(fx) && std::isfinite(f_prev) &&
            std::signbit(fx) != std::signbit(f_prev)) {
            double a = x_prev, bnd = x, fa = f_prev;
            while (bnd - a > o.bisect_tol) {
                const double m = 0.5 * (a + bnd);
                const double fm = mode_determinant(prof, m, o);
                if (std::signbit(fm) == std::signbit(fa)) {
                    a = m;
                    fa = fm;
                } else {
                    bnd = m;
                }
            }
            const double root = 0.5 * (a + bnd);
            // Two kinds of sign flips are not ordinary zeros:
            //  - series poles at nonnegative integer lambda (the z=1
            //    recurrence divides by j - lambda): rejected;
            //  - deep core-localized eigenvalues, where the growing-branch
            //    coefficient of the left solution crosses zero inside an
            //    exponentially narrow window, so |W| never visibly dips:
            //    the flip location is the eigenvalue and is kept.
            const double nearest_int = std::round(root);
            const bool at_pole =
                nearest_int >= -0.5 && std::abs(root - nearest_int) < 1e-6 &&
                std::abs(mode_determinant(prof, root, o)) > 1e-5;
            if (!at_pole) roots.push_back(root);
        }
        x_prev = x;
        f_prev = fx;
    }
    return roots;
}

bool same_root_set(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol * (1.0 + std::abs(a[i]))) return false;
    return true;
}

}  // namespace

double lambda_match_determinant(const SelfSimilarProfile& profile, double lambda,
                                const SpectrumOptions& opts) {
    return mode_determinant(profile, lambda, opts);
}

std::vector<EigenvalueResult> lambda_spectrum(const SelfSimilarProfile& profile, double lam_lo,
                                              double lam_hi, int count_limit,
                                              const SpectrumOptions& opts) {
    if (!(lam_hi > lam_lo)) throw DomainError("lambda_spectrum: empty range");

    // Scan, then verify against a half-step rescan; refine until stable.
    double step = opts.scan_step;
    std::vector<double> roots = scan_roots(profile, lam_lo, lam_hi, step, opts);
    bool stable = false;
    for (int h = 0; h < opts.max_halvings; ++h) {
        std::vector<double> finer = scan_roots(profile, lam_lo, lam_hi, step * 0.5, opts);
        if (same_root_set(roots, finer, 100.0 * opts.bisect_tol)) {
            stable = true;
            roots = std::move(finer);
            break;
        }
        roots = std::move(finer);
        step *= 0.5;
    }
    if (!stable)
        throw BracketError("lambda_spectrum: root set kept changing at the scan resolution floor");

    std::vector<EigenvalueResult> out;
    for (double lam : roots) {
        if (static_cast<int>(out.size()) >= count_limit) break;
        EigenvalueResult er;
        er.lambda = lam;
        if (std::abs(lam + 1.0) <= opts.gauge_tol)
            er.classification = ModeClass::Gauge;
        else
            er.classification = lam < 0.0 ? ModeClass::Unstable : ModeClass::Stable;

        SampledCurve L, R;
        double theta = 1.0;
        mode_curves(profile, lam, opts, L, R, theta);
        for (std::size_t i = 0; i < R.size(); ++i) {
            R.y[i] *= theta;
            R.yp[i] *= theta;
            R.ypp[i] *= theta;
        }
        er.mode = std::move(L);
        er.mode.append(R);
        out.push_back(std::move(er));
    }
    return out;
}

std::vector<DeviationFrame> ss_compare(const EvolutionRecord& record,
                                       const SelfSimilarProfile& profile, double T_star,
                                       const SsCompareOptions& opts) {
    // Usable frames: snapshots strictly before collapse with enough grid
    // support inside the comparison window.
    struct Frame {
        const Snapshot* snap;
        double t;
    };
    std::vector<Frame> frames;
    for (const Snapshot& s : record.snapshots) {
        if (s.t >= T_star) continue;
        const double scale = T_star - s.t;
        const double r_lo = opts.z_lo * scale, r_hi = opts.z_hi * scale;
        int inside = 0;
        for (double r : record.r)
            if (r >= r_lo && r <= r_hi) ++inside;
        if (inside >= opts.min_grid_points) frames.push_back({&s, s.t});
    }
    if (frames.empty())
        throw InsufficientDataError("ss_compare: no snapshots resolve the self-similar window");

    double prof_scale = 0.0;
    for (int k = 0; k < opts.n_cmp; ++k) {
        const double z = opts.z_lo + (opts.z_hi - opts.z_lo) * k / (opts.n_cmp - 1.0);
        prof_scale = std::max(prof_scale, std::abs(profile.chi_at(z)));
    }

    auto interp_snap = [&](const Snapshot& s, double rq) {
        const auto& r = record.r;
        auto it = std::lower_bound(r.begin(), r.end(), rq);
        std::size_t j = static_cast<std::size_t>(it - r.begin());
        std::size_t i0 = (j < 2) ? 0 : std::min(j - 2, r.size() - 4);
        double acc = 0.0;
        for (std::size_t p = i0; p < i0 + 4; ++p) {
            double l = 1.0;
            for (std::size_t q = i0; q < i0 + 4; ++q)
                if (q != p) l *= (rq - r[q]) / (r[p] - r[q]);
            acc += l * s.chi[p];
        }
        return acc;
    };

    auto deviation = [&](const Snapshot& s, double Ts) {
        const double scale = Ts - s.t;
        if (scale <= 0.0) return std::numeric_limits<double>::infinity();
        double dev = 0.0;
        for (int k = 0; k < opts.n_cmp; ++k) {
            const double z = opts.z_lo + (opts.z_hi - opts.z_lo) * k / (opts.n_cmp - 1.0);
            const double rq = z * scale;
            if (rq > record.r.back()) continue;
            dev = std::max(dev, std::abs(interp_snap(s, rq) - profile.chi_at(z)));
        }
        return dev / prof_scale;
    };

    // The zero-of-time freedom t -> t + c is fixed on the first frame only.
    double Ts = T_star;
    if (opts.align_first_frame) {
        const Snapshot& first = *frames.front().snap;
        const double span = 0.5 * (T_star - first.t);
        double a = T_star - span, b = T_star + span;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = deviation(first, x1), f2 = deviation(first, x2);
        for (int it = 0; it < 60; ++it) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = deviation(first, x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = deviation(first, x2);
            }
        }
        Ts = 0.5 * (a + b);
    }

    std::vector<DeviationFrame> out;
    for (const Frame& f : frames) {
        if (Ts - f.t <= 0.0) continue;
        DeviationFrame df;
        df.t = f.t;
        df.tau = std::log(Ts - f.t);
        df.deviation = deviation(*f.snap, Ts);
        out.push_back(df);
    }
    return out;
}

}  // namespace wavemap
