#include <doctest.h>

#include <cmath>

#include "wavemap/errors.hpp"
#include "wavemap/ode.hpp"

using namespace wavemap;

TEST_SUITE_BEGIN("ode");

TEST_CASE("harmonic oscillator integrates to tolerance with dense output") {
    auto f = [](double, double y, double) { return -y; };
    SampledCurve c = integrate_ode2(f, 0.0, 0.0, 1.0, 3.14159265358979323846);
    REQUIRE(c.size() > 4);
    // y = sin(x)
    CHECK(std::abs(c.y.back() - std::sin(3.14159265358979323846)) < 1e-10);
    for (double x : {0.3, 1.1, 2.5, 3.0}) {
        CHECK(std::abs(c.eval(x) - std::sin(x)) < 1e-10);
        CHECK(std::abs(c.deriv(x) - std::cos(x)) < 1e-8);
        CHECK(std::abs(c.second_deriv(x) + std::sin(x)) < 1e-6);
    }
}

TEST_CASE("integration runs right-to-left and normalizes node order") {
    auto f = [](double, double y, double) { return -y; };
    SampledCurve c = integrate_ode2(f, 2.0, std::sin(2.0), std::cos(2.0), 0.5);
    CHECK(c.x.front() < c.x.back());
    CHECK(std::abs(c.eval(1.0) - std::sin(1.0)) < 1e-10);
}

TEST_CASE("renormalized shooting tracks direction through huge growth") {
    auto f = [](double, double y, double) { return y; };  // y ~ e^x
    ShootResult r = integrate_shoot(f, 0.0, 1.0, 1.0, 800.0);
    // raw value e^800 overflows; the direction y'/y -> 1 and the log-scale
    // accounts for the magnitude
    CHECK(std::isfinite(r.y));
    CHECK(std::abs(r.yp / r.y - 1.0) < 1e-9);
    // hypot(y, y') = sqrt(2) e^x for y = e^x
    CHECK(std::log(std::hypot(r.y, r.yp)) + r.log_scale ==
          doctest::Approx(800.0 + 0.5 * std::log(2.0)).epsilon(1e-6));
}

TEST_CASE("finite-time blow-up raises IntegrationError with a location") {
    // y'' = 6 y^2 blows up at x = 1 for y = 1/(1-x)^2-type data
    auto f = [](double, double y, double) { return 6.0 * y * y; };
    try {
        integrate_ode2(f, 0.0, 1.0, 2.0, 2.0);
        FAIL("expected IntegrationError");
    } catch (const IntegrationError& e) {
        CHECK(e.where > 0.0);
        CHECK(e.where < 2.0);
    }
}

TEST_CASE("curve queries outside the sampled domain throw") {
    auto f = [](double, double, double) { return 0.0; };
    SampledCurve c = integrate_ode2(f, 0.0, 1.0, 0.0, 1.0);
    CHECK_THROWS_AS(c.eval(1.5), DomainError);
    CHECK_THROWS_AS(c.eval(-0.5), DomainError);
}

TEST_SUITE_END();
