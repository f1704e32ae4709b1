#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "wormhole/geometry.hpp"
#include "wormhole/quadrature.hpp"
#include "wormhole/rk45.hpp"

using namespace wormhole;

TEST_CASE("gauss-kronrod reproduces elementary integrals") {
    auto r1 = quad::integrate([](double x) { return x * x; }, 0.0, 1.0, 1e-12);
    CHECK(r1.converged);
    CHECK(std::fabs(r1.value - 1.0 / 3.0) <= 1e-14);

    auto r2 = quad::integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
    CHECK(std::fabs(r2.value - 2.0) <= 1e-12);

    // zero-length interval
    auto r3 = quad::integrate([](double x) { return x; }, 2.0, 2.0, 1e-12);
    CHECK(r3.value == 0.0);
    CHECK(r3.converged);
}

TEST_CASE("gauss-kronrod handles oscillatory and peaked integrands") {
    // integral_0^{20 pi} cos(x) dx = 0; absolute target needed for a true zero
    auto osc = quad::integrate([](double x) { return std::cos(x); }, 0.0, 20.0 * M_PI,
                               1e-10, 1e-12);
    CHECK(std::fabs(osc.value) <= 1e-10);

    // narrow Lorentzian: integral_{-1}^{1} eps/(x^2+eps^2) dx = 2 atan(1/eps)
    const double eps = 1e-4;
    auto peak = quad::integrate([eps](double x) { return eps / (x * x + eps * eps); },
                                -1.0, 1.0, 1e-10);
    const double exact = 2.0 * std::atan(1.0 / eps);
    CHECK(peak.converged);
    CHECK(std::fabs(peak.value - exact) / exact <= 1e-10);
}

TEST_CASE("gauss-kronrod error estimate bounds the true error") {
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> amp(0.5, 2.0);
    for (int i = 0; i < 25; ++i) {
        const double a = amp(rng), w = 3.0 * amp(rng);
        auto r = quad::integrate(
            [a, w](double x) { return a * std::exp(-x) * std::cos(w * x); }, 0.0, 30.0,
            1e-9, 1e-13);
        const double exact = a * (1.0 - std::exp(-30.0) * (std::cos(30.0 * w) -
                                                           w * std::sin(30.0 * w))) /
                             (1.0 + w * w);
        // exact antiderivative of e^-x cos(wx): e^-x (w sin(wx) - cos(wx))/(1+w^2)
        const double truth = a * (1.0 / (1.0 + w * w)) -
                             a * std::exp(-30.0) *
                                 (w * std::sin(30.0 * w) - std::cos(30.0 * w)) /
                                 (1.0 + w * w);
        (void)exact;
        CHECK(std::fabs(r.value - truth) <= std::max(r.abs_error, 1e-13) * 10.0);
    }
}

TEST_CASE("rk45 integrates scalar exponential growth") {
    ode::Rk45<double, 1> solver;
    ode::Rk45<double, 1>::State y{1.0};
    solver.integrate([](double, const auto& s, auto& d) { d[0] = s[0]; }, 0.0, 2.0, y,
                     {.rel_tol = 1e-12, .abs_tol = 1e-14});
    CHECK(std::fabs(y[0] - std::exp(2.0)) / std::exp(2.0) <= 1e-10);
}

TEST_CASE("rk45 integrates complex rotation with unit modulus") {
    using C = std::complex<double>;
    ode::Rk45<C, 1> solver;
    ode::Rk45<C, 1>::State y{C(1.0, 0.0)};
    solver.integrate([](double, const auto& s, auto& d) { d[0] = C(0.0, 1.0) * s[0]; },
                     0.0, 20.0, y, {.rel_tol = 1e-12, .abs_tol = 1e-14});
    CHECK(std::abs(y[0] - std::polar(1.0, 20.0)) <= 1e-9);
}

TEST_CASE("rk45 runs backward in time") {
    ode::Rk45<double, 2> solver;
    // harmonic oscillator y'' = -y, integrated from t = pi back to 0
    ode::Rk45<double, 2>::State y{std::sin(M_PI), std::cos(M_PI)};
    solver.integrate(
        [](double, const auto& s, auto& d) {
            d[0] = s[1];
            d[1] = -s[0];
        },
        M_PI, 0.0, y, {.rel_tol = 1e-12, .abs_tol = 1e-14});
    CHECK(std::fabs(y[0] - 0.0) <= 1e-10);
    CHECK(std::fabs(y[1] - 1.0) <= 1e-10);
}

TEST_CASE("domain types validate their invariants") {
    CHECK_THROWS_AS(WormholeGeometry(0.0), std::domain_error);
    CHECK_THROWS_AS(WormholeGeometry(-1.0), std::domain_error);
    CHECK_THROWS_AS(WormholeGeometry(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(ScatterContext(-0.5, 0), std::domain_error);
    CHECK_THROWS_AS(ScatterContext(1.0, -1), std::domain_error);

    WormholeGeometry g(0.5);
    CHECK(g.diameter() == 1.0);
    CHECK(g.barrier_max() == 4.0);
    ScatterContext ctx(3.0, 2);
    CHECK(ctx.energy() == 9.0);
}
