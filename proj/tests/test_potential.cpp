#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "wormhole/potential.hpp"

using namespace wormhole;

TEST_CASE("v_eff spot values") {
    WormholeGeometry g1(1.0);
    CHECK(v_eff(0.0, g1, 0) == 1.0);                       // barrier max 1/b0^2
    CHECK(std::fabs(v_eff(1.0, g1, 1) - 1.25) <= 1e-15);   // 2/2 + 1/4
    CHECK(v_eff(1e8, g1, 0) <= 1e-30);                     // -> 0 at infinity
    CHECK_THROWS_AS(v_eff(std::nan(""), g1, 0), std::domain_error);
    CHECK_THROWS_AS(v_eff(1.0, g1, -2), std::domain_error);
}

TEST_CASE("v_eff is even, positive, and peaks at the origin for L = 0") {
    WormholeGeometry g(0.7);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> rs(-30.0, 30.0);
    for (int i = 0; i < 200; ++i) {
        const double r = rs(rng);
        for (int L : {0, 1, 3}) {
            CHECK(v_eff(r, g, L) == v_eff(-r, g, L));
            CHECK(v_eff(r, g, L) > 0.0);
        }
        CHECK(v_eff(0.0, g, 0) >= v_eff(r, g, 0));
    }
    CHECK(v_eff(0.0, g, 0) == g.barrier_max());
}

TEST_CASE("v_eff scaling law v(r; b0, L) = v(r/b0; 1, L)/b0^2") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> rs(-5.0, 5.0), bs(0.1, 4.0);
    WormholeGeometry unit(1.0);
    for (int i = 0; i < 100; ++i) {
        const double r = rs(rng), b0 = bs(rng);
        WormholeGeometry g(b0);
        for (int L : {0, 1, 2}) {
            const double lhs = v_eff(r, g, L);
            const double rhs = v_eff(r / b0, unit, L) / (b0 * b0);
            CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::fabs(rhs));
        }
    }
}

TEST_CASE("closed-form Fourier transform spot values") {
    WormholeGeometry g1(1.0);
    CHECK(std::fabs(v_fourier_closed(0.0, g1, 0) - M_PI / 2.0) <= 1e-15);
    CHECK(std::fabs(v_fourier_closed(0.0, g1, 1) - 5.0 * M_PI / 2.0) <= 1e-14);
    CHECK(std::fabs(v_fourier_closed(1.0, g1, 0) - M_PI * std::exp(-1.0)) <= 1e-15);
    CHECK(v_fourier_closed(800.0, g1, 2) <= 1e-300);  // exponential decay
    CHECK_THROWS_AS(v_fourier_closed(-0.1, g1, 0), std::domain_error);
}

TEST_CASE("closed-form FT decreases monotonically in q for L = 0") {
    WormholeGeometry g(1.3);
    double prev = v_fourier_closed(0.0, g, 0);
    for (double q = 0.05; q <= 20.0; q += 0.05) {
        const double cur = v_fourier_closed(q, g, 0);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("numeric FT oracle agrees with the closed form") {
    // the central cross-check: adaptive quadrature vs printed formula
    for (double b0 : {1.0, 2.0}) {
        WormholeGeometry g(b0);
        for (int L : {0, 1, 2}) {
            for (double qb0 : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
                const double q = qb0 / b0;
                const auto est = v_fourier_numeric(q, g, L, 1e-9);
                const double closed = v_fourier_closed(q, g, L);
                INFO("b0=" << b0 << " L=" << L << " q*b0=" << qb0);
                CHECK(est.converged);
                CHECK(std::fabs(est.value - closed) / closed <= 1e-6);
            }
        }
    }
}

TEST_CASE("numeric FT spot values and error-estimate honesty") {
    WormholeGeometry g1(1.0);
    auto a = v_fourier_numeric(1.0, g1, 0, 1e-10);
    CHECK(std::fabs(a.value - M_PI * std::exp(-1.0)) <= 1e-8);
    CHECK(std::fabs(a.value - M_PI * std::exp(-1.0)) <=
          std::max(a.abs_error * 10.0, 1e-12));

    auto b = v_fourier_numeric(0.0, g1, 0, 1e-10);
    CHECK(std::fabs(b.value - M_PI / 2.0) / (M_PI / 2.0) <= 1e-10);

    WormholeGeometry g2(2.0);
    auto c = v_fourier_numeric(5.0, g2, 2, 1e-9);
    CHECK(std::fabs(c.value - v_fourier_closed(5.0, g2, 2)) /
              v_fourier_closed(5.0, g2, 2) <=
          1e-6);
}

TEST_CASE("numeric FT input validation") {
    WormholeGeometry g(1.0);
    CHECK_THROWS_AS(v_fourier_numeric(-1.0, g, 0), std::domain_error);
    CHECK_THROWS_AS(v_fourier_numeric(1.0, g, -1), std::domain_error);
    CHECK_THROWS_AS(v_fourier_numeric(1.0, g, 0, 0.0), std::domain_error);
}
