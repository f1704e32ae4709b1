#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "wormhole/born.hpp"
#include "wormhole/potential.hpp"

using namespace wormhole;

TEST_CASE("born amplitude spot values") {
    WormholeGeometry g1(1.0);
    // k = 0: theta-independent, -1/8 at L = 0
    for (double theta : {0.0, 0.3, 1.5, M_PI}) {
        CHECK(std::fabs(born_amplitude(theta, ScatterContext(0.0, 0), g1) + 0.125) <=
              1e-16);
    }
    // forward scattering carries q = 0 regardless of k
    CHECK(std::fabs(born_amplitude(0.0, ScatterContext(5.0, 0), g1) + 0.125) <= 1e-16);
    // backscattering at k = 1, L = 1: q = 2, A = -(4+2+1)/8 e^{-2}
    CHECK(std::fabs(born_amplitude(M_PI, ScatterContext(1.0, 1), g1) +
                    7.0 * std::exp(-2.0) / 8.0) <= 1e-15);

    CHECK_THROWS_AS(born_amplitude(-0.1, ScatterContext(1.0, 0), g1), std::domain_error);
    CHECK_THROWS_AS(born_amplitude(M_PI + 0.1, ScatterContext(1.0, 0), g1),
                    std::domain_error);
}

TEST_CASE("born amplitude is -V(q)/(4 pi) and always negative") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> ts(0.0, M_PI), ks(0.0, 8.0), bs(0.2, 3.0);
    for (int i = 0; i < 300; ++i) {
        const double theta = ts(rng), k = ks(rng), b0 = bs(rng);
        const int L = i % 3;
        WormholeGeometry g(b0);
        ScatterContext ctx(k, L);
        const double a = born_amplitude(theta, ctx, g);
        const double q = 2.0 * k * std::fabs(std::sin(0.5 * theta));
        const double via_ft = -v_fourier_closed(q, g, L) / (4.0 * M_PI);
        CHECK(a < 0.0);
        CHECK(std::fabs(a - via_ft) <= 1e-12 * std::fabs(a));
    }
}

TEST_CASE("zero-energy amplitude is isotropic to machine precision") {
    WormholeGeometry g(1.7);
    ScatterContext ctx(0.0, 2);
    double lo = HUGE_VAL, hi = -HUGE_VAL;
    for (int i = 0; i <= 100; ++i) {
        const double a = born_amplitude(M_PI * i / 100.0, ctx, g);
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    CHECK(hi - lo <= 1e-14);
    CHECK(std::fabs(lo * lo - dcs_zero_energy(2, g)) <= 1e-14);
}

TEST_CASE("dcs_zero_energy spot values") {
    CHECK(std::fabs(dcs_zero_energy(0, WormholeGeometry(1.0)) - 1.0 / 64.0) <= 1e-17);
    CHECK(std::fabs(dcs_zero_energy(1, WormholeGeometry(1.0)) - 25.0 / 64.0) <= 1e-15);
    CHECK(std::fabs(dcs_zero_energy(0, WormholeGeometry(2.0)) - 1.0 / 256.0) <= 1e-17);
    CHECK_THROWS_AS(dcs_zero_energy(-1, WormholeGeometry(1.0)), std::domain_error);
}

TEST_CASE("sigma by quadrature at k = 0 matches the isotropic integral") {
    WormholeGeometry g1(1.0);
    auto s0 = sigma_quadrature(ScatterContext(0.0, 0), g1);
    CHECK(s0.converged);
    CHECK(std::fabs(s0.value - M_PI / 16.0) <= 1e-10 * (M_PI / 16.0));

    auto s1 = sigma_quadrature(ScatterContext(0.0, 1), g1);
    CHECK(std::fabs(s1.value - 25.0 * M_PI / 16.0) <= 1e-10 * (25.0 * M_PI / 16.0));
}

TEST_CASE("closed form agrees with quadrature for L = 0, 1, 2") {
    WormholeGeometry g(1.0);
    for (int L : {0, 1, 2}) {
        for (double x : {0.05, 0.13, 0.5, 1.0, 2.7, 8.0, 20.0}) {
            ScatterContext ctx(x / g.b0, L);
            auto cs = cross_section(ctx, g, 1e-11);
            INFO("L = " << L << ", x = " << x);
            CHECK(cs.discrepancy <= 1e-6);
        }
    }
    // and on a different throat radius
    WormholeGeometry g2(0.4);
    auto cs = cross_section(ScatterContext(3.0 / g2.b0, 2), g2, 1e-11);
    CHECK(cs.discrepancy <= 1e-6);
}

TEST_CASE("as-printed closed form fails the quadrature oracle except at L = 1") {
    // the corrected coefficient 16 L + 9 restores agreement everywhere; the
    // literal "16 + 9" = 25 of the displayed equation deviates at L = 0 and
    // L >= 2, and happens to coincide with 16 L + 9 exactly at L = 1
    WormholeGeometry g(1.0);
    for (int L : {0, 2}) {
        ScatterContext ctx(1.0, L);
        auto quad = sigma_quadrature(ctx, g, 1e-11);
        const double printed = sigma_closed(ctx, g, ClosedFormVariant::as_printed);
        INFO("L = " << L);
        CHECK(std::fabs(printed - quad.value) / quad.value > 1e-3);
    }
    {
        ScatterContext ctx(1.0, 1);
        auto quad = sigma_quadrature(ctx, g, 1e-11);
        const double printed = sigma_closed(ctx, g, ClosedFormVariant::as_printed);
        CHECK(std::fabs(printed - quad.value) / quad.value <= 1e-6);
    }
    CHECK_THROWS_AS(
        sigma_closed(ScatterContext(0.0, 0), WormholeGeometry(1.0),
                     ClosedFormVariant::as_printed),
        std::domain_error);
}

TEST_CASE("sigma_closed k = 0 limit and small-x series consistency") {
    WormholeGeometry g(1.0);
    const double limit = sigma_closed(ScatterContext(0.0, 0), g);
    CHECK(std::fabs(limit - 2.0 * M_PI / 32.0) <= 1e-15);
    // limit equals the k = 0 quadrature value pi/16
    CHECK(std::fabs(limit - M_PI / 16.0) <= 1e-15);

    // the series branch and the expm1 branch join smoothly at the switch point
    // (an algebra slip in either branch would show up as a jump here)
    for (int L : {0, 2}) {
        const double below = sigma_closed(ScatterContext(0.05 - 1e-9, L), g);
        const double above = sigma_closed(ScatterContext(0.05 + 1e-9, L), g);
        CHECK(std::fabs(below - above) <= 1e-7 * std::fabs(above));
    }
}

TEST_CASE("eq15 function values, limit, and asymptote") {
    WormholeGeometry g1(1.0);
    // small-x limit 1/(32 b0^2) = 2 * dcs_zero_energy(0)
    const double at_small = eq15_function(1e-4, g1);
    CHECK(std::fabs(at_small - 1.0 / 32.0) <= 1e-3 / 32.0);
    CHECK(std::fabs(at_small - 2.0 * dcs_zero_energy(0, g1)) <= 1e-3 / 32.0);

    // large-x dominant term 9/(512 x^2)
    CHECK(std::fabs(eq15_function(10.0, g1) - 9.0 / 51200.0) <= 1e-8);
    CHECK(std::fabs(eq15_function(30.0, g1) * 900.0 - 9.0 / 512.0) <= 1e-4);

    // matches sigma_closed(L = 0)/(2 pi)
    for (double x : {0.02, 0.7, 4.0}) {
        CHECK(std::fabs(eq15_function(x, g1) -
                        sigma_closed(ScatterContext(x, 0), g1) / (2.0 * M_PI)) <=
              1e-14 * eq15_function(x, g1));
    }

    CHECK_THROWS_AS(eq15_function(0.0, g1), std::domain_error);
    CHECK_THROWS_AS(eq15_function(-1.0, g1), std::domain_error);
}

TEST_CASE("eq15 has no root on (0, 50]") {
    WormholeGeometry g(1.0);
    auto scan = eq15_root_scan(g);
    CHECK(scan.roots.empty());
    CHECK(scan.min_value > 0.0);
    CHECK(scan.samples == 1000);
}

TEST_CASE("quadrature sigma obeys the 9/512 high-energy asymptote") {
    // at x = 20 the exponentially suppressed terms are already below the
    // quadrature tolerance, so the scaled value sits on the asymptote
    WormholeGeometry g(1.0);
    const double target = 9.0 / 512.0;
    for (double x : {20.0, 40.0}) {
        auto s = sigma_quadrature(ScatterContext(x, 0), g, 1e-11);
        const double scaled = s.value * x * x / (2.0 * M_PI);
        INFO("x = " << x);
        CHECK(std::fabs(scaled - target) <= 1e-8 * target);
    }
}

TEST_CASE("figure2 data rows behave like the figure") {
    WormholeGeometry g(1.0);
    std::vector<double> grid;
    for (int i = 0; i < 40; ++i)
        grid.push_back(0.05 * std::pow(100.0, i / 39.0));  // 0.05 .. 5, log-spaced
    auto rows = figure2_data(g, grid, 1e-10);
    REQUIRE(rows.size() == grid.size());
    for (const auto& r : rows) {
        CHECK(r.ok);
        CHECK(r.sigma_quad > 0.0);
        CHECK(r.rel_discrepancy <= 1e-6);
    }
    CHECK(rows.back().sigma_quad < rows.front().sigma_quad);

    CHECK(figure2_data(g, {}, 1e-10).empty());
    CHECK_THROWS_AS(figure2_data(g, {2.0, 1.0}, 1e-10), std::domain_error);
}

TEST_CASE("figure2 flags per-row numerical failures without aborting") {
    // an unreachable tolerance forces the quadrature into its error path
    WormholeGeometry g(1.0);
    auto rows = figure2_data(g, {0.5, 1.0}, 1e-30);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK_FALSE(r.ok);
        CHECK_FALSE(r.message.empty());
        CHECK(r.x > 0.0);
    }
}
