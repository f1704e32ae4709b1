#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "wormhole/common.hpp"
#include "wormhole/geometry.hpp"
#include "wormhole/parallel.hpp"
#include "wormhole/quadrature.hpp"

namespace wormhole {

/// First-Born scattering amplitude for the wormhole potential,
///   A(theta) = -(2 L(L+1) + 2 b0 k |sin(theta/2)| + 1)/(8 b0) * e^{-2 b0 k |sin(theta/2)|},
/// i.e. -V(q)/(4 pi) with the momentum transfer q = 2 k sin(theta/2) >= 0.
/// Real and strictly negative; theta-independent at k = 0.
inline double born_amplitude(double theta, const ScatterContext& ctx,
                             const WormholeGeometry& geom) {
    require_finite(theta, "born_amplitude: theta");
    if (theta < 0.0 || theta > M_PI)
        throw std::domain_error("born_amplitude: theta must lie in [0, pi]");
    const double bq = 2.0 * geom.b0 * ctx.k * std::fabs(std::sin(0.5 * theta));
    return -(2.0 * ctx.L * (ctx.L + 1) + bq + 1.0) * std::exp(-bq) / (8.0 * geom.b0);
}

struct BornResult {
    double k = 0.0;
    int L = 0;
    double theta = 0.0;
    double amplitude = 0.0;  // real, negative
    double dcs = 0.0;        // |A|^2 per solid angle
};

inline BornResult born_point(double theta, const ScatterContext& ctx,
                             const WormholeGeometry& geom) {
    BornResult r;
    r.k = ctx.k;
    r.L = ctx.L;
    r.theta = theta;
    r.amplitude = born_amplitude(theta, ctx, geom);
    r.dcs = r.amplitude * r.amplitude;
    return r;
}

/// Long-wavelength (k = 0) differential cross-section,
///   (2 L^2 + 2 L + 1)^2 / (64 b0^2), isotropic by construction.
inline double dcs_zero_energy(int L, const WormholeGeometry& geom) {
    if (L < 0) throw std::domain_error("dcs_zero_energy: L must be non-negative");
    const double c = 2.0 * L * L + 2.0 * L + 1.0;
    return c * c / (64.0 * geom.b0 * geom.b0);
}

struct SigmaEstimate {
    double value = 0.0;
    double abs_error = 0.0;
    bool converged = false;
    int segments = 0;
};

/// Total cross-section by direct angular quadrature,
///   sigma = 2 pi * integral_0^pi |A(theta)|^2 sin(theta) dtheta.
/// This is the artifact's ground truth for sigma.
inline SigmaEstimate sigma_quadrature(const ScatterContext& ctx,
                                      const WormholeGeometry& geom,
                                      double tol = 1e-10) {
    if (!(tol > 0.0)) throw std::domain_error("sigma_quadrature: tol must be > 0");
    auto q = quad::integrate(
        [&](double theta) {
            const double a = born_amplitude(theta, ctx, geom);
            return a * a * std::sin(theta);
        },
        0.0, M_PI, tol, 0.0, 6000);
    SigmaEstimate s;
    s.value = 2.0 * M_PI * q.value;
    s.abs_error = 2.0 * M_PI * q.abs_error;
    s.segments = q.segments;
    s.converged = q.converged;
    if (!s.converged)
        throw NumericalError("sigma_quadrature: quadrature did not reach tol", s.value,
                             s.abs_error);
    return s;
}

/// Which reading of the closed form's constant-coefficient polynomial to use.
/// The expression as usually written carries a dangling "16 + 9" where every
/// other term is a polynomial in L; "corrected" restores the 16 L + 9 reading,
/// which the quadrature oracle confirms at L = 0, 1, 2 (and which uniquely
/// reproduces the separate L = 0 form). The two readings coincide at L = 1.
enum class ClosedFormVariant { corrected, as_printed };

namespace detail {

// sigma/(2 pi) * 512 x^2 b0^2 = e^{-4x} * N(x),
// N(x) = K (e^{4x} - 1 - 4x) - C x^2 - 32 x^3,
// K = 8L^4 + 16L^3 + 24L^2 + 16L + 9, C = 64L^2 + 64L + 56,
// and the leading behavior N = 16 c^2 x^2 + (32K/3 - 32) x^3 + ... with
// c = 2L^2 + 2L + 1.
inline double sigma_over_2pi_corrected(double x, double b0, int L) {
    const double Ld = L;
    const double K = ((8.0 * Ld + 16.0) * Ld + 24.0) * Ld * Ld + 16.0 * Ld + 9.0;
    const double C = (64.0 * Ld + 64.0) * Ld + 56.0;
    const double c = 2.0 * Ld * Ld + 2.0 * Ld + 1.0;
    const double denom = 512.0 * x * x * b0 * b0;

    if (x < 0.05) {
        // series for the cancellation-prone numerator
        double num = 16.0 * c * c * x * x + (32.0 * K / 3.0 - 32.0) * x * x * x;
        double term = K * (4.0 * x) * (4.0 * x) * (4.0 * x) * (4.0 * x) / 24.0;  // j = 4
        for (int j = 4; j < 60; ++j) {
            num += term;
            if (std::fabs(term) < 1e-18 * std::fabs(num)) break;
            term *= 4.0 * x / (j + 1);
        }
        return std::exp(-4.0 * x) * num / denom;
    }
    const double e = std::exp(-4.0 * x);
    const double num = K * (-std::expm1(-4.0 * x)) -
                       e * (4.0 * K * x + C * x * x + 32.0 * x * x * x);
    return num / denom;
}

// the four displayed terms taken literally, constant "16 + 9" and all;
// singular at k = 0 and, at L = 0, inconsistent with the printed L = 0 form
inline double sigma_over_2pi_as_printed(double k, double b0, int L) {
    const double Ld = L;
    const double x = b0 * k;
    const double e = std::exp(-4.0 * x);
    const double b2 = b0 * b0, b4 = b2 * b2;
    const double t1 = -e * k / (16.0 * b0);
    const double t2 = (-64.0 * Ld * Ld * b2 - 64.0 * Ld * b2 - 56.0 * b2) * e / (512.0 * b4);
    const double t3 = (-32.0 * Ld * Ld * Ld * Ld * b0 - 64.0 * Ld * Ld * Ld * b0 -
                       96.0 * Ld * Ld * b0 - 64.0 * Ld * b0 - 36.0 * b0) *
                      e / (512.0 * b4 * k);
    const double t4 = (8.0 * Ld * Ld * Ld * Ld + 16.0 * Ld * Ld * Ld +
                       24.0 * Ld * Ld + 16.0 + 9.0) *
                      (-std::expm1(-4.0 * x)) / (512.0 * b4 * k * k);
    return t1 + t2 + t3 + t4;
}

}  // namespace detail

/// Closed-form total cross-section. The default variant carries the corrected
/// constant coefficient (see ClosedFormVariant); at k = 0 the analytic limit
/// sigma/(2 pi) -> (2L^2+2L+1)^2/(32 b0^2) replaces the singular expression.
inline double sigma_closed(const ScatterContext& ctx, const WormholeGeometry& geom,
                           ClosedFormVariant variant = ClosedFormVariant::corrected) {
    const double x = geom.b0 * ctx.k;
    if (variant == ClosedFormVariant::as_printed) {
        if (ctx.k <= 0.0)
            throw std::domain_error("sigma_closed: the as-printed form is singular at k = 0");
        return 2.0 * M_PI * detail::sigma_over_2pi_as_printed(ctx.k, geom.b0, ctx.L);
    }
    if (x == 0.0) {
        const double c = 2.0 * ctx.L * ctx.L + 2.0 * ctx.L + 1.0;
        return 2.0 * M_PI * c * c / (32.0 * geom.b0 * geom.b0);
    }
    return 2.0 * M_PI * detail::sigma_over_2pi_corrected(x, geom.b0, ctx.L);
}

struct CrossSection {
    double k = 0.0;
    int L = 0;
    double x = 0.0;  // b0 * k
    double sigma_quad = 0.0;
    double sigma_quad_err = 0.0;
    double sigma_closed = 0.0;
    double discrepancy = 0.0;  // |closed - quad| / quad
};

inline CrossSection cross_section(const ScatterContext& ctx, const WormholeGeometry& geom,
                                  double tol = 1e-10,
                                  ClosedFormVariant variant = ClosedFormVariant::corrected) {
    CrossSection cs;
    cs.k = ctx.k;
    cs.L = ctx.L;
    cs.x = geom.b0 * ctx.k;
    auto q = sigma_quadrature(ctx, geom, tol);
    cs.sigma_quad = q.value;
    cs.sigma_quad_err = q.abs_error;
    cs.sigma_closed = sigma_closed(ctx, geom, variant);
    cs.discrepancy = std::fabs(cs.sigma_closed - cs.sigma_quad) / cs.sigma_quad;
    return cs;
}

/// The L = 0 vanishing-condition function of the closed form,
///   (-9 - 32x^3 + 9e^{4x} - 56x^2 - 36x) e^{-4x} / (512 x^2 b0^2),
/// equal to sigma_closed(L=0)/(2 pi). Positive on (0, inf); its only zero is
/// the asymptotic one at x -> inf.
inline double eq15_function(double x, const WormholeGeometry& geom) {
    require_finite(x, "eq15_function: x");
    if (!(x > 0.0)) throw std::domain_error("eq15_function: x must be > 0");
    return detail::sigma_over_2pi_corrected(x, geom.b0, 0);
}

struct RootScanResult {
    std::vector<double> roots;   // bracketed-and-bisected sign changes (expected: none)
    double min_value = 0.0;      // smallest sample seen, for the report
    double min_location = 0.0;
    int samples = 0;
};

/// Dense log-spaced pre-scan of eq15_function on (x_min, x_max] followed by
/// bisection on any sign change.
inline RootScanResult eq15_root_scan(const WormholeGeometry& geom, double x_min = 1e-3,
                                     double x_max = 50.0, int n_points = 1000) {
    if (!(x_min > 0.0) || !(x_max > x_min) || n_points < 2)
        throw std::domain_error("eq15_root_scan: invalid scan window");
    RootScanResult out;
    out.samples = n_points;
    const double lr = std::log(x_max / x_min);
    double prev_x = x_min;
    double prev_f = eq15_function(prev_x, geom);
    out.min_value = prev_f;
    out.min_location = prev_x;
    for (int i = 1; i < n_points; ++i) {
        const double x = x_min * std::exp(lr * static_cast<double>(i) / (n_points - 1));
        const double f = eq15_function(x, geom);
        if (f < out.min_value) {
            out.min_value = f;
            out.min_location = x;
        }
        if ((prev_f < 0.0) != (f < 0.0) && prev_f != 0.0) {
            double lo = prev_x, hi = x, flo = prev_f;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = eq15_function(mid, geom);
                if ((flo < 0.0) == (fm < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            out.roots.push_back(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_f = f;
    }
    return out;
}

struct Fig2Row {
    double x = 0.0;
    double sigma_quad = 0.0;
    double sigma_quad_err = 0.0;
    double sigma_closed = 0.0;
    double rel_discrepancy = 0.0;
    bool ok = false;
    std::string message;  // per-row failure note, empty when ok
};

/// Reproduction data for the total cross-section figure: one row per x = b0 k.
/// Rows are computed concurrently and emitted in grid order; per-row failures
/// are flagged in place.
inline std::vector<Fig2Row> figure2_data(const WormholeGeometry& geom,
                                         const std::vector<double>& x_grid,
                                         double tol = 1e-10,
                                         ClosedFormVariant variant = ClosedFormVariant::corrected,
                                         unsigned threads = 0) {
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        if (!(x_grid[i] > 0.0) || !std::isfinite(x_grid[i]))
            throw std::domain_error("figure2_data: x grid must be positive");
        if (i > 0 && !(x_grid[i] > x_grid[i - 1]))
            throw std::domain_error("figure2_data: x grid must be ascending");
    }
    std::vector<Fig2Row> rows(x_grid.size());
    parallel_for_index(
        x_grid.size(),
        [&](std::size_t i) {
            Fig2Row& row = rows[i];
            row.x = x_grid[i];
            try {
                auto cs = cross_section(ScatterContext(x_grid[i] / geom.b0, 0), geom,
                                        tol, variant);
                row.sigma_quad = cs.sigma_quad;
                row.sigma_quad_err = cs.sigma_quad_err;
                row.sigma_closed = cs.sigma_closed;
                row.rel_discrepancy = cs.discrepancy;
                row.ok = true;
            } catch (const std::exception& e) {
                row.ok = false;
                row.message = e.what();
            }
        },
        threads);
    return rows;
}

}  // namespace wormhole
