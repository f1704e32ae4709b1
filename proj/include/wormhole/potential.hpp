#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "wormhole/common.hpp"
#include "wormhole/geometry.hpp"
#include "wormhole/quadrature.hpp"

namespace wormhole {

/// Effective potential of the wormhole geometry,
///   v_eff(r) = L(L+1)/(r^2 + b0^2) + b0^2/(r^2 + b0^2)^2
/// in units with hbar = 2*m0 = 1. Even in r, positive, -> 0 as |r| -> inf.
inline double v_eff(double r, const WormholeGeometry& geom, int L) {
    require_finite(r, "v_eff: r");
    if (L < 0) throw std::domain_error("v_eff: L must be non-negative");
    const double s = r * r + geom.b0 * geom.b0;
    return L * (L + 1) / s + geom.b0 * geom.b0 / (s * s);
}

/// Closed-form 1D Fourier transform of v_eff,
///   V(q) = pi * exp(-b0 q) * (2 L(L+1) + b0 q + 1) / (2 b0),  q >= 0.
/// This is the one-dimensional convention integral_R exp(-i q r) v_eff(r) dr;
/// the 3D radial transform does not reproduce this formula.
inline double v_fourier_closed(double q, const WormholeGeometry& geom, int L) {
    require_finite(q, "v_fourier_closed: q");
    if (q < 0.0)
        throw std::domain_error(
            "v_fourier_closed: q must be >= 0 (transform of an even function)");
    if (L < 0) throw std::domain_error("v_fourier_closed: L must be non-negative");
    const double bq = geom.b0 * q;
    return M_PI * std::exp(-bq) * (2.0 * L * (L + 1) + bq + 1.0) / (2.0 * geom.b0);
}

struct FourierEstimate {
    double value = 0.0;
    double abs_error = 0.0;
    bool converged = false;
    int segments = 0;
};

namespace detail {

// Inverse-power expansion of v_eff valid for r > b0:
//   v_eff(r) = sum_{j>=0} c_j r^{-(2j+2)},  c_j = (-1)^j b0^{2j} (L(L+1) - j).
inline double tail_coeff(double b0sq, int L, int j) {
    double c = L * (L + 1) - j;
    for (int i = 0; i < j; ++i) c *= -b0sq;
    return c;
}

// integral_R^inf cos(q r) r^{-n} dr by repeated integration by parts; valid for
// q R >> 1. The identity C_m = -sin(qR)/(q R^m) + m cos(qR)/(q^2 R^{m+1})
//                             - (m(m+1)/q^2) C_{m+2}
// is exact, and |C_m| <= 1/((m-1) R^{m-1}), so the remainder after any number
// of expansions is rigorously bounded. Returns the partial sum; *bound
// receives the bound on the exact remainder at the stopping point.
inline double cos_power_tail(double q, double R, int n, double* bound) {
    const double s = std::sin(q * R);
    const double c = std::cos(q * R);
    double value = 0.0;
    double coef = 1.0;
    double Rm = std::pow(R, n);  // R^m as we walk m = n, n+2, ...
    int m = n;
    // remainder bound if we stop before expanding level m
    double pending = std::fabs(coef) * R / ((m - 1) * Rm);
    for (int iter = 0; iter < 40; ++iter) {
        const double coef_next = coef * (-(double(m) * (m + 1)) / (q * q));
        const double post = std::fabs(coef_next) / ((m + 1) * Rm * R);  // |coef C_{m+2}|
        if (post >= pending) break;  // expanding further no longer helps
        value += coef * (-s / (q * Rm) + m * c / (q * q * Rm * R));
        pending = post;
        if (pending <= 1e-300 || pending <= 1e-18 * std::fabs(value)) break;
        coef = coef_next;
        m += 2;
        Rm *= R * R;
    }
    *bound = pending;
    return value;
}

// analytic tail 2 * integral_R^inf cos(q r) v_eff(r) dr using the inverse-power
// expansion; requires R >= 50 b0 and (q == 0 or q R >= 50).
inline void add_analytic_tail(double q, double R, const WormholeGeometry& geom, int L,
                              double* value, double* err) {
    const double b0sq = geom.b0 * geom.b0;
    const double rho = b0sq / (R * R);
    constexpr int J = 8;
    for (int j = 0; j <= J; ++j) {
        const double cj = tail_coeff(b0sq, L, j);
        const int n = 2 * j + 2;
        if (q == 0.0) {
            *value += 2.0 * cj / ((n - 1) * std::pow(R, n - 1));
        } else {
            double b = 0.0;
            const double cn = cos_power_tail(q, R, n, &b);
            *value += 2.0 * cj * cn;
            *err += 2.0 * std::fabs(cj) * b;
        }
    }
    // remainder of the inverse-power expansion beyond j = J
    const double cmax = (L * (L + 1) + J + 2) * std::pow(b0sq, J + 1);
    const double series_rem =
        2.0 * cmax / ((2 * J + 3) * std::pow(R, 2 * J + 3)) / ((1.0 - rho) * (1.0 - rho));
    *err += series_rem;
}

}  // namespace detail

/// Numerical 1D Fourier transform of v_eff by adaptive quadrature, exploiting
/// evenness: 2 * integral_0^inf cos(q r) v_eff(r) dr. Independent oracle for
/// v_fourier_closed. The slowly decaying 1/r^2 part (L >= 1) is handled by an
/// analytic oscillatory tail beyond R = max(50 b0, 50/q).
///
/// Throws NumericalError (carrying the best estimate and achieved error) if the
/// relative target cannot be met within the segment budget.
inline FourierEstimate v_fourier_numeric(double q, const WormholeGeometry& geom, int L,
                                         double tol = 1e-10) {
    require_finite(q, "v_fourier_numeric: q");
    if (q < 0.0) throw std::domain_error("v_fourier_numeric: q must be >= 0");
    if (L < 0) throw std::domain_error("v_fourier_numeric: L must be non-negative");
    if (!(tol > 0.0)) throw std::domain_error("v_fourier_numeric: tol must be > 0");

    const double R1 = 50.0 * geom.b0;
    // below this the cosine kernel is 1 to within double precision on the whole
    // numerically relevant range
    const bool q_is_zero = (q == 0.0) || !(50.0 / q < HUGE_VAL) || q * R1 < 1e-150;
    const double R2 = q_is_zero ? R1 : std::max(R1, 50.0 / q);

    const auto head_f = [&](double r) {
        const double kern = q_is_zero ? 1.0 : std::cos(q * r);
        return 2.0 * kern * v_eff(r, geom, L);
    };
    // r = 1/u flattens the [R1, R2] stretch (empty unless q b0 < 1)
    const double b0sq = geom.b0 * geom.b0;
    const auto mid_f = [&](double u) {
        const double d = 1.0 + b0sq * u * u;
        const double amp = L * (L + 1) / d + b0sq * u * u / (d * d);
        return 2.0 * std::cos(q / u) * amp;
    };

    FourierEstimate out;
    double piece_rel = tol / 4.0;
    double piece_abs = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
        auto head = quad::integrate(head_f, 0.0, R1, piece_rel, piece_abs, 6000);
        quad::QuadResult mid;
        if (R2 > R1)
            mid = quad::integrate(mid_f, 1.0 / R2, 1.0 / R1, piece_rel, piece_abs, 6000);

        double value = head.value + mid.value;
        double err = head.abs_error + mid.abs_error;
        detail::add_analytic_tail(q_is_zero ? 0.0 : q, R2, geom, L, &value, &err);

        out.value = value;
        out.abs_error = err;
        out.segments = head.segments + mid.segments;
        out.converged = err <= tol * std::fabs(value);
        if (out.converged) return out;
        // second pass: per-piece absolute targets derived from the first estimate
        piece_abs = tol * std::fabs(value) / 4.0;
        piece_rel = 0.0;
    }
    throw NumericalError("v_fourier_numeric: quadrature did not reach tol",
                         out.value, out.abs_error);
}

}  // namespace wormhole
