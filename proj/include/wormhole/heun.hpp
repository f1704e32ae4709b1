#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "wormhole/common.hpp"
#include "wormhole/geometry.hpp"
#include "wormhole/potential.hpp"

namespace wormhole {

/// Parameters of the confluent Heun function H_C(alpha, beta, gamma, delta,
/// eta; z) in the five-parameter ordering of Maple's HeunC: the equation
///   y'' + (alpha + (beta+1)/z + (gamma+1)/(z-1)) y' + (mu/z + nu/(z-1)) y = 0,
///   mu = (alpha - beta - gamma + alpha beta - beta gamma)/2 - eta,
///   nu = (alpha + beta + gamma + alpha gamma + beta gamma)/2 + delta + eta,
/// with H_C analytic at z = 0 and H_C(0) = 1. This is the convention under
/// which the interior solution below passes the ODE residual check exactly.
struct HeunParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double eta = 0.0;

    double mu() const {
        return 0.5 * (alpha - beta - gamma + alpha * beta - beta * gamma) - eta;
    }
    double nu() const {
        return 0.5 * (alpha + beta + gamma + alpha * gamma + beta * gamma) + delta + eta;
    }
};

/// Frobenius series of H_C about z = 0 with a certified evaluation domain
/// |z| <= zmax < 1. Coefficients obey the three-term recurrence
///   (n+1)(n+beta+1) c_{n+1}
///     = [n(n-1) + n(beta+gamma+2-alpha) - mu] c_n + [alpha(n-1) + mu + nu] c_{n-1},
/// c_0 = 1, derived by inserting sum c_n z^n into the equation above.
class HeunSeries {
public:
    HeunSeries() = default;

    HeunSeries(const HeunParams& p, double zmax, double tol, int max_terms = 8000,
               int min_terms = 0)
        : params_(p), zmax_(zmax), tol_(tol) {
        if (!(zmax > 0.0) || zmax >= 1.0)
            throw std::domain_error("HeunSeries: need 0 < zmax < 1 (unit radius)");
        if (!(tol > 0.0)) throw std::domain_error("HeunSeries: tol must be > 0");
        if (p.beta <= -1.0 && p.beta == std::floor(p.beta))
            throw std::domain_error("HeunSeries: beta at a nonpositive integer offset");

        const double mu = p.mu();
        const double nu = p.nu();
        coeff_.reserve(64);
        coeff_.push_back(1.0);
        double c_prev = 0.0;  // c_{-1}
        double c_cur = 1.0;

        // grows until even the second-derivative-weighted tail clears tol
        const double ratio_cap = 0.5 * (1.0 + zmax);
        double zn = 1.0;  // zmax^n
        int quiet = 0;
        for (int n = 0;; ++n) {
            const double c_next =
                ((n * (n - 1.0) + n * (p.beta + p.gamma + 2.0 - p.alpha) - mu) * c_cur +
                 (p.alpha * (n - 1.0) + mu + nu) * c_prev) /
                ((n + 1.0) * (n + 1.0 + p.beta));
            coeff_.push_back(c_next);
            c_prev = c_cur;
            c_cur = c_next;
            zn *= zmax;
            const double weighted = (n + 1.0) * (n + 1.0) * std::fabs(c_next) * zn;
            if (weighted < 0.25 * tol * (1.0 - ratio_cap))
                ++quiet;
            else
                quiet = 0;
            if (quiet >= 4 && static_cast<int>(coeff_.size()) > min_terms) {
                tail_bound_ = weighted_tail_bound(ratio_cap);
                break;
            }
            if (static_cast<int>(coeff_.size()) >= max_terms)
                throw NumericalError("HeunSeries: no convergence within max_terms",
                                     c_next, std::fabs(c_next) * zn);
        }
    }

    const HeunParams& params() const { return params_; }
    int truncation_order() const { return static_cast<int>(coeff_.size()) - 1; }
    double zmax() const { return zmax_; }
    double tail_bound() const { return tail_bound_; }
    const std::vector<double>& coefficients() const { return coeff_; }

    /// y(z) by Horner evaluation of the stored coefficients.
    double value(double z) const {
        check_domain(z);
        double acc = 0.0;
        for (std::size_t i = coeff_.size(); i-- > 0;) acc = acc * z + coeff_[i];
        return acc;
    }

    struct Jet {
        double y = 0.0;
        double dy = 0.0;
        double d2y = 0.0;
    };

    /// y, y', y'' from the term-wise differentiated series.
    Jet jet(double z) const {
        check_domain(z);
        Jet j;
        for (std::size_t i = coeff_.size(); i-- > 0;) {
            j.d2y = j.d2y * z + 2.0 * j.dy;
            j.dy = j.dy * z + j.y;
            j.y = j.y * z + coeff_[i];
        }
        return j;
    }

private:
    void check_domain(double z) const {
        if (!(std::fabs(z) <= zmax_))
            throw std::domain_error("HeunSeries: |z| outside the certified domain");
    }

    double weighted_tail_bound(double ratio_cap) const {
        // geometric majorant for the dropped terms, including the n^2 weight
        // that covers the differentiated series
        const std::size_t n = coeff_.size() - 1;
        double zn = std::pow(zmax_, static_cast<double>(n));
        const double last = (n * n) * std::fabs(coeff_[n]) * zn;
        return last * ratio_cap / ((1.0 - ratio_cap) * (1.0 - ratio_cap));
    }

    HeunParams params_{};
    std::vector<double> coeff_;
    double zmax_ = 0.0;
    double tol_ = 0.0;
    double tail_bound_ = 0.0;
};

struct HeunValue {
    double value = 0.0;
    int truncation_order = 0;
    double tail_bound = 0.0;
};

/// Confluent Heun function by its power series about z = 0; H_C(..., 0) = 1.
/// Restricted to |z| <= 1 - margin; no analytic continuation.
inline HeunValue heun_c(const HeunParams& params, double z, double tol = 1e-12,
                        double margin = 0.05) {
    require_finite(z, "heun_c: z");
    if (!(margin > 0.0) || margin >= 1.0)
        throw std::domain_error("heun_c: margin must lie in (0, 1)");
    if (std::fabs(z) >= 1.0 - margin)
        throw std::domain_error("heun_c: |z| too close to the unit radius of "
                                "convergence");
    const double zmax = std::max(std::fabs(z), 1e-3);
    HeunSeries series(params, zmax, tol);
    return {series.value(z), series.truncation_order(), series.tail_bound()};
}

/// The exact interior wavefunction for |r| < b0:
///   psi(r) = c1 sqrt(r^2+b0^2) H_C(0,-1/2,0,delta,eta; z)
///          + c2 r sqrt(r^2+b0^2) H_C(0,+1/2,0,delta,eta; z),
///   z = -r^2/b0^2, delta = -k^2 b0^2/4, eta = k^2 b0^2/4 - L(L+1)/4 + 1/4.
struct ExactInteriorSolution {
    WormholeGeometry geom;
    ScatterContext ctx;
    double c1 = 1.0;  // even branch coefficient
    double c2 = 0.0;  // odd branch coefficient
    HeunSeries series_even;
    HeunSeries series_odd;
};

/// Builds both branch series; eta_shift perturbs eta (negative-control hook).
inline ExactInteriorSolution make_interior_solution(const WormholeGeometry& geom,
                                                    const ScatterContext& ctx,
                                                    double c1 = 1.0, double c2 = 0.0,
                                                    double tol = 1e-12,
                                                    double eta_shift = 0.0) {
    const double kb = ctx.k * geom.b0;
    const double delta = -kb * kb / 4.0;
    const double eta =
        kb * kb / 4.0 - ctx.L * (ctx.L + 1) / 4.0 + 0.25 + eta_shift;
    const double zmax = 0.95 * 0.95;  // psi_interior admits |r| < 0.95 b0

    ExactInteriorSolution sol{geom, ctx, c1, c2, HeunSeries(), HeunSeries()};
    sol.series_even = HeunSeries({0.0, -0.5, 0.0, delta, eta}, zmax, tol);
    sol.series_odd = HeunSeries({0.0, +0.5, 0.0, delta, eta}, zmax, tol);
    return sol;
}

/// psi(r) for |r| < 0.95 b0 (series convergence margin).
inline double psi_interior(double r, const ExactInteriorSolution& sol) {
    require_finite(r, "psi_interior: r");
    const double b0 = sol.geom.b0;
    if (!(std::fabs(r) < 0.95 * b0))
        throw std::domain_error("psi_interior: |r| must stay below 0.95 b0");
    const double z = -(r * r) / (b0 * b0);
    const double w = std::sqrt(r * r + b0 * b0);
    double psi = 0.0;
    if (sol.c1 != 0.0) psi += sol.c1 * w * sol.series_even.value(z);
    if (sol.c2 != 0.0) psi += sol.c2 * r * w * sol.series_odd.value(z);
    return psi;
}

struct PsiJet {
    double psi = 0.0;
    double dpsi = 0.0;
    double d2psi = 0.0;
};

/// psi, psi', psi'' assembled from the term-wise differentiated branch series.
inline PsiJet psi_interior_jet(double r, const ExactInteriorSolution& sol) {
    require_finite(r, "psi_interior_jet: r");
    const double b0 = sol.geom.b0;
    if (!(std::fabs(r) < 0.95 * b0))
        throw std::domain_error("psi_interior_jet: |r| must stay below 0.95 b0");
    const double b0sq = b0 * b0;
    const double z = -(r * r) / b0sq;
    const double zp = -2.0 * r / b0sq;
    const double zpp = -2.0 / b0sq;
    const double w = std::sqrt(r * r + b0sq);

    PsiJet out;
    if (sol.c1 != 0.0) {
        const auto j = sol.series_even.jet(z);
        const double wp = r / w;
        const double wpp = b0sq / (w * w * w);
        out.psi += sol.c1 * w * j.y;
        out.dpsi += sol.c1 * (wp * j.y + w * j.dy * zp);
        out.d2psi += sol.c1 * (wpp * j.y + 2.0 * wp * j.dy * zp +
                               w * (j.d2y * zp * zp + j.dy * zpp));
    }
    if (sol.c2 != 0.0) {
        const auto j = sol.series_odd.jet(z);
        const double W = r * w;
        const double Wp = (2.0 * r * r + b0sq) / w;
        const double Wpp = r * (2.0 * r * r + 3.0 * b0sq) / (w * w * w);
        out.psi += sol.c2 * W * j.y;
        out.dpsi += sol.c2 * (Wp * j.y + W * j.dy * zp);
        out.d2psi += sol.c2 * (Wpp * j.y + 2.0 * Wp * j.dy * zp +
                               W * (j.d2y * zp * zp + j.dy * zpp));
    }
    return out;
}

struct ResidualReport {
    double max_residual = 0.0;   // max |psi'' + k^2 psi - v_eff psi| / scale
    double argmax_r = 0.0;
    double scale = 0.0;          // max |psi| over the grid (floored)
    bool degenerate = false;     // c1 = c2 = 0: the zero function
    int grid_points = 0;
};

/// Residual of the interior equation over a grid inside (-0.9 b0, 0.9 b0);
/// the validation of the exact solution. Residuals are normalized by the
/// grid maximum of |psi| (never below a tiny floor).
inline ResidualReport ode_residual(const ExactInteriorSolution& sol,
                                   const std::vector<double>& r_grid) {
    ResidualReport rep;
    rep.grid_points = static_cast<int>(r_grid.size());
    if (sol.c1 == 0.0 && sol.c2 == 0.0) {
        rep.degenerate = true;
        return rep;
    }
    const double limit = 0.9 * sol.geom.b0;
    std::vector<PsiJet> jets(r_grid.size());
    double scale = 0.0;
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        if (!(std::fabs(r_grid[i]) <= limit))
            throw std::domain_error("ode_residual: grid point outside 0.9 b0");
        jets[i] = psi_interior_jet(r_grid[i], sol);
        scale = std::max(scale, std::fabs(jets[i].psi));
    }
    rep.scale = std::max(scale, 1e-300);
    const double k2 = sol.ctx.k * sol.ctx.k;
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        const double v = v_eff(r_grid[i], sol.geom, sol.ctx.L);
        const double res =
            std::fabs(jets[i].d2psi + k2 * jets[i].psi - v * jets[i].psi) / rep.scale;
        if (res > rep.max_residual) {
            rep.max_residual = res;
            rep.argmax_r = r_grid[i];
        }
    }
    return rep;
}

/// Uniform residual grid covering [-0.9 b0, 0.9 b0].
inline std::vector<double> default_residual_grid(const WormholeGeometry& geom,
                                                 int points = 181) {
    if (points < 2) throw std::domain_error("default_residual_grid: points < 2");
    std::vector<double> g(points);
    const double a = -0.9 * geom.b0, b = 0.9 * geom.b0;
    for (int i = 0; i < points; ++i)
        g[i] = a + (b - a) * static_cast<double>(i) / (points - 1);
    return g;
}

}  // namespace wormhole
