#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wormhole/common.hpp"
#include "wormhole/geometry.hpp"
#include "wormhole/parallel.hpp"
#include "wormhole/potential.hpp"
#include "wormhole/quadrature.hpp"
#include "wormhole/rk45.hpp"

namespace wormhole {

using complexd = std::complex<double>;

struct TransmissionResult {
    double k = 0.0;
    int L = 0;
    complexd t_amp;                 // transmitted amplitude, unit incident flux
    complexd r_amp;                 // reflected amplitude
    double T = 0.0;                 // |t_amp|^2
    double R = 0.0;                 // |r_amp|^2
    double unitarity_defect = 0.0;  // |T + R - 1|
    double domain_halfwidth = 0.0;
    long solver_steps = 0;
    double match_condition = 0.0;   // condition number of the 2x2 extraction
    int refinements = 0;
    bool converged = false;
    std::string method;
};

struct SolverOptions {
    double domain_halfwidth = 0.0;   // 0 -> max(200 b0, 40/k)
    long steps = 0;                  // Numerov intervals across the domain; 0 -> auto
    double unitarity_threshold = 1e-8;
    int max_refinements = 3;         // step halvings tried when the defect is too big
    double potential_scale = 1.0;    // 0 switches the barrier off (free propagation)
    bool allow_experimental_L = false;
    bool incident_from_right = false;
    double rk_rel_tol = 1e-11;       // cross-validation integrator tolerances
    double rk_abs_tol = 1e-13;
};

/// Thrown when the refinement schedule cannot push the unitarity defect under
/// the configured threshold; .best holds the closest result obtained.
class TransmissionNonConvergence : public NumericalError {
public:
    TransmissionNonConvergence(const std::string& what, TransmissionResult r)
        : NumericalError(what, r.T, r.unitarity_defect), best(std::move(r)) {}
    TransmissionResult best;
};

namespace detail {

inline double default_halfwidth(double k, const WormholeGeometry& geom) {
    return std::max(200.0 * geom.b0, 40.0 / k);
}

inline long default_steps(double k, const WormholeGeometry& geom, double halfwidth) {
    // resolve both the oscillation (k h small) and the barrier (h << b0)
    const double h = std::min(0.02 / k, geom.b0 / 50.0);
    return static_cast<long>(std::ceil(2.0 * halfwidth / h));
}

struct MatchedAmplitudes {
    complexd a;  // incident-side coefficient of the incoming plane wave
    complexd b;  // coefficient of the outgoing (reflected) wave
    double condition;
};

// Solves a*e^{i s k x0} + b*e^{-i s k x0} = psi0 (and the same at x1) for the
// plane-wave decomposition on the incident side; s = +1 for incidence from the
// left, -1 from the right.
inline MatchedAmplitudes match_plane_waves(double k, double s, double x0, double x1,
                                           complexd psi0, complexd psi1) {
    const complexd I(0.0, 1.0);
    const double kh = k * (x0 - x1);
    const complexd det = std::exp(I * (s * k * x0)) * std::exp(-I * (s * k * x1)) -
                         std::exp(-I * (s * k * x0)) * std::exp(I * (s * k * x1));
    if (std::abs(det) < 1e-12)
        throw std::domain_error(
            "transmission: plane-wave match is singular (k*h too close to a "
            "multiple of pi)");
    MatchedAmplitudes m;
    m.a = (psi0 * std::exp(-I * (s * k * x1)) - psi1 * std::exp(-I * (s * k * x0))) / det;
    m.b = (psi1 * std::exp(I * (s * k * x0)) - psi0 * std::exp(I * (s * k * x1))) / det;
    const double c = std::fabs(std::cos(kh));
    m.condition = (c < 1.0) ? std::sqrt((1.0 + c) / (1.0 - c)) : HUGE_VAL;
    return m;
}

}  // namespace detail

/// Exact numerical transmission through the effective barrier: integrates
/// psi'' + k^2 psi = v_eff(r) psi across [-R, R] with an outgoing plane wave on
/// the far side (potential truncated to zero outside the domain), then splits
/// the incident-side solution into incoming + reflected waves.
///
/// Fixed-step Numerov sweep; the step is halved until |T + R - 1| meets the
/// unitarity threshold or the refinement schedule is exhausted (then
/// TransmissionNonConvergence carries the best attempt).
inline TransmissionResult solve_transmission(const ScatterContext& ctx,
                                             const WormholeGeometry& geom,
                                             const SolverOptions& opts = {}) {
    if (!(ctx.k > 0.0)) throw std::domain_error("solve_transmission: k must be > 0");
    if (ctx.L >= 1 && !opts.allow_experimental_L)
        throw std::domain_error(
            "solve_transmission: L >= 1 is outside the validated surface; the "
            "1/r^2 potential tail breaks plane-wave asymptotics. Set "
            "allow_experimental_L to proceed anyway");
    if (!(opts.potential_scale >= 0.0) || !std::isfinite(opts.potential_scale))
        throw std::domain_error("solve_transmission: invalid potential_scale");

    const double k = ctx.k;
    const double R = opts.domain_halfwidth > 0.0 ? opts.domain_halfwidth
                                                 : detail::default_halfwidth(k, geom);
    long n0 = opts.steps > 0 ? opts.steps : detail::default_steps(k, geom, R);
    if (n0 < 16) n0 = 16;

    // potential truncated to exactly zero outside (-R, R); the matching model
    // is then exact for the continuum problem being discretized
    const auto pot = [&](double r) {
        return (std::fabs(r) < R) ? opts.potential_scale * v_eff(r, geom, ctx.L) : 0.0;
    };
    const double s = opts.incident_from_right ? -1.0 : 1.0;

    TransmissionResult best;
    for (int refine = 0; refine <= opts.max_refinements; ++refine) {
        const long n = n0 << refine;
        const double h = 2.0 * R / static_cast<double>(n);
        const double h2_12 = h * h / 12.0;
        const double p_free = 1.0 + h2_12 * k * k;  // 1 - h^2 f/12 with f = -k^2

        // sweep from the transmitted side toward the incident side;
        // grid index i = 0..n maps to r = s*(-R) + s*i*h ... easier: walk in r
        // directly from +sR down to -sR.
        const complexd I(0.0, 1.0);
        const double r_start = s * R;     // transmitted side
        const double r_end = -s * R;      // incident side
        const double dr = -s * h;         // sweep direction

        // outgoing wave e^{i s k r} at r_start and the ghost node beyond it
        complexd y_prev = std::exp(I * (s * k * (r_start - dr)));  // ghost (free)
        complexd y_cur = std::exp(I * (s * k * r_start));
        double p_prev = p_free;
        double p_cur = 1.0 - h2_12 * (pot(r_start) - k * k);

        for (long i = 1; i <= n + 1; ++i) {
            const double r_next = r_start + dr * static_cast<double>(i);
            // node n+1 sits outside the domain: free region by construction
            const double f_next = (i <= n) ? (pot(r_next) - k * k) : (-k * k);
            const double p_next = 1.0 - h2_12 * f_next;
            const complexd y_next = ((12.0 - 10.0 * p_cur) * y_cur - p_prev * y_prev) / p_next;
            y_prev = y_cur;
            y_cur = y_next;
            p_prev = p_cur;
            p_cur = p_next;
        }
        // y_prev = psi(r_end), y_cur = psi(r_end + dr) (one node past the edge)
        const auto m = detail::match_plane_waves(k, s, r_end, r_end + dr, y_prev, y_cur);

        TransmissionResult res;
        res.k = k;
        res.L = ctx.L;
        res.t_amp = 1.0 / m.a;
        res.r_amp = m.b / m.a;
        res.T = std::norm(res.t_amp);
        res.R = std::norm(res.r_amp);
        res.unitarity_defect = std::fabs(res.T + res.R - 1.0);
        res.domain_halfwidth = R;
        res.solver_steps = n;
        res.match_condition = m.condition;
        res.refinements = refine;
        res.converged = res.unitarity_defect <= opts.unitarity_threshold;
        res.method = "numerov";

        if (refine == 0 || res.unitarity_defect < best.unitarity_defect) best = res;
        if (best.converged) return best;
    }
    throw TransmissionNonConvergence(
        "solve_transmission: unitarity defect " +
            std::to_string(best.unitarity_defect) + " above threshold after " +
            std::to_string(opts.max_refinements) + " refinements",
        best);
}

/// Independent cross-validation solver: same boundary-value problem, adaptive
/// Dormand-Prince integration of (psi, psi') instead of the Numerov sweep.
inline TransmissionResult solve_transmission_rk(const ScatterContext& ctx,
                                                const WormholeGeometry& geom,
                                                const SolverOptions& opts = {}) {
    if (!(ctx.k > 0.0)) throw std::domain_error("solve_transmission_rk: k must be > 0");
    if (ctx.L >= 1 && !opts.allow_experimental_L)
        throw std::domain_error("solve_transmission_rk: L >= 1 requires the "
                                "experimental option");

    const double k = ctx.k;
    const double R = opts.domain_halfwidth > 0.0 ? opts.domain_halfwidth
                                                 : detail::default_halfwidth(k, geom);
    const double s = opts.incident_from_right ? -1.0 : 1.0;
    const auto pot = [&](double r) {
        return (std::fabs(r) < R) ? opts.potential_scale * v_eff(r, geom, ctx.L) : 0.0;
    };

    const complexd I(0.0, 1.0);
    const double r_start = s * R;  // transmitted side; outgoing wave e^{i s k r}
    ode::Rk45<complexd, 2> solver;
    ode::Rk45<complexd, 2>::State y{std::exp(I * (s * k * r_start)),
                                    I * s * k * std::exp(I * (s * k * r_start))};
    const auto rhs = [&](double r, const auto& st, auto& d) {
        d[0] = st[1];
        d[1] = (pot(r) - k * k) * st[0];
    };
    auto stats = solver.integrate(rhs, r_start, -r_start, y,
                                  {.rel_tol = opts.rk_rel_tol,
                                   .abs_tol = opts.rk_abs_tol,
                                   .initial_step = 1.0 / std::max(k, 1.0 / geom.b0)});

    // match psi and psi' at the incident edge: a e^{iskr} + b e^{-iskr}
    const double x0 = -s * R;
    const complexd ep = std::exp(I * (s * k * x0));
    const complexd em = std::exp(-I * (s * k * x0));
    const complexd aa = 0.5 * (y[0] + y[1] / (I * s * k)) / ep;
    const complexd bb = 0.5 * (y[0] - y[1] / (I * s * k)) / em;

    TransmissionResult res;
    res.k = k;
    res.L = ctx.L;
    res.t_amp = 1.0 / aa;
    res.r_amp = bb / aa;
    res.T = std::norm(res.t_amp);
    res.R = std::norm(res.r_amp);
    res.unitarity_defect = std::fabs(res.T + res.R - 1.0);
    res.domain_halfwidth = R;
    res.solver_steps = stats.accepted;
    res.match_condition = 1.0;  // (psi, psi') system is perfectly conditioned here
    res.converged = res.unitarity_defect <= opts.unitarity_threshold;
    res.method = "rk45";
    return res;
}

// --- WKB machinery -----------------------------------------------------------

/// Local wavenumber deficit of the slowly varying approximation,
///   dp(r) = b0^2 / (p0 (b0^2 + r^2)^2).
inline double wkb_delta_p(double r, double p0, const WormholeGeometry& geom) {
    require_finite(r, "wkb_delta_p: r");
    if (!(p0 > 0.0)) throw std::domain_error("wkb_delta_p: p0 must be > 0");
    const double s = geom.b0 * geom.b0 + r * r;
    return geom.b0 * geom.b0 / (p0 * s * s);
}

struct WkbReport {
    double p0 = 0.0;
    double delta_phi = 0.0;        // closed form (pi/4)/(b0 p0)
    double delta_phi_quad = 0.0;   // independent quadrature of the deficit integral
    double difference = 0.0;       // |closed - quad|
    double validity_ratio = 0.0;   // barrier/energy ratio 1/(b0 p0)^2, must be << 1
    bool validity_warning = false;
    std::optional<int> resonance_index;  // set when the phase sits on lambda = 4 n b0
};

/// Phase accumulated crossing the throat region. The closed form
/// (pi/4)/(b0 p0) equals the half-line integral of the deficit,
/// integral_0^inf dp dr; the quadrature cross-check evaluates exactly that
/// integral (tan substitution, no truncation).
inline WkbReport wkb_phase(double p0, const WormholeGeometry& geom) {
    if (!(p0 > 0.0)) throw std::domain_error("wkb_phase: p0 must be > 0");
    WkbReport rep;
    rep.p0 = p0;
    rep.delta_phi = (M_PI / 4.0) / (geom.b0 * p0);

    const double b0 = geom.b0;
    auto q = quad::integrate(
        [&](double u) {
            const double r = b0 * std::tan(u);
            return wkb_delta_p(r, p0, geom) * b0 / (std::cos(u) * std::cos(u));
        },
        0.0, M_PI / 2.0, 1e-13);
    if (!q.converged)
        throw NumericalError("wkb_phase: quadrature failed", q.value, q.abs_error);
    rep.delta_phi_quad = q.value;
    rep.difference = std::fabs(rep.delta_phi - rep.delta_phi_quad);
    rep.validity_ratio = 1.0 / (b0 * p0 * b0 * p0);
    rep.validity_warning = rep.validity_ratio > 0.1;

    // in the de Broglie bookkeeping (p0 = h/lambda, h = 2*pi here) the
    // accumulated phase is 2*pi*delta_phi; resonant when that is n*pi
    const double n_float = 2.0 * rep.delta_phi;  // = pi/(2 b0 p0)
    const double n_round = std::round(n_float);
    if (n_round >= 1.0 && std::fabs(n_float - n_round) <= 1e-9 * std::max(1.0, n_float))
        rep.resonance_index = static_cast<int>(n_round);
    return rep;
}

struct ResonanceEntry {
    int n = 0;
    double lambda = 0.0;             // 4 n b0
    double k = 0.0;                  // 2 pi / lambda = pi/(2 n b0)
    double accumulated_phase = 0.0;  // 2 pi * wkb_phase(k); n*pi at resonance
    double phase_target = 0.0;       // n * pi
};

/// Predicted transparent-waveguide wavelengths lambda = 4 n b0, n = 1..n_max,
/// with companion wavenumbers and the accumulated-phase identity.
inline std::vector<ResonanceEntry> resonance_wavelengths(const WormholeGeometry& geom,
                                                         int n_max) {
    if (n_max < 1) throw std::domain_error("resonance_wavelengths: n_max must be >= 1");
    std::vector<ResonanceEntry> out;
    out.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        ResonanceEntry e;
        e.n = n;
        e.lambda = 4.0 * n * geom.b0;
        e.k = 2.0 * M_PI / e.lambda;
        e.accumulated_phase = 2.0 * M_PI * (M_PI / 4.0) / (geom.b0 * e.k);
        e.phase_target = n * M_PI;
        out.push_back(e);
    }
    return out;
}

// --- grid scan ---------------------------------------------------------------

struct ScanPeak {
    std::size_t index = 0;   // position in the input grid
    double k = 0.0;
    double T = 0.0;
    int nearest_n = 0;       // closest predicted resonance order
    double k_predicted = 0.0;
    double offset = 0.0;     // k_peak - k_predicted
};

namespace detail {

/// Indices of local maxima of a sampled curve: strictly above both neighbors,
/// a plateau counting only through its leftmost point; invalid samples break
/// the neighborhood. Shared by the scan so the tie-breaking is testable alone.
inline std::vector<std::size_t> find_peak_indices(const std::vector<double>& values,
                                                  const std::vector<bool>& valid) {
    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        if (!valid[i] || !valid[i - 1]) continue;
        if (!(values[i] > values[i - 1])) continue;  // also rejects plateau interiors
        std::size_t j = i;
        while (j + 1 < values.size() && valid[j + 1] && values[j + 1] == values[i]) ++j;
        if (j + 1 < values.size() && valid[j + 1] && values[j + 1] < values[i])
            peaks.push_back(i);
    }
    return peaks;
}

}  // namespace detail

struct ScanResult {
    std::vector<TransmissionResult> points;
    std::vector<std::string> point_errors;  // empty string = converged cleanly
    std::vector<ScanPeak> peaks;
    std::size_t failed_count = 0;
};

/// One solve per grid wavenumber (grid points run concurrently; output order is
/// the input order). Per-point failures are flagged, never fatal. Local maxima
/// of T(k) are reported against the predicted k_n = pi/(2 n b0); a plateau
/// reports its leftmost point.
inline ScanResult transmission_scan(const WormholeGeometry& geom, int L,
                                    const std::vector<double>& k_grid,
                                    const SolverOptions& opts = {},
                                    unsigned threads = 0) {
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        if (!(k_grid[i] > 0.0) || !std::isfinite(k_grid[i]))
            throw std::domain_error("transmission_scan: k grid must be positive");
        if (i > 0 && !(k_grid[i] > k_grid[i - 1]))
            throw std::domain_error("transmission_scan: k grid must be ascending");
    }

    ScanResult scan;
    scan.points.resize(k_grid.size());
    scan.point_errors.resize(k_grid.size());

    parallel_for_index(
        k_grid.size(),
        [&](std::size_t i) {
            try {
                scan.points[i] = solve_transmission(ScatterContext(k_grid[i], L), geom, opts);
            } catch (const TransmissionNonConvergence& e) {
                scan.points[i] = e.best;
                scan.point_errors[i] = e.what();
            } catch (const std::exception& e) {
                scan.points[i].k = k_grid[i];
                scan.points[i].L = L;
                scan.points[i].converged = false;
                scan.point_errors[i] = e.what();
            }
        },
        threads);

    for (const auto& err : scan.point_errors)
        if (!err.empty()) ++scan.failed_count;

    const auto& pts = scan.points;
    std::vector<double> t_values(pts.size());
    std::vector<bool> valid(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        t_values[i] = pts[i].T;
        valid[i] = scan.point_errors[i].empty();
    }
    for (std::size_t i : detail::find_peak_indices(t_values, valid)) {
        ScanPeak peak;
        peak.index = i;
        peak.k = pts[i].k;
        peak.T = pts[i].T;
        const double n_float = M_PI / (2.0 * geom.b0 * peak.k);
        int n = static_cast<int>(std::max(1.0, std::round(n_float)));
        // the k_n sequence is monotone in n, so the rounded value or one of its
        // neighbors is the nearest prediction
        double bestd = HUGE_VAL;
        for (int cand = std::max(1, n - 1); cand <= n + 1; ++cand) {
            const double kc = M_PI / (2.0 * cand * geom.b0);
            if (std::fabs(peak.k - kc) < bestd) {
                bestd = std::fabs(peak.k - kc);
                peak.nearest_n = cand;
                peak.k_predicted = kc;
            }
        }
        peak.offset = peak.k - peak.k_predicted;
        scan.peaks.push_back(peak);
    }
    return scan;
}

}  // namespace wormhole
