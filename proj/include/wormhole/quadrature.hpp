#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "wormhole/common.hpp"

namespace wormhole::quad {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;   // rigorous-in-practice estimate, QUADPACK style
    bool converged = false;
    int segments = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15 constants).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b;
    double value;
    double error;
};

template <class F>
Segment gk15(F&& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = f(center);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::fabs(resk);

    double fv[15];  // fv[2j], fv[2j+1] = f at center -/+ half*x_j, j = 0..6
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        resk += kWgk[j] * (f1 + f2);
        resabs += kWgk[j] * (std::fabs(f1) + std::fabs(f2));
        if (j % 2 == 1)  // Kronrod nodes with odd index coincide with Gauss nodes
            resg += kWg[j / 2] * (f1 + f2);
    }

    const double mean = resk * 0.5;
    double resasc = kWgk[7] * std::fabs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::fabs(fv[2 * j] - mean) + std::fabs(fv[2 * j + 1] - mean));

    const double habs = std::fabs(half);
    resabs *= habs;
    resasc *= habs;
    double err = std::fabs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    const double tiny = std::numeric_limits<double>::min();
    if (resabs > tiny / (50.0 * eps))
        err = std::max(err, 50.0 * eps * resabs);

    return {a, b, resk * half, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [a, b].
/// Bisects the segment with the largest error estimate until
/// sum(err) <= max(abs_tol, rel_tol*|integral|) or the segment budget runs out.
template <class F>
QuadResult integrate(F&& f, double a, double b, double rel_tol = 1e-10,
                     double abs_tol = 0.0, int max_segments = 4000) {
    QuadResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }

    std::vector<detail::Segment> segs;
    segs.reserve(64);
    segs.push_back(detail::gk15(f, a, b));

    auto by_error = [](const detail::Segment& s1, const detail::Segment& s2) {
        return s1.error < s2.error;  // max-heap on error
    };
    double total_v = segs[0].value;
    double total_e = segs[0].error;

    while (static_cast<int>(segs.size()) < max_segments) {
        const double target = std::max(abs_tol, rel_tol * std::fabs(total_v));
        if (total_e <= target && target > 0.0) break;
        if (total_e <= abs_tol && abs_tol > 0.0) break;
        if (total_e == 0.0) break;

        std::pop_heap(segs.begin(), segs.end(), by_error);
        detail::Segment worst = segs.back();
        segs.pop_back();

        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= std::min(worst.a, worst.b) || mid >= std::max(worst.a, worst.b))
            {  // interval no longer splittable in double precision
            segs.push_back(worst);
            std::push_heap(segs.begin(), segs.end(), by_error);
            break;
        }

        detail::Segment left = detail::gk15(f, worst.a, mid);
        detail::Segment right = detail::gk15(f, mid, worst.b);
        total_v += left.value + right.value - worst.value;
        total_e += left.error + right.error - worst.error;

        segs.push_back(left);
        std::push_heap(segs.begin(), segs.end(), by_error);
        segs.push_back(right);
        std::push_heap(segs.begin(), segs.end(), by_error);
    }

    // compensated re-summation to shed heap-update drift
    total_v = 0.0;
    total_e = 0.0;
    double comp = 0.0;
    for (const auto& s : segs) {
        const double y = s.value - comp;
        const double t = total_v + y;
        comp = (t - total_v) - y;
        total_v = t;
        total_e += s.error;
    }

    out.value = total_v;
    out.abs_error = total_e;
    out.segments = static_cast<int>(segs.size());
    out.converged = total_e <= std::max(abs_tol, rel_tol * std::fabs(total_v));
    return out;
}

}  // namespace wormhole::quad
