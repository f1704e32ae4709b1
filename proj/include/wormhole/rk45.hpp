#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "wormhole/common.hpp"

namespace wormhole::ode {

/// Dormand-Prince 5(4) embedded Runge-Kutta pair with PI-free step control.
/// State is a fixed-size array of a real or complex scalar; rhs has signature
/// void(double t, const State& y, State& dydt).
template <class Scalar, std::size_t N>
class Rk45 {
public:
    using State = std::array<Scalar, N>;

    struct Options {
        double rel_tol = 1e-10;
        double abs_tol = 1e-12;
        double initial_step = 1e-3;
        double min_step = 1e-14;
        long max_steps = 20'000'000;
    };

    struct Stats {
        long accepted = 0;
        long rejected = 0;
    };

    /// Integrates y from t0 to t1 (either direction); y is updated in place.
    template <class Rhs>
    Stats integrate(Rhs&& rhs, double t0, double t1, State& y,
                    const Options& opt = {}) const {
        Stats stats;
        if (t0 == t1) return stats;
        const double dir = (t1 > t0) ? 1.0 : -1.0;
        double t = t0;
        double h = dir * std::min(std::fabs(opt.initial_step), std::fabs(t1 - t0));

        State k1, k2, k3, k4, k5, k6, k7, ytmp, y5;
        rhs(t, y, k1);

        long steps = 0;
        while (dir * (t1 - t) > 0.0) {
            if (++steps > opt.max_steps)
                throw NumericalError("Rk45: step budget exhausted", t, std::fabs(t1 - t));
            if (std::fabs(h) < opt.min_step && std::fabs(t1 - t) > opt.min_step)
                throw NumericalError("Rk45: step size underflow", t, std::fabs(h));
            if (dir * (t + h) > dir * t1) h = t1 - t;

            // k2
            comb1(ytmp, y, h, a21, k1);
            rhs(t + c2 * h, ytmp, k2);
            // k3
            comb2(ytmp, y, h, a31, k1, a32, k2);
            rhs(t + c3 * h, ytmp, k3);
            // k4
            comb3(ytmp, y, h, a41, k1, a42, k2, a43, k3);
            rhs(t + c4 * h, ytmp, k4);
            // k5
            comb4(ytmp, y, h, a51, k1, a52, k2, a53, k3, a54, k4);
            rhs(t + c5 * h, ytmp, k5);
            // k6
            comb5(ytmp, y, h, a61, k1, a62, k2, a63, k3, a64, k4, a65, k5);
            rhs(t + h, ytmp, k6);
            // 5th-order solution (also k7 location, FSAL)
            for (std::size_t i = 0; i < N; ++i)
                y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                    b5 * k5[i] + b6 * k6[i]);
            rhs(t + h, y5, k7);

            // embedded 4th-order error estimate
            double err_norm = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const Scalar e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                      e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                const double scale =
                    opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
                const double r = std::abs(e) / scale;
                err_norm += r * r;
            }
            err_norm = std::sqrt(err_norm / N);

            if (err_norm <= 1.0) {
                t += h;
                y = y5;
                k1 = k7;
                ++stats.accepted;
            } else {
                ++stats.rejected;
            }

            const double factor =
                (err_norm == 0.0) ? 5.0
                                  : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
            h *= factor;
        }
        return stats;
    }

private:
    static void comb1(State& out, const State& y, double h, double a1, const State& k1) {
        for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h * (a1 * k1[i]);
    }
    static void comb2(State& out, const State& y, double h, double a1, const State& k1,
                      double a2, const State& k2) {
        for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h * (a1 * k1[i] + a2 * k2[i]);
    }
    static void comb3(State& out, const State& y, double h, double a1, const State& k1,
                      double a2, const State& k2, double a3, const State& k3) {
        for (std::size_t i = 0; i < N; ++i)
            out[i] = y[i] + h * (a1 * k1[i] + a2 * k2[i] + a3 * k3[i]);
    }
    static void comb4(State& out, const State& y, double h, double a1, const State& k1,
                      double a2, const State& k2, double a3, const State& k3, double a4,
                      const State& k4) {
        for (std::size_t i = 0; i < N; ++i)
            out[i] = y[i] + h * (a1 * k1[i] + a2 * k2[i] + a3 * k3[i] + a4 * k4[i]);
    }
    static void comb5(State& out, const State& y, double h, double a1, const State& k1,
                      double a2, const State& k2, double a3, const State& k3, double a4,
                      const State& k4, double a5, const State& k5) {
        for (std::size_t i = 0; i < N; ++i)
            out[i] = y[i] +
                     h * (a1 * k1[i] + a2 * k2[i] + a3 * k3[i] + a4 * k4[i] + a5 * k5[i]);
    }

    // Dormand-Prince tableau
    static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                            c5 = 8.0 / 9.0;
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                            a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static constexpr double d1 = 5179.0 / 57600.0, d3 = 7571.0 / 16695.0,
                            d4 = 393.0 / 640.0, d5 = -92097.0 / 339200.0,
                            d6 = 187.0 / 2100.0, d7 = 1.0 / 40.0;
    static constexpr double e1 = b1 - d1, e3 = b3 - d3, e4 = b4 - d4, e5 = b5 - d5,
                            e6 = b6 - d6, e7 = -d7;
};

}  // namespace wormhole::ode
