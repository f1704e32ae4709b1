// Probes the transparent-waveguide prediction lambda = 4 n b0: evaluates the
// exact transmission at each predicted wavenumber k_n = pi/(2 n b0) and prints
// it next to the semiclassical validity ratio. The predictions sit at
// k b0 < 1 where the validity condition (k b0)^2 >> 1 fails, so the exact T
// there is an empirical question, not a foregone conclusion.

#include <cstdio>

#include "wormhole/transmission.hpp"

int main() {
    using namespace wormhole;
    const WormholeGeometry geom(1.0);

    std::printf("throat radius b0 = %g, natural units hbar = 2 m0 = 1\n\n", geom.b0);
    std::printf("%3s %10s %10s %14s %16s %s\n", "n", "lambda", "k_n", "T(k_n)",
                "validity_ratio", "flag");
    for (const auto& e : resonance_wavelengths(geom, 5)) {
        const auto t = solve_transmission(ScatterContext(e.k, 0), geom);
        const auto w = wkb_phase(e.k, geom);
        std::printf("%3d %10.6f %10.6f %14.10f %16.6f %s\n", e.n, e.lambda, e.k, t.T,
                    w.validity_ratio, w.validity_warning ? "outside WKB regime" : "");
    }

    std::printf("\nhigh-energy check (deep in the validity regime):\n");
    for (double k : {10.0, 20.0, 30.0}) {
        const auto t = solve_transmission(ScatterContext(k, 0), geom);
        std::printf("  k b0 = %4.1f  ->  T = %.10f\n", k, t.T);
    }
    return 0;
}
