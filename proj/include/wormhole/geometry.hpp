#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "wormhole/common.hpp"

namespace wormhole {

/// Static wormhole geometry; the throat radius b0 is the single geometric input.
struct WormholeGeometry {
    double b0;

    explicit WormholeGeometry(double throat_radius) : b0(throat_radius) {
        if (!std::isfinite(b0) || b0 <= 0.0)
            throw std::domain_error("WormholeGeometry: b0 must be positive and finite");
    }

    double diameter() const { return 2.0 * b0; }

    // barrier height of the L = 0 effective potential, attained at r = 0
    double barrier_max() const { return 1.0 / (b0 * b0); }
};

/// Incident wavenumber plus angular-momentum quantum number. E = k².
struct ScatterContext {
    double k;
    int L;

    ScatterContext(double wavenumber, int angular_momentum)
        : k(wavenumber), L(angular_momentum) {
        if (!std::isfinite(k) || k < 0.0)
            throw std::domain_error("ScatterContext: k must be non-negative and finite");
        if (L < 0)
            throw std::domain_error("ScatterContext: L must be a non-negative integer");
    }

    double energy() const { return k * k; }
};

}  // namespace wormhole
