#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace wormhole {

inline constexpr const char* kVersion = "1.0.0";

// ħ = 2 m₀ = 1 throughout: energies are squared wavenumbers, lengths are
// plain lengths, and every potential carries an implicit ħ²/2m₀ = 1.
inline constexpr const char* kUnitsNote = "natural units hbar = 2*m0 = 1";

/// Thrown when an iterative numerical procedure fails to reach its target
/// accuracy; carries the best value obtained and the error actually achieved.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double best, double achieved)
        : std::runtime_error(what), best_estimate(best), achieved_error(achieved) {}

    double best_estimate;
    double achieved_error;
};

inline void require_finite(double x, const char* name) {
    if (!std::isfinite(x))
        throw std::domain_error(std::string(name) + " must be finite");
}

}  // namespace wormhole
