#pragma once

#include <cmath>
#include <complex>

#include "errors.hpp"
#include "quantities.hpp"
#include "structure.hpp"

namespace metaslab {

using cplx = std::complex<double>;

enum class Regime { propagating, evanescent, critical };

struct Wavenumber {
    cplx value;  // nm^-1
    Regime regime;

    bool propagating() const { return regime == Regime::propagating; }
};

/// Squared wavenumber 2 m (E - V) / hbar^2 in nm^-2 (real, either sign).
inline double wavenumber_squared(double energy, const Layer& layer) {
    return layer.mass * (energy - layer.potential) / constants().hbar_sq_over_2m0;
}

/// Branch rules: a propagating wave takes the sign of the mass, so that
/// k/m > 0 and exp(ikz) always carries probability current toward +z.
/// Evanescent waves take Im k > 0, i.e. exp(ikz) decays toward +z.
/// In a negative-mass layer E < V propagates and E > V is evanescent.
inline Wavenumber wavenumber(double energy, const Layer& layer) {
    if (layer.mass == 0.0) throw DomainError("wavenumber: zero effective mass");
    if (!std::isfinite(energy)) throw DomainError("wavenumber: non-finite energy");
    const double q2 = wavenumber_squared(energy, layer);
    if (q2 > 0.0) {
        const double q = std::sqrt(q2);
        return {cplx(layer.mass > 0.0 ? q : -q, 0.0), Regime::propagating};
    }
    if (q2 < 0.0) return {cplx(0.0, std::sqrt(-q2)), Regime::evanescent};
    return {cplx(0.0, 0.0), Regime::critical};
}

} // namespace metaslab
