#pragma once

// Brute-force reference for the transfer-matrix engine: integrates
//   psi' = phi,  phi' = -(2 m (E - V) / hbar^2) psi
// backward through the stack with fixed-step RK4 and reads the reflection and
// transmission off the left-lead state. Deliberately shares nothing with
// scattering.hpp beyond the structure types and constants.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "quantities.hpp"
#include "structure.hpp"

namespace metaslab::oracle {

using cplx = std::complex<double>;

struct OdeState {
    cplx psi;
    cplx phi;  // d psi / dz, nm^-1
};

struct TracePoint {
    double z;
    OdeState state;
};

struct OracleResult {
    double transmission = 0.0;
    double reflection = 0.0;
    std::vector<TracePoint> trace;  // descending z; left-side limits at interfaces
};

namespace detail {

inline double q_squared(double energy, const Layer& l) {
    return l.mass * (energy - l.potential) / constants().hbar_sq_over_2m0;
}

// Lead wavenumber with k/m > 0 (flux toward +z).
inline double lead_k(double energy, const Layer& lead) {
    const double q2 = q_squared(energy, lead);
    if (!(q2 > 0.0)) throw DomainError("oracle: lead is not propagating at this energy");
    return std::copysign(std::sqrt(q2), lead.mass);
}

inline OdeState rhs(const OdeState& y, double q2) { return {y.phi, -q2 * y.psi}; }

inline OdeState rk4_step(const OdeState& y, double q2, double h) {
    const auto axpy = [](const OdeState& a, double s, const OdeState& b) {
        return OdeState{a.psi + s * b.psi, a.phi + s * b.phi};
    };
    const OdeState k1 = rhs(y, q2);
    const OdeState k2 = rhs(axpy(y, 0.5 * h, k1), q2);
    const OdeState k3 = rhs(axpy(y, 0.5 * h, k2), q2);
    const OdeState k4 = rhs(axpy(y, h, k3), q2);
    return {y.psi + h / 6.0 * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi),
            y.phi + h / 6.0 * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi)};
}

} // namespace detail

/// Integrates from a pure outgoing wave at the last interface back to z = 0.
/// `step` is the maximum RK4 step; each layer uses ceil(thickness/step) equal
/// steps. Steps coarser than min(thickness)/16 are rejected.
inline OracleResult integrate_through(double energy, const Heterostructure& s, double step,
                                      bool keep_trace = false) {
    if (!(step > 0.0)) throw DomainError("oracle: step must be positive");
    if (s.interior.empty()) throw DomainError("oracle: no interior layers");
    double thinnest = std::numeric_limits<double>::infinity();
    for (const auto& l : s.interior) thinnest = std::min(thinnest, l.thickness);
    if (step > thinnest / 16.0)
        throw DomainError("oracle: step exceeds min(layer thickness)/16");

    const double k_left = detail::lead_k(energy, s.left_lead);
    const double k_right = detail::lead_k(energy, s.right_lead);
    const cplx i(0.0, 1.0);

    OracleResult out;
    double z = s.total_thickness();
    // Right lead side of the last interface, amplitude 1 referenced at z = d.
    OdeState y{1.0, i * k_right};
    double mass_right = s.right_lead.mass;

    for (auto it = s.interior.rbegin(); it != s.interior.rend(); ++it) {
        // psi continuous, phi/m continuous.
        y.phi *= it->mass / mass_right;
        if (keep_trace) out.trace.push_back({z, y});
        const double q2 = detail::q_squared(energy, *it);
        const auto n = static_cast<long>(std::ceil(it->thickness / step - 1e-9));
        const double h = it->thickness / static_cast<double>(n);
        for (long j = 0; j < n; ++j) {
            y = detail::rk4_step(y, q2, -h);
            if (keep_trace) out.trace.push_back({z - (j + 1) * h, y});
        }
        z -= it->thickness;
        mass_right = it->mass;
    }
    y.phi *= s.left_lead.mass / mass_right;
    if (keep_trace) out.trace.push_back({0.0, y});

    // psi = A + B, phi = i k (A - B) at z = 0-.
    const cplx incident = 0.5 * (y.psi + y.phi / (i * k_left));
    const cplx reflected = 0.5 * (y.psi - y.phi / (i * k_left));
    const double flux_ratio = (k_right / s.right_lead.mass) / (k_left / s.left_lead.mass);
    out.transmission = flux_ratio / std::norm(incident);
    out.reflection = std::norm(reflected) / std::norm(incident);
    return out;
}

} // namespace metaslab::oracle
