#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "kinematics.hpp"
#include "structure.hpp"

namespace metaslab {

/// Amplitudes of one region. For a propagating or evanescent region
/// psi(x) = a exp(ikx) + b exp(-ikx); for a critical region (k = 0)
/// psi(x) = a + b x. x is measured from the region's left boundary
/// (the left lead uses x = z, i.e. it is referenced to z = 0).
struct Amplitudes {
    cplx a;
    cplx b;
};

struct ScatteringSolution {
    double energy = 0.0;
    std::vector<Wavenumber> k;          // left lead, interior..., right lead
    std::vector<Amplitudes> amplitudes; // a(left) = 1, b(right) = 0
    double transmission = 0.0;
    double reflection = 0.0;
};

struct WaveValue {
    cplx psi;
    cplx dpsi;  // d psi / dz
};

/// Imaginary phase above which an evanescent layer is rejected.
inline constexpr double max_evanescent_exponent = 200.0;

namespace detail {

struct Mat2 {
    cplx m00, m01, m10, m11;

    Amplitudes operator*(const Amplitudes& v) const {
        return {m00 * v.a + m01 * v.b, m10 * v.a + m11 * v.b};
    }
};

// Maps region amplitudes to (psi, psi'/m) at local position x.
inline Mat2 field_matrix(const Wavenumber& k, double mass, double x) {
    if (k.regime == Regime::critical) return {1.0, x, 0.0, 1.0 / mass};
    const cplx i(0.0, 1.0);
    const cplx fwd = std::exp(i * k.value * x);
    const cplx bwd = std::exp(-i * k.value * x);
    const cplx s = i * k.value / mass;
    return {fwd, bwd, s * fwd, -s * bwd};
}

inline Mat2 inverse(const Mat2& m) {
    const cplx det = m.m00 * m.m11 - m.m01 * m.m10;
    return {m.m11 / det, -m.m01 / det, -m.m10 / det, m.m00 / det};
}

inline void require_propagating_leads(const Wavenumber& left, const Wavenumber& right) {
    if (!left.propagating())
        throw DomainError("left lead is not propagating at this energy (no incident state)");
    if (!right.propagating())
        throw DomainError("right lead is not propagating at this energy (no transmitted state)");
}

inline const Layer& region_layer(const Heterostructure& s, std::size_t region) {
    if (region == 0) return s.left_lead;
    if (region == s.interior.size() + 1) return s.right_lead;
    return s.interior[region - 1];
}

// Closed form evaluated with a caller-chosen interior wavenumber.
inline double closed_form_with(double energy, const Heterostructure& s, cplx k2) {
    const Layer& l1 = s.left_lead;
    const Layer& l2 = s.interior.front();
    const Layer& l3 = s.right_lead;
    const double k1 = wavenumber(energy, l1).value.real();
    const double k3 = wavenumber(energy, l3).value.real();
    const double m1 = l1.mass, m2 = l2.mass, m3 = l3.mass;
    const double ratio = k3 * m1 / (m3 * k1);
    const cplx phase = k2 * l2.thickness;
    const cplx c = std::cos(phase);
    const cplx sn = std::sin(phase);
    const cplx mix = k3 * m2 / (m3 * k2) + k2 * m1 / (m2 * k1);
    const cplx denom = c * c * (1.0 + ratio) * (1.0 + ratio) + sn * sn * mix * mix;
    return 4.0 * ratio / denom.real();
}

} // namespace detail

/// Three-region transmission in closed form. Complex arithmetic carries the
/// evanescent case (cos/sin of an imaginary argument become cosh/sinh).
inline double transmission_closed_form(double energy, const Heterostructure& s) {
    if (s.interior.size() != 1)
        throw DomainError("closed-form transmission needs exactly one interior layer");
    const auto k1 = wavenumber(energy, s.left_lead);
    const auto k2 = wavenumber(energy, s.interior.front());
    const auto k3 = wavenumber(energy, s.right_lead);
    detail::require_propagating_leads(k1, k3);
    if (k2.regime == Regime::critical)
        throw DomainError("interior wavenumber is zero; use solve_n_layer for the k -> 0 limit");
    return detail::closed_form_with(energy, s, k2.value);
}

/// Transfer-matrix solution for an arbitrary stack. psi and psi'/m are
/// continuous at every interface; the incident amplitude is 1 and nothing
/// enters from the right.
inline ScatteringSolution solve_n_layer(double energy, const Heterostructure& s) {
    const std::size_t n_regions = s.interior.size() + 2;
    ScatteringSolution sol;
    sol.energy = energy;
    sol.k.reserve(n_regions);
    for (std::size_t r = 0; r < n_regions; ++r) sol.k.push_back(wavenumber(energy, detail::region_layer(s, r)));
    detail::require_propagating_leads(sol.k.front(), sol.k.back());

    for (std::size_t r = 1; r + 1 < n_regions; ++r) {
        const auto& k = sol.k[r];
        if (k.regime == Regime::evanescent &&
            k.value.imag() * s.interior[r - 1].thickness > max_evanescent_exponent)
            throw NumericalRangeError("evanescent layer " + std::to_string(r - 1) +
                                      " exceeds the exponent guard |Im(k) d| > 200");
    }

    sol.amplitudes.assign(n_regions, Amplitudes{});
    sol.amplitudes.back() = {1.0, 0.0};
    for (std::size_t r = n_regions - 1; r > 0; --r) {
        const std::size_t l = r - 1;
        const Layer& left = detail::region_layer(s, l);
        const Layer& right = detail::region_layer(s, r);
        const double width = (l == 0) ? 0.0 : left.thickness;
        const auto at_interface = detail::field_matrix(sol.k[r], right.mass, 0.0) * sol.amplitudes[r];
        sol.amplitudes[l] = detail::inverse(detail::field_matrix(sol.k[l], left.mass, width)) * at_interface;
    }

    const cplx incident = sol.amplitudes.front().a;
    for (auto& amp : sol.amplitudes) {
        amp.a /= incident;
        amp.b /= incident;
    }

    const double flux_left = sol.k.front().value.real() / s.left_lead.mass;
    const double flux_right = sol.k.back().value.real() / s.right_lead.mass;
    sol.transmission = flux_right * std::norm(sol.amplitudes.back().a) / flux_left;
    sol.reflection = std::norm(sol.amplitudes.front().b);
    return sol;
}

/// Transmission from the transfer-matrix engine, or 0 when either lead has no
/// propagating state at this energy.
inline double transmission_or_zero(double energy, const Heterostructure& s) {
    if (!wavenumber(energy, s.left_lead).propagating() || !wavenumber(energy, s.right_lead).propagating())
        return 0.0;
    return solve_n_layer(energy, s).transmission;
}

/// Wavefunction in a given region, at global position z (no range check).
inline WaveValue wavefunction_in_region(const ScatteringSolution& sol, const Heterostructure& s,
                                        std::size_t region, double z) {
    const auto z_if = s.interfaces();
    double origin = 0.0;
    if (region == s.interior.size() + 1) origin = z_if.back();
    else if (region > 0) origin = z_if[region - 1];
    const double x = z - origin;
    const auto& k = sol.k[region];
    const auto& amp = sol.amplitudes[region];
    if (k.regime == Regime::critical) return {amp.a + amp.b * x, amp.b};
    const cplx i(0.0, 1.0);
    const cplx fwd = amp.a * std::exp(i * k.value * x);
    const cplx bwd = amp.b * std::exp(-i * k.value * x);
    return {fwd + bwd, i * k.value * (fwd - bwd)};
}

/// Region index containing z: 0 for z < 0, n+1 for z > d. An interface point
/// belongs to the region on its left.
inline std::size_t region_of(const Heterostructure& s, double z) {
    if (z <= 0.0) return 0;
    const auto z_if = s.interfaces();
    for (std::size_t j = 1; j < z_if.size(); ++j)
        if (z <= z_if[j]) return j;
    return s.interior.size() + 1;
}

inline WaveValue wavefunction_at(const ScatteringSolution& sol, const Heterostructure& s, double z) {
    return wavefunction_in_region(sol, s, region_of(s, z), z);
}

} // namespace metaslab
