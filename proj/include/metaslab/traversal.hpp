#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "errors.hpp"
#include "kinematics.hpp"
#include "quantities.hpp"
#include "scattering.hpp"
#include "structure.hpp"

namespace metaslab {

enum class SpeedRegime { fast, slow, equal };

inline std::string to_string(SpeedRegime r) {
    switch (r) {
    case SpeedRegime::fast: return "fast";
    case SpeedRegime::slow: return "slow";
    case SpeedRegime::equal: return "equal";
    }
    return "equal";
}

/// Traversal times in fs. `tau_no_slab` is free flight over the same
/// distance in the right-lead medium, `tau_no_refl` flight through an
/// unbounded slab medium, and alpha = tau_no_refl / tau_no_slab.
struct TraversalReport {
    double energy = 0.0;   // eV
    double voltage = 0.0;  // V, for bias sweeps
    double tau = 0.0;
    double tau_no_slab = 0.0;
    double tau_no_refl = 0.0;
    double alpha = 0.0;
    SpeedRegime regime = SpeedRegime::equal;
};

inline constexpr double regime_tolerance = 1e-9;

inline SpeedRegime classify(double tau, double tau_no_slab) {
    if (std::abs(tau - tau_no_slab) <= regime_tolerance * std::abs(tau_no_slab)) return SpeedRegime::equal;
    return tau < tau_no_slab ? SpeedRegime::fast : SpeedRegime::slow;
}

namespace detail {

// hbar k / (m m0): group velocity in nm/fs.
inline double group_velocity(const Wavenumber& k, double mass) {
    const auto c = constants();
    return c.hbar * k.value.real() / (mass * c.m0);
}

inline void fill_reference_times(TraversalReport& r, double energy, const Heterostructure& s) {
    const auto k_out = wavenumber(energy, s.right_lead);
    if (!k_out.propagating()) throw DomainError("traversal: right lead is not propagating");
    r.tau_no_slab = s.total_thickness() / group_velocity(k_out, s.right_lead.mass);
    double no_refl = 0.0;
    for (const auto& l : s.interior) {
        const auto k = wavenumber(energy, l);
        if (!k.propagating())
            throw DomainError("traversal: reflectionless reference needs propagating interior layers");
        no_refl += l.thickness / group_velocity(k, l.mass);
    }
    r.tau_no_refl = no_refl;
}

} // namespace detail

/// Closed-form traversal time of a single propagating slab:
///   tau = m3/(2 hbar k3) [ (1 + a^2) d + (1 - a^2) sin(2 k2 d) / (2 k2) ],
///   a = k3 m2 / (m3 k2).
/// Only the right lead enters; the left lead may differ.
inline TraversalReport traversal_closed(double energy, const Heterostructure& s) {
    if (s.interior.size() != 1) throw DomainError("closed-form traversal needs exactly one interior layer");
    const Layer& slab = s.interior.front();
    const Layer& out = s.right_lead;
    const auto k2 = wavenumber(energy, slab);
    const auto k3 = wavenumber(energy, out);
    if (!k3.propagating()) throw DomainError("traversal: right lead is not propagating");
    if (k2.regime == Regime::critical) throw DomainError("traversal: slab wavenumber is zero (E = V)");
    if (k2.regime == Regime::evanescent)
        throw DomainError("closed-form traversal needs a propagating slab; use traversal_numeric");

    const double kk2 = k2.value.real();
    const double kk3 = k3.value.real();
    const double d = slab.thickness;
    const double alpha = kk3 * slab.mass / (out.mass * kk2);
    const double a2 = alpha * alpha;
    const auto c = constants();

    TraversalReport r;
    r.energy = energy;
    r.alpha = alpha;
    r.tau = out.mass * c.m0 / (2.0 * c.hbar * kk3) *
            ((1.0 + a2) * d + (1.0 - a2) * std::sin(2.0 * kk2 * d) / (2.0 * kk2));
    r.tau_no_slab = d * out.mass * c.m0 / (c.hbar * kk3);
    r.tau_no_refl = d * slab.mass * c.m0 / (c.hbar * kk2);
    r.regime = classify(r.tau, r.tau_no_slab);
    return r;
}

/// Dwell-time quadrature: integrates |psi|^2 / J over the interior with
/// composite Simpson, J being the transmitted probability current (constant
/// across the stack). `n_quad` intervals are shared among the interior
/// layers in proportion to their thickness.
inline double traversal_numeric(double energy, const Heterostructure& s, int n_quad = 4096) {
    if (n_quad < 64) throw DomainError("traversal_numeric: n_quad must be >= 64");
    const auto sol = solve_n_layer(energy, s);
    const double flux = detail::group_velocity(sol.k.back(), s.right_lead.mass) *
                        std::norm(sol.amplitudes.back().a);
    if (!(flux > 0.0)) throw DomainError("traversal_numeric: zero transmitted current");

    const double d = s.total_thickness();
    const auto z_if = s.interfaces();
    double integral = 0.0;
    for (std::size_t j = 0; j < s.interior.size(); ++j) {
        const double t = s.interior[j].thickness;
        int n = static_cast<int>(std::lround(n_quad * t / d));
        n = std::max(2, n + (n % 2));
        const double h = t / n;
        double acc = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            const auto psi = wavefunction_in_region(sol, s, j + 1, z_if[j] + i * h).psi;
            acc += w * std::norm(psi);
        }
        integral += acc * h / 3.0;
    }
    return integral / flux;
}

/// Report with tau from quadrature; reference times generalise to a stack
/// by summing per-layer free-flight times.
inline TraversalReport traversal_numeric_report(double energy, const Heterostructure& s, int n_quad = 4096) {
    TraversalReport r;
    r.energy = energy;
    r.tau = traversal_numeric(energy, s, n_quad);
    detail::fill_reference_times(r, energy, s);
    r.alpha = r.tau_no_refl / r.tau_no_slab;
    r.regime = classify(r.tau, r.tau_no_slab);
    return r;
}

/// Energy at which alpha = 1 and all three times coincide, for flat outer
/// potentials at zero: V2 m3 / (m3 - m2).
inline double equal_time_energy(const Heterostructure& s) {
    if (s.interior.size() != 1) throw DomainError("equal_time_energy needs exactly one interior layer");
    if (s.left_lead.potential != 0.0 || s.right_lead.potential != 0.0)
        throw ConfigError("equal_time_energy supports only zero lead potentials; use equal_time_energy_root");
    const double m2 = s.interior.front().mass;
    const double m3 = s.right_lead.mass;
    if (m3 == m2) throw DomainError("equal_time_energy: slab and lead masses coincide");
    return s.interior.front().potential * m3 / (m3 - m2);
}

namespace detail {

template <class F>
std::optional<double> bracketed_root(F&& f, double lo, double hi) {
    const double f_lo = f(lo), f_hi = f(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo < 0.0) == (f_hi < 0.0)) return std::nullopt;
    boost::uintmax_t iters = 200;
    const auto tol = boost::math::tools::eps_tolerance<double>(50);
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, iters);
    return 0.5 * (a + b);
}

} // namespace detail

/// alpha(E) = 1 by root finding inside (lo, hi), for arbitrary lead potentials.
inline std::optional<double> equal_time_energy_root(const Heterostructure& s, double lo, double hi) {
    return detail::bracketed_root(
        [&](double e) { return traversal_closed(e, s).alpha - 1.0; }, lo, hi);
}

/// Times at a fixed energy across a bias sweep. Single-slab biased stacks use
/// the closed form, stepped stacks the quadrature.
inline std::vector<TraversalReport> traversal_vs_bias(double energy, const Heterostructure& s,
                                                      const std::vector<double>& voltages,
                                                      BiasKind kind, int n_steps = 8, int n_quad = 4096) {
    std::vector<TraversalReport> out;
    out.reserve(voltages.size());
    for (double v : voltages) {
        const auto biased = apply_bias(s, BiasModel{kind, v, n_steps});
        auto r = biased.interior.size() == 1 ? traversal_closed(energy, biased)
                                             : traversal_numeric_report(energy, biased, n_quad);
        r.voltage = v;
        out.push_back(r);
    }
    return out;
}

/// Bias in (lo, hi) at which alpha = 1 (tau = tau_no_slab) at fixed energy, if bracketed.
inline std::optional<double> equal_time_bias(double energy, const Heterostructure& s, BiasKind kind,
                                             double lo, double hi, int n_steps = 8) {
    return detail::bracketed_root(
        [&](double v) {
            const auto r = traversal_vs_bias(energy, s, {v}, kind, n_steps, 256).front();
            return r.alpha - 1.0;
        },
        lo, hi);
}

} // namespace metaslab
