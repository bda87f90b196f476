#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "parallel.hpp"
#include "quantities.hpp"
#include "scattering.hpp"
#include "structure.hpp"

namespace metaslab {

enum class LandauerVariant {
    tsu_esaki,       // planar slab, transverse supply function (log factor)
    one_dimensional  // two-terminal 2e/h * integral T (f_L - f_R)
};

inline std::string to_string(LandauerVariant v) {
    return v == LandauerVariant::tsu_esaki ? "tsu-esaki" : "1d";
}

struct LandauerConfig {
    double temperature = 300.0;  // K
    double fermi_level = 0.0;    // eV
    double e_min = 0.0;          // eV
    double e_max = 0.0;          // eV; <= e_min selects the automatic upper bound
    int n_points = 4000;
    double supply_mass = 0.0;    // m0; 0 selects the left-lead mass
    LandauerVariant variant = LandauerVariant::tsu_esaki;
    BiasKind bias = BiasKind::midpoint;
    int bias_steps = 8;
};

struct IvPoint {
    double voltage = 0.0;          // V
    double current_normalized = 0.0;  // integral of T times the supply factor, eV
    double current = 0.0;          // A/cm^2 (tsu-esaki) or A (1d)
};

inline void validate(const LandauerConfig& cfg) {
    if (!(cfg.temperature > 0.0)) throw ConfigError("landauer: temperature must be positive");
    if (cfg.n_points < 100) throw ConfigError("landauer: at least 100 energy points required");
    if (!(cfg.e_min >= 0.0)) throw ConfigError("landauer: e_min must be >= 0");
    if (cfg.supply_mass < 0.0) throw ConfigError("landauer: supply mass must be positive");
}

/// Fills in the automatic upper energy bound: highest interior potential
/// plus 10 kT plus the largest bias magnitude.
inline LandauerConfig resolve_energy_grid(LandauerConfig cfg, const Heterostructure& s, double max_bias) {
    if (cfg.e_max <= cfg.e_min) {
        double top = s.left_lead.potential;
        for (const auto& l : s.interior) top = std::max(top, l.potential);
        cfg.e_max = top + 10.0 * thermal_energy(cfg.temperature) + std::abs(max_bias);
    }
    return cfg;
}

namespace detail {

// ln(1 + exp(x)) without overflow.
inline double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double fermi(double x) {
    return x > 0.0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (1.0 + std::exp(x));
}

// Occupation difference between the leads at energy e, bias v.
inline double supply(double e, double v, const LandauerConfig& cfg) {
    const double kt = thermal_energy(cfg.temperature);
    const double x_left = (cfg.fermi_level - e) / kt;
    const double x_right = (cfg.fermi_level - e - v) / kt;
    if (cfg.variant == LandauerVariant::tsu_esaki) return softplus(x_left) - softplus(x_right);
    return fermi(-x_left) - fermi(-x_right);
}

inline double prefactor(const LandauerConfig& cfg, const Heterostructure& s) {
    const auto c = constants();
    if (cfg.variant == LandauerVariant::tsu_esaki) {
        const double m = (cfg.supply_mass > 0.0 ? cfg.supply_mass : s.left_lead.mass) * c.m0;
        const double kt = thermal_energy(cfg.temperature);
        // e m kT / (2 pi^2 hbar^3): particles per fs per nm^2 per eV of integral.
        const double flux = m * kt / (2.0 * si::pi * si::pi * c.hbar * c.hbar * c.hbar);
        return flux * c.e * 1e15 / 1e-14;  // A/cm^2
    }
    // 2e/h = e / (pi hbar): particles per fs per eV of integral.
    return c.e * 1e15 / (si::pi * c.hbar);  // A
}

} // namespace detail

/// Energies in (lo, hi) where some region's wavenumber vanishes; T(E) has a
/// derivative discontinuity there.
inline std::vector<double> band_edges(const Heterostructure& s, double lo, double hi) {
    std::vector<double> edges{lo, hi};
    const auto add = [&](double e) {
        if (e > lo && e < hi) edges.push_back(e);
    };
    add(s.left_lead.potential);
    add(s.right_lead.potential);
    for (const auto& l : s.interior) add(l.potential);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

/// Current at bias `v` through the biased stack. Composite Simpson with
/// n_points nodes over [e_min, e_max], the panels split at band edges and the
/// nodes shared out by panel width. A panel opening at a lead band edge, where
/// T grows like sqrt(E - edge), is integrated in u = sqrt(E - edge).
/// current(0) is exactly zero.
inline IvPoint current(double v, const Heterostructure& s, const LandauerConfig& cfg_in) {
    validate(cfg_in);
    const auto cfg = resolve_energy_grid(cfg_in, s, v);
    const auto biased = apply_bias(s, BiasModel{cfg.bias, v, cfg.bias_steps});
    const auto edges = band_edges(biased, cfg.e_min, cfg.e_max);
    const double span = cfg.e_max - cfg.e_min;
    const auto is_lead_edge = [&](double e) {
        return e == biased.left_lead.potential || e == biased.right_lead.potential;
    };

    double total = 0.0;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double lo = edges[p], hi = edges[p + 1];
        const bool sqrt_map = is_lead_edge(lo);
        int intervals = static_cast<int>(std::lround((cfg.n_points - 1) * (hi - lo) / span));
        intervals = std::max(2, intervals + intervals % 2);
        const double width = sqrt_map ? std::sqrt(hi - lo) : hi - lo;
        const double h = width / intervals;
        double acc = 0.0;
        for (int i = 0; i <= intervals; ++i) {
            const double x = i * h;
            const double e = sqrt_map ? lo + x * x : lo + x;
            const double f = detail::supply(e, v, cfg);
            if (f == 0.0) continue;
            const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            const double jacobian = sqrt_map ? 2.0 * x : 1.0;
            acc += w * jacobian * transmission_or_zero(e, biased) * f;
        }
        total += acc * h / 3.0;
    }
    IvPoint p;
    p.voltage = v;
    p.current_normalized = total;
    p.current = p.current_normalized * detail::prefactor(cfg, s);
    return p;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 2) throw ConfigError("grid needs at least 2 points");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    out.back() = hi;
    return out;
}

/// I-V characteristic on a uniform bias grid. The energy grid is resolved once
/// from the largest |V| so every point integrates over the same window.
inline std::vector<IvPoint> iv_sweep(double v_min, double v_max, int n_points, const Heterostructure& s,
                                     const LandauerConfig& cfg, unsigned threads = 1) {
    const auto grid = linspace(v_min, v_max, n_points);
    const auto resolved = resolve_energy_grid(cfg, s, std::max(std::abs(v_min), std::abs(v_max)));
    std::vector<IvPoint> out(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t i) { out[i] = current(grid[i], s, resolved); });
    return out;
}

/// A bias interval over which the current falls between consecutive grid points.
struct NdcRegion {
    std::size_t peak;    // index of the local maximum opening the region
    std::size_t valley;  // index of the local minimum closing it
    double peak_to_valley;
};

inline std::vector<NdcRegion> ndc_regions(const std::vector<IvPoint>& iv) {
    std::vector<NdcRegion> out;
    std::size_t i = 0;
    while (i + 1 < iv.size()) {
        if (iv[i + 1].current_normalized < iv[i].current_normalized) {
            const std::size_t peak = i;
            while (i + 1 < iv.size() && iv[i + 1].current_normalized < iv[i].current_normalized) ++i;
            const double jp = iv[peak].current_normalized;
            const double jv = iv[i].current_normalized;
            out.push_back({peak, i, jv > 0.0 ? jp / jv : std::numeric_limits<double>::infinity()});
        } else {
            ++i;
        }
    }
    return out;
}

} // namespace metaslab
