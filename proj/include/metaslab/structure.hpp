#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"

namespace metaslab {

/// One homogeneous region. Mass is in units of m0 and may be negative.
/// Thickness is ignored for the semi-infinite leads.
struct Layer {
    double mass = 1.0;
    double potential = 0.0;  // eV
    double thickness = 0.0;  // nm

    friend bool operator==(const Layer&, const Layer&) = default;
};

/// Leads enclose an ordered stack of interior layers; the first interface sits at z = 0.
struct Heterostructure {
    Layer left_lead;
    std::vector<Layer> interior;
    Layer right_lead;

    double total_thickness() const {
        double d = 0.0;
        for (const auto& l : interior) d += l.thickness;
        return d;
    }

    /// Interface positions z_0 = 0 < z_1 < ... < z_n = total thickness.
    std::vector<double> interfaces() const {
        std::vector<double> z{0.0};
        for (const auto& l : interior) z.push_back(z.back() + l.thickness);
        return z;
    }

    friend bool operator==(const Heterostructure&, const Heterostructure&) = default;
};

inline void validate(const Layer& layer, bool interior) {
    const double m = std::abs(layer.mass);
    if (!std::isfinite(layer.mass) || !(m > 1e-4 && m < 1e2))
        throw ConfigError("layer mass must be nonzero with |m| in (1e-4, 1e2) m0");
    if (!std::isfinite(layer.potential)) throw ConfigError("layer potential must be finite");
    if (interior && !(layer.thickness > 0.0 && std::isfinite(layer.thickness)))
        throw ConfigError("interior layer thickness must be positive");
}

inline void validate(const Heterostructure& s) {
    if (s.interior.empty()) throw ConfigError("heterostructure needs at least one interior layer");
    validate(s.left_lead, false);
    validate(s.right_lead, false);
    for (const auto& l : s.interior) validate(l, true);
}

enum class StructureVariant { standard, equal_mass };

/// Lead/slab parameters of the reference device: positive-mass leads around a
/// 0.5 eV barrier in a -0.02 m0 material. `equal_mass` sets both leads to 0.02 m0.
inline Heterostructure paper_structure(double d, StructureVariant variant = StructureVariant::standard) {
    if (!(d > 0.0)) throw ConfigError("slab thickness must be positive");
    const double lead_mass = variant == StructureVariant::standard ? 0.4 : 0.02;
    return Heterostructure{
        Layer{lead_mass, 0.0, 0.0},
        {Layer{-0.02, 0.5, d}},
        Layer{lead_mass, 0.0, 0.0},
    };
}

enum class BiasKind { none, midpoint, stepped };

struct BiasModel {
    BiasKind kind = BiasKind::none;
    double voltage = 0.0;  // V
    int n_steps = 1;       // used by stepped only
};

inline std::string to_string(BiasKind k) {
    switch (k) {
    case BiasKind::none: return "none";
    case BiasKind::midpoint: return "midpoint";
    case BiasKind::stepped: return "stepped";
    }
    return "none";
}

/// Deforms the potential profile for an applied bias. Leads stay flat, the
/// right lead drops by e*V. `midpoint` lowers every interior layer by e*V/2;
/// `stepped` splits each interior layer into n_steps sublayers sampling a
/// linear drop from 0 at z = 0 to -e*V at the last interface.
inline Heterostructure apply_bias(const Heterostructure& s, const BiasModel& b) {
    if (b.kind == BiasKind::stepped && b.n_steps < 1)
        throw ConfigError("stepped bias needs n_steps >= 1");
    if (!std::isfinite(b.voltage)) throw ConfigError("bias voltage must be finite");
    if (b.kind == BiasKind::none || b.voltage == 0.0) return s;

    const double drop = b.voltage;
    Heterostructure out{s.left_lead, {}, s.right_lead};
    out.right_lead.potential -= drop;

    if (b.kind == BiasKind::midpoint) {
        out.interior = s.interior;
        for (auto& l : out.interior) l.potential -= 0.5 * drop;
        return out;
    }

    const double d = s.total_thickness();
    const int n = b.n_steps;
    out.interior.reserve(s.interior.size() * static_cast<std::size_t>(n));
    double z = 0.0;
    for (const auto& layer : s.interior) {
        const double h = layer.thickness / n;
        for (int i = 0; i < n; ++i) {
            const double mid = z + (i + 0.5) * h;
            out.interior.push_back(Layer{layer.mass, layer.potential - drop * mid / d, h});
        }
        z += layer.thickness;
    }
    return out;
}

/// Splits every interior layer into `parts` identical sublayers.
inline Heterostructure subdivide(const Heterostructure& s, int parts) {
    if (parts < 1) throw ConfigError("subdivision count must be >= 1");
    Heterostructure out{s.left_lead, {}, s.right_lead};
    for (const auto& l : s.interior)
        for (int i = 0; i < parts; ++i) out.interior.push_back(Layer{l.mass, l.potential, l.thickness / parts});
    return out;
}

} // namespace metaslab
