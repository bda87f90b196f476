#pragma once

// Sweep configuration: flat `key = value` lines under [section] headers,
// `#` starts a comment. Sections and keys:
//
//   [structure] preset | left_lead = m, V | right_lead = m, V | layers = m, V, t; m, V, t; ...
//   [grid]      min, max, points, energy
//   [bias]      kind = none|midpoint|stepped, steps, voltage
//   [landauer]  temperature, fermi_level, e_min, e_max = auto|x, points,
//               supply_mass = auto|x, variant = tsu-esaki|1d
//   [output]    mode = transmission|iv|traversal|traversal_bias, path,
//               threads = auto|n, verify, gnuplot
//
// Unknown sections or keys, duplicates and malformed values are errors that
// name the offending line.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "errors.hpp"
#include "landauer.hpp"
#include "structure.hpp"

namespace metaslab {

enum class SweepMode { transmission, iv, traversal, traversal_bias };

inline std::string to_string(SweepMode m) {
    switch (m) {
    case SweepMode::transmission: return "transmission";
    case SweepMode::iv: return "iv";
    case SweepMode::traversal: return "traversal";
    case SweepMode::traversal_bias: return "traversal_bias";
    }
    return "transmission";
}

struct Grid {
    double min = 0.0;
    double max = 0.0;
    int points = 0;

    friend bool operator==(const Grid&, const Grid&) = default;
};

struct Preset {
    std::string_view name;
    std::string_view description;
    double thickness;
    StructureVariant variant;
};

inline constexpr std::array<Preset, 8> presets{{
    {"fig1a-5nm", "transmission / I-V, 5 nm slab", 5.0, StructureVariant::standard},
    {"fig1a-15nm", "transmission / I-V, 15 nm slab", 15.0, StructureVariant::standard},
    {"fig1b-30nm", "transmission / I-V, 30 nm slab", 30.0, StructureVariant::standard},
    {"fig1b-34nm", "transmission / I-V, 34 nm slab", 34.0, StructureVariant::standard},
    {"fig3a", "traversal times, 5 nm slab", 5.0, StructureVariant::standard},
    {"fig3b", "traversal times, 30 nm slab", 30.0, StructureVariant::standard},
    {"fig3c", "traversal times, 5 nm slab, lead mass = |slab mass|", 5.0, StructureVariant::equal_mass},
    {"fig3d", "traversal time vs bias at E = 0.2 eV, 5 nm slab", 5.0, StructureVariant::standard},
}};

inline Heterostructure preset_structure(std::string_view name) {
    for (const auto& p : presets)
        if (p.name == name) return paper_structure(p.thickness, p.variant);
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

/// Preset parameters in the configuration-file layer notation.
inline std::string preset_table() {
    std::ostringstream os;
    for (const auto& p : presets) {
        const auto s = preset_structure(p.name);
        const auto& l = s.interior.front();
        os << p.name << ": " << p.description << "\n"
           << "  left_lead  = " << s.left_lead.mass << " m0, " << s.left_lead.potential << " eV\n"
           << "  slab       = " << l.mass << " m0, " << l.potential << " eV, " << l.thickness << " nm\n"
           << "  right_lead = " << s.right_lead.mass << " m0, " << s.right_lead.potential << " eV\n";
    }
    return os.str();
}

/// A flag that replaced (or added) a key of the configuration file.
struct Override {
    std::string key;  // section.key
    std::optional<std::string> file_value;
    std::string flag_value;
};

struct SweepConfig {
    SweepMode mode = SweepMode::transmission;
    std::string preset;  // empty when the structure is given layer by layer
    Heterostructure structure;
    Grid grid;
    double energy = 0.2;  // fixed energy of traversal_bias sweeps, eV
    BiasModel bias;
    LandauerConfig landauer;
    std::string output_path = "-";
    unsigned threads = 0;  // 0 = auto
    bool verify = false;
    bool gnuplot = false;
    std::vector<Override> overrides;
};

/// Raw entries keyed by "section.key", before defaults and validation.
struct ConfigEntries {
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::map<std::string, Entry> entries;
    std::vector<Override> overrides;

    /// Applies a command-line value on top of the file entries.
    void set_flag(const std::string& key, const std::string& value) {
        auto it = entries.find(key);
        Override o{key, std::nullopt, value};
        if (it != entries.end()) o.file_value = it->second.value;
        overrides.push_back(o);
        entries[key] = Entry{value, 0};
    }
};

namespace config_detail {

inline const std::map<std::string, std::vector<std::string>>& schema() {
    static const std::map<std::string, std::vector<std::string>> s{
        {"structure", {"preset", "left_lead", "right_lead", "layers"}},
        {"grid", {"min", "max", "points", "energy"}},
        {"bias", {"kind", "steps", "voltage"}},
        {"landauer", {"temperature", "fermi_level", "e_min", "e_max", "points", "supply_mass", "variant"}},
        {"output", {"mode", "path", "threads", "verify", "gnuplot"}},
    };
    return s;
}

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline double to_double(const std::string& text, const std::string& key, int line) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v))
        throw ConfigError(key + ": expected a number, got '" + text + "'", line);
    return v;
}

inline int to_int(const std::string& text, const std::string& key, int line) {
    int v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw ConfigError(key + ": expected an integer, got '" + text + "'", line);
    return v;
}

inline bool to_bool(const std::string& text, const std::string& key, int line) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw ConfigError(key + ": expected true or false, got '" + text + "'", line);
}

inline Layer to_lead(const std::string& text, const std::string& key, int line) {
    const auto parts = split(text, ',');
    if (parts.size() != 2) throw ConfigError(key + ": expected 'mass, potential'", line);
    Layer l{to_double(parts[0], key, line), to_double(parts[1], key, line), 0.0};
    try {
        validate(l, false);
    } catch (const ConfigError& e) {
        throw ConfigError(key + ": " + e.what(), line);
    }
    return l;
}

inline std::vector<Layer> to_layers(const std::string& text, const std::string& key, int line) {
    std::vector<Layer> out;
    for (const auto& item : split(text, ';')) {
        const auto parts = split(item, ',');
        if (parts.size() != 3) throw ConfigError(key + ": expected 'mass, potential, thickness' per layer", line);
        Layer l{to_double(parts[0], key, line), to_double(parts[1], key, line), to_double(parts[2], key, line)};
        try {
            validate(l, true);
        } catch (const ConfigError& e) {
            throw ConfigError(key + ": " + e.what(), line);
        }
        out.push_back(l);
    }
    return out;
}

/// Shortest representation that parses back to the same double.
inline std::string format_exact(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace config_detail

inline ConfigEntries parse_entries(std::string_view text) {
    using namespace config_detail;
    ConfigEntries out;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const auto hash = raw.find('#');
        const std::string line = trim(raw.substr(0, hash));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("malformed section header '" + line + "'", line_no);
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!schema().contains(section)) throw ConfigError("unknown section [" + section + "]", line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value', got '" + line + "'", line_no);
        if (section.empty()) throw ConfigError("key outside of any section", line_no);
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const auto& keys = schema().at(section);
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError("unknown key '" + key + "' in [" + section + "]", line_no);
        if (value.empty()) throw ConfigError("empty value for '" + key + "'", line_no);
        const std::string full = section + "." + key;
        if (auto it = out.entries.find(full); it != out.entries.end())
            throw ConfigError("duplicate key '" + full + "' (first set on line " +
                                  std::to_string(it->second.line) + ")",
                              line_no);
        out.entries.emplace(full, ConfigEntries::Entry{value, line_no});
    }
    return out;
}

inline Grid default_grid(SweepMode mode) {
    switch (mode) {
    case SweepMode::transmission: return {0.001, 0.6, 600};
    case SweepMode::iv: return {0.0, 1.2, 241};
    case SweepMode::traversal: return {0.001, 0.499, 499};
    case SweepMode::traversal_bias: return {0.0, 0.5, 101};
    }
    return {0.001, 0.6, 600};
}

/// Applies defaults and validates. Mode-dependent defaults: the grid, and the
/// bias kind (midpoint for iv and traversal_bias, none otherwise).
inline SweepConfig resolve(const ConfigEntries& raw) {
    using namespace config_detail;
    SweepConfig cfg;
    cfg.overrides = raw.overrides;

    const auto get = [&](const std::string& key) -> const ConfigEntries::Entry* {
        auto it = raw.entries.find(key);
        return it == raw.entries.end() ? nullptr : &it->second;
    };
    const auto num = [&](const std::string& key, double fallback) {
        const auto* e = get(key);
        return e ? to_double(e->value, key, e->line) : fallback;
    };
    const auto integer = [&](const std::string& key, int fallback) {
        const auto* e = get(key);
        return e ? to_int(e->value, key, e->line) : fallback;
    };
    const auto flag = [&](const std::string& key) {
        const auto* e = get(key);
        return e ? to_bool(e->value, key, e->line) : false;
    };

    if (const auto* e = get("output.mode")) {
        if (e->value == "transmission") cfg.mode = SweepMode::transmission;
        else if (e->value == "iv") cfg.mode = SweepMode::iv;
        else if (e->value == "traversal") cfg.mode = SweepMode::traversal;
        else if (e->value == "traversal_bias") cfg.mode = SweepMode::traversal_bias;
        else throw ConfigError("output.mode: unknown mode '" + e->value + "'", e->line);
    }

    // structure
    const auto* preset = get("structure.preset");
    const auto* left = get("structure.left_lead");
    const auto* right = get("structure.right_lead");
    const auto* layers = get("structure.layers");
    if (preset) {
        if (left || right || layers) {
            const int line = (left ? left : right ? right : layers)->line;
            throw ConfigError("structure: preset and explicit layers are mutually exclusive", line);
        }
        try {
            cfg.structure = preset_structure(preset->value);
        } catch (const ConfigError& e) {
            throw ConfigError(e.what(), preset->line);
        }
        cfg.preset = preset->value;
    } else {
        if (!left || !right || !layers)
            throw ConfigError("structure: missing required key (preset, or left_lead + right_lead + layers)");
        cfg.structure.left_lead = to_lead(left->value, "structure.left_lead", left->line);
        cfg.structure.right_lead = to_lead(right->value, "structure.right_lead", right->line);
        cfg.structure.interior = to_layers(layers->value, "structure.layers", layers->line);
    }

    // grid
    const Grid fallback = default_grid(cfg.mode);
    cfg.grid = {num("grid.min", fallback.min), num("grid.max", fallback.max),
                integer("grid.points", fallback.points)};
    cfg.energy = num("grid.energy", 0.2);
    if (cfg.grid.points < 2) throw ConfigError("grid.points must be >= 2", get("grid.points") ? get("grid.points")->line : 0);
    if (!(cfg.grid.min < cfg.grid.max)) throw ConfigError("grid: min must be < max");

    // bias
    const bool bias_sweep = cfg.mode == SweepMode::iv || cfg.mode == SweepMode::traversal_bias;
    cfg.bias.kind = bias_sweep ? BiasKind::midpoint : BiasKind::none;
    if (const auto* e = get("bias.kind")) {
        if (e->value == "none") cfg.bias.kind = BiasKind::none;
        else if (e->value == "midpoint") cfg.bias.kind = BiasKind::midpoint;
        else if (e->value == "stepped") cfg.bias.kind = BiasKind::stepped;
        else throw ConfigError("bias.kind: expected none, midpoint or stepped", e->line);
    }
    cfg.bias.n_steps = integer("bias.steps", 8);
    if (cfg.bias.n_steps < 1) throw ConfigError("bias.steps must be >= 1", get("bias.steps")->line);
    cfg.bias.voltage = num("bias.voltage", 0.0);

    // landauer
    auto& l = cfg.landauer;
    l.temperature = num("landauer.temperature", 300.0);
    l.fermi_level = num("landauer.fermi_level", 0.0);
    l.e_min = num("landauer.e_min", 0.0);
    if (const auto* e = get("landauer.e_max"); e && e->value != "auto") l.e_max = to_double(e->value, "landauer.e_max", e->line);
    l.n_points = integer("landauer.points", 4000);
    if (const auto* e = get("landauer.supply_mass"); e && e->value != "auto")
        l.supply_mass = to_double(e->value, "landauer.supply_mass", e->line);
    if (const auto* e = get("landauer.variant")) {
        if (e->value == "tsu-esaki") l.variant = LandauerVariant::tsu_esaki;
        else if (e->value == "1d") l.variant = LandauerVariant::one_dimensional;
        else throw ConfigError("landauer.variant: expected tsu-esaki or 1d", e->line);
    }
    l.bias = cfg.bias.kind;
    l.bias_steps = cfg.bias.n_steps;
    if (l.e_max != 0.0 && !(l.e_max > l.e_min)) throw ConfigError("landauer: e_max must exceed e_min");
    validate(l);

    // output
    if (const auto* e = get("output.path")) cfg.output_path = e->value;
    if (const auto* e = get("output.threads"); e && e->value != "auto") {
        const int t = to_int(e->value, "output.threads", e->line);
        if (t < 1) throw ConfigError("output.threads must be >= 1 or auto", e->line);
        cfg.threads = static_cast<unsigned>(t);
    }
    cfg.verify = flag("output.verify");
    cfg.gnuplot = flag("output.gnuplot");
    return cfg;
}

inline SweepConfig parse_config(std::string_view text) { return resolve(parse_entries(text)); }

/// Canonical configuration text with every default spelled out.
/// parse_config(echo_config(c)) reproduces c, and echoing that again is byte-identical.
inline std::string echo_config(const SweepConfig& cfg) {
    using config_detail::format_exact;
    std::ostringstream os;
    os << "[structure]\n";
    if (!cfg.preset.empty()) {
        os << "preset = " << cfg.preset << "\n";
    } else {
        const auto lead = [&](const Layer& l) { return format_exact(l.mass) + ", " + format_exact(l.potential); };
        os << "left_lead = " << lead(cfg.structure.left_lead) << "\n";
        os << "right_lead = " << lead(cfg.structure.right_lead) << "\n";
        os << "layers = ";
        for (std::size_t i = 0; i < cfg.structure.interior.size(); ++i) {
            const auto& l = cfg.structure.interior[i];
            os << (i ? "; " : "") << format_exact(l.mass) << ", " << format_exact(l.potential) << ", "
               << format_exact(l.thickness);
        }
        os << "\n";
    }
    os << "[grid]\n"
       << "min = " << format_exact(cfg.grid.min) << "\n"
       << "max = " << format_exact(cfg.grid.max) << "\n"
       << "points = " << cfg.grid.points << "\n"
       << "energy = " << format_exact(cfg.energy) << "\n";
    os << "[bias]\n"
       << "kind = " << to_string(cfg.bias.kind) << "\n"
       << "steps = " << cfg.bias.n_steps << "\n"
       << "voltage = " << format_exact(cfg.bias.voltage) << "\n";
    const auto& l = cfg.landauer;
    os << "[landauer]\n"
       << "temperature = " << format_exact(l.temperature) << "\n"
       << "fermi_level = " << format_exact(l.fermi_level) << "\n"
       << "e_min = " << format_exact(l.e_min) << "\n"
       << "e_max = " << (l.e_max > l.e_min ? format_exact(l.e_max) : "auto") << "\n"
       << "points = " << l.n_points << "\n"
       << "supply_mass = " << (l.supply_mass > 0.0 ? format_exact(l.supply_mass) : "auto") << "\n"
       << "variant = " << to_string(l.variant) << "\n";
    os << "[output]\n"
       << "mode = " << to_string(cfg.mode) << "\n"
       << "path = " << cfg.output_path << "\n"
       << "threads = " << (cfg.threads == 0 ? std::string("auto") : std::to_string(cfg.threads)) << "\n"
       << "verify = " << (cfg.verify ? "true" : "false") << "\n"
       << "gnuplot = " << (cfg.gnuplot ? "true" : "false") << "\n";
    return os.str();
}

} // namespace metaslab
