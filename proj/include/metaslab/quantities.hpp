#pragma once

// Unit system used throughout metaslab:
//   energy  eV
//   length  nm
//   time    fs
//   mass    m0 (free electron mass) for material parameters;
//           eV*fs^2/nm^2 where an absolute mass is needed.

#include <cstdint>
#include <cstdio>
#include <string>

namespace metaslab {

namespace si {
    // CODATA 2018
    inline constexpr double hbar = 1.054571817e-34;   // J*s
    inline constexpr double e    = 1.602176634e-19;   // C
    inline constexpr double m0   = 9.1093837015e-31;  // kg
    inline constexpr double kB   = 1.380649e-23;      // J/K
    inline constexpr double pi   = 3.14159265358979323846;
} // namespace si

struct PhysicalConstants {
    double hbar_sq_over_2m0;  // eV*nm^2
    double hbar;              // eV*fs
    double kB;                // eV/K
    double m0;                // eV*fs^2/nm^2
    double e;                 // C, for converting particle fluxes to currents
};

inline constexpr PhysicalConstants constants() {
    constexpr double hbar = si::hbar / si::e * 1e15;
    // kg = J*s^2/m^2 = (1/e) eV * 1e30 fs^2 / 1e18 nm^2
    constexpr double m0 = si::m0 / si::e * 1e12;
    return {hbar * hbar / (2.0 * m0), hbar, si::kB / si::e, m0, si::e};
}

/// Thermal energy kB*T in eV.
inline constexpr double thermal_energy(double temperature) {
    return constants().kB * temperature;
}

/// FNV-1a over the printed constant set; identifies the constants in output metadata.
inline std::string constants_fingerprint() {
    const auto c = constants();
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.17g|%.17g|%.17g|%.17g|%.17g", c.hbar_sq_over_2m0,
                  c.hbar, c.kB, c.m0, c.e);
    std::uint64_t h = 14695981039346656037ull;
    for (const char* p = buf; *p != '\0'; ++p) {
        h ^= static_cast<unsigned char>(*p);
        h *= 1099511628211ull;
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return out;
}

} // namespace metaslab
