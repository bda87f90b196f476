#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "config.hpp"
#include "errors.hpp"
#include "landauer.hpp"
#include "oracle.hpp"
#include "parallel.hpp"
#include "quantities.hpp"
#include "scattering.hpp"
#include "traversal.hpp"

namespace metaslab {

inline constexpr const char* version = "1.0.0";

using Cell = std::variant<double, std::string>;
using Row = std::vector<Cell>;

struct VerifyReport {
    std::size_t checked = 0;
    std::size_t failures = 0;
    double max_deviation = 0.0;
};

struct SweepResult {
    std::vector<std::string> header;
    std::vector<Row> rows;
    std::vector<std::string> metadata;  // without the leading "# "
    std::vector<std::string> dropped;   // one reason per skipped grid point
    std::optional<VerifyReport> verify;
};

inline std::vector<std::string> columns(SweepMode mode) {
    switch (mode) {
    case SweepMode::transmission: return {"E_eV", "T", "R", "k2_re", "k2_im"};
    case SweepMode::iv: return {"V_volt", "J_norm", "J_abs"};
    case SweepMode::traversal:
        return {"E_eV", "tau_fs", "tau_no_slab_fs", "tau_no_refl_fs", "alpha", "regime"};
    case SweepMode::traversal_bias:
        return {"V_volt", "tau_fs", "tau_no_slab_fs", "tau_no_refl_fs", "alpha", "regime"};
    }
    return {};
}

namespace sweep_detail {

inline Row traversal_row(double x, const TraversalReport& r) {
    return {x, r.tau, r.tau_no_slab, r.tau_no_refl, r.alpha, to_string(r.regime)};
}

inline TraversalReport traversal_at(double energy, const Heterostructure& s) {
    return s.interior.size() == 1 ? traversal_closed(energy, s) : traversal_numeric_report(energy, s);
}

inline Row evaluate(const SweepConfig& cfg, const Heterostructure& biased, const LandauerConfig& landauer,
                    double x) {
    switch (cfg.mode) {
    case SweepMode::transmission: {
        const auto sol = solve_n_layer(x, biased);
        const cplx k2 = sol.k[1].value;
        return {x, sol.transmission, sol.reflection, k2.real(), k2.imag()};
    }
    case SweepMode::iv: {
        const auto p = current(x, cfg.structure, landauer);
        return {x, p.current_normalized, p.current};
    }
    case SweepMode::traversal: return traversal_row(x, traversal_at(x, biased));
    case SweepMode::traversal_bias: {
        const auto r = traversal_vs_bias(cfg.energy, cfg.structure, {x}, cfg.bias.kind, cfg.bias.n_steps).front();
        return traversal_row(x, r);
    }
    }
    return {};
}

inline bool finite_row(const Row& row) {
    for (const auto& c : row)
        if (const auto* v = std::get_if<double>(&c); v && !std::isfinite(*v)) return false;
    return true;
}

inline double oracle_step(const Heterostructure& s) {
    double thinnest = std::numeric_limits<double>::infinity();
    for (const auto& l : s.interior) thinnest = std::min(thinnest, l.thickness);
    return std::min(1e-3, thinnest / 16.0);
}

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace sweep_detail

/// Re-checks every 100th emitted row (at least one) against the RK4 oracle:
/// |T_oracle - T| <= 1e-6 at the row's energy, plus quadrature vs closed-form
/// traversal time (1e-8 relative) for single-slab traversal rows.
inline VerifyReport verify_rows(const SweepConfig& cfg, const SweepResult& result) {
    VerifyReport rep;
    const auto biased = apply_bias(cfg.structure, cfg.bias);
    const auto check = [&](double deviation, double tol) {
        ++rep.checked;
        rep.max_deviation = std::max(rep.max_deviation, deviation);
        if (!(deviation <= tol)) ++rep.failures;
    };
    const auto check_transmission = [&](double energy, const Heterostructure& s) {
        if (!wavenumber(energy, s.left_lead).propagating() || !wavenumber(energy, s.right_lead).propagating())
            return;
        const double t = solve_n_layer(energy, s).transmission;
        check(std::abs(oracle::integrate_through(energy, s, sweep_detail::oracle_step(s)).transmission - t), 1e-6);
    };
    for (std::size_t i = 0; i < result.rows.size(); i += 100) {
        const double x = std::get<double>(result.rows[i][0]);
        switch (cfg.mode) {
        case SweepMode::transmission: {
            const double t = std::get<double>(result.rows[i][1]);
            check(std::abs(oracle::integrate_through(x, biased, sweep_detail::oracle_step(biased)).transmission - t),
                  1e-6);
            break;
        }
        case SweepMode::iv: {
            const auto s = apply_bias(cfg.structure, BiasModel{cfg.bias.kind, x, cfg.bias.n_steps});
            check_transmission(thermal_energy(cfg.landauer.temperature), s);
            break;
        }
        case SweepMode::traversal: {
            check_transmission(x, biased);
            if (biased.interior.size() == 1) {
                const double tau = std::get<double>(result.rows[i][1]);
                check(std::abs(traversal_numeric(x, biased) - tau) / tau, 1e-8);
            }
            break;
        }
        case SweepMode::traversal_bias: {
            const auto s = apply_bias(cfg.structure, BiasModel{cfg.bias.kind, x, cfg.bias.n_steps});
            check_transmission(cfg.energy, s);
            break;
        }
        }
    }
    return rep;
}

/// Evaluates the configured sweep. Grid points outside a formula's domain are
/// dropped with a reason; a NumericalRangeError aborts the run.
inline SweepResult run(const SweepConfig& cfg) {
    validate(cfg.structure);
    SweepResult result;
    result.header = columns(cfg.mode);

    const auto grid = linspace(cfg.grid.min, cfg.grid.max, cfg.grid.points);
    const auto biased = apply_bias(cfg.structure, cfg.bias);
    const auto landauer = resolve_energy_grid(cfg.landauer, cfg.structure,
                                              std::max(std::abs(cfg.grid.min), std::abs(cfg.grid.max)));

    struct Slot {
        std::optional<Row> row;
        std::string reason;
    };
    std::vector<Slot> slots(grid.size());
    parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
        try {
            auto row = sweep_detail::evaluate(cfg, biased, landauer, grid[i]);
            if (sweep_detail::finite_row(row)) slots[i].row = std::move(row);
            else slots[i].reason = "non-finite value";
        } catch (const DomainError& e) {
            slots[i].reason = e.what();
        }
    });

    const char* xname = result.header.front().c_str();
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].row) result.rows.push_back(std::move(*slots[i].row));
        else result.dropped.push_back(std::string(xname) + "=" + sweep_detail::format_number(grid[i]) + ": " +
                                      slots[i].reason);
    }

    result.metadata.push_back(std::string("metaslab ") + version);
    result.metadata.push_back("constants fnv1a:" + constants_fingerprint());
    result.metadata.push_back("config:");
    std::istringstream echo(echo_config(cfg));
    for (std::string line; std::getline(echo, line);) result.metadata.push_back("  " + line);
    for (const auto& o : cfg.overrides)
        result.metadata.push_back("override " + o.key + ": file=" + o.file_value.value_or("(unset)") +
                                  " flag=" + o.flag_value);
    for (const auto& d : result.dropped) result.metadata.push_back("dropped " + d);

    if (cfg.verify) {
        result.verify = verify_rows(cfg, result);
        result.metadata.push_back("verify checked=" + std::to_string(result.verify->checked) +
                                  " failures=" + std::to_string(result.verify->failures) +
                                  " max_deviation=" + sweep_detail::format_number(result.verify->max_deviation));
    }
    return result;
}

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// CSV with a `#` metadata block. The optional timestamp is the only line that
/// varies between identical runs.
inline void write_csv(std::ostream& os, const SweepResult& r, bool timestamp = true) {
    for (const auto& m : r.metadata) os << "# " << m << "\n";
    if (timestamp) os << "# generated " << utc_timestamp() << "\n";
    for (std::size_t i = 0; i < r.header.size(); ++i) os << (i ? "," : "") << r.header[i];
    os << "\n";
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ",";
            if (const auto* v = std::get_if<double>(&row[i])) os << sweep_detail::format_number(*v);
            else os << std::get<std::string>(row[i]);
        }
        os << "\n";
    }
}

/// Companion gnuplot script plotting the CSV's columns by name.
inline std::string gnuplot_script(SweepMode mode, const std::string& csv_path) {
    std::ostringstream os;
    os << "set datafile separator ','\n"
       << "set datafile commentschars '#'\n"
       << "set key autotitle columnhead\n"
       << "set grid\n";
    const std::string src = "'" + csv_path + "'";
    switch (mode) {
    case SweepMode::transmission:
        os << "set xlabel 'E (eV)'\nset ylabel 'T'\n"
           << "plot " << src << " using 'E_eV':'T' with lines\n";
        break;
    case SweepMode::iv:
        os << "set xlabel 'V (V)'\nset ylabel 'J (normalized)'\n"
           << "plot " << src << " using 'V_volt':'J_norm' with lines\n";
        break;
    case SweepMode::traversal:
    case SweepMode::traversal_bias: {
        const std::string x = mode == SweepMode::traversal ? "E_eV" : "V_volt";
        os << "set xlabel '" << (mode == SweepMode::traversal ? "E (eV)" : "V (V)") << "'\n"
           << "set ylabel 'time (fs)'\n"
           << "plot " << src << " using '" << x << "':'tau_fs' with lines lt 1, \\\n"
           << "     " << src << " using '" << x << "':'tau_no_slab_fs' with lines dt 3, \\\n"
           << "     " << src << " using '" << x << "':'tau_no_refl_fs' with lines dt 2\n";
        break;
    }
    }
    return os.str();
}

} // namespace metaslab
