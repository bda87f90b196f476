// metaslab: transmission, I-V and traversal-time sweeps for a negative-mass
// barrier slab between positive-mass leads.
//
// Exit codes: 0 success, 1 --verify found a mismatch, 2 configuration error,
// 3 numerical-range error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <metaslab/metaslab.hpp>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw metaslab::ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void apply_grid_flag(metaslab::ConfigEntries& entries, const std::string& grid) {
    const auto parts = metaslab::config_detail::split(grid, ':');
    if (parts.size() != 3) throw metaslab::ConfigError("--grid: expected min:max:n, got '" + grid + "'");
    entries.set_flag("grid.min", parts[0]);
    entries.set_flag("grid.max", parts[1]);
    entries.set_flag("grid.points", parts[2]);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ballistic transport through a negative-effective-mass barrier slab"};
    std::string mode, preset, config_path, grid, out, threads;
    bool verify = false, gnuplot = false, dump_presets = false, no_timestamp = false;
    app.add_option("--mode", mode, "transmission | iv | traversal | traversal_bias");
    app.add_option("--preset", preset, "named structure, see --dump-presets");
    app.add_option("--config", config_path, "configuration file");
    app.add_option("--grid", grid, "independent-variable grid min:max:n");
    app.add_option("--out", out, "CSV output path ('-' for stdout)");
    app.add_option("--threads", threads, "worker threads: n or auto");
    app.add_flag("--verify", verify, "re-check 1% of rows against the RK4 oracle");
    app.add_flag("--gnuplot", gnuplot, "also write <out>.gp plotting the CSV");
    app.add_flag("--dump-presets", dump_presets, "print the preset parameter sets and exit");
    app.add_flag("--no-timestamp", no_timestamp, "omit the generation time from the metadata");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (dump_presets) {
        std::cout << metaslab::preset_table();
        return 0;
    }

    try {
        metaslab::ConfigEntries entries;
        if (!config_path.empty()) entries = metaslab::parse_entries(read_file(config_path));
        if (!preset.empty()) {
            for (const char* key : {"structure.left_lead", "structure.right_lead", "structure.layers"})
                entries.entries.erase(key);
            entries.set_flag("structure.preset", preset);
        }
        if (!mode.empty()) entries.set_flag("output.mode", mode);
        if (!grid.empty()) apply_grid_flag(entries, grid);
        if (!out.empty()) entries.set_flag("output.path", out);
        if (!threads.empty()) entries.set_flag("output.threads", threads);
        if (verify) entries.set_flag("output.verify", "true");
        if (gnuplot) entries.set_flag("output.gnuplot", "true");

        const auto cfg = metaslab::resolve(entries);
        if (cfg.gnuplot && cfg.output_path == "-")
            throw metaslab::ConfigError("--gnuplot needs a file output path (--out)");

        std::ofstream file;
        if (cfg.output_path != "-") {
            file.open(cfg.output_path);
            if (!file) throw metaslab::ConfigError("cannot write output file '" + cfg.output_path + "'");
        }
        std::ostream& os = cfg.output_path == "-" ? std::cout : file;

        const auto result = metaslab::run(cfg);
        for (const auto& d : result.dropped) std::cerr << "metaslab: dropped " << d << "\n";
        metaslab::write_csv(os, result, !no_timestamp);
        if (!os) throw metaslab::ConfigError("failed writing output '" + cfg.output_path + "'");

        if (cfg.gnuplot) {
            std::ofstream gp(cfg.output_path + ".gp");
            if (!gp) throw metaslab::ConfigError("cannot write '" + cfg.output_path + ".gp'");
            gp << metaslab::gnuplot_script(cfg.mode, cfg.output_path);
        }
        if (result.verify && result.verify->failures > 0) {
            std::cerr << "metaslab: verification failed on " << result.verify->failures << " of "
                      << result.verify->checked << " checks\n";
            return 1;
        }
        return 0;
    } catch (const metaslab::ConfigError& e) {
        std::cerr << "metaslab: config error: " << e.what() << "\n";
        return 2;
    } catch (const metaslab::NumericalRangeError& e) {
        std::cerr << "metaslab: numerical range error: " << e.what() << "\n";
        return 3;
    } catch (const metaslab::DomainError& e) {
        std::cerr << "metaslab: config error: " << e.what() << "\n";
        return 2;
    }
}
