// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <metaslab/metaslab.hpp>

using namespace metaslab;

namespace {

constexpr double widths[] = {5.0, 15.0, 30.0, 34.0};

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int count_maxima(const std::vector<double>& y) {
    int n = 0;
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
        if (y[i] > y[i - 1] && y[i] >= y[i + 1]) ++n;
    return n;
}

Outcome closed_form_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double d : widths) {
        const auto s = paper_structure(d);
        for (int i = 0; i < 1000; ++i) {
            const double e = 0.001 + (1.0 - 0.001) * (i + 0.5) / 1000.0;
            const double a = transmission_closed_form(e, s);
            const double b = solve_n_layer(e, s).transmission;
            worst = std::max(worst, std::abs(a - b) / std::abs(a));
        }
    }
    const double dt = seconds_since(t0);
    return {worst <= 1e-10 && dt < 1.0, fmt("max rel dev %.3g (<= 1e-10), %.3f s (< 1 s)", worst, dt)};
}

Outcome oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> energy(0.001, 1.0);
    double worst = 0.0;
    for (double d : widths) {
        const auto s = paper_structure(d);
        for (int i = 0; i < 200; ++i) {
            double e = energy(rng);
            if (std::abs(e - 0.5) < 1e-9) e += 1e-6;
            const double t = transmission_closed_form(e, s);
            worst = std::max(worst, std::abs(oracle::integrate_through(e, s, 1e-3).transmission - t));
        }
    }
    // Convergence order from three step sizes against the exact value.
    const auto s = paper_structure(15.0);
    const double exact = transmission_closed_form(0.2, s);
    const double e1 = std::abs(oracle::integrate_through(0.2, s, 0.25).transmission - exact);
    const double e2 = std::abs(oracle::integrate_through(0.2, s, 0.125).transmission - exact);
    const double e3 = std::abs(oracle::integrate_through(0.2, s, 0.0625).transmission - exact);
    const double order = 0.5 * (std::log2(e1 / e2) + std::log2(e2 / e3));
    const double dt = seconds_since(t0);
    const bool ok = worst <= 1e-6 && order >= 3.5 && order <= 4.5 && dt < 30.0;
    return {ok, fmt("max |dT| %.3g (<= 1e-6), order %.3f (in [3.5, 4.5]), %.2f s (< 30 s)", worst, order, dt)};
}

Outcome flux_conservation() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mag(0.01, 1.0), pot(0.0, 1.0), thick(0.5, 20.0), unit(0.0, 1.0);
    std::uniform_int_distribution<int> count(1, 5);
    const auto mass = [&] { return (unit(rng) < 0.5 ? -1.0 : 1.0) * mag(rng); };
    double worst = 0.0;
    int done = 0;
    while (done < 1000) {
        Heterostructure s;
        s.left_lead = {mass(), pot(rng), 0.0};
        s.right_lead = {mass(), pot(rng), 0.0};
        const int n = count(rng);
        for (int j = 0; j < n; ++j) s.interior.push_back({mass(), pot(rng), thick(rng)});
        const double e = pot(rng) * 2.0 - 0.5;
        if (!wavenumber(e, s.left_lead).propagating() || !wavenumber(e, s.right_lead).propagating()) continue;
        try {
            const auto sol = solve_n_layer(e, s);
            worst = std::max(worst, std::abs(sol.transmission + sol.reflection - 1.0));
            ++done;
        } catch (const NumericalRangeError&) {
        }
    }
    return {worst <= 1e-10, fmt("1000 random structures, max |T+R-1| %.3g (<= 1e-10)", worst)};
}

Outcome resonance_unity() {
    const double c = constants().hbar_sq_over_2m0;
    double worst = 0.0, anchor = 0.0, anchor_t = 0.0;
    int checked = 0;
    for (auto variant : {StructureVariant::standard, StructureVariant::equal_mass}) {
        for (double d : widths) {
            const auto s = paper_structure(d, variant);
            const auto& slab = s.interior.front();
            for (int n = 1;; ++n) {
                const double k = n * si::pi / d;
                const double e = slab.potential - k * k * c / std::abs(slab.mass);
                if (e <= 0.0) break;
                const double t = solve_n_layer(e, s).transmission;
                worst = std::max(worst, std::abs(t - 1.0));
                ++checked;
                if (variant == StructureVariant::standard && d == 15.0 && n == 1) {
                    anchor = e;
                    anchor_t = t;
                }
            }
        }
    }
    const bool ok = worst <= 1e-9 && std::abs(anchor - 0.416437) <= 1e-6 && std::abs(transmission_closed_form(0.416437, paper_structure(15.0)) - 1.0) <= 1e-9;
    return {ok, fmt("%.0f resonances, max |T-1| %.3g (<= 1e-9); d=15 n=1 at E=%.9f eV, T=%.12f", checked, worst,
                    anchor, anchor_t)};
}

Outcome peak_counts() {
    const int frozen[] = {1, 3, 5, 6};
    std::string counts;
    bool ok = true;
    int previous = 0;
    for (int w = 0; w < 4; ++w) {
        const auto s = paper_structure(widths[w]);
        std::vector<double> t;
        for (int i = 1; i < 5000; ++i) t.push_back(solve_n_layer(i * 1e-4, s).transmission);
        const int n = count_maxima(t);
        ok = ok && n == frozen[w] && n >= previous;
        previous = n;
        counts += (w ? "/" : "") + std::to_string(n);
    }
    return {ok, "counts d=5/15/30/34: " + counts + " (frozen 1/3/5/6, non-decreasing)"};
}

Outcome ndc_structure() {
    const auto t0 = std::chrono::steady_clock::now();
    const LandauerConfig cfg;
    const auto thin = iv_sweep(0.0, 1.2, 241, paper_structure(5.0), cfg);
    const auto thick = iv_sweep(0.0, 1.2, 241, paper_structure(30.0), cfg);
    const auto ndc_thin = ndc_regions(thin);
    const auto ndc_thick = ndc_regions(thick);
    const double pvr = ndc_thin.empty() ? 0.0 : ndc_thin.front().peak_to_valley;
    const bool thin_ok = ndc_thin.size() == 1 && pvr > 10.0;

    bool low_bias_ok = true;
    for (const auto* iv : {&thin, &thick}) {
        double peak = 0.0, below = 0.0;
        for (const auto& p : *iv) {
            peak = std::max(peak, p.current_normalized);
            if (p.voltage < 1.0) below = std::max(below, p.current_normalized);
        }
        low_bias_ok = low_bias_ok && below >= 0.9 * peak;
    }

    LandauerConfig fine = cfg;
    fine.n_points *= 2;
    double conv = 0.0;
    for (double d : {5.0, 30.0}) {
        const auto a = iv_sweep(0.0, 1.2, 61, paper_structure(d), cfg);
        const auto b = iv_sweep(0.0, 1.2, 61, paper_structure(d), fine);
        for (std::size_t i = 1; i < a.size(); ++i)
            conv = std::max(conv, std::abs(a[i].current_normalized - b[i].current_normalized) /
                                      std::abs(b[i].current_normalized));
    }
    const double dt = seconds_since(t0);
    const bool ok = thin_ok && ndc_thick.size() >= 2 && low_bias_ok && conv < 5e-3 && dt < 120.0;
    std::string detail = "d=5: " + std::to_string(ndc_thin.size()) + " region(s)";
    if (!ndc_thin.empty())
        detail += fmt(", peak %.3f V, PVR %.3f (> 10)", thin[ndc_thin[0].peak].voltage, pvr);
    detail += "; d=30: " + std::to_string(ndc_thick.size()) + " region(s) (>= 2)";
    detail += std::string("; >=90% of peak below 1 V: ") + (low_bias_ok ? "yes" : "no");
    detail += fmt("; doubling dev %.3g (< 0.5%%), %.1f s (< 120 s)", conv, dt);
    return {ok, detail};
}

Outcome sign_law() {
    int violations = 0, checked = 0;
    double worst_eq = 0.0;
    for (auto variant : {StructureVariant::standard, StructureVariant::equal_mass}) {
        const auto s = paper_structure(5.0, variant);
        const double v2 = s.interior.front().potential;
        const double e_eq = equal_time_energy(s);
        for (int i = 1; i <= 500; ++i) {
            const double e = v2 * i / 501.0;
            if (std::abs(e - e_eq) < 1e-12) continue;
            const auto r = traversal_closed(e, s);
            const double lhs = r.tau - r.tau_no_slab;
            if ((lhs > 0.0) != (e > e_eq) || lhs == 0.0) ++violations;
            ++checked;
        }
        const auto r = traversal_closed(e_eq, s);
        worst_eq = std::max({worst_eq, std::abs(r.tau - r.tau_no_slab) / r.tau_no_slab,
                             std::abs(r.tau_no_refl - r.tau_no_slab) / r.tau_no_slab});
    }
    const double eq_std = equal_time_energy(paper_structure(5.0));
    const double eq_eqm = equal_time_energy(paper_structure(5.0, StructureVariant::equal_mass));
    const bool ok = violations == 0 && worst_eq <= 1e-9 && std::abs(eq_std - 0.476190) < 5e-7 &&
                    std::abs(eq_eqm - 0.25) < 1e-12;
    return {ok, fmt("%.0f points, %.0f violations; E_eq %.6f / %.6f eV", checked, violations, eq_std, eq_eqm) +
                    fmt("; three-way rel dev %.3g (<= 1e-9)", worst_eq)};
}

Outcome quadrature_agreement() {
    double worst = 0.0;
    for (auto variant : {StructureVariant::standard, StructureVariant::equal_mass}) {
        const auto s = paper_structure(5.0, variant);
        for (int i = 0; i < 50; ++i) {
            const double e = 0.001 + (0.499 - 0.001) * i / 49.0;
            const double closed = traversal_closed(e, s).tau;
            worst = std::max(worst, std::abs(traversal_numeric(e, s, 4096) - closed) / closed);
        }
    }
    return {worst <= 1e-8, fmt("100 energies, max rel dev %.3g (<= 1e-8)", worst)};
}

Outcome identity_suite() {
    double alpha_dev = 0.0;
    for (double d : widths)
        for (int i = 1; i < 100; ++i) {
            const auto r = traversal_closed(0.005 * i, paper_structure(d));
            alpha_dev = std::max(alpha_dev, std::abs(r.tau_no_refl - r.alpha * r.tau_no_slab) / r.tau_no_refl);
        }
    bool bias_identity = true;
    for (double d : widths)
        for (auto kind : {BiasKind::none, BiasKind::midpoint, BiasKind::stepped})
            bias_identity = bias_identity && apply_bias(paper_structure(d), {kind, 0.0, 8}) == paper_structure(d);
    double refine = 0.0;
    for (double d : widths) {
        const auto s = paper_structure(d);
        for (int parts : {2, 7}) {
            const auto fine = subdivide(s, parts);
            for (int i = 1; i < 100; ++i) {
                const double e = 0.01 * i;
                refine = std::max(refine, std::abs(solve_n_layer(e, fine).transmission -
                                                   solve_n_layer(e, s).transmission));
            }
        }
    }
    const double i0 = current(0.0, paper_structure(5.0), resolve_energy_grid({}, paper_structure(5.0), 1.2))
                          .current_normalized;
    const bool ok = alpha_dev <= 1e-12 && bias_identity && refine <= 1e-10 && i0 == 0.0;
    return {ok, fmt("alpha identity %.3g (<= 1e-12), refinement %.3g (<= 1e-10), I(0) = %g", alpha_dev, refine, i0) +
                    (bias_identity ? ", zero-bias identity holds" : ", zero-bias identity BROKEN")};
}

std::string without_threads_line(const std::string& text) {
    std::istringstream in(text);
    std::string out;
    for (std::string line; std::getline(in, line);)
        if (line.find("threads") == std::string::npos) out += line + "\n";
    return out;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome cli_determinism() {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "metaslab_acceptance";
    fs::create_directories(dir);
    bool ok = true;
    std::string detail;
    for (const char* mode : {"transmission", "iv", "traversal", "traversal_bias"}) {
        std::string text[2];
        for (int j = 0; j < 2; ++j) {
            const auto out = dir / (std::string(mode) + ".csv");
            const std::string cmd = std::string(METASLAB_CLI) + " --preset " +
                                    (std::string(mode) == "iv" ? "fig1b-30nm" : "fig3b") + " --mode " + mode +
                                    " --threads " + (j ? "8" : "1") + " --no-timestamp --out " + out.string() +
                                    " 2>/dev/null";
            if (std::system(cmd.c_str()) != 0) ok = false;
            text[j] = without_threads_line(slurp(out));
        }
        const bool same = !text[0].empty() && text[0] == text[1];
        ok = ok && same;
        detail += std::string(detail.empty() ? "" : ", ") + mode + (same ? " identical" : " DIFFERS");
    }
    return {ok, detail + " (1 vs 8 threads)"};
}

} // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"closed-form/engine equivalence", closed_form_equivalence},
        {"oracle equivalence", oracle_equivalence},
        {"flux conservation", flux_conservation},
        {"resonance unity", resonance_unity},
        {"peak-count monotonicity", peak_counts},
        {"NDC structure", ndc_structure},
        {"traversal sign law", sign_law},
        {"quadrature/closed-form traversal agreement", quadrature_agreement},
        {"identity suite", identity_suite},
        {"CLI determinism", cli_determinism},
    };
    int failed = 0, n = 0;
    for (const auto& [name, check] : criteria) {
        ++n;
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", n - failed, n);
    return failed == 0 ? 0 : 1;
}
