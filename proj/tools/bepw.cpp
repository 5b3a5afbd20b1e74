// Command-line driver: profile, run1d, runmd, green, rates, experiment.
// Exit codes: 0 pass, 1 runtime or usage error, 2 acceptance failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bepw/bepw.hpp"

using namespace bepw;

namespace {

int run_config(const std::string& path, const std::string& out, bool multi) {
    ExperimentConfig c = load_config(path);
    if (!multi && c.dims != 1) throw ConfigError("run1d: config has grid.dims = " + std::to_string(c.dims));
    if (multi && c.dims == 1) throw ConfigError("runmd: config has grid.dims = 1 (use run1d)");
    Problem p = build_problem(c);
    const Trajectory tr = run_problem(p, c.run);
    std::filesystem::create_directories(out);
    const std::string series = out + "/series.csv";
    write_series_csv(series, tr);
    const auto v = tr.series("Vp", 2.0);
    std::printf("steps %zu, t = %s, background %s\n", tr.steps, format_double(tr.final_state.t).c_str(),
                tr.metadata.at("background").c_str());
    if (!v.empty())
        std::printf("||V+||_2: %s -> %s\n", format_double(v.front().second).c_str(), format_double(v.back().second).c_str());
    std::printf("wrote %s\n", series.c_str());
    return tr.final_state.all_finite() ? 0 : 2;
}

std::string series_name(Quantity q, const std::string& species) {
    switch (q) {
        case Quantity::V:
        case Quantity::V1d: return "V" + species;
        case Quantity::U:
        case Quantity::U1d: return "U" + species;
        case Quantity::K: return "K";
    }
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bipolar Euler-Poisson planar diffusion waves"};
    app.require_subcommand(1);

    auto* prof = app.add_subcommand("profile", "solve the self-similar profile W and write zeta,W,dW");
    double rho_minus = 0.95, rho_plus = 1.05, gamma = 2.0, kappa = 1.0, L = 20.0;
    std::size_t points = 4001;
    std::string prof_out;
    prof->add_option("--rho-minus", rho_minus, "left end state")->required();
    prof->add_option("--rho-plus", rho_plus, "right end state")->required();
    prof->add_option("--gamma", gamma, "pressure exponent")->capture_default_str();
    prof->add_option("--kappa", kappa, "pressure coefficient")->capture_default_str();
    prof->add_option("--l-zeta", L, "half-width of the zeta interval")->capture_default_str();
    prof->add_option("--points", points, "collocation points")->capture_default_str();
    prof->add_option("--out", prof_out, "output CSV")->required();

    std::string config, out = "bepw_out";
    auto* run1d = app.add_subcommand("run1d", "run a 1D configuration and write series.csv");
    run1d->add_option("--config", config, "JSON config")->required()->check(CLI::ExistingFile);
    run1d->add_option("--out", out, "output directory")->capture_default_str();
    auto* runmd = app.add_subcommand("runmd", "run a 2D or 3D configuration and write series.csv");
    runmd->add_option("--config", config, "JSON config")->required()->check(CLI::ExistingFile);
    runmd->add_option("--out", out, "output directory")->capture_default_str();

    auto* green = app.add_subcommand("green", "kernel norm table against the predicted slopes");
    double mu = 1.0, eps = 0.23;
    int dim = 1;
    std::string green_out;
    green->add_option("--mu", mu, "diffusion coefficient P'")->required();
    green->add_option("--eps", eps, "low-frequency cutoff")->required();
    green->add_option("--dim", dim, "dimension")->required()->check(CLI::IsMember({1, 2}));
    green->add_option("--out", green_out, "output directory")->required();

    auto* rates = app.add_subcommand("rates", "fit a decay exponent from a series CSV");
    std::string series_path, quantity, species = "p";
    int n = 1, alpha = 0;
    std::string p_text = "2";
    std::vector<double> window;
    std::optional<double> tol;
    rates->add_option("--series", series_path, "series.csv from run1d/runmd")->required()->check(CLI::ExistingFile);
    rates->add_option("--quantity", quantity, "V, U, K, V1d or U1d")->required();
    rates->add_option("--n", n, "dimension")->required();
    rates->add_option("--p", p_text, "norm exponent (number or inf)")->required();
    rates->add_option("--alpha", alpha, "derivative order")->required();
    rates->add_option("--window", window, "fit window LO HI")->expected(2);
    rates->add_option("--species", species, "p or m")->check(CLI::IsMember({"p", "m"}))->capture_default_str();
    rates->add_option("--tol", tol, "exit 2 when |fitted - theory| exceeds this");

    auto* exper = app.add_subcommand("experiment", "run a canned or custom experiment and write its report");
    std::string name, exp_config, exp_out = "bepw_experiments";
    exper->add_option("--name", name, "decay1d, decay2d, kdecay, green-norms, smoke3d or custom")->required();
    exper->add_option("--config", exp_config, "JSON config overriding the canned one")->check(CLI::ExistingFile);
    exper->add_option("--out", exp_out, "output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*prof) {
            PressureLaw law{kappa, gamma};
            const auto W = solve_profile(law, rho_minus, rho_plus, L, points);
            write_profile_csv(prof_out, W);
            std::printf("profile: %zu points on [%s, %s], wrote %s\n", W.zeta.size(), format_double(-L).c_str(),
                        format_double(L).c_str(), prof_out.c_str());
            return 0;
        }
        if (*run1d) return run_config(config, out, false);
        if (*runmd) return run_config(config, out, true);
        if (*green) {
            std::filesystem::create_directories(green_out);
            const auto rows = kernel_norm_table(mu, eps, dim, {1.0, 2.0, kInf}, default_kernel_cases(), default_kernel_times());
            const std::string path = green_out + "/green_n" + std::to_string(dim) + ".csv";
            write_kernel_norm_csv(path, rows);
            bool ok = true;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (i > 0 && rows[i].q == rows[i - 1].q && rows[i].alpha == rows[i - 1].alpha &&
                    rows[i].tderiv == rows[i - 1].tderiv)
                    continue;
                const auto& r = rows[i];
                const bool pass = std::abs(r.fitted_slope - r.theory_slope) <= 0.1;
                ok = ok && pass;
                std::printf("%s q=%s alpha=%d tderiv=%d fitted %.4f theory %.4f\n", pass ? "PASS" : "FAIL",
                            format_p(r.q).c_str(), r.alpha, r.tderiv, r.fitted_slope, r.theory_slope);
            }
            std::printf("wrote %s\n", path.c_str());
            return ok ? 0 : 2;
        }
        if (*rates) {
            const double p = p_text == "inf" ? kInf : std::stod(p_text);
            const Quantity q = parse_quantity(quantity);
            const double theory = theory_exponent(q, n, p, alpha);
            const auto rows = read_series_csv(series_path);
            std::vector<std::pair<double, double>> s;
            const std::string key = series_name(q, species);
            for (const auto& r : rows)
                if (r.quantity == key && r.p == p && r.alpha == alpha) s.emplace_back(r.t, r.value);
            if (s.empty())
                throw ParameterError("rates: no rows for " + key + " p=" + format_p(p) + " alpha=" + std::to_string(alpha));
            const std::array<double, 2> w =
                window.empty() ? default_window(s.back().first) : std::array<double, 2>{window[0], window[1]};
            const auto f = fit_exponent(s, w);
            std::printf("%s p=%s alpha=%d window [%s, %s]: fitted %.4f (stderr %.2g, r2 %.4f), theory %.4f\n", key.c_str(),
                        format_p(p).c_str(), alpha, format_double(w[0]).c_str(), format_double(w[1]).c_str(),
                        f.fitted_exponent, f.stderr_exponent, f.r_squared, theory);
            return tol && std::abs(f.fitted_exponent - theory) > *tol ? 2 : 0;
        }
        if (*exper) {
            std::optional<ExperimentConfig> c;
            if (!exp_config.empty()) c = load_config(exp_config);
            const Report r = run_experiment(name, c, exp_out);
            std::cout << r.summary();
            return r.passed() ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
