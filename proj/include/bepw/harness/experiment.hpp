#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bepw/greenfn/kernel.hpp"
#include "bepw/harness/apriori.hpp"
#include "bepw/harness/config.hpp"
#include "bepw/harness/fit.hpp"
#include "bepw/harness/theory.hpp"
#include "bepw/hydro/init.hpp"
#include "bepw/hydro/run.hpp"
#include "bepw/profile/profile.hpp"
#include "bepw/profile/shift.hpp"

namespace bepw {

struct Check {
    std::string name;
    double value = 0.0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool pass = false;
};

struct Report {
    std::string name;
    std::vector<Check> checks;
    std::vector<std::string> notes;
    std::vector<std::string> files;

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }

    void check(const std::string& what, double value, double lo, double hi) {
        checks.push_back({what, value, lo, hi, std::isfinite(value) && value >= lo && value <= hi});
    }
    void check_near(const std::string& what, double value, double target, double tol) {
        check(what, value, target - tol, target + tol);
    }

    std::string summary() const {
        std::ostringstream os;
        os << "experiment " << name << ": " << (passed() ? "PASS" : "FAIL") << '\n';
        for (const auto& c : checks)
            os << (c.pass ? "  PASS  " : "  FAIL  ") << c.name << " = " << format_double(c.value) << " in ["
               << format_double(c.lo) << ", " << format_double(c.hi) << "]\n";
        for (const auto& n : notes) os << "  note  " << n << '\n';
        return os.str();
    }
};

/// Everything needed to start one trajectory.
struct Problem {
    DiffusionProfile profile;
    Grid grid;
    ShiftField shift;
    FluidState state;
    std::optional<FluidState> reference;
};

inline ShiftField make_shift(const ShiftSpec& s, const Grid& g) {
    ShiftField f = zero_shift(g);
    if (g.dims == 1 || s.type == ShiftType::none) return f;
    for (std::size_t k = 0; k < g.points[2]; ++k)
        for (std::size_t j = 0; j < g.points[1]; ++j) {
            const double y = g.coord(1, j), z = g.dims > 2 ? g.coord(2, k) : 0.0;
            f.delta0[j + g.points[1] * k] =
                s.type == ShiftType::constant ? s.amplitude : s.amplitude * std::exp(-(y * y + z * z) / (s.width * s.width));
        }
    f.delta_star = mean_of(f.delta0);
    return f;
}

inline Problem build_problem(const ExperimentConfig& c) {
    Problem p{solve_profile(c.law, c.rho_minus, c.rho_plus), c.grid(), {}, {}, std::nullopt};
    p.shift = make_shift(c.shift, p.grid);
    if (p.grid.dims == 1) {
        p.state = init_1d(p.profile, c.perturbation, p.grid);
    } else {
        p.state = init_md(p.profile, p.shift, c.perturbation, p.grid);
        p.reference = init_reference(p.profile, Grid::line(p.grid.points[0], c.extent[0], c.extent[1]));
    }
    return p;
}

inline Trajectory run_problem(Problem& p, const RunConfig& cfg, const Observer& obs = {}) {
    Run run(p.state, p.profile, p.shift, cfg, p.reference);
    return run.execute(obs);
}

/// Canned experiment configurations (also shipped as configs/*.json).
inline ExperimentConfig canned_config(const std::string& name) {
    ExperimentConfig c;
    c.law = {1.0, 2.0};
    c.rho_minus = 0.95;
    c.rho_plus = 1.05;
    c.perturbation = {BumpShape::dipole, 0.01, 5.0, {0, 0, 0}, 0.0};
    if (name == "decay1d" || name == "kdecay") {
        c.dims = 1;
        c.points = {4096, 1, 1};
        c.extent = {-400, 400};
        c.run.t_end = name == "decay1d" ? 800 : 400;
        c.run.snapshot_stride = 20;
        c.window = name == "decay1d" ? std::array<double, 2>{100, 800} : std::array<double, 2>{50, 400};
    } else if (name == "decay2d") {
        c.dims = 2;
        c.points = {1024, 128, 1};
        c.extent = {-200, 200};
        c.lengths = {40, 0};
        c.shift = {ShiftType::ridge, 0.5, 4.0};
        c.run.t_end = 200;
        c.run.snapshot_stride = 40;
    } else if (name == "smoke3d") {
        c.dims = 3;
        c.points = {256, 32, 32};
        c.extent = {-64, 64};
        c.lengths = {16, 16};
        c.perturbation = {BumpShape::gaussian, 0.01, 3.0, {0, 0, 0}, 0.0};
        c.shift = {ShiftType::ridge, 0.2, 3.0};
        c.run.t_end = 1e6;
        c.run.snapshot_stride = 1;
        c.run.max_steps = 200;
        c.run.max_alpha = 0;
    } else {
        throw ConfigError("unknown experiment '" + name + "' (expected decay1d, decay2d, kdecay, green-norms or smoke3d)");
    }
    c.run.background = c.dims == 1 ? BackgroundMode::darcy : BackgroundMode::reference_1d;
    c.run.run_id = name;
    return c;
}

namespace detail {

inline double fit_series(const Trajectory& tr, const std::string& q, double p, std::array<double, 2> w) {
    return fit_exponent(tr.series(q, p), w).fitted_exponent;
}

inline double apriori_slope(const Trajectory& tr, int n, std::array<double, 2> w, std::vector<AprioriDiagnostic>* keep) {
    auto m = apriori_functional(tr.rows, n);
    std::vector<std::pair<double, double>> s;
    for (const auto& d : m) s.emplace_back(d.t, d.M_value);
    if (keep) *keep = std::move(m);
    return fit_exponent(s, w).fitted_exponent;
}

inline std::string prepare_dir(const std::string& out, const std::string& name) {
    const std::string dir = (out.empty() ? std::string(".") : out) + "/" + name;
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_report_files(Report& r, const std::string& dir, const Trajectory* tr,
                               const std::vector<AprioriDiagnostic>& m) {
    if (tr) {
        write_series_csv(dir + "/series.csv", *tr);
        r.files.push_back(dir + "/series.csv");
    }
    if (!m.empty()) {
        std::ofstream os(dir + "/apriori.csv");
        os << "t,M,dominant\n";
        for (const auto& d : m) os << format_double(d.t) << ',' << format_double(d.M_value) << ',' << d.dominant << '\n';
        r.files.push_back(dir + "/apriori.csv");
    }
    {
        std::ofstream os(dir + "/report.csv");
        os << "check,value,lo,hi,pass\n";
        for (const auto& c : r.checks)
            os << c.name << ',' << format_double(c.value) << ',' << format_double(c.lo) << ',' << format_double(c.hi) << ','
               << (c.pass ? 1 : 0) << '\n';
        if (!os) throw IoError("experiment: cannot write " + dir + "/report.csv");
        r.files.push_back(dir + "/report.csv");
    }
    std::ofstream os(dir + "/summary.txt");
    os << r.summary();
    r.files.push_back(dir + "/summary.txt");
}

inline void note_coefficient_range(Report& r, const ExperimentConfig& c) {
    const double a = c.law.derivative(std::min(c.rho_minus, c.rho_plus));
    const double b = c.law.derivative(std::max(c.rho_minus, c.rho_plus));
    r.notes.push_back("P'(rho_bar) range [" + format_double(std::min(a, b)) + ", " + format_double(std::max(a, b)) + "]");
}

}  // namespace detail

/// Kernel-norm scaling checks for n = 1, 2.
inline Report green_norms_experiment(const std::string& out_dir, double mu = 1.0, double eps = 0.23) {
    Report r;
    r.name = "green-norms";
    const std::string dir = detail::prepare_dir(out_dir, r.name);
    const std::vector<double> qs{1.0, 2.0, kInf};
    for (int n : {1, 2}) {
        const auto rows = kernel_norm_table(mu, eps, n, qs, default_kernel_cases(), default_kernel_times());
        const std::string path = dir + "/green_n" + std::to_string(n) + ".csv";
        write_kernel_norm_csv(path, rows);
        r.files.push_back(path);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i > 0 && rows[i].q == rows[i - 1].q && rows[i].alpha == rows[i - 1].alpha &&
                rows[i].tderiv == rows[i - 1].tderiv)
                continue;
            const auto& row = rows[i];
            r.check_near("kernel slope n=" + std::to_string(n) + " q=" + format_p(row.q) + " alpha=" +
                             std::to_string(row.alpha) + " tderiv=" + std::to_string(row.tderiv),
                         row.fitted_slope, row.theory_slope, 0.1);
        }
    }
    detail::write_report_files(r, dir, nullptr, {});
    return r;
}

/// Checks shared by the trajectory experiments, keyed by experiment name.
inline Report evaluate_trajectory(const std::string& name, const ExperimentConfig& c, const Trajectory& tr,
                                  std::vector<AprioriDiagnostic>* m_out = nullptr) {
    Report r;
    r.name = name;
    const auto w = c.fit_window();
    const int n = c.dims;
    std::vector<AprioriDiagnostic> m;
    if (name == "decay1d") {
        for (const char* s : {"p", "m"}) {
            r.check_near(std::string("V") + s + " L2 exponent", detail::fit_series(tr, std::string("V") + s, 2.0, w),
                         theory_exponent(Quantity::V1d, 1, 2.0, 0), 0.15);
            r.check_near(std::string("M") + s + " L2 exponent", detail::fit_series(tr, std::string("M") + s, 2.0, w),
                         theory_exponent(Quantity::U1d, 1, 2.0, 0), 0.2);
        }
        r.check("M(t) slope", detail::apriori_slope(tr, 1, w, &m), -0.1, 0.1);
    } else if (name == "kdecay") {
        const auto g = window_growth(tr.series("K", 2.0), {50, 100}, {200, 400});
        r.check("K late/early slope ratio", std::abs(g.late_slope) / std::abs(g.early_slope), 2.0,
                std::numeric_limits<double>::infinity());
        r.notes.push_back("K slope [50,100] = " + format_double(g.early_slope) + ", [200,400] = " + format_double(g.late_slope));
    } else if (name == "decay2d") {
        r.check_near("Vp L2 exponent", detail::fit_series(tr, "Vp", 2.0, w), theory_exponent(Quantity::V, 2, 2.0, 0), 0.2);
        r.check_near("Vp Linf exponent", detail::fit_series(tr, "Vp", kInf, w), theory_exponent(Quantity::V, 2, kInf, 0), 0.25);
        r.check("M(t) slope", detail::apriori_slope(tr, 2, w, &m), -0.1, 0.1);
    } else if (name == "smoke3d") {
        const auto v = tr.series("Vp", 2.0);
        bool finite = tr.final_state.all_finite();
        std::size_t rises = 0, after = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            finite = finite && std::isfinite(v[i].second);
            if (i > 0 && v[i - 1].first >= 5.0) {
                ++after;
                if (!(v[i].second < v[i - 1].second)) ++rises;
            }
        }
        r.check("steps taken", static_cast<double>(tr.steps), 200, 200);
        r.check("all finite", finite ? 1.0 : 0.0, 1.0, 1.0);
        r.check("final time", tr.final_state.t, 5.0, std::numeric_limits<double>::infinity());
        r.check("samples after t=5", static_cast<double>(after), 1.0, std::numeric_limits<double>::infinity());
        r.check("non-decreasing steps after t=5", static_cast<double>(rises), 0.0, 0.0);
    } else {
        const double tol = n == 1 ? 0.15 : 0.2;
        const Quantity qv = n == 1 ? Quantity::V1d : Quantity::V;
        r.check_near("Vp L2 exponent", detail::fit_series(tr, "Vp", 2.0, w), theory_exponent(qv, n, 2.0, 0), tol);
        r.check_near("Vp Linf exponent", detail::fit_series(tr, "Vp", kInf, w), theory_exponent(qv, n, kInf, 0), tol);
        r.check("M(t) slope", detail::apriori_slope(tr, n, w, &m), -0.1, 0.1);
    }
    detail::note_coefficient_range(r, c);
    r.notes.push_back("steps " + std::to_string(tr.steps) + ", samples " + std::to_string(tr.times.size()));
    if (m_out) *m_out = std::move(m);
    return r;
}

/// Runs one named experiment. `cfg` overrides the canned configuration; name "custom"
/// requires it.
inline Report run_experiment(const std::string& name, const std::optional<ExperimentConfig>& cfg,
                             const std::string& out_dir) {
    if (name == "green-norms") return green_norms_experiment(out_dir);
    ExperimentConfig c;
    if (cfg) c = *cfg;
    else if (name == "custom") throw ConfigError("experiment 'custom' needs a config file");
    else c = canned_config(name);
    if (name == "smoke3d") {
        c.run.snapshot_stride = 1;
        if (c.run.max_steps == 0) c.run.max_steps = 200;
        c.run.max_alpha = 0;
    }
    c.run.run_id = name;
    Problem p = build_problem(c);
    const Trajectory tr = run_problem(p, c.run);
    std::vector<AprioriDiagnostic> m;
    Report r = evaluate_trajectory(name, c, tr, &m);
    detail::write_report_files(r, detail::prepare_dir(out_dir, name), &tr, m);
    return r;
}

}  // namespace bepw
