#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bepw/core/derivative.hpp"
#include "bepw/core/interp.hpp"
#include "bepw/core/norms.hpp"
#include "bepw/core/snapshot.hpp"
#include "bepw/hydro/init.hpp"
#include "bepw/hydro/scheme.hpp"

namespace bepw {

enum class BackgroundMode {
    darcy,         ///< shifted W with Darcy momentum
    reference_1d,  ///< concurrently advanced 1D solution mapped through the shift
};

inline std::string background_name(BackgroundMode m) { return m == BackgroundMode::darcy ? "darcy" : "reference_1d"; }

struct RunConfig {
    double cfl = 0.4;
    double t_end = 1.0;
    std::size_t snapshot_stride = 10;
    BackgroundMode background = BackgroundMode::darcy;
    std::string run_id = "run";
    std::string out_dir;  ///< snapshots are written below it when non-empty
    bool write_snapshots = false;
    int max_alpha = 2;
    std::size_t max_steps = 0;  ///< stop after this many steps when nonzero

    void validate() const {
        if (!(cfl > 0.0 && cfl <= 0.9)) throw ConfigError("run: cfl must lie in (0, 0.9]");
        if (!(t_end > 0.0)) throw ConfigError("run: t_end must be positive");
        if (snapshot_stride == 0) throw ConfigError("run: snapshot_stride must be positive");
        if (max_alpha < 0 || max_alpha > 2) throw ConfigError("run: max_alpha must be 0, 1 or 2");
    }
};

struct SeriesRow {
    double t;
    std::string quantity;
    double p;
    int alpha;
    double value;
};

struct Trajectory {
    std::vector<SeriesRow> rows;
    std::vector<double> times;
    std::vector<std::size_t> sample_steps;
    std::vector<double> outflow_p, outflow_m;  ///< accumulated boundary outflow at each sample
    std::size_t steps = 0;
    std::map<std::string, std::string> metadata;
    FluidState final_state;

    /// (t, value) pairs of one recorded quantity.
    std::vector<std::pair<double, double>> series(const std::string& quantity, double p, int alpha = 0) const {
        std::vector<std::pair<double, double>> out;
        for (const auto& r : rows)
            if (r.quantity == quantity && r.p == p && r.alpha == alpha) out.emplace_back(r.t, r.value);
        return out;
    }
};

inline std::string format_p(double p) { return std::isinf(p) ? "inf" : format_double(p); }

inline void write_series_csv(std::ostream& os, const Trajectory& tr) {
    os << "t,quantity,p,alpha,value\n";
    for (const auto& r : tr.rows)
        os << format_double(r.t) << ',' << r.quantity << ',' << format_p(r.p) << ',' << r.alpha << ','
           << format_double(r.value) << '\n';
}

inline void write_series_csv(const std::string& path, const Trajectory& tr) {
    std::filesystem::path pth(path);
    if (pth.has_parent_path()) std::filesystem::create_directories(pth.parent_path());
    std::ofstream os(path);
    if (!os) throw IoError("run: cannot open " + path);
    write_series_csv(os, tr);
}

/// Reads the rows written by write_series_csv.
inline std::vector<SeriesRow> read_series_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "t,quantity,p,alpha,value")
        throw IoError("series: expected header 't,quantity,p,alpha,value'");
    std::vector<SeriesRow> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (f.size() != 5) throw IoError("series: line " + std::to_string(lineno) + " does not have 5 fields");
        try {
            rows.push_back({std::stod(f[0]), f[1], f[2] == "inf" ? kInf : std::stod(f[2]), std::stoi(f[3]), std::stod(f[4])});
        } catch (const std::logic_error&) {
            throw IoError("series: malformed number on line " + std::to_string(lineno));
        }
    }
    return rows;
}

inline std::vector<SeriesRow> read_series_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("series: cannot open " + path);
    return read_series_csv(is);
}

/// Background fields for one species at time t.
struct SpeciesBackground {
    ScalarField rho;
    ScalarField u1;
};

struct BackgroundSample {
    SpeciesBackground plus, minus;
    ScalarField sigma;  ///< background species mean
    ScalarField K;      ///< background charge separation
    ScalarField E1;  ///< background field along x1
};

namespace detail {

inline std::string step_tag(std::size_t step) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%08zu", step);
    return buf;
}

// All |beta| = order derivatives of f.
inline std::vector<ScalarField> derivatives_of_order(const ScalarField& f, int order) {
    const int dims = f.grid().dims;
    std::vector<ScalarField> out;
    if (order == 0) {
        out.push_back(f);
    } else if (order == 1) {
        for (int d = 0; d < dims; ++d) out.push_back(derivative(f, d, 1));
    } else {
        for (int d = 0; d < dims; ++d) {
            out.push_back(derivative(f, d, 2));
            if (d + 1 < dims) {
                const auto fd = derivative(f, d, 1);
                for (int e = d + 1; e < dims; ++e) out.push_back(derivative(fd, e, 1));
            }
        }
    }
    return out;
}

// Combined norm of a family: l2 over members for finite p, max for p = inf.
inline double family_norm(const std::vector<ScalarField>& fam, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& f : fam) m = std::max(m, f.max_abs());
        return m;
    }
    if (fam.size() == 1) return lp_norm(fam[0], p);
    if (p == 2.0) {
        double s = 0.0;
        for (const auto& f : fam) s += std::pow(lp_norm(f, 2.0), 2);
        return std::sqrt(s);
    }
    // pointwise Euclidean magnitude of the family
    ScalarField mag(fam[0].grid(), 0.0);
    for (const auto& f : fam)
        for (std::size_t n = 0; n < mag.size(); ++n) mag[n] += f[n] * f[n];
    for (auto& v : mag.data()) v = std::sqrt(v);
    return lp_norm(mag, p);
}

}  // namespace detail

/// Everything one snapshot observer may want.
struct SampleView {
    std::size_t step;
    double t;
    const FluidState& state;
    const BackgroundSample& background;
    const VectorField& grad_phi;
};

using Observer = std::function<void(const SampleView&)>;

/// Drives one trajectory: adaptive CFL steps to t_end, norms of (V, U, K, grad phi) against the
/// configured background every `snapshot_stride` steps (and at step 0).
class Run {
public:
    Run(FluidState state, DiffusionProfile prof, ShiftField shift, RunConfig cfg,
        std::optional<FluidState> reference = std::nullopt)
        : state_(std::move(state)),
          prof_(std::move(prof)),
          shift_(std::move(shift)),
          cfg_(std::move(cfg)),
          solver_(state_.grid(), state_.law, FarField{prof_, shift_}, cfg_.cfl) {
        cfg_.validate();
        if (cfg_.background == BackgroundMode::reference_1d) {
            const Grid& g = state_.grid();
            if (!reference) throw ParameterError("run: reference_1d background needs the 1D initial data");
            if (reference->grid().dims != 1 || reference->grid().points[0] != g.points[0])
                throw ParameterError("run: reference grid must be the x1 line of the run grid");
            reference_ = std::move(reference);
            ref_solver_.emplace(reference_->grid(), state_.law, FarField{prof_, zero_shift(reference_->grid())}, cfg_.cfl);
        }
    }

    const FluidState& state() const { return state_; }
    const EulerPoisson& solver() const { return solver_; }

    Trajectory execute(const Observer& observer = {}) {
        Trajectory tr;
        const Grid& g = state_.grid();
        tr.metadata["background"] = background_name(cfg_.background);
        tr.metadata["dims"] = std::to_string(g.dims);
        tr.metadata["run_id"] = cfg_.run_id;
        tr.metadata["cfl"] = format_double(cfg_.cfl);
        std::size_t step = 0;
        sample(tr, step, observer);
        while (state_.t < cfg_.t_end * (1.0 - 1e-14)) {
            double dt = solver_.max_dt(state_, cfg_.cfl);
            if (ref_solver_) dt = std::min(dt, ref_solver_->max_dt(*reference_, cfg_.cfl));
            const double remaining = cfg_.t_end - state_.t;
            if (dt >= remaining) dt = remaining;
            solver_.step(state_, dt);
            if (ref_solver_) {
                ref_solver_->step(*reference_, dt);
                reference_->t = state_.t;
            }
            ++step;
            const bool last = cfg_.max_steps > 0 && step >= cfg_.max_steps;
            if (step % cfg_.snapshot_stride == 0) sample(tr, step, observer);
            if (last) break;
        }
        tr.steps = step;
        tr.final_state = state_;
        return tr;
    }

    /// Background at the current time.
    BackgroundSample background() const {
        const Grid& g = state_.grid();
        const std::size_t n1 = g.points[0];
        const double t = state_.t;
        const auto delta = shift_at(shift_, t);
        BackgroundSample bg{{ScalarField(g), ScalarField(g)}, {ScalarField(g), ScalarField(g)}, ScalarField(g),
                            ScalarField(g, 0.0), ScalarField(g, 0.0)};
        if (cfg_.background == BackgroundMode::darcy) {
            const FarField ff{prof_, shift_};
            for (std::size_t l = 0; l < g.lines(); ++l)
                for (std::size_t i = 0; i < n1; ++i) {
                    double rho = 0.0, m = 0.0;
                    ff.state(g.coord(0, i), delta[l], t, rho, m);
                    const std::size_t n = l * n1 + i;
                    bg.plus.rho[n] = bg.minus.rho[n] = bg.sigma[n] = rho;
                    bg.plus.u1[n] = bg.minus.u1[n] = m / rho;
                }
            return bg;
        }
        const FluidState& r = *reference_;
        const auto Er = solve_E_1d(r.K);
        const double x0 = g.coord(0, 0), h = g.spacing(0);
        const auto span_of = [](const ScalarField& f) { return std::span<const double>(f.values()); };
        const FarField ff{prof_, zero_shift(r.grid())};
        for (std::size_t l = 0; l < g.lines(); ++l)
            for (std::size_t i = 0; i < n1; ++i) {
                const double x = g.coord(0, i) + delta[l];
                double rho_far = 0.0, m_far = 0.0;
                ff.state(x, 0.0, t, rho_far, m_far);
                const double sg = lagrange4(span_of(r.sigma), x0, h, x, rho_far);
                const double k = lagrange4(span_of(r.K), x0, h, x, 0.0);
                const double mb = lagrange4(span_of(r.mbar[0]), x0, h, x, m_far);
                const double q = lagrange4(span_of(r.q[0]), x0, h, x, 0.0);
                const std::size_t n = l * n1 + i;
                bg.plus.rho[n] = sg + 0.5 * k;
                bg.minus.rho[n] = sg - 0.5 * k;
                bg.plus.u1[n] = (mb + 0.5 * q) / bg.plus.rho[n];
                bg.minus.u1[n] = (mb - 0.5 * q) / bg.minus.rho[n];
                bg.sigma[n] = sg;
                bg.K[n] = k;
                bg.E1[n] = lagrange4(span_of(Er), x0, h, x, Er[n1 - 1]);
            }
        return bg;
    }

private:
    FluidState state_;
    DiffusionProfile prof_;
    ShiftField shift_;
    RunConfig cfg_;
    EulerPoisson solver_;
    std::optional<FluidState> reference_;
    std::optional<EulerPoisson> ref_solver_;

    void sample(Trajectory& tr, std::size_t step, const Observer& observer) {
        const Grid& g = state_.grid();
        const double t = state_.t;
        const auto bg = background();
        const auto gphi = solver_.field(state_);
        auto row = [&](const std::string& qn, double p, int a, double v) { tr.rows.push_back({t, qn, p, a, v}); };
        const std::array<double, 3> ps{1.0, 2.0, kInf};

        for (int sign : {+1, -1}) {
            const SpeciesBackground& sb = sign > 0 ? bg.plus : bg.minus;
            const auto rho = state_.rho(sign);
            const auto mom = state_.mom(sign);
            ScalarField V(g), M(g);
            VectorField U(g);
            for (std::size_t n = 0; n < g.size(); ++n) {
                V[n] = (state_.sigma[n] - bg.sigma[n]) + (sign > 0 ? 0.5 : -0.5) * (state_.K[n] - bg.K[n]);
                M[n] = mom[0][n] - sb.rho[n] * sb.u1[n];
                for (int d = 0; d < g.dims; ++d) {
                    const double u = mom[d][n] / rho[n];
                    U[d][n] = d == 0 ? u - sb.u1[n] : u;
                }
            }
            const std::string vn = sign > 0 ? "Vp" : "Vm", un = sign > 0 ? "Up" : "Um";
            for (int a = 0; a <= cfg_.max_alpha; ++a) {
                const auto fv = detail::derivatives_of_order(V, a);
                std::vector<ScalarField> fu;
                for (int d = 0; d < g.dims; ++d)
                    for (auto& f : detail::derivatives_of_order(U[d], a)) fu.push_back(std::move(f));
                for (double p : ps) {
                    if (a > 0 && p == 1.0) continue;
                    row(vn, p, a, detail::family_norm(fv, p));
                    row(un, p, a, detail::family_norm(fu, p));
                }
            }
            // x1 momentum against the background, rho u + P(W)_x1 in Darcy mode
            row(sign > 0 ? "Mp" : "Mm", 2.0, 0, lp_norm(M, 2.0));
            row(sign > 0 ? "Mp" : "Mm", kInf, 0, M.max_abs());
            row(sign > 0 ? "mass_p" : "mass_m", 1.0, 0, integral(rho));
            if (cfg_.write_snapshots && !cfg_.out_dir.empty()) {
                const std::string dir = cfg_.out_dir + "/" + cfg_.run_id + "/";
                write_snapshot(dir + (sign > 0 ? "rho_p_" : "rho_m_") + detail::step_tag(step) + ".bepw", rho);
                write_snapshot(dir + vn + "_" + detail::step_tag(step) + ".bepw", V);
            }
        }
        ScalarField Kv(g);
        for (std::size_t n = 0; n < g.size(); ++n) Kv[n] = state_.K[n] - bg.K[n];
        row("K", 2.0, 0, lp_norm(Kv, 2.0));
        row("K", kInf, 0, Kv.max_abs());
        if (cfg_.max_alpha >= 1) row("K", 2.0, 1, detail::family_norm(detail::derivatives_of_order(Kv, 1), 2.0));
        std::vector<ScalarField> pert;
        for (int d = 0; d < g.dims; ++d) {
            ScalarField c = gphi[d];
            if (d == 0) c -= bg.E1;
            pert.push_back(std::move(c));
        }
        row("gradphi", 6.0, 0, detail::family_norm(pert, 6.0));
        row("gradphi", 2.0, 0, detail::family_norm(pert, 2.0));
        if (cfg_.write_snapshots && !cfg_.out_dir.empty())
            write_snapshot(cfg_.out_dir + "/" + cfg_.run_id + "/K_" + detail::step_tag(step) + ".bepw", Kv);

        tr.times.push_back(t);
        tr.sample_steps.push_back(step);
        tr.outflow_p.push_back(solver_.outflow(+1));
        tr.outflow_m.push_back(solver_.outflow(-1));
        if (observer) observer(SampleView{step, t, state_, bg, gphi});
    }
};

}  // namespace bepw
