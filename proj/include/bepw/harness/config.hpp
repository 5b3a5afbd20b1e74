#pragma once

#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bepw/core/pressure.hpp"
#include "bepw/error.hpp"
#include "bepw/harness/fit.hpp"
#include "bepw/hydro/perturbation.hpp"
#include "bepw/hydro/run.hpp"

namespace bepw {

enum class ShiftType { none, constant, ridge };

struct ShiftSpec {
    ShiftType type = ShiftType::none;
    double amplitude = 0.0;
    double width = 1.0;
};

struct ExperimentConfig {
    PressureLaw law;
    double rho_minus = 0.95;
    double rho_plus = 1.05;
    int dims = 1;
    std::array<std::size_t, 3> points{1, 1, 1};
    std::array<double, 2> extent{-1.0, 1.0};
    std::array<double, 2> lengths{0.0, 0.0};
    PerturbationSpec perturbation;
    ShiftSpec shift;
    RunConfig run;
    std::optional<std::array<double, 2>> window;

    std::array<double, 2> fit_window() const { return window ? *window : default_window(run.t_end); }

    Grid grid() const {
        if (dims == 1) return Grid::line(points[0], extent[0], extent[1]);
        return Grid::channel(points, extent[0], extent[1], lengths, dims);
    }
};

namespace detail {

using nlohmann::json;

inline const json& section(const json& j, const std::string& name, bool& present) {
    static const json empty = json::object();
    present = j.contains(name);
    if (!present) return empty;
    if (!j[name].is_object()) throw ConfigError("config: '" + name + "' must be an object");
    return j[name];
}

inline void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key())) throw ConfigError("config: unknown key '" + where + (where.empty() ? "" : ".") + it.key() + "'");
}

inline double number(const json& j, const std::string& where, const char* key, std::optional<double> fallback) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError("config: missing required key '" + where + "." + key + "'");
    }
    if (!j[key].is_number()) throw ConfigError("config: '" + where + "." + key + "' must be a number");
    const double v = j[key].get<double>();
    if (!std::isfinite(v)) throw ConfigError("config: '" + where + "." + key + "' must be finite");
    return v;
}

inline std::vector<double> numbers(const json& j, const std::string& where, const char* key) {
    if (!j[key].is_array()) throw ConfigError("config: '" + where + "." + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : j[key]) {
        if (!v.is_number()) throw ConfigError("config: '" + where + "." + key + "' must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

inline std::size_t whole(double v, const std::string& what) {
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e9) throw ConfigError("config: '" + what + "' must be a positive integer");
    return static_cast<std::size_t>(v);
}

}  // namespace detail

/// Parses the experiment JSON. Every key is optional except grid.points, grid.extent and run.t_end.
inline ExperimentConfig parse_config(const nlohmann::json& j) {
    using namespace detail;
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    allow_keys(j, "", {"law", "endstates", "grid", "perturbation", "shift", "run", "fit"});
    ExperimentConfig c;
    bool has = false;

    const auto& law = section(j, "law", has);
    allow_keys(law, "law", {"kappa", "gamma"});
    c.law.kappa = number(law, "law", "kappa", 1.0);
    c.law.gamma = number(law, "law", "gamma", 2.0);

    const auto& es = section(j, "endstates", has);
    allow_keys(es, "endstates", {"rho_minus", "rho_plus"});
    c.rho_minus = number(es, "endstates", "rho_minus", 0.95);
    c.rho_plus = number(es, "endstates", "rho_plus", 1.05);

    const auto& gr = section(j, "grid", has);
    if (!has) throw ConfigError("config: missing required section 'grid'");
    allow_keys(gr, "grid", {"dims", "points", "extent", "lengths"});
    if (!gr.contains("points")) throw ConfigError("config: missing required key 'grid.points'");
    if (!gr.contains("extent")) throw ConfigError("config: missing required key 'grid.extent'");
    const auto pts = numbers(gr, "grid", "points");
    c.dims = static_cast<int>(number(gr, "grid", "dims", static_cast<double>(pts.size())));
    if (c.dims < 1 || c.dims > 3) throw ConfigError("config: 'grid.dims' must be 1, 2 or 3");
    if (pts.size() != static_cast<std::size_t>(c.dims)) throw ConfigError("config: 'grid.points' needs one entry per dimension");
    for (int a = 0; a < c.dims; ++a) c.points[a] = whole(pts[a], "grid.points");
    const auto ext = numbers(gr, "grid", "extent");
    if (ext.size() != 2 || !(ext[0] < ext[1])) throw ConfigError("config: 'grid.extent' must be [x_min, x_max] with x_min < x_max");
    c.extent = {ext[0], ext[1]};
    if (gr.contains("lengths")) {
        const auto len = numbers(gr, "grid", "lengths");
        if (len.size() != static_cast<std::size_t>(c.dims - 1))
            throw ConfigError("config: 'grid.lengths' needs one transverse length per transverse axis");
        for (std::size_t a = 0; a < len.size(); ++a) {
            if (!(len[a] > 0.0)) throw ConfigError("config: 'grid.lengths' must be positive");
            c.lengths[a] = len[a];
        }
    } else if (c.dims > 1) {
        throw ConfigError("config: missing required key 'grid.lengths' for a multi-D grid");
    }

    const auto& pe = section(j, "perturbation", has);
    allow_keys(pe, "perturbation", {"shape", "amplitude", "width", "center", "species_sign"});
    if (pe.contains("shape")) {
        if (!pe["shape"].is_string()) throw ConfigError("config: 'perturbation.shape' must be a string");
        try {
            c.perturbation.shape = parse_shape(pe["shape"].get<std::string>());
        } catch (const Error& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
    }
    c.perturbation.amplitude = number(pe, "perturbation", "amplitude", 0.0);
    c.perturbation.width = number(pe, "perturbation", "width", 1.0);
    c.perturbation.species_sign = number(pe, "perturbation", "species_sign", 1.0);
    if (pe.contains("center")) {
        const auto ctr = numbers(pe, "perturbation", "center");
        if (ctr.size() > 3) throw ConfigError("config: 'perturbation.center' has more than 3 entries");
        for (std::size_t a = 0; a < ctr.size(); ++a) c.perturbation.center[a] = ctr[a];
    }
    try {
        c.perturbation.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    const auto& sh = section(j, "shift", has);
    allow_keys(sh, "shift", {"type", "amplitude", "width"});
    if (sh.contains("type")) {
        if (!sh["type"].is_string()) throw ConfigError("config: 'shift.type' must be a string");
        const auto t = sh["type"].get<std::string>();
        if (t == "none") c.shift.type = ShiftType::none;
        else if (t == "constant") c.shift.type = ShiftType::constant;
        else if (t == "ridge") c.shift.type = ShiftType::ridge;
        else throw ConfigError("config: 'shift.type' must be none, constant or ridge");
    }
    c.shift.amplitude = number(sh, "shift", "amplitude", 0.0);
    c.shift.width = number(sh, "shift", "width", 1.0);
    if (!(c.shift.width > 0.0)) throw ConfigError("config: 'shift.width' must be positive");

    const auto& rn = section(j, "run", has);
    if (!has) throw ConfigError("config: missing required section 'run'");
    allow_keys(rn, "run", {"cfl", "t_end", "snapshot_stride"});
    c.run.cfl = number(rn, "run", "cfl", 0.4);
    c.run.t_end = number(rn, "run", "t_end", std::nullopt);
    c.run.snapshot_stride = whole(number(rn, "run", "snapshot_stride", 10.0), "run.snapshot_stride");
    c.run.background = c.dims == 1 ? BackgroundMode::darcy : BackgroundMode::reference_1d;
    c.run.validate();

    const auto& ft = section(j, "fit", has);
    allow_keys(ft, "fit", {"window"});
    if (ft.contains("window")) {
        const auto w = numbers(ft, "fit", "window");
        if (w.size() != 2 || !(w[0] < w[1])) throw ConfigError("config: 'fit.window' must be [lo, hi] with lo < hi");
        c.window = std::array<double, 2>{w[0], w[1]};
    }
    try {
        c.law.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!(c.rho_minus > 0.0) || !(c.rho_plus > 0.0)) throw ConfigError("config: end states must be positive");
    return c;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("config: cannot open " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace bepw
