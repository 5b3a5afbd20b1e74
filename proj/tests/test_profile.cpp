#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "bepw/profile/background.hpp"
#include "bepw/profile/profile.hpp"
#include "bepw/profile/shift.hpp"

using namespace bepw;
using Catch::Approx;

namespace {

// Shooting on y = P'(W) W' from zeta = -L: W' = y / P'(W), y' = -zeta y / (2 P'(W)).
struct ShotResult {
    double w_end;
    double w_mid;
};

ShotResult shoot(const PressureLaw& law, double rho_m, double L, double log_s, int steps) {
    const double h = 2.0 * L / steps;
    double z = -L, w = rho_m, y = std::exp(log_s), w_mid = rho_m;
    auto rhs = [&](double zz, double ww, double yy, double& dw, double& dy) {
        const double p1 = law.derivative(ww);
        dw = yy / p1;
        dy = -0.5 * zz * yy / p1;
    };
    for (int s = 0; s < steps; ++s) {
        double k1w, k1y, k2w, k2y, k3w, k3y, k4w, k4y;
        rhs(z, w, y, k1w, k1y);
        rhs(z + h / 2, w + h / 2 * k1w, y + h / 2 * k1y, k2w, k2y);
        rhs(z + h / 2, w + h / 2 * k2w, y + h / 2 * k2y, k3w, k3y);
        rhs(z + h, w + h * k3w, y + h * k3y, k4w, k4y);
        w += h / 6 * (k1w + 2 * k2w + 2 * k3w + k4w);
        y += h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
        z = -L + (s + 1) * h;
        if (s + 1 == steps / 2) w_mid = w;
    }
    return {w, w_mid};
}

double shooting_w0(const PressureLaw& law, double rho_m, double rho_p, double L) {
    double lo = -200.0, hi = 5.0;
    const int steps = 40000;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (shoot(law, rho_m, L, mid, steps).w_end < rho_p) lo = mid; else hi = mid;
    }
    return shoot(law, rho_m, L, 0.5 * (lo + hi), steps).w_mid;
}

int sign_changes(const std::vector<double>& v) {
    int c = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if ((v[i] > 0) != (v[i - 1] > 0)) ++c;
    return c;
}

}  // namespace

TEST_CASE("constant end states give the constant profile", "[profile]") {
    const auto p = solve_profile(PressureLaw{}, 1.0, 1.0);
    for (double w : p.W) REQUIRE(w == 1.0);
    for (double d : p.dW) REQUIRE(d == 0.0);
    REQUIRE(p.residual == 0.0);
    const std::vector<double> x{-3.0, 0.0, 7.0};
    for (double v : eval_wave(p, x, 2.0)) REQUIRE(v == 1.0);
    for (double v : darcy_momentum(p, x, 2.0)) REQUIRE(v == 0.0);
}

TEST_CASE("profile matches an independent shooting integration", "[profile]") {
    const PressureLaw law{1.0, 2.0};
    const auto p = solve_profile(law, 0.95, 1.05, 20.0, 2001);
    const double w0_fd = p.W[1000];
    REQUIRE(p.zeta[1000] == Approx(0.0).margin(1e-12));
    const double w0_shot = shooting_w0(law, 0.95, 1.05, 20.0);
    CHECK(std::abs(w0_fd - w0_shot) <= 1e-6);
    CHECK(p.residual <= 1e-8);
}

TEST_CASE("profile invariants", "[profile]") {
    for (auto [rm, rp] : {std::pair{0.95, 1.05}, std::pair{1.1, 0.9}, std::pair{0.5, 0.7}}) {
        const auto p = solve_profile(PressureLaw{}, rm, rp);
        const double jump = std::abs(rp - rm);
        CHECK(std::abs(p.W.front() - rm) <= 1e-10 * jump);
        CHECK(std::abs(p.W.back() - rp) <= 1e-10 * jump);
        CHECK(p.residual <= 1e-8);
        const double sgn = rp > rm ? 1.0 : -1.0;
        std::vector<double> interior(p.dW.begin() + 1, p.dW.end() - 1);
        // far tails are below roundoff; the sign must hold where the slope is resolved
        std::vector<double> resolved;
        for (std::size_t i = 0; i < p.W.size(); ++i)
            if (std::abs(p.dW[i]) > 1e-14) resolved.push_back(p.dW[i] * sgn);
        CHECK(sign_changes(resolved) == 0);
        CHECK(resolved.front() > 0.0);
        for (std::size_t i = 1; i < p.W.size(); ++i) CHECK(sgn * (p.W[i] - p.W[i - 1]) >= -1e-15);

        // slope samples agree with a direct finite difference of W where it is resolved
        const double h = p.spacing();
        for (std::size_t i = 2; i + 2 < p.W.size(); ++i) {
            const double fd = (p.W[i - 2] - 8 * p.W[i - 1] + 8 * p.W[i + 1] - p.W[i + 2]) / (12 * h);
            CHECK(std::abs(fd - p.dW[i]) <= 1e-9 * jump);
        }

        double tail = 0.0;
        for (std::size_t i = 0; i < p.W.size(); ++i)
            if (std::abs(p.zeta[i]) > 10.0)
                tail = std::max(tail, std::min(std::abs(p.W[i] - rp), std::abs(p.W[i] - rm)));
        CHECK(tail <= 1e-6 * jump);
    }
}

TEST_CASE("discrete truncation residual is fourth order", "[profile]") {
    const PressureLaw law{};
    const auto ref = solve_profile(law, 0.9, 1.1, 20.0, 6401);
    std::vector<double> res;
    for (std::size_t n : {101u, 201u, 401u}) {
        const double h = 40.0 / static_cast<double>(n - 1);
        std::vector<double> z(n), w(n);
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = -20.0 + static_cast<double>(i) * h;
            w[i] = ref.W[i * (6400 / (n - 1))];
        }
        res.push_back(detail::max_abs(detail::profile_residual(law, z, w, h)));
    }
    CHECK(res[0] / res[1] >= 8.0);
    CHECK(res[1] / res[2] >= 8.0);
}

TEST_CASE("newton reports non-convergence and bad input", "[profile]") {
    CHECK_THROWS_AS(solve_profile(PressureLaw{}, -1.0, 1.0), DomainError);
    CHECK_THROWS_AS(solve_profile(PressureLaw{}, 1.0, 1.0, -2.0), ParameterError);
}

TEST_CASE("wave evaluation identities", "[profile]") {
    const auto p = solve_profile(PressureLaw{}, 0.95, 1.05);
    std::vector<double> x;
    for (int i = -40; i <= 40; ++i) x.push_back(0.37 * i);
    const auto w0 = eval_wave(p, x, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(w0[i] == Approx(p.value(x[i])).margin(0));

    const double t = 3.0, s = std::sqrt(1.0 + t);
    std::vector<double> xs;
    for (double v : x) xs.push_back(v / s);
    const auto a = eval_wave(p, x, t), b = eval_wave(p, xs, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-9);
    CHECK_THROWS_AS(eval_wave(p, x, -1.0), ParameterError);

    // nodal values are reproduced exactly
    const std::vector<double> nodes(p.zeta.begin(), p.zeta.end());
    const auto wn = eval_wave(p, nodes, 0.0);
    for (std::size_t i = 0; i < nodes.size(); ++i) CHECK(std::abs(wn[i] - p.W[i]) <= 1e-14);
}

TEST_CASE("darcy momentum sign and scaling", "[profile]") {
    const auto p = solve_profile(PressureLaw{}, 0.95, 1.05);
    std::vector<double> x;
    for (int i = -100; i <= 100; ++i) x.push_back(0.2 * i);
    for (double m : darcy_momentum(p, x, 0.0)) CHECK(m <= 0.0);

    const double t = 5.0, s = std::sqrt(1.0 + t);
    std::vector<double> xs;
    for (double v : x) xs.push_back(v * s);
    const auto a = darcy_momentum(p, xs, t), b = darcy_momentum(p, x, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(a[i] - b[i] / s) <= 1e-8);

    // chain rule against the profile derivative samples at the nodes
    for (std::size_t i = 0; i < p.zeta.size(); i += 50)
        CHECK(darcy_momentum_at(p, p.zeta[i], 0.0) ==
              Approx(-p.law.derivative(p.W[i]) * p.dW[i]).margin(1e-14));
}

TEST_CASE("profile csv export", "[profile]") {
    const auto p = solve_profile(PressureLaw{}, 0.95, 1.05, 20.0, 201);
    std::ostringstream os;
    write_profile_csv(os, p);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "zeta,W,dW");
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        const auto c1 = line.find(','), c2 = line.rfind(',');
        REQUIRE(c1 != c2);
        CHECK(std::stod(line.substr(c1 + 1, c2 - c1 - 1)) == p.W[rows]);
        ++rows;
    }
    CHECK(rows == p.W.size());
}

TEST_CASE("delta0 translation identities", "[profile]") {
    const auto p = solve_profile(PressureLaw{}, 0.95, 1.05);
    const auto g = Grid::channel({512, 16, 1}, -60.0, 60.0, {8.0, 8.0}, 2);
    for (double c : {0.0, 0.5, -1.25, 2.0}) {
        const auto rho = ScalarField::sample(g, [&](double x, double, double) { return p.value(x + c); });
        const auto s = compute_delta0(rho, p);
        for (double d : s.delta0) CHECK(std::abs(d - c) <= 1e-8);
        CHECK(std::abs(s.delta_star - c) <= 1e-8);
    }
}

TEST_CASE("delta0 of a localized bump", "[profile]") {
    const auto p = solve_profile(PressureLaw{}, 0.95, 1.05);
    const auto g = Grid::channel({512, 64, 1}, -40.0, 40.0, {16.0, 8.0}, 2);
    const double L2 = 16.0;
    auto amp = [&](double y) { return 0.01 * std::exp(-y * y); };
    const auto rho = ScalarField::sample(g, [&](double x, double y, double) {
        return p.value(x) + amp(y) * std::exp(-x * x);
    });
    const auto s = compute_delta0(rho, p);
    for (std::size_t j = 0; j < g.points[1]; ++j) {
        const double A = amp(g.coord(1, j)) * std::sqrt(M_PI);
        CHECK(std::abs(s.delta0[j] - A / 0.1) <= 1e-8);
    }
    // far-field: delta0 approaches delta* at the transverse edge
    CHECK(std::abs(s.delta0[0] - s.delta_star) <= 1e-8);
    CHECK(std::abs(edge_average(s.delta0, g) - s.delta_star) <= 1e-15);
    const auto sm = compute_delta0(rho, p, ShiftReference::transverse_mean);
    CHECK(sm.delta_star == Approx(0.01 * std::sqrt(M_PI) * std::sqrt(M_PI) / L2 / 0.1).epsilon(1e-8));
}

TEST_CASE("delta0 errors", "[profile]") {
    const auto flat = solve_profile(PressureLaw{}, 1.0, 1.0);
    const auto g = Grid::channel({64, 8, 1}, -10.0, 10.0, {8.0, 8.0}, 2);
    const ScalarField one(g, 1.0);
    CHECK_THROWS_AS(compute_delta0(one, flat), ParameterError);
    const auto p = solve_profile(PressureLaw{}, 0.95, 1.05);
    const ScalarField bad(g, 1.2);
    CHECK_THROWS_AS(compute_delta0(bad, p), DomainError);
}

TEST_CASE("shift evolution", "[profile]") {
    ShiftField s{{0.3, -0.2, 0.0, 1.0}, 0.1};
    const auto s0 = shift_at(s, 0.0);
    for (std::size_t i = 0; i < 4; ++i) CHECK(s0[i] == s.delta0[i]);
    const auto s50 = shift_at(s, 50.0);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(s50[i] - 0.1) <= std::exp(-50.0) * 0.9 * (1 + 1e-12));
    ShiftField flat{{0.4, 0.4}, 0.4};
    for (double t : {0.0, 1.0, 10.0})
        for (double v : shift_at(flat, t)) CHECK(v == Approx(0.4).margin(1e-15));

    for (double t1 : {0.0, 0.7, 3.0})
        for (double t2 : {0.1, 2.5}) {
            const auto a = shift_at(s, t1 + t2), b = shift_at(s, t1);
            for (std::size_t i = 0; i < 4; ++i)
                CHECK(std::abs((a[i] - s.delta_star) - std::exp(-t2) * (b[i] - s.delta_star)) <= 1e-12);
        }
}

TEST_CASE("background sampling", "[profile]") {
    const auto p = solve_profile(PressureLaw{}, 0.95, 1.05);
    const auto g = Grid::channel({256, 16, 1}, -30.0, 30.0, {8.0, 8.0}, 2);
    const auto bg0 = sample_background(p, zero_shift(g), g, 0.0);
    const std::size_t n1 = g.points[0];
    for (std::size_t j = 0; j < g.points[1]; ++j)
        for (std::size_t i = 0; i < n1; ++i) CHECK(bg0.rho[j * n1 + i] == bg0.rho[i]);
    for (std::size_t i = 0; i < n1; ++i) CHECK(bg0.rho[i] == p.value(g.coord(0, i)));

    ShiftField c{std::vector<double>(g.lines(), 0.75), 0.75};
    const auto bgc = sample_background(p, c, g, 2.0);
    const double s = std::sqrt(3.0);
    for (std::size_t i = 0; i < n1; ++i) {
        CHECK(std::abs(bgc.rho[i] - p.value((g.coord(0, i) + 0.75) / s)) <= 1e-14);
        const double m = darcy_momentum_at(p, g.coord(0, i) + 0.75, 2.0);
        CHECK(std::abs(bgc.u[0][i] * bgc.rho[i] - m) <= 1e-14);
        CHECK(bgc.u[1][i] == 0.0);
    }

    // a varying delta0 acts as a per-line translation
    ShiftField v;
    for (std::size_t j = 0; j < g.points[1]; ++j) v.delta0.push_back(std::sin(0.3 * j));
    v.delta_star = 0.0;
    const double t = 0.5;
    const auto d = shift_at(v, t);
    const auto bgv = sample_background(p, v, g, t);
    for (std::size_t j = 0; j < g.points[1]; ++j) {
        std::vector<double> x;
        for (std::size_t i = 0; i < n1; ++i) x.push_back(g.coord(0, i) + d[j]);
        const auto ref = eval_wave(p, x, t);
        for (std::size_t i = 0; i < n1; ++i) CHECK(std::abs(bgv.rho[j * n1 + i] - ref[i]) <= 1e-14);
    }
    CHECK_THROWS_AS(sample_background(p, ShiftField{{0.0}, 0.0}, g, 0.0), ParameterError);
}
