#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <random>

#include "bepw/core/derivative.hpp"
#include "bepw/core/filter.hpp"
#include "bepw/core/norms.hpp"
#include "bepw/core/pressure.hpp"
#include "bepw/core/snapshot.hpp"

using namespace bepw;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("pressure law evaluations", "[core][pressure]") {
    const PressureLaw law{1.0, 2.0};
    CHECK(pressure(law, 1.0) == 1.0);
    CHECK(pressure(law, 2.0) == 4.0);
    for (double rho : {0.5, 1.0, 1.5}) CHECK(law.derivative(rho) > 0.0);

    const Grid g = Grid::line(16, -1.0, 1.0);
    auto rho = ScalarField::sample(g, [](double x, double, double) { return 1.0 + 0.1 * x; });
    auto p = pressure(law, rho);
    CHECK_THAT(p[3], WithinRel(std::pow(rho[3], 2.0), 1e-15));
    rho[7] = -0.1;
    CHECK_THROWS_WITH(pressure(law, rho), Catch::Matchers::ContainsSubstring("node 7"));
}

TEST_CASE("pressure difference keeps precision for tiny separations", "[core][pressure]") {
    const PressureLaw law{1.3, 1.4};
    const double mid = 1.02;
    for (double d : {1e-2, 1e-5, 1e-40, -3e-120}) {
        const double ref = d > 1e-4 ? law.pressure(mid + d / 2) - law.pressure(mid - d / 2) : law.derivative(mid) * d;
        CHECK_THAT(law.difference(mid, d), WithinRel(ref, 1e-9));
    }
    CHECK(law.difference(mid, 0.0) == 0.0);
}

TEST_CASE("grid spacing and power-of-two periodic axes", "[core][grid]") {
    const Grid g = Grid::channel({100, 64, 1}, -5.0, 5.0, {40.0, 0.0});
    CHECK(g.dims == 2);
    CHECK_THAT(g.spacing(0), WithinRel(0.1, 1e-15));
    CHECK_THAT(g.spacing(1), WithinRel(40.0 / 64.0, 1e-15));
    CHECK_THAT(g.coord(0, 0), WithinRel(-4.95, 1e-14));
    CHECK_THAT(g.coord(1, 0), WithinRel(-20.0, 1e-15));
    CHECK(g.size() == 6400);
    CHECK_THROWS_AS(Grid::channel({100, 60, 1}, -5.0, 5.0, {40.0, 0.0}), ParameterError);
}

TEST_CASE("lp norms", "[core][norms]") {
    const Grid g = Grid::line(200, -1.0, 1.0);
    const double h = g.spacing(0);
    CHECK(lp_norm(ScalarField(g), 2.0) == 0.0);

    ScalarField ind(g);
    ind[17] = 1.0;
    for (double p : {1.0, 2.0, 3.5}) CHECK_THAT(lp_norm(ind, p), WithinRel(std::pow(h, 1.0 / p), 1e-13));
    CHECK(lp_norm(ind, kInf) == 1.0);
    CHECK_THROWS_AS(lp_norm(ind, 0.5), ParameterError);

    // int exp(-x^2/s^2) dx = s sqrt(pi)  (1D),  = pi s^2 (2D)
    const double s = 1.3;
    const Grid fine = Grid::line(4000, -20.0, 20.0);
    auto gauss = ScalarField::sample(fine, [&](double x, double, double) { return std::exp(-x * x / (2 * s * s)); });
    CHECK_THAT(lp_norm(gauss, 2.0), WithinAbs(std::sqrt(s * std::sqrt(M_PI)), 1e-8));
    const Grid plane = Grid::periodic(2, 256, 40.0);
    auto gauss2 = ScalarField::sample(plane, [&](double x, double y, double) { return std::exp(-(x * x + y * y) / (2 * s * s)); });
    CHECK_THAT(lp_norm(gauss2, 2.0), WithinAbs(std::sqrt(M_PI) * s, 1e-8));
}

TEST_CASE("lp norm is log-convex in 1/p on a probability-normalised field", "[core][norms][property]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Grid g = Grid::periodic(2, 32, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        ScalarField f(g);
        for (auto& v : f.data()) v = std::pow(u(rng), 3.0);
        f *= 1.0 / integral(f);
        const double inv_p[4] = {1.0, 0.5, 0.25, 0.0};
        double logn[4];
        for (int i = 0; i < 4; ++i) logn[i] = std::log(lp_norm(f, inv_p[i] == 0.0 ? kInf : 1.0 / inv_p[i]));
        for (int i = 1; i < 3; ++i) {
            const double theta = (inv_p[i - 1] - inv_p[i]) / (inv_p[i - 1] - inv_p[i + 1]);
            CHECK(logn[i] <= (1 - theta) * logn[i - 1] + theta * logn[i + 1] + 1e-12);
        }
    }
}

TEST_CASE("spectral and finite-difference derivatives", "[core][derivative]") {
    const double L = 7.0;
    const Grid per = Grid::periodic(1, 64, L);
    const double k = 2 * M_PI / L;
    auto s = ScalarField::sample(per, [&](double x, double, double) { return std::sin(k * x); });
    auto ds = derivative(s, 0, 1);
    for (std::size_t i = 0; i < per.points[0]; ++i) CHECK_THAT(ds[i], WithinAbs(k * std::cos(k * per.coord(0, i)), 1e-10));

    const Grid chan = Grid::channel({40, 16, 1}, -2.0, 3.0, {L, 0.0});
    auto c = ScalarField(chan, 2.5);
    CHECK(derivative(c, 0, 1).max_abs() < 1e-12);
    CHECK(derivative(c, 1, 1).max_abs() < 1e-12);
    CHECK(derivative(c, 0, 2).max_abs() < 1e-10);
    CHECK_THROWS_AS(derivative(c, 2, 1), ParameterError);

    // cubic: every 4th-order stencil (closures included) is exact.
    auto cube = ScalarField::sample(chan, [](double x, double, double) { return x * x * x; });
    auto d1 = derivative(cube, 0, 1), d2 = derivative(cube, 0, 2);
    for (std::size_t i = 0; i < chan.points[0]; ++i) {
        const double x = chan.coord(0, i);
        CHECK_THAT(d1.at(i, 5), WithinAbs(3 * x * x, 1e-10));
        CHECK_THAT(d2.at(i, 5), WithinAbs(6 * x, 1e-8));
    }
    // quintic: the centred stencil error is exactly -(h^4/30) f^(5) = -4 h^4.
    const double h = chan.spacing(0);
    auto q = ScalarField::sample(chan, [](double x, double, double) { return std::pow(x, 5); });
    auto dq = derivative(q, 0, 1);
    for (std::size_t i = 2; i + 2 < chan.points[0]; ++i) {
        const double x = chan.coord(0, i);
        CHECK_THAT(dq.at(i) - 5 * std::pow(x, 4), WithinAbs(-4 * std::pow(h, 4), 1e-9));
    }
}

TEST_CASE("first derivative twice agrees with the second derivative", "[core][derivative][property]") {
    const Grid g = Grid::channel({400, 32, 1}, -10.0, 10.0, {8.0, 0.0});
    auto f = ScalarField::sample(g, [](double x, double y, double) {
        return std::exp(-x * x / 4) * (1 + 0.3 * std::cos(2 * M_PI * y / 8.0));
    });
    for (int axis : {0, 1}) {
        auto twice = derivative(derivative(f, axis, 1), axis, 1);
        auto direct = derivative(f, axis, 2);
        CHECK((twice - direct).max_abs() < 1e-6);
    }
}

TEST_CASE("low/high frequency split", "[core][filter]") {
    const double c1 = 1.1;  // mu <= 1
    const double eps = 0.2;
    REQUIRE(eps < cutoff_limit(c1));
    const Grid g = Grid::periodic(2, 64, 100.0);
    ScalarField constant(g, 3.0);
    CHECK((low_pass(constant, eps, c1) - constant).max_abs() < 1e-13);
    CHECK(high_pass(constant, eps, c1).max_abs() < 1e-13);

    const double k8 = 2 * M_PI * 8 / 100.0;
    REQUIRE(k8 > 2 * eps);
    auto mode = ScalarField::sample(g, [&](double x, double, double) { return std::cos(k8 * x); });
    CHECK((high_pass(mode, eps, c1) - mode).max_abs() < 1e-13);
    CHECK(low_pass(mode, eps, c1).max_abs() < 1e-13);

    CHECK_THROWS_AS(low_pass(mode, cutoff_limit(c1), c1), ParameterError);

    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    const Grid chan = Grid::channel({96, 32, 1}, -30.0, 30.0, {20.0, 0.0});
    ScalarField f(chan);
    for (auto& v : f.data()) v = nd(rng);
    auto sum = low_pass(f, eps, c1) + high_pass(f, eps, c1);
    CHECK((sum - f).max_abs() <= 1e-13 * f.max_abs());
}

TEST_CASE("cutoff profile", "[core][filter]") {
    CHECK(cutoff(0.0, 0.1) == 1.0);
    CHECK(cutoff(0.1, 0.1) == 1.0);
    CHECK(cutoff(0.2, 0.1) == 0.0);
    CHECK_THAT(cutoff(0.15, 0.1), WithinAbs(0.5, 1e-15));
    CHECK_THAT(cutoff_limit(1.1), WithinRel(0.5 * std::sqrt(1.0 / 4.4), 1e-15));
    CHECK(cutoff_limit(0.1) == 0.5);
}

TEST_CASE("high-frequency Poincare inequality on random fields", "[core][filter][property]") {
    const double c1 = 1.1, eps = 0.2;
    const Grid g = Grid::periodic(2, 32, 60.0);
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 100; ++trial) {
        // Random field without Nyquist content (the discrete gradient annihilates it).
        fft::Spectrum s(g.size());
        for (std::size_t j = 0; j < 32; ++j)
            for (std::size_t i = 0; i < 32; ++i)
                if (!fft::is_nyquist(g, 0, i) && !fft::is_nyquist(g, 1, j)) s[g.index(i, j)] = {nd(rng), nd(rng)};
        fft::transform(s, g, fft::all_axes(g), FFTW_BACKWARD);
        ScalarField f(g);
        for (std::size_t n = 0; n < g.size(); ++n) f[n] = s[n].real();
        auto vh = high_pass(f, eps, c1);
        auto grad = gradient(vh);
        const double gnorm = std::hypot(lp_norm(grad[0], 2.0), lp_norm(grad[1], 2.0));
        CHECK(gnorm >= eps * lp_norm(vh, 2.0) - 1e-12);
    }
}

TEST_CASE("snapshot format", "[core][snapshot]") {
    const Grid g = Grid::channel({8, 4, 2}, -1.0, 3.0, {2.0, 4.0});
    auto f = ScalarField::sample(g, [](double x, double y, double z) { return x + 10 * y + 100 * z; });
    const auto bytes = encode_snapshot(f);
    REQUIRE(bytes.size() == 72 + 8 * g.size());
    CHECK(std::string(bytes.begin(), bytes.begin() + 8) == "BEPW0001");
    CHECK(bytes[8] == 3);
    CHECK(bytes[12] == 8);
    CHECK(bytes[16] == 4);
    CHECK(bytes[20] == 2);
    // first extent: -1.0 little-endian -> 0xBFF0000000000000
    CHECK(bytes[24 + 7] == 0xBF);
    CHECK(bytes[24 + 6] == 0xF0);

    const auto path = std::filesystem::temp_directory_path() / "bepw_test" / "f_00000001.bepw";
    write_snapshot(path, f);
    const auto back = read_snapshot(path);
    CHECK(back.grid() == g);
    CHECK(back.data() == f.data());

    auto bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(decode_snapshot(bad), IoError);
    bad = bytes;
    bad.pop_back();
    CHECK_THROWS_AS(decode_snapshot(bad), IoError);
}
