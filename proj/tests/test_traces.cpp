#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "hlab/traces.hpp"

using namespace hlab;
using cplx = std::complex<double>;

namespace {

// band-limited random trace set on a 1-D spatial torus
std::vector<TorusField> random_traces(int r, std::size_t nx, double Lx,
                                      int band, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<TorusField> v(r);
    for (int k = 0; k < r; ++k) {
        v[k].shape = {nx};
        v[k].length = {Lx};
        v[k].data.assign(nx, 0.0);
        for (int n = -band; n <= band; ++n) {
            cplx amp(g(rng), g(rng));
            amp /= double(1 + k + std::abs(n));
            double xi = 2.0 * M_PI * double(n) / Lx;
            for (std::size_t j = 0; j < nx; ++j) {
                double x = v[k].coord(0, j);
                v[k].data[j] += amp * std::exp(cplx(0.0, xi * x));
            }
        }
    }
    return v;
}

}  // namespace

TEST_CASE("bump plateau, support, and glue value") {
    CHECK(bump(0.0) == 1.0);
    CHECK(bump(0.5) == 1.0);
    CHECK(bump(-0.5) == 1.0);
    CHECK(bump(2.0) == 0.0);
    CHECK(bump(-3.0) == 0.0);
    double expect = 1.0 / (1.0 + std::exp(-1.5));
    CHECK_THAT(bump(1.0), Catch::Matchers::WithinRel(expect, 1e-13));
    CHECK(bump(-1.0) == bump(1.0));
    for (double t = 0.55; t < 1.95; t += 0.05)
        CHECK(bump(t + 0.05) < bump(t));
}

TEST_CASE("cauchy data of an analytic space-time field") {
    const std::size_t nx = 32, nt = 256;
    const double Lx = 8.0, Lt = 8.0;
    TorusField w;
    w.shape = {nx, nt};
    w.length = {Lx, Lt};
    w.data.resize(nx * nt);
    const double xi0 = 2.0 * M_PI * 2.0 / Lx;
    for (std::size_t j = 0; j < nx; ++j) {
        double x = w.coord(0, j);
        for (std::size_t k = 0; k < nt; ++k) {
            double t = w.coord(1, k);
            w.data[j * nt + k] = std::exp(cplx(0.0, xi0 * x)) * std::exp(-2.0 * t * t);
        }
    }
    auto v = cauchy_data(w, 3);
    REQUIRE(v.size() == 3);
    for (std::size_t j = 0; j < nx; ++j) {
        double x = v[0].coord(0, j);
        cplx e0 = std::exp(cplx(0.0, xi0 * x));
        CHECK(std::abs(v[0].data[j] - e0) < 1e-10);
        CHECK(std::abs(v[1].data[j]) < 1e-9);
        CHECK(std::abs(v[2].data[j] - (-4.0) * e0) < 1e-8);
    }
}

TEST_CASE("extended field restores its traces") {
    for (int b : {1, 2}) {
        for (int r : {1, 2, 3}) {
            auto v = random_traces(r, 128, 64.0, 3, 1000 + 10 * b + r);
            auto w = extend_T0(v, b, 512, 6.0);
            auto rep = verify_right_inverse(v, w);
            INFO("b = " << b << ", r = " << r);
            CHECK(rep.residual <= 1e-8);
        }
    }
}

TEST_CASE("extension rejects unresolvable spatial modes") {
    auto v = random_traces(1, 64, 4.0, 16, 5);
    CHECK_THROWS_AS(extend_T0(v, 1, 512, 6.0), std::runtime_error);
    CHECK_THROWS_AS(extend_T0(v, 1, 512, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(extend_T0({}, 1, 512, 6.0), std::invalid_argument);
}

TEST_CASE("mixed-order norm of a single harmonic") {
    const std::size_t nx = 16, nt = 32;
    const double Lx = 4.0, Lt = 8.0;
    TorusField w;
    w.shape = {nx, nt};
    w.length = {Lx, Lt};
    w.data.resize(nx * nt);
    const double xi = 2.0 * M_PI * 3.0 / Lx;
    const double eta = 2.0 * M_PI * 5.0 / Lt;
    for (std::size_t j = 0; j < nx; ++j)
        for (std::size_t k = 0; k < nt; ++k) {
            double x = w.coord(0, j), t = w.coord(1, k);
            w.data[j * nt + k] = std::exp(cplx(0.0, xi * x + eta * t));
        }
    int b = 1, m = 2;
    double expect = std::sqrt((1.0 + std::pow(xi, 4.0 * b * m) + std::pow(eta, 2.0 * m)) * Lx * Lt);
    CHECK_THAT(norm_2bm_m(w, b, m), Catch::Matchers::WithinRel(expect, 1e-12));
    CHECK_THROWS_AS(norm_2bm_m(w, 0, 1), std::invalid_argument);
}

TEST_CASE("bump constants are positive, finite, and deterministic") {
    auto c = t0_bound_constants(2, 3);
    REQUIRE(c.c1.size() == 3);
    REQUIRE(c.c2.size() == 3);
    CHECK(c.c2[0] > 1.0);   // the plateau alone contributes 1
    CHECK(c.c2[0] < 3.0);
    for (int k = 0; k < 3; ++k) {
        CHECK(c.c1[k] > 0.0);
        CHECK(std::isfinite(c.c1[k]));
        CHECK(c.c2[k] > 0.0);
    }
    auto c2 = t0_bound_constants(2, 3);
    CHECK(c.c1 == c2.c1);
    CHECK(c.c2 == c2.c2);
    CHECK_THROWS_AS(t0_bound_constants(3, 1), std::invalid_argument);
}

TEST_CASE("extension obeys the trace-energy bound") {
    for (int b : {1, 2}) {
        for (int m : {1, 2}) {
            for (int rep_i = 0; rep_i < 3; ++rep_i) {
                int r = 1 + rep_i;
                auto v = random_traces(r, 128, 64.0, 3, 7000 + 100 * b + 10 * m + rep_i);
                auto w = extend_T0(v, b, 512, 6.0);
                auto rep = t0_bound_check(v, w, b, m);
                INFO("b = " << b << ", m = " << m << ", r = " << r);
                CHECK(rep.passed);
                CHECK(rep.lhs > 0.0);
                CHECK(rep.rhs > 0.0);
                CHECK(rep.C > 0.0);
            }
        }
    }
}
