#include <catch2/catch_amalgamated.hpp>

#include <hlab/heat.hpp>

#include <cmath>
#include <vector>

using namespace hlab;

TEST_CASE("solutions equal to the lift are reproduced to roundoff of the data") {
    SECTION("dirichlet, u = (1 - x) exp(-t)") {
        HeatProblemSpec spec;
        spec.f = [](double x, double t) { return -(1.0 - x) * std::exp(-t); };
        spec.g0 = [](double t) { return std::exp(-t); };
        spec.g1 = [](double) { return 0.0; };
        spec.h = [](double x) { return 1.0 - x; };
        auto u = solve_heat(spec, 32, 64);
        CHECK(relative_l2_error(u, [](double x, double t) {
            return (1.0 - x) * std::exp(-t);
        }) < 1e-8);
    }
    SECTION("neumann, u = x exp(-t)") {
        HeatProblemSpec spec;
        spec.neumann = true;
        spec.f = [](double x, double t) { return -x * std::exp(-t); };
        spec.g0 = [](double t) { return std::exp(-t); };
        spec.g1 = [](double t) { return std::exp(-t); };
        spec.h = [](double x) { return x; };
        auto u = solve_heat(spec, 32, 64);
        CHECK(relative_l2_error(u, [](double x, double t) {
            return x * std::exp(-t);
        }) < 1e-8);
    }
}

TEST_CASE("single mode decay converges at second order in time") {
    HeatProblemSpec spec;
    spec.tau = 0.25;
    spec.h = [](double x) { return std::sin(M_PI * x); };
    auto exact = [](double x, double t) { return std::sin(M_PI * x) * std::exp(-M_PI * M_PI * t); };

    double e256 = relative_l2_error(solve_heat(spec, 64, 256), exact);
    double e128 = relative_l2_error(solve_heat(spec, 64, 128), exact);
    CHECK(e256 < 5e-5);
    CHECK(e128 / e256 > 3.6);
    CHECK(e128 / e256 < 4.4);
}

TEST_CASE("manufactured forcing problem meets the accuracy target") {
    const double p2 = M_PI * M_PI;
    HeatProblemSpec spec;
    spec.h = [](double x) { return std::sin(M_PI * x) + 0.3 * std::sin(2.0 * M_PI * x); };
    spec.f = [p2](double x, double t) {
        double a = (p2 - 1.0) * std::sin(M_PI * x) * std::exp(-t);
        double b = 0.3 * std::sin(2.0 * M_PI * x) * (2.0 * t + 4.0 * p2 * (1.0 + t * t));
        return a + b;
    };
    auto exact = [](double x, double t) {
        return std::sin(M_PI * x) * std::exp(-t) +
               0.3 * std::sin(2.0 * M_PI * x) * (1.0 + t * t);
    };

    double fine = relative_l2_error(solve_heat(spec, 256, 1024), exact);
    double coarse = relative_l2_error(solve_heat(spec, 256, 512), exact);
    CHECK(fine < 1e-3);
    CHECK(coarse / fine > 3.5);
    CHECK(coarse / fine < 4.5);
}

TEST_CASE("neumann manufactured problem with a drifting mean") {
    const double p2 = M_PI * M_PI;
    HeatProblemSpec spec;
    spec.neumann = true;
    spec.h = [](double x) { return std::cos(M_PI * x); };
    spec.f = [p2](double x, double t) {
        return 1.0 + (p2 - 1.0) * std::cos(M_PI * x) * std::exp(-t);
    };
    auto exact = [](double x, double t) { return std::cos(M_PI * x) * std::exp(-t) + t; };
    CHECK(relative_l2_error(solve_heat(spec, 128, 512), exact) < 1e-4);
}

TEST_CASE("forward map sends the zero solution to the zero bundle") {
    HeatProblemSpec spec;
    BoxField u;
    u.shape = {17, 9};
    u.lower = {0.0, 0.0};
    u.upper = {1.0, 1.0};
    u.data.assign(17 * 9, 0.0);
    auto bundle = apply_lambda(spec, u);
    for (auto v : bundle.f.data) CHECK(std::abs(v) == 0.0);
    for (auto v : bundle.g0.data) CHECK(std::abs(v) == 0.0);
    for (auto v : bundle.g1.data) CHECK(std::abs(v) == 0.0);
    for (auto v : bundle.h.data) CHECK(std::abs(v) == 0.0);
    auto phi = KaramataFunction::constant(1.0);
    CHECK(q_space_norm(spec, bundle, 3.0, phi) == 0.0);
}

TEST_CASE("forward map is exact on a quadratic steady profile") {
    // u = x(1 - x): u_t - u_xx = 2, edge values vanish, edge slopes are +1, -1
    BoxField u;
    u.shape = {33, 17};
    u.lower = {0.0, 0.0};
    u.upper = {1.0, 0.5};
    u.data.assign(33 * 17, 0.0);
    for (std::size_t j = 0; j < 33; ++j) {
        double x = u.coord(0, j);
        for (std::size_t it = 0; it < 17; ++it) u.data[j * 17 + it] = x * (1.0 - x);
    }
    HeatProblemSpec spec;
    spec.tau = 0.5;
    auto bundle = apply_lambda(spec, u);
    for (auto v : bundle.f.data) CHECK(std::abs(v - 2.0) < 1e-10);
    for (auto v : bundle.g0.data) CHECK(std::abs(v) < 1e-12);
    for (auto v : bundle.g1.data) CHECK(std::abs(v) < 1e-12);
    for (std::size_t j = 0; j < 33; ++j) {
        double x = u.coord(0, j);
        CHECK(std::abs(bundle.h.data[j] - x * (1.0 - x)) < 1e-15);
    }

    spec.neumann = true;
    auto nb = apply_lambda(spec, u);
    for (auto v : nb.g0.data) CHECK(std::abs(v - 1.0) < 1e-10);
    for (auto v : nb.g1.data) CHECK(std::abs(v + 1.0) < 1e-10);
}

TEST_CASE("forward map applied to the computed solution recovers the forcing") {
    const double p2 = M_PI * M_PI;
    HeatProblemSpec spec;
    spec.h = [](double x) { return std::sin(M_PI * x) + 0.3 * std::sin(2.0 * M_PI * x); };
    spec.f = [p2](double x, double t) {
        double a = (p2 - 1.0) * std::sin(M_PI * x) * std::exp(-t);
        double b = 0.3 * std::sin(2.0 * M_PI * x) * (2.0 * t + 4.0 * p2 * (1.0 + t * t));
        return a + b;
    };
    auto bundle = apply_lambda(spec, solve_heat(spec, 128, 512));

    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < bundle.f.shape[0]; ++j) {
        double x = bundle.f.coord(0, j);
        for (std::size_t it = 0; it < bundle.f.shape[1]; ++it) {
            double e = spec.f(x, bundle.f.coord(1, it));
            double d = std::abs(bundle.f.data[j * bundle.f.shape[1] + it] - e);
            num += d * d;
            den += e * e;
        }
    }
    CHECK(std::sqrt(num / den) < 5e-3);

    for (auto v : bundle.g0.data) CHECK(std::abs(v) < 1e-12);
    for (auto v : bundle.g1.data) CHECK(std::abs(v) < 1e-12);
    for (std::size_t j = 0; j < bundle.h.shape[0]; ++j)
        CHECK(std::abs(bundle.h.data[j] - spec.h(bundle.h.coord(0, j))) < 1e-10);
}

TEST_CASE("data norm of an initial-value problem reduces to the initial trace norm") {
    HeatProblemSpec spec;
    spec.h = [](double x) { return std::sin(M_PI * x); };
    auto phi = KaramataFunction::constant(1.0);
    auto bundle = data_bundle(spec, 64, 128);
    double q = q_space_norm(spec, bundle, 3.0, phi);
    RegularityIndex idx{2.0, 1.0, phi};
    double direct = norm_box(bundle.h, idx, ExtensionStrategy::ZeroPadTaper);
    CHECK(q == Catch::Approx(direct).epsilon(1e-12));
    CHECK(direct > 0.0);
}

TEST_CASE("data norm rejects orders at or below two") {
    HeatProblemSpec spec;
    auto phi = KaramataFunction::constant(1.0);
    auto bundle = data_bundle(spec, 8, 8);
    CHECK_THROWS_AS(q_space_norm(spec, bundle, 2.0, phi), std::invalid_argument);
    CHECK_THROWS_AS(q_space_norm(spec, bundle, 1.5, phi), std::invalid_argument);
}

TEST_CASE("norm ratio of data to solution stays within a stable band") {
    auto phi = KaramataFunction::multilog({1.0});
    const double s = 3.25;
    std::vector<IsoSample> base, fine;
    for (int k = 1; k <= 5; ++k) {
        HeatProblemSpec spec;
        spec.tau = 0.1;
        spec.h = [k](double x) { return std::sin(double(k) * M_PI * x); };
        base.push_back(isomorphism_sample(spec, phi, s, 64, 128));
        fine.push_back(isomorphism_sample(spec, phi, s, 128, 256));
    }
    auto rep = summarize_iso(base);
    CHECK(rep.ratio_min > 0.0);
    CHECK(std::isfinite(rep.ratio_max));
    for (std::size_t i = 0; i < base.size(); ++i) {
        INFO("mode " << i + 1 << " ratio " << base[i].ratio << " -> " << fine[i].ratio);
        CHECK(base[i].ratio > 0.0);
        double change = fine[i].ratio / base[i].ratio;
        CHECK(change < 2.0);
        CHECK(change > 0.5);
    }
}

TEST_CASE("interior cutoff norms grow with the regularity order") {
    HeatProblemSpec spec;
    spec.tau = 0.5;
    spec.h = [](double x) { return std::sin(M_PI * x); };
    auto phi = KaramataFunction::constant(1.0);
    auto rows = interior_regularity_scan(spec, phi, {2.0, 3.0, 4.0}, 64, 128);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.norm > 0.0);
        CHECK(std::isfinite(r.norm));
    }
    CHECK(rows[0].norm < rows[1].norm);
    CHECK(rows[1].norm < rows[2].norm);
}

TEST_CASE("solver input validation") {
    HeatProblemSpec spec;
    CHECK_THROWS_AS(solve_heat(spec, 2, 64), std::invalid_argument);
    CHECK_THROWS_AS(solve_heat(spec, 32, 1), std::invalid_argument);
    spec.l = -1.0;
    CHECK_THROWS_AS(solve_heat(spec, 32, 64), std::invalid_argument);

    spec.l = 1.0;
    BoxField flat;
    flat.shape = {9};
    flat.lower = {0.0};
    flat.upper = {1.0};
    flat.data.assign(9, 0.0);
    CHECK_THROWS_AS(apply_lambda(spec, flat), std::invalid_argument);
    BoxField tiny;
    tiny.shape = {3, 2};
    tiny.lower = {0.0, 0.0};
    tiny.upper = {1.0, 1.0};
    tiny.data.assign(6, 0.0);
    CHECK_THROWS_AS(apply_lambda(spec, tiny), std::invalid_argument);
}
