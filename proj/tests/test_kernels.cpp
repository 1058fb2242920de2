#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mgn/coefficients.hpp"
#include "mgn/errors.hpp"
#include "mgn/kernels.hpp"

using namespace mgn;

TEST_CASE("config validation") {
    KernelEvalConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.tolerance = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.quadrature_points = 8;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.series_terms = 4;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("gauss-legendre rules integrate polynomials exactly") {
    const GaussLegendreRule& rule = gauss_legendre(16);
    // degree 31 is the highest exact degree for 16 nodes
    double acc = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * std::pow(rule.nodes[i], 30);
    }
    CHECK(acc == doctest::Approx(2.0 / 31.0).epsilon(1e-13));
    double wsum = 0;
    for (double w : rule.weights) {
        wsum += w;
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("h basics") {
    CHECK(eval_h(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_h(2.0 * std::log(3.0)) == doctest::Approx(0.5).epsilon(1e-15));

    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> dist(-50.0, 50.0);
    for (int i = 0; i < 1000; ++i) {
        double x = dist(rng);
        CHECK(std::abs(eval_h(x) + eval_h(-x) - 2.0) < 5e-15);
    }
}

TEST_CASE("h is strictly decreasing") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(-30.0, 30.0);
    std::vector<double> xs(64);
    for (double& x : xs) {
        x = dist(rng);
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 1; i < xs.size(); ++i) {
        CHECK(eval_h(xs[i]) < eval_h(xs[i - 1]));
    }
}

TEST_CASE("R and D integrals") {
    KernelEvalConfig cfg;
    SUBCASE("domain") {
        CHECK_THROWS_AS(eval_R(0.0, 0, 0, cfg), InvalidDomain);
        CHECK_THROWS_AS(eval_R(-1.0, 0, 0, cfg), InvalidDomain);
        CHECK_THROWS_AS(eval_D(0.0, 0, 0, cfg), InvalidDomain);
    }
    SUBCASE("D(1,0,0) = 1 exactly since h(t) + h(-t) = 2") {
        CHECK(eval_D(1, 0, 0, cfg) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(eval_R(1, 0, 0, cfg) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("D is symmetric in (y, z) exactly") {
        CHECK(eval_D(2.0, 0.5, 1.5, cfg) == eval_D(2.0, 1.5, 0.5, cfg));
        CHECK(eval_D(0.7, 0.0, 3.0, cfg) == eval_D(0.7, 3.0, 0.0, cfg));
    }
    SUBCASE("R(x,0,z) = D(x,0,z) on a grid") {
        for (int xi = 1; xi <= 10; ++xi) {
            for (int zi = 1; zi <= 10; ++zi) {
                double x = xi, z = zi;
                CHECK(std::abs(eval_R(x, 0, z, cfg) - eval_D(x, 0, z, cfg)) < 1e-12);
            }
        }
    }
    SUBCASE("small-x limits") {
        double x = 1e-7;
        // D averages h(t+y+z) + h(-t+y+z), so its limit is h(y+z)
        CHECK(eval_D(x, 0.5, 1.0, cfg) == doctest::Approx(eval_h(1.5)).epsilon(1e-9));
        // R's four h-terms pair to h(z+y) and h(z-y) at t = 0
        CHECK(eval_R(x, 0.5, 1.0, cfg) ==
              doctest::Approx(0.5 * (eval_h(1.5) + eval_h(0.5))).epsilon(1e-9));
        CHECK(eval_R(x, 0.0, 2.0, cfg) == doctest::Approx(eval_h(2.0)).epsilon(1e-9));
    }
    SUBCASE("independent quadrature oracle for D(2, 1, 0.5)") {
        // plain midpoint rule at high resolution, no Gauss machinery
        double x = 2.0, s = 1.5;
        int steps = 4000000;
        double dt = x / steps, acc = 0;
        for (int i = 0; i < steps; ++i) {
            double t = (i + 0.5) * dt;
            acc += (eval_h(t + s) + eval_h(-t + s)) * dt;
        }
        CHECK(eval_D(x, 1.0, 0.5) == doctest::Approx(acc / (2 * x)).epsilon(1e-10));
    }
    SUBCASE("independent quadrature oracle for R(1.5, 0.8, 0.3)") {
        double x = 1.5, y = 0.8, z = 0.3;
        int steps = 4000000;
        double dt = x / steps, acc = 0;
        for (int i = 0; i < steps; ++i) {
            double t = (i + 0.5) * dt;
            acc += (eval_h(z + t + y) + eval_h(z - t - y) + eval_h(z + t - y) +
                    eval_h(z - t + y)) *
                   dt;
        }
        CHECK(eval_R(x, y, z) == doctest::Approx(acc / (4 * x)).epsilon(1e-10));
    }
}

TEST_CASE("verify_p_exponential") {
    KernelEvalConfig cfg;
    SUBCASE("named examples") {
        VerifyPair p0 = verify_p_exponential(0, 1.0, 0.0, cfg);
        CHECK(p0.closed_form == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(p0.numeric == doctest::Approx(1.0).epsilon(1e-15));

        VerifyPair p1 = verify_p_exponential(1, 1.0, 0.0, cfg);
        CHECK(p1.closed_form == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(p1.numeric == doctest::Approx(1.0).epsilon(1e-12));

        VerifyPair p2 = verify_p_exponential(2, 2.0, 0.0, cfg);
        CHECK(p2.closed_form == doctest::Approx(3.0 / 16).epsilon(1e-13));
        CHECK(p2.numeric == doctest::Approx(3.0 / 16).epsilon(1e-12));
    }
    SUBCASE("closed form and nested quadrature agree") {
        for (int n = 0; n <= 3; ++n) {
            for (double alpha : {0.5, 1.0, 2.0}) {
                for (double x : {0.0, 1.0}) {
                    CAPTURE(n);
                    CAPTURE(alpha);
                    CAPTURE(x);
                    VerifyPair pair = verify_p_exponential(n, alpha, x, cfg);
                    CHECK(std::abs(pair.closed_form - pair.numeric) <=
                          cfg.tolerance * std::max(1.0, std::abs(pair.closed_form)));
                }
            }
        }
    }
    SUBCASE("deep nesting still works") {
        VerifyPair pair = verify_p_exponential(6, 1.0, 0.0, cfg);
        // A_0^(6) = 11!! = 10395
        CHECK(pair.closed_form == doctest::Approx(10395.0).epsilon(1e-12));
        CHECK(pair.numeric == doctest::Approx(10395.0).epsilon(1e-10));
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(verify_p_exponential(7, 1.0, 0.0, cfg), InvalidDomain);
        CHECK_THROWS_AS(verify_p_exponential(1, 0.0, 0.0, cfg), InvalidDomain);
        CHECK_THROWS_AS(verify_p_exponential(1, 1.0, -1.0, cfg), InvalidDomain);
    }
    SUBCASE("unreachable tolerance signals non-convergence") {
        KernelEvalConfig strict = cfg;
        strict.tolerance = 1e-30;
        CHECK_THROWS_AS(p_power_exp_numeric(2, 0.5, 0.0, strict), NonConvergence);
    }
}

TEST_CASE("alternating series acceleration") {
    // eta(2) = pi^2/12
    std::vector<double> terms(40);
    for (int j = 1; j <= 40; ++j) {
        terms[j - 1] = (j % 2 ? 1.0 : -1.0) / (j * j);
    }
    double rem = 0;
    double v = accelerate_alternating(terms, &rem);
    CHECK(v == doctest::Approx(M_PI * M_PI / 12).epsilon(1e-13));
    CHECK(rem < 1e-10);

    // Abel-summable boundary case 1 - 1 + 1 - ... = 1/2
    std::vector<double> ones(16);
    for (int j = 0; j < 16; ++j) {
        ones[j] = (j % 2 == 0) ? 1.0 : -1.0;
    }
    CHECK(accelerate_alternating(ones, nullptr) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("verify_corollary") {
    KernelEvalConfig cfg;
    SUBCASE("named examples") {
        // k = n+m: the pure double-factorial case, (1)!!(1)!! = 1
        VerifyPair a = verify_corollary(1, 1, 2, cfg);
        CHECK(a.closed_form == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(a.numeric == doctest::Approx(1.0).epsilon(1e-10));

        // k > n+m vanishes
        VerifyPair z = verify_corollary(1, 1, 3, cfg);
        CHECK(z.closed_form == 0.0);
        CHECK(std::abs(z.numeric) < 1e-10);

        VerifyPair b = verify_corollary(1, 0, 1, cfg);
        CHECK(b.closed_form == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(b.numeric == doctest::Approx(1.0).epsilon(1e-10));

        VerifyPair c = verify_corollary(1, 1, 0, cfg);
        CHECK(c.closed_form == doctest::Approx(28 * std::pow(M_PI, 4) / 90).epsilon(1e-14));
        CHECK(std::abs(c.closed_form - c.numeric) < 1e-8);
    }
    SUBCASE("full grid n, m <= 3, k <= n+m agrees within 1e-8") {
        for (int n = 0; n <= 3; ++n) {
            for (int m = 0; m <= 3; ++m) {
                for (int k = 0; k <= n + m; ++k) {
                    CAPTURE(n);
                    CAPTURE(m);
                    CAPTURE(k);
                    VerifyPair pair = verify_corollary(n, m, k, cfg);
                    CHECK(std::abs(pair.closed_form - pair.numeric) <=
                          1e-8 * std::max(1.0, std::abs(pair.closed_form)));
                }
            }
        }
    }
    SUBCASE("k = n+m+1 vanishes") {
        for (int n = 0; n <= 3; ++n) {
            for (int m = 0; m <= 3; ++m) {
                VerifyPair pair = verify_corollary(n, m, n + m + 1, cfg);
                CHECK(pair.closed_form == 0.0);
                CHECK(std::abs(pair.numeric) < 1e-8);
            }
        }
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(verify_corollary(4, 0, 0, cfg), InvalidDomain);
        CHECK_THROWS_AS(verify_corollary(1, 1, 4, cfg), InvalidDomain);
    }
    SUBCASE("minimal series length signals non-convergence for slow cases") {
        KernelEvalConfig small = cfg;
        small.series_terms = 8;
        small.tolerance = 1e-12;
        CHECK_THROWS_AS(verify_corollary(1, 1, 1, small), NonConvergence);
    }
}
