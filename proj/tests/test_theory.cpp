#include <doctest.h>

#include <cmath>

#include "bmn/errors.hpp"
#include "bmn/theory.hpp"

using namespace bmn;

TEST_CASE("min-norm asymptotic risk oracle values") {
    // 1 - 1/gamma + (1 - xi)/xi * 1/(gamma - 1).
    CHECK(mn_asymptotic_risk(2.0, 0.8) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(mn_asymptotic_risk(1.5, 0.5) ==
          doctest::Approx(7.0 / 3.0).epsilon(1e-12));
    CHECK(mn_asymptotic_risk(2.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(mn_asymptotic_risk(1.0, 0.8), DomainError);
    CHECK_THROWS_AS(mn_asymptotic_risk(0.5, 0.8), DomainError);
    CHECK_THROWS_AS(mn_asymptotic_risk(2.0, 0.0), InvalidXi);
}

TEST_CASE("batch min-norm bound oracle at b = 2, gamma = 2, xi = 0.8") {
    const BoundPair ub = bmn_upper_bound(2.0, 2.0, 0.8);
    CHECK(ub.bias == doctest::Approx(0.625).epsilon(1e-12));
    CHECK(ub.noise == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(ub.total == doctest::Approx(0.725).epsilon(1e-12));

    // Lower bound assembled from its published pieces: bias
    // (1 - 1/(gamma b))^(1 + (b-1) xi), noise scaled by the c-factor
    // 1 - w/(1+w) with w = (1 + (b-1) xi)/(gamma b - 1).
    const double lb_bias = std::pow(0.75, 1.8);
    const double w = 1.8 / 3.0;
    const double c = 1.0 - w / (1.0 + w);
    CHECK(c == doctest::Approx(0.625).epsilon(1e-12));
    CHECK(lb_c_factor(2.0, 2.0, 0.8) == doctest::Approx(c).epsilon(1e-12));
    const BoundPair lb = bmn_lower_bound(2.0, 2.0, 0.8);
    CHECK(lb.bias == doctest::Approx(lb_bias).epsilon(1e-12));
    CHECK(lb.noise == doctest::Approx(0.0625).epsilon(1e-12));
    CHECK(lb.total == doctest::Approx(lb_bias + 0.0625).epsilon(1e-12));
}

TEST_CASE("shrunk bound oracle at b = 2, gamma = 2, xi = 0.8") {
    const BoundPair ub = sbmn_upper_bound(2.0, 2.0, 0.8);
    CHECK(ub.bias == doctest::Approx(0.625).epsilon(1e-12));
    CHECK(ub.noise == doctest::Approx(0.2 / 3.0).epsilon(1e-12));
    const BoundPair lb = sbmn_lower_bound(2.0, 2.0, 0.8);
    CHECK(lb.bias == doctest::Approx(std::pow(0.75, 1.8)).epsilon(1e-12));
    CHECK(lb.noise == doctest::Approx(0.625 * 0.2 / 3.0).epsilon(1e-12));
}

TEST_CASE("bounds share the bias term and order correctly") {
    for (const double gamma : {1.2, 2.0, 3.5}) {
        for (const double xi : {0.3, 0.6, 0.9}) {
            for (const double b : {1.0, 2.0, 5.0, 20.0}) {
                if (gamma * b <= 1.0) continue;
                CAPTURE(gamma);
                CAPTURE(xi);
                CAPTURE(b);
                const BoundPair bub = bmn_upper_bound(b, gamma, xi);
                const BoundPair blb = bmn_lower_bound(b, gamma, xi);
                const BoundPair sub = sbmn_upper_bound(b, gamma, xi);
                const BoundPair slb = sbmn_lower_bound(b, gamma, xi);
                CHECK(bub.bias == doctest::Approx(sub.bias).epsilon(1e-12));
                CHECK(blb.total <= bub.total + 1e-12);
                CHECK(slb.total <= sub.total + 1e-12);
                // Shrinkage multiplies the noise addend by xi / (b - (b-1) xi)
                // <= 1, so the shrunk upper bound can only be tighter.
                CHECK(sub.total <= bub.total + 1e-12);
                const double c = lb_c_factor(b, gamma, xi);
                CHECK(c > 0.0);
                CHECK(c < 1.0);
            }
        }
    }
}

TEST_CASE("bound domains are enforced") {
    CHECK_THROWS_AS(bmn_upper_bound(0.5, 2.0, 0.8), DomainError);
    CHECK_THROWS_AS(bmn_upper_bound(1.0, 0.9, 0.8), DomainError);
    CHECK_NOTHROW(bmn_upper_bound(2.0, 0.6, 0.8));
    CHECK_THROWS_AS(bmn_upper_bound(2.0, 2.0, 1.5), InvalidXi);
    CHECK_THROWS_AS(sbmn_lower_bound(1.0, 1.0, 0.8), DomainError);
}

TEST_CASE("upper bounds converge to their symbolic limits") {
    const double gamma = 2.0;
    const double xi = 0.8;
    // gamma / (gamma + xi) + (1 - xi)^2 / (xi gamma).
    const double bmn_limit = gamma / (gamma + xi) + 0.04 / 1.6;
    CHECK(bmn_upper_bound_limit(gamma, xi) ==
          doctest::Approx(bmn_limit).epsilon(1e-12));
    CHECK(bmn_upper_bound(1e8, gamma, xi).total ==
          doctest::Approx(bmn_limit).epsilon(1e-6));
    CHECK(sbmn_upper_bound_limit(gamma, xi) ==
          doctest::Approx(gamma / (gamma + xi)).epsilon(1e-12));
    CHECK(sbmn_upper_bound(1e8, gamma, xi).total ==
          doctest::Approx(gamma / (gamma + xi)).epsilon(1e-6));
    CHECK(lb_c_factor_limit(gamma, xi) ==
          doctest::Approx(gamma / (gamma + xi)).epsilon(1e-12));
    CHECK(lb_c_factor(1e8, gamma, xi) ==
          doctest::Approx(lb_c_factor_limit(gamma, xi)).epsilon(1e-6));
}

TEST_CASE("shrunk risk at b = 1 oracle") {
    // 1 - (2 xi - xi^2)/gamma + (1 - xi)/xi * xi^2/(gamma - 1).
    CHECK(sbmn_b1_risk(2.0, 0.8) == doctest::Approx(0.68).epsilon(1e-12));
    CHECK_THROWS_AS(sbmn_b1_risk(1.0, 0.8), DomainError);
    // Shrinkage never hurts at b = 1.
    for (const double gamma : {1.3, 2.0, 4.0}) {
        for (const double xi : {0.2, 0.5, 0.9}) {
            CHECK(sbmn_b1_risk(gamma, xi) <=
                  mn_asymptotic_risk(gamma, xi) + 1e-12);
        }
    }
}

TEST_CASE("stationary candidate sits at a flat point of the bound") {
    for (const double gamma : {1.2, 1.5, 2.0, 3.0}) {
        for (const double xi : {0.7, 0.8, 0.9, 0.95}) {
            const BatchStationary st = bmn_batch_stationary(gamma, xi);
            CAPTURE(gamma);
            CAPTURE(xi);
            REQUIRE(st.t >= 1.0);
            if (st.t <= 1.0 || gamma * st.t <= 1.0) continue;
            const double h = 1e-4 * st.t;
            if (gamma * (st.t - h) <= 1.0) continue;
            const double up = bmn_upper_bound(st.t + h, gamma, xi).total;
            const double down = bmn_upper_bound(st.t - h, gamma, xi).total;
            const double deriv = (up - down) / (2.0 * h);
            CHECK(std::abs(deriv) <= 1e-6);
        }
    }
}

TEST_CASE("closed-form optimal batch beats every probed batch size") {
    for (const double gamma : {1.1, 1.5, 2.0, 3.0}) {
        for (const double xi : {0.5, 0.67, 0.8, 0.95}) {
            CAPTURE(gamma);
            CAPTURE(xi);
            const BatchChoice choice = bmn_optimal_batch(gamma, xi);
            const double limit = bmn_upper_bound_limit(gamma, xi);
            double best = limit;
            if (!choice.infinite) {
                REQUIRE(choice.b >= 1);
                best = bmn_upper_bound(choice.b, gamma, xi).total;
                CHECK(best <= limit + 1e-9);
            }
            for (int b = 1; b <= 200; ++b) {
                if (gamma * b <= 1.0) continue;
                CHECK(best <= bmn_upper_bound(b, gamma, xi).total + 1e-9);
            }
        }
    }
}

TEST_CASE("shrunk optimal batch beats every probed batch size") {
    for (const double gamma : {1.1, 2.0, 3.0}) {
        for (const double xi : {0.4, 0.55, 0.8, 0.95}) {
            CAPTURE(gamma);
            CAPTURE(xi);
            const BatchChoice choice = sbmn_optimal_batch(gamma, xi);
            const double limit = sbmn_upper_bound_limit(gamma, xi);
            double best = limit;
            if (!choice.infinite) {
                REQUIRE(choice.b >= 1);
                best = sbmn_upper_bound(choice.b, gamma, xi).total;
                CHECK(best <= limit + 1e-9);
            }
            for (int b = 1; b <= 200; ++b) {
                if (gamma * b <= 1.0) continue;
                CHECK(best <= sbmn_upper_bound(b, gamma, xi).total + 1e-9);
            }
        }
    }
}

TEST_CASE("snr threshold is the cubic's root and separates regimes") {
    const double root = bmn_snr_threshold();
    CHECK(root == doctest::Approx(0.6478).epsilon(1e-3));
    const double poly = 2.0 * root * root * root - 2.0 * root * root +
                        2.0 * root - 1.0;
    CHECK(std::abs(poly) < 1e-10);
    // Below the threshold larger batches always help.
    for (const double gamma : {1.1, 2.0, 10.0}) {
        double prev = bmn_upper_bound(2.0, gamma, 0.6).total;
        for (double b = 3.0; b <= 50.0; b += 1.0) {
            const double cur = bmn_upper_bound(b, gamma, 0.6).total;
            CHECK(cur < prev);
            prev = cur;
        }
        CHECK(bmn_optimal_batch(gamma, 0.6).infinite);
    }
    // Above it a finite batch wins for some gamma.
    CHECK_FALSE(bmn_optimal_batch(2.0, 0.9).infinite);
}

TEST_CASE("shrunk threshold is one half") {
    CHECK(sbmn_optimal_batch(2.0, 0.45).infinite);
    CHECK(sbmn_optimal_batch(2.0, 0.49).infinite);
    // Just above one half the tail sign flips with gamma; at gamma = 2 the
    // bound still decreases all the way, while larger xi pins a finite batch.
    CHECK(sbmn_optimal_batch(2.0, 0.55).infinite);
    CHECK_FALSE(sbmn_optimal_batch(2.0, 0.7).infinite);
    CHECK_FALSE(sbmn_optimal_batch(2.0, 0.8).infinite);
}

TEST_CASE("min-norm optimal ratio") {
    CHECK(std::isinf(mn_gamma_opt(0.3)));
    CHECK(std::isinf(mn_gamma_opt(0.5)));
    CHECK(mn_gamma_opt(1.0) == 1.0);
    // xi = 0.8 means SNR = 4, so gamma_opt = 2/(2-1) = 2.
    CHECK(mn_gamma_opt(0.8) == doctest::Approx(2.0).epsilon(1e-12));
    const double opt = mn_gamma_opt(0.7);
    CHECK(mn_asymptotic_risk(opt, 0.7) <= mn_asymptotic_risk(opt + 0.1, 0.7));
    CHECK(mn_asymptotic_risk(opt, 0.7) <= mn_asymptotic_risk(opt - 0.1, 0.7));
}

TEST_CASE("server averaging risk oracle and optimal batch") {
    CHECK(server_avg_asymptotic_risk(2.0, 0.8, 2.0) ==
          doctest::Approx(0.75).epsilon(1e-12));
    CHECK(server_avg_asymptotic_risk(2.0, 0.8, 4.0) ==
          doctest::Approx(0.6979166666666666).epsilon(1e-12));
    CHECK_THROWS_AS(server_avg_asymptotic_risk(2.0, 0.8, 1.0), DomainError);
    CHECK(server_avg_optimal_batch(2.0, 0.6, 400) == 200);
    CHECK(server_avg_optimal_batch(1.2, 0.6, 400) == 200);
    // The returned divisor must beat the other divisors in [1, n/2].
    const int n = 60;
    const int opt = server_avg_optimal_batch(2.0, 0.8, n);
    const double opt_risk =
        server_avg_asymptotic_risk(2.0, 0.8, 2.0 * n / opt);
    for (int b = 1; b <= n / 2; ++b) {
        if (n % b != 0) continue;
        const double gt = 2.0 * n / b;
        if (gt <= 1.0) continue;
        CHECK(opt_risk <= server_avg_asymptotic_risk(2.0, 0.8, gt) + 1e-12);
    }
}
