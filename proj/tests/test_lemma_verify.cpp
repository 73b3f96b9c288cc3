#include <doctest.h>

#include <cmath>

#include "bmn/errors.hpp"
#include "bmn/lemma_verify.hpp"
#include "bmn/rng.hpp"

using namespace bmn;

TEST_CASE("q_factor matches closed forms and a direct simulation") {
    // E sqrt(chi^2_1) = E|Z| = sqrt(2/pi); E sqrt(chi^2_2) = sqrt(pi/2).
    CHECK(q_factor(1) == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-12));
    CHECK(q_factor(2) == doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-12));
    CounterRng rng(123, 1);
    std::uint64_t counter = 0;
    for (const int b : {1, 3, 7}) {
        const int trials = 200000;
        double sum = 0.0;
        for (int t = 0; t < trials; ++t) {
            double sq = 0.0;
            for (int i = 0; i < b; ++i) {
                const double z = rng.normal(counter++);
                sq += z * z;
            }
            sum += std::sqrt(sq);
        }
        CAPTURE(b);
        CHECK(sum / trials == doctest::Approx(q_factor(b)).epsilon(0.01));
    }
}

TEST_CASE("q_factor grows like sqrt(b)") {
    double prev = q_factor(1);
    for (int b = 2; b <= 30; ++b) {
        const double cur = q_factor(b);
        CHECK(cur > prev);
        prev = cur;
    }
    CHECK(q_factor(400) == doctest::Approx(std::sqrt(400.0)).epsilon(1e-2));
}

TEST_CASE("noisy projection check matches its prediction at modest size") {
    ProjectionScenario s;
    s.p = 400;
    s.trials = 400;
    const LemmaCheck check = check_noisy_projection(s);
    // (alpha r^2 / delta) (1 + (b-1) alpha r^2 / (sigma^2 + r^2)).
    CHECK(check.predicted == doctest::Approx(9.0 / 7.0).epsilon(1e-12));
    CHECK(check.rel_err < 0.1);
}

TEST_CASE("noisy projection supports wishart-drawn noise scales") {
    ProjectionScenario s;
    s.p = 300;
    s.trials = 300;
    s.t_mode = TMode::WishartEigen;
    const LemmaCheck check = check_noisy_projection(s);
    CHECK(std::isfinite(check.empirical));
    // The scale mixture keeps the identity to first order.
    CHECK(check.rel_err < 0.25);
}

TEST_CASE("noisy projection validates its scenario") {
    ProjectionScenario s;
    s.p = 50;  // too small for the asymptotic claim
    CHECK_THROWS_AS(check_noisy_projection(s), ConfigError);
    s = ProjectionScenario{};
    s.alpha = 1.4;
    CHECK_THROWS_AS(check_noisy_projection(s), ConfigError);
    s = ProjectionScenario{};
    s.delta = 0.0;
    CHECK_THROWS_AS(check_noisy_projection(s), ConfigError);
    s = ProjectionScenario{};
    s.trials = 0;
    CHECK_THROWS_AS(check_noisy_projection(s), ConfigError);
}

TEST_CASE("q covariance matches both moments at b = 1") {
    ModifiedNoiseScenario s;
    s.trials = 40000;
    const QCovarianceResult result = check_q_covariance(s);
    // r = sigma = 1: diagonal sigma^2 (sigma^2 b + r^2)/(sigma^2 + r^2) = 1,
    // off-diagonal sigma^4 q(1)^2/(sigma^2 + r^2) = 1/pi.
    CHECK(result.diag.predicted == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(result.offdiag.predicted == doctest::Approx(1.0 / M_PI).epsilon(1e-12));
    CHECK(result.diag.rel_err < 0.05);
    CHECK(result.offdiag.rel_err < 0.05);
}

TEST_CASE("q covariance tracks the batch size") {
    ModifiedNoiseScenario s;
    s.b = 4;
    s.r = 1.5;
    s.sigma = 0.5;
    s.trials = 40000;
    const QCovarianceResult result = check_q_covariance(s);
    const double s2 = 0.25;
    const double r2 = 2.25;
    const double diag_pred = s2 * (s2 * 4 + r2) / (s2 + r2);
    const double q = q_factor(4);
    const double off_pred = s2 * s2 * q * q / (s2 + r2);
    CHECK(result.diag.predicted == doctest::Approx(diag_pred).epsilon(1e-12));
    CHECK(result.offdiag.predicted == doctest::Approx(off_pred).epsilon(1e-12));
    CHECK(result.diag.rel_err < 0.05);
    CHECK(result.offdiag.rel_err < 0.10);
}

TEST_CASE("q covariance requires enough trials") {
    ModifiedNoiseScenario s;
    s.trials = 500;
    CHECK_THROWS_AS(check_q_covariance(s), ConfigError);
}

TEST_CASE("modified model concentrates as p grows") {
    const std::vector<ConvergenceRow> table =
        check_modified_convergence({200, 800}, 1, 1.0, 0.5, 800, 7);
    REQUIRE(table.size() == 2);
    CHECK(table[0].p == 200);
    CHECK(table[1].p == 800);
    // At b = 1 both deviations reduce to |p/||x||^2 - 1| whose mean is
    // sqrt(2/p) sqrt(2/pi) to first order.
    const double predict_200 = std::sqrt(2.0 / 200.0) * std::sqrt(2.0 / M_PI);
    CHECK(table[0].a_rel == doctest::Approx(predict_200).epsilon(0.15));
    CHECK(table[0].y_rel == doctest::Approx(table[0].a_rel).epsilon(1e-10));
    // Quadrupling p should halve the deviation.
    CHECK(table[1].a_rel == doctest::Approx(table[0].a_rel / 2.0).epsilon(0.2));
    CHECK(table[1].a_rel < table[0].a_rel);
}

TEST_CASE("modified convergence handles multi-sample batches") {
    const std::vector<ConvergenceRow> table =
        check_modified_convergence({300, 1200}, 3, 1.0, 0.5, 400, 11);
    REQUIRE(table.size() == 2);
    CHECK(table[1].a_rel < table[0].a_rel);
    CHECK(table[1].y_rel < table[0].y_rel);
    CHECK(table[0].a_rel < 0.25);
}

TEST_CASE("modified convergence validates dimensions") {
    CHECK_THROWS_AS(check_modified_convergence({5}, 1, 1.0, 0.5, 100, 1),
                    ConfigError);
    CHECK_THROWS_AS(check_modified_convergence({}, 1, 1.0, 0.5, 100, 1),
                    ConfigError);
}
