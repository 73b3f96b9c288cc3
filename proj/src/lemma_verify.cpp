#include "bmn/lemma_verify.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "bmn/errors.hpp"
#include "bmn/estimators.hpp"
#include "bmn/model.hpp"
#include "bmn/rng.hpp"

namespace bmn {

namespace {

// Substream tags within one trial.
constexpr std::uint64_t kStreamDirections = 1;
constexpr std::uint64_t kStreamZ = 2;
constexpr std::uint64_t kStreamWishart = 3;
constexpr std::uint64_t kStreamSignal = 1;
constexpr std::uint64_t kStreamNoise = 2;

double relative_error(double empirical, double predicted) {
    if (predicted == 0.0) {
        return std::abs(empirical);
    }
    return std::abs(empirical - predicted) / std::abs(predicted);
}

void fill_std_normal(Eigen::Ref<Eigen::VectorXd> out, const CounterRng& rng) {
    rng.fill_normal(out.data(), static_cast<std::uint64_t>(out.size()));
}

}  // namespace

LemmaCheck check_noisy_projection(const ProjectionScenario& s) {
    if (s.p < 100) {
        throw ConfigError("projection scenario needs p >= 100, got " +
                          std::to_string(s.p));
    }
    if (s.b < 1 || 10 * s.b > s.p) {
        throw ConfigError("projection scenario needs 1 <= b << p, got b = " +
                          std::to_string(s.b));
    }
    const int d = static_cast<int>(std::llround(s.delta * s.p));
    if (!(s.delta > 0.0) || s.delta > 1.0 || d < 1) {
        throw ConfigError("delta must give a nonempty subspace, got " +
                          std::to_string(s.delta));
    }
    if (s.alpha < 0.0 || s.alpha > 1.0) {
        throw ConfigError("alpha must lie in [0, 1], got " + std::to_string(s.alpha));
    }
    if (s.alpha < 1.0 && d >= s.p) {
        throw ConfigError("alpha < 1 needs the projected subspace to be proper");
    }
    if (s.trials < 1) {
        throw ConfigError("trials must be positive");
    }
    if (!(s.r > 0.0) || s.sigma < 0.0) {
        throw ConfigError("need r > 0 and sigma >= 0");
    }

    const int p = s.p;
    const int b = s.b;
    // beta = r (sqrt(alpha) e_0 + sqrt(1-alpha) e_d): e_0 lies in the range of
    // the coordinate projection P (first d axes), e_d in its complement.
    const double beta_in = s.r * std::sqrt(s.alpha);
    const double beta_out = s.r * std::sqrt(1.0 - s.alpha);

    Eigen::MatrixXd G(p, b);
    Eigen::VectorXd z(b);
    Eigen::VectorXd tvals(b);
    Eigen::MatrixXd Xw;
    if (s.t_mode == TMode::WishartEigen) {
        Xw.resize(b, p);
    }

    double acc = 0.0;
    for (int trial = 0; trial < s.trials; ++trial) {
        const std::uint64_t trial_seed = hash_combine(s.seed, trial);

        const CounterRng rng_u(trial_seed, kStreamDirections);
        rng_u.fill_normal(G.data(), static_cast<std::uint64_t>(p) * b);
        const Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
        const Eigen::MatrixXd U =
            qr.householderQ() * Eigen::MatrixXd::Identity(p, b);

        if (s.t_mode == TMode::WishartEigen) {
            const CounterRng rng_w(trial_seed, kStreamWishart);
            rng_w.fill_normal(Xw.data(), static_cast<std::uint64_t>(b) * p);
            const Eigen::MatrixXd Gram = Xw * Xw.transpose() / static_cast<double>(p);
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Gram);
            if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
                throw SingularGram("check_noisy_projection: Wishart sample Gram"
                                   " is not positive definite");
            }
            tvals = es.eigenvalues().cwiseInverse();
        } else {
            tvals.setOnes();
        }

        const CounterRng rng_z(trial_seed, kStreamZ);
        fill_std_normal(z, rng_z);
        // v = U^T beta + Z with Z_i ~ N(0, T_i sigma^2 / p).
        Eigen::VectorXd v = beta_in * U.row(0).transpose() +
                            beta_out * U.row(d).transpose();
        v += (s.sigma / std::sqrt(static_cast<double>(p))) *
             tvals.cwiseSqrt().cwiseProduct(z);

        const Eigen::VectorXd proj = U.topRows(d) * v;  // P D~ beta, nonzero part
        const double den = proj.squaredNorm();
        if (std::sqrt(den) < 1e-12) {
            throw DegenerateProjection(
                "check_noisy_projection: ||P D~ beta|| below 1e-12 in trial " +
                std::to_string(trial));
        }
        const double num = beta_in * proj(0);  // <P D~ beta, beta>
        acc += num * num / den;
    }

    LemmaCheck out;
    out.empirical = static_cast<double>(p) * acc / s.trials;
    out.predicted = (s.alpha * s.r * s.r / s.delta) *
                    (1.0 + (b - 1.0) * s.alpha * s.r * s.r /
                               (s.sigma * s.sigma + s.r * s.r));
    out.rel_err = relative_error(out.empirical, out.predicted);
    return out;
}

QCovarianceResult check_q_covariance(const ModifiedNoiseScenario& s) {
    if (s.b < 1) {
        throw ConfigError("q-covariance scenario needs b >= 1");
    }
    if (s.trials < 10000) {
        throw ConfigError("q-covariance scenario needs at least 10^4 trials, got " +
                          std::to_string(s.trials));
    }
    if (s.r < 0.0 || s.sigma < 0.0 || (s.r == 0.0 && s.sigma == 0.0)) {
        throw ConfigError("need r, sigma >= 0 and not both zero");
    }

    const int b = s.b;
    Eigen::VectorXd alpha(b), w(b), y(b);
    double acc_sq = 0.0;
    double acc_cross = 0.0;

    const auto draw_q = [&](std::uint64_t trial_seed, std::uint64_t batch) {
        const CounterRng rng_a(trial_seed, kStreamSignal + 2 * batch);
        const CounterRng rng_w(trial_seed, kStreamNoise + 2 * batch);
        fill_std_normal(alpha, rng_a);
        fill_std_normal(w, rng_w);
        w *= s.sigma;
        y = s.r * alpha + w;
        const double norm = y.norm();
        if (norm < 1e-300) {
            return 0.0;  // sigma = 0 and r = 0 is rejected above; degenerate draw
        }
        return y.dot(w) / norm;
    };

    for (int trial = 0; trial < s.trials; ++trial) {
        const std::uint64_t trial_seed = hash_combine(s.seed, trial);
        const double q1 = draw_q(trial_seed, 0);
        const double q2 = draw_q(trial_seed, 1);
        acc_sq += q1 * q1 + q2 * q2;
        acc_cross += q1 * q2;
    }

    const double s2 = s.sigma * s.sigma;
    const double r2 = s.r * s.r;
    const double q = q_factor(b);

    QCovarianceResult out;
    out.diag.empirical = acc_sq / (2.0 * s.trials);
    out.diag.predicted = s2 * (s2 * b + r2) / (s2 + r2);
    out.diag.rel_err = relative_error(out.diag.empirical, out.diag.predicted);
    out.offdiag.empirical = acc_cross / s.trials;
    out.offdiag.predicted = s2 * s2 * q * q / (s2 + r2);
    out.offdiag.rel_err = relative_error(out.offdiag.empirical, out.offdiag.predicted);
    return out;
}

double q_factor(int b) {
    if (b < 1) {
        throw ConfigError("q_factor needs b >= 1");
    }
    const double half = 0.5 * b;
    return std::sqrt(2.0) * std::exp(std::lgamma(half + 0.5) - std::lgamma(half));
}

std::vector<ConvergenceRow> check_modified_convergence(const std::vector<int>& p_list,
                                                       int b, double r, double sigma,
                                                       int trials,
                                                       std::uint64_t seed) {
    if (p_list.empty()) {
        throw ConfigError("p_list must be nonempty");
    }
    if (b < 1) {
        throw ConfigError("b must be >= 1");
    }
    if (trials < 1) {
        throw ConfigError("trials must be positive");
    }
    for (const int p : p_list) {
        if (p < 10 * b) {
            throw ConfigError("each p must be at least 10 b, got p = " +
                              std::to_string(p));
        }
    }

    std::vector<ConvergenceRow> rows;
    rows.reserve(p_list.size());
    for (const int p : p_list) {
        ModelParams params;
        params.n = b;
        params.p = p;
        params.r = r;
        params.sigma = sigma;
        const std::uint64_t p_seed = hash_combine(seed, static_cast<std::uint64_t>(p));

        double acc_a = 0.0;
        double acc_y = 0.0;
        for (int trial = 0; trial < trials; ++trial) {
            const Instance inst = generate_instance(params, BetaMode::FirstAxis,
                                                    hash_combine(p_seed, trial));
            const ModifiedModel model = build_modified_model(inst.X, inst.y, b);
            const double y_norm2 = inst.y.squaredNorm();
            if (y_norm2 < 1e-300) {
                throw DegenerateProjection("check_modified_convergence: ||y|| ~ 0");
            }
            const Eigen::VectorXd pa = static_cast<double>(p) * model.A.row(0).transpose();
            acc_a += (pa - inst.y).norm() / std::sqrt(y_norm2);
            acc_y += std::abs(static_cast<double>(p) * model.Yp(0) - y_norm2) / y_norm2;
        }

        ConvergenceRow row;
        row.p = p;
        row.a_rel = acc_a / trials;
        row.y_rel = acc_y / trials;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace bmn
