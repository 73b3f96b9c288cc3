#include "bmn/model.hpp"

#include <cmath>
#include <string>

#include "bmn/errors.hpp"
#include "bmn/rng.hpp"

namespace bmn {

namespace {

// Stream tags keep X, noise, and beta statistically independent under a
// shared seed.
constexpr std::uint64_t kStreamX = 1;
constexpr std::uint64_t kStreamNoise = 2;
constexpr std::uint64_t kStreamBeta = 3;

}  // namespace

ModelParams make_params(int n, double gamma, double xi, double r) {
    if (n <= 0) {
        throw DomainError("n must be positive, got " + std::to_string(n));
    }
    if (!(gamma > 0.0)) {
        throw DomainError("gamma must be positive, got " + std::to_string(gamma));
    }
    if (!(r > 0.0)) {
        throw DomainError("r must be positive, got " + std::to_string(r));
    }
    if (!(xi > 0.0) || xi > 1.0) {
        throw InvalidXi("xi must lie in (0, 1], got " + std::to_string(xi));
    }
    const double p_real = static_cast<double>(n) * gamma;
    const double p_rounded = std::round(p_real);
    if (std::abs(p_real - p_rounded) > 1e-9) {
        throw NonIntegerDimension("n * gamma = " + std::to_string(p_real) +
                                  " is not an integer (n = " + std::to_string(n) +
                                  ", gamma = " + std::to_string(gamma) + ")");
    }
    ModelParams params;
    params.n = n;
    params.p = static_cast<int>(p_rounded);
    params.r = r;
    // xi = r^2 / (r^2 + sigma^2)  =>  sigma = r * sqrt((1 - xi) / xi).
    params.sigma = r * std::sqrt((1.0 - xi) / xi);
    return params;
}

Instance generate_instance(const ModelParams& params, BetaMode beta_mode,
                           std::uint64_t seed) {
    const int n = params.n;
    const int p = params.p;
    Instance inst;

    inst.X.resize(n, p);
    const CounterRng rng_x(seed, kStreamX);
    // Fill in storage order so the draw sequence is layout independent in
    // the source even if Eigen's default layout changed.
    rng_x.fill_normal(inst.X.data(), static_cast<std::uint64_t>(n) * p);

    inst.beta.resize(p);
    if (beta_mode == BetaMode::FirstAxis) {
        inst.beta.setZero();
        inst.beta(0) = params.r;
    } else {
        const CounterRng rng_beta(seed, kStreamBeta);
        rng_beta.fill_normal(inst.beta.data(), static_cast<std::uint64_t>(p));
        const double norm = inst.beta.norm();
        if (norm == 0.0) {
            throw DegenerateProjection("zero draw for beta direction");
        }
        inst.beta *= params.r / norm;
    }

    inst.noise.resize(n);
    const CounterRng rng_noise(seed, kStreamNoise);
    rng_noise.fill_normal(inst.noise.data(), static_cast<std::uint64_t>(n));
    inst.noise *= params.sigma;

    inst.y = inst.X * inst.beta + inst.noise;
    return inst;
}

double normalized_risk(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta,
                       double r) {
    if (beta_hat.size() != beta.size()) {
        throw DimensionMismatch("beta_hat has " + std::to_string(beta_hat.size()) +
                                " entries, beta has " + std::to_string(beta.size()));
    }
    return (beta_hat - beta).squaredNorm() / (r * r);
}

}  // namespace bmn
