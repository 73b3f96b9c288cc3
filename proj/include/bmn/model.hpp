#pragma once

#include <cstdint>
#include <limits>

#include <Eigen/Dense>

namespace bmn {

// Isotropic Gaussian design: X entries are iid N(0, 1), beta lies on the
// sphere of radius r, noise entries are iid N(0, sigma^2).
struct ModelParams {
    int n = 0;
    int p = 0;
    double r = 1.0;
    double sigma = 0.0;

    double gamma() const { return static_cast<double>(p) / static_cast<double>(n); }
    double xi() const { return r * r / (r * r + sigma * sigma); }
    double snr() const { return sigma == 0.0 ? std::numeric_limits<double>::infinity()
                                             : r * r / (sigma * sigma); }
};

enum class BetaMode {
    UniformSphere,  // r * (g / ||g||), g standard normal
    FirstAxis,      // r * e_1
};

struct Instance {
    Eigen::MatrixXd X;      // n x p
    Eigen::VectorXd y;      // n
    Eigen::VectorXd beta;   // p
    Eigen::VectorXd noise;  // n
};

// Derives (p, sigma) from (gamma, xi). n*gamma must be an integer and
// xi must lie in (0, 1]; xi = 1 means noiseless.
ModelParams make_params(int n, double gamma, double xi, double r);

Instance generate_instance(const ModelParams& params, BetaMode beta_mode,
                           std::uint64_t seed);

// ||beta_hat - beta||^2 / r^2.
double normalized_risk(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta,
                       double r);

}  // namespace bmn
