#pragma once

#include <cstdint>
#include <vector>

namespace bmn {

// How the per-direction noise scale T_i is produced. One isolates the
// projection claim itself; WishartEigen draws T_i from the eigenvalues of an
// actual inverse sample Gram for end-to-end realism.
enum class TMode {
    One,
    WishartEigen,
};

struct ProjectionScenario {
    int p = 2000;
    int b = 3;
    double delta = 0.7;   // projected-subspace fraction, (0, 1]
    double alpha = 0.5;   // fraction of beta's energy inside the subspace
    double r = 1.0;
    double sigma = 0.5;
    int trials = 2000;
    std::uint64_t seed = 42;
    TMode t_mode = TMode::One;
};

struct ModifiedNoiseScenario {
    int b = 1;
    double r = 1.0;
    double sigma = 1.0;
    int trials = 100000;
    std::uint64_t seed = 42;
};

struct LemmaCheck {
    double empirical = 0.0;
    double predicted = 0.0;
    double rel_err = 0.0;  // |empirical - predicted| / |predicted| (absolute if predicted = 0)
};

struct QCovarianceResult {
    LemmaCheck diag;
    LemmaCheck offdiag;
};

struct ConvergenceRow {
    int p = 0;
    double a_rel = 0.0;  // mean ||p A_j - y_j|| / ||y_j||
    double y_rel = 0.0;  // mean |p Y'_j - ||y_j||^2| / ||y_j||^2
};

// Draws b Haar-orthonormal directions, perturbs the projection of beta onto
// their span with per-direction noise N(0, T_i sigma^2 / p), and compares the
// p-scaled mean of <P D~ beta, beta>^2 / ||P D~ beta||^2 against
// (alpha r^2 / delta) (1 + (b-1) alpha r^2 / (sigma^2 + r^2)).
LemmaCheck check_noisy_projection(const ProjectionScenario& s);

// Simulates two independent batches of the normalized modified noise
// Q_j = (1/||Y_j||) sum_i Y_ij W_ij and compares second moments against
// sigma^2 (sigma^2 b + r^2) / (sigma^2 + r^2) on the diagonal and
// sigma^4 q^2 / (sigma^2 + r^2) off it.
QCovarianceResult check_q_covariance(const ModifiedNoiseScenario& s);

// E sqrt(chi^2_b) = sqrt(2) Gamma((b+1)/2) / Gamma(b/2).
double q_factor(int b);

// Per-p concentration of the modified model: p A_j -> y_j and
// p Y'_j -> ||y_j||^2. Rows come back in p_list order.
std::vector<ConvergenceRow> check_modified_convergence(const std::vector<int>& p_list,
                                                       int b, double r, double sigma,
                                                       int trials,
                                                       std::uint64_t seed);

}  // namespace bmn
