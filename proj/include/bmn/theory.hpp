#pragma once

namespace bmn {

// One asymptotic bound split into its parameter-bias and excess-noise addends.
struct BoundPair {
    double bias = 0.0;
    double noise = 0.0;
    double total = 0.0;  // bias + noise
};

// A batch size that may be the distinguished value "infinite". Infinite is a
// first-class outcome of the optimizers, not a large sentinel integer.
struct BatchChoice {
    bool infinite = false;
    int b = 0;  // meaningful only when !infinite

    static BatchChoice Infinite() { return {true, 0}; }
    static BatchChoice Finite(int b) { return {false, b}; }
};

// Internals of the closed-form batch optimizer, exposed so the stationarity
// of the pre-rounding candidate t can be checked directly.
struct BatchStationary {
    double c = 0.0;   // leading coefficient of the bound derivative numerator
    double b1 = 0.0;  // (N + sqrt(S)) / D
    double b2 = 0.0;  // (N - sqrt(S)) / D
    double t = 0.0;   // case-split candidate, clamped to >= 1
};

// Asymptotic normalized risk of plain min-norm, gamma > 1.
double mn_asymptotic_risk(double gamma, double xi);

// Theorem-style bounds for batch-min-norm and its shrunk variant. b is real
// so the optimizers can probe between integers; all require gamma * b > 1.
BoundPair bmn_upper_bound(double b, double gamma, double xi);
BoundPair bmn_lower_bound(double b, double gamma, double xi);
BoundPair sbmn_upper_bound(double b, double gamma, double xi);
BoundPair sbmn_lower_bound(double b, double gamma, double xi);

// The multiplicative factor separating the lower-bound noise addend from the
// upper-bound one, and its b -> infinity limit gamma / (gamma + xi).
double lb_c_factor(double b, double gamma, double xi);
double lb_c_factor_limit(double gamma, double xi);

// Symbolic b -> infinity limits of the upper bounds.
double bmn_upper_bound_limit(double gamma, double xi);
double sbmn_upper_bound_limit(double gamma, double xi);

// Asymptotic risk of shrunk batch-min-norm at b = 1, gamma > 1.
double sbmn_b1_risk(double gamma, double xi);

// Closed-form stationary-point data for the batch-min-norm upper bound.
BatchStationary bmn_batch_stationary(double gamma, double xi);

// argmin of the upper bound over {1, infinity, t}; finite results are rounded
// to the better of floor(t) / ceil(t), ties preferring the smaller batch.
BatchChoice bmn_optimal_batch(double gamma, double xi);

// Bracketed search over real b in [1, 1e6] on the shrunk upper bound, which
// has at most one interior stationary point; Infinite when the bound is
// still decreasing at the right edge.
BatchChoice sbmn_optimal_batch(double gamma, double xi);

// Unique real root of 2 xi^3 - 2 xi^2 + 2 xi - 1: below it the batch-min-norm
// upper bound decreases in b for every gamma, so larger batches always help.
double bmn_snr_threshold();

// Risk-minimizing overparametrization ratio for plain min-norm; +infinity
// for xi <= 1/2, else sqrt(SNR) / (sqrt(SNR) - 1).
double mn_gamma_opt(double xi);

// Asymptotic risk of server averaging at per-batch ratio gamma_tilde = p / b.
double server_avg_asymptotic_risk(double gamma, double xi, double gamma_tilde);

// Exhaustive scan over divisors b of n in [1, n/2], minimizing the averaging
// risk at gamma_tilde = gamma * n / b. Ties prefer the smaller batch.
int server_avg_optimal_batch(double gamma, double xi, int n);

}  // namespace bmn
