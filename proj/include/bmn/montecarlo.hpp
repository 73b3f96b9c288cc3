#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bmn/estimators.hpp"
#include "bmn/model.hpp"

namespace bmn {

struct RiskEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample std / sqrt(trials); 0 when trials == 1
    int trials = 0;
};

struct SweepConfig {
    std::vector<EstimatorSpec> estimators;
    std::vector<double> gamma_grid;
    std::vector<double> xi_grid;
    std::vector<int> b_grid;  // consumed by FromGrid estimators only
    int n = 400;              // fixed n, or the base of the auto rule
    bool n_auto = false;      // n per cell = smallest multiple of the batch total >= n
    double r = 1.0;
    BetaMode beta_mode = BetaMode::UniformSphere;
    int trials = 200;
    std::uint64_t seed = 42;
};

// One sweep cell. gamma is the ratio actually simulated (p/n after rounding
// p to an integer), b the resolved batch size (0 for batch-free estimators),
// and seed the cell seed that reproduces the cell in isolation. When error is
// nonempty the cell failed and mean/std_error are NaN.
struct SweepRow {
    std::string estimator;
    int n = 0;
    int p = 0;
    double gamma = 0.0;
    double xi = 0.0;
    int b = 0;
    double mean = 0.0;
    double std_error = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
    std::string error;
};

struct TunedRidge {
    double lambda = 0.0;
    RiskEstimate risk;
};

// Instances are a function of (seed, model, beta_mode) only, never of the
// estimator, so estimators evaluated on the same cell see the same data.
std::uint64_t cell_seed(std::uint64_t seed, const ModelParams& params,
                        BetaMode beta_mode);

// Turns Optimal rules into Fixed parameters for a concrete model: optimal
// batch sizes (infinite resolves to b = n, then to the nearest divisor of n)
// and the optimal subsample ratio. Tuned ridge is resolved by sweep itself.
EstimatorSpec resolve_spec(const EstimatorSpec& spec, const ModelParams& params);

// Runs one resolved estimator on one instance.
Eigen::VectorXd apply_estimator(const EstimatorSpec& spec, const Instance& inst,
                                const ModelParams& params);

// Mean and standard error of normalized_risk over `trials` independently
// seeded instances (per-trial seed = hash(seed, trial)). Any failing trial
// aborts the estimate with the failing trial named in the diagnostic.
RiskEstimate estimate_risk(const EstimatorSpec& spec, const ModelParams& params,
                           BetaMode beta_mode, int trials, std::uint64_t seed,
                           int threads = 1);

// Cartesian product of grids x estimators, evaluated cell by cell in
// deterministic order. Per-cell errors land in the row's error column; the
// remaining cells still run.
std::vector<SweepRow> sweep(const SweepConfig& config, int threads = 1);

// Golden-section search over log10(lambda) in [-4, 4], minimizing Monte
// Carlo risk under common random numbers (the same per-trial seeds for every
// lambda), then the achieved risk at the minimizer.
TunedRidge tune_ridge(const ModelParams& params, BetaMode beta_mode, int trials,
                      std::uint64_t seed, int threads = 1);

}  // namespace bmn
