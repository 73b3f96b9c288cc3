#include "bmn/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "bmn/errors.hpp"
#include "bmn/rng.hpp"
#include "bmn/theory.hpp"

namespace bmn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Divisor of n closest to target (ties -> smaller divisor).
int nearest_divisor(int n, int target) {
    target = std::clamp(target, 1, n);
    int best = 1;
    long best_dist = std::abs(static_cast<long>(target) - 1);
    for (int d = 1; d <= n; ++d) {
        if (n % d != 0) {
            continue;
        }
        const long dist = std::abs(static_cast<long>(target) - d);
        if (dist < best_dist) {
            best_dist = dist;
            best = d;
        }
    }
    return best;
}

// Mean and standard error from per-trial risks, accumulated in index order
// so the result is independent of how trials were scheduled.
RiskEstimate summarize(const std::vector<double>& risks) {
    RiskEstimate est;
    est.trials = static_cast<int>(risks.size());
    double sum = 0.0;
    for (const double v : risks) {
        sum += v;
    }
    est.mean = sum / est.trials;
    if (est.trials > 1) {
        double ss = 0.0;
        for (const double v : risks) {
            const double d = v - est.mean;
            ss += d * d;
        }
        est.std_error = std::sqrt(ss / (est.trials - 1) / est.trials);
    }
    return est;
}

// Runs fn(trial) for every trial index on `threads` workers; failures are
// reported for the smallest failing index so diagnostics are deterministic.
template <typename Fn>
void run_trials(int trials, int threads, Fn&& fn) {
    threads = std::clamp(threads, 1, trials);
    if (threads == 1) {
        for (int t = 0; t < trials; ++t) {
            fn(t);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(trials);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            for (int t = w; t < trials; t += threads) {
                try {
                    fn(t);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    for (int t = 0; t < trials; ++t) {
        if (errors[t]) {
            std::rethrow_exception(errors[t]);
        }
    }
}

int resolve_n(const SweepConfig& config, int b_total) {
    if (!config.n_auto) {
        return config.n;
    }
    return (config.n + b_total - 1) / b_total * b_total;
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t seed, const ModelParams& params,
                        BetaMode beta_mode) {
    std::uint64_t h = hash_combine(seed, static_cast<std::uint64_t>(params.n));
    h = hash_combine(h, static_cast<std::uint64_t>(params.p));
    h = hash_combine(h, std::bit_cast<std::uint64_t>(params.r));
    h = hash_combine(h, std::bit_cast<std::uint64_t>(params.sigma));
    return hash_combine(h, static_cast<std::uint64_t>(beta_mode));
}

EstimatorSpec resolve_spec(const EstimatorSpec& spec, const ModelParams& params) {
    validate_spec(spec);
    EstimatorSpec out = spec;
    if (spec.rule != ParamRule::Optimal) {
        return out;
    }
    switch (spec.kind) {
        case EstimatorKind::BatchMinNorm:
        case EstimatorKind::ShrunkBatchMinNorm: {
            const BatchChoice choice =
                spec.kind == EstimatorKind::BatchMinNorm
                    ? bmn_optimal_batch(params.gamma(), params.xi())
                    : sbmn_optimal_batch(params.gamma(), params.xi());
            const int target = choice.infinite ? params.n : choice.b;
            out.b = nearest_divisor(params.n, target);
            out.rule = ParamRule::Fixed;
            return out;
        }
        case EstimatorKind::SubsampleMN: {
            const double gamma_opt = mn_gamma_opt(params.xi());
            double ratio = std::isinf(gamma_opt)
                               ? 0.0
                               : std::min(1.0, params.gamma() / gamma_opt);
            ratio = std::max(ratio, 1.0 / params.n);  // keep at least one row
            out.keep_ratio = ratio;
            out.rule = ParamRule::Fixed;
            return out;
        }
        default:
            throw ConfigError("estimator '" + spec.label() +
                              "' has no optimal rule");
    }
}

Eigen::VectorXd apply_estimator(const EstimatorSpec& spec, const Instance& inst,
                                const ModelParams& params) {
    switch (spec.kind) {
        case EstimatorKind::MinNorm:
            return min_norm(inst.X, inst.y);
        case EstimatorKind::BatchMinNorm:
            return batch_min_norm(inst.X, inst.y, spec.b);
        case EstimatorKind::ShrunkBatchMinNorm:
            return shrunk_batch_min_norm(inst.X, inst.y, spec.b, params.xi(),
                                         spec.shrink_mode);
        case EstimatorKind::IterativeBMN:
            return iterative_batch_min_norm(inst.X, inst.y, spec.b_list);
        case EstimatorKind::ServerAverage:
            return server_average(inst.X, inst.y, spec.b);
        case EstimatorKind::SubsampleMN:
            return subsample_min_norm(inst.X, inst.y, spec.keep_ratio);
        case EstimatorKind::Ridge:
            if (spec.rule == ParamRule::Tuned) {
                throw ConfigError("tuned ridge must be resolved via tune_ridge");
            }
            return ridge(inst.X, inst.y, spec.lambda);
    }
    throw ConfigError("unknown estimator kind");
}

RiskEstimate estimate_risk(const EstimatorSpec& spec, const ModelParams& params,
                           BetaMode beta_mode, int trials, std::uint64_t seed,
                           int threads) {
    if (trials < 1) {
        throw ConfigError("trials must be positive, got " + std::to_string(trials));
    }
    const EstimatorSpec resolved = resolve_spec(spec, params);

    std::vector<double> risks(trials);
    run_trials(trials, threads, [&](int t) {
        try {
            const Instance inst =
                generate_instance(params, beta_mode, hash_combine(seed, t));
            const Eigen::VectorXd beta_hat = apply_estimator(resolved, inst, params);
            risks[t] = normalized_risk(beta_hat, inst.beta, params.r);
        } catch (const NumericError& e) {
            throw SingularGram("trial " + std::to_string(t) + " of estimator '" +
                               resolved.label() + "': " + e.what());
        }
    });
    return summarize(risks);
}

std::vector<SweepRow> sweep(const SweepConfig& config, int threads) {
    if (config.estimators.empty()) {
        throw ConfigError("sweep needs at least one estimator");
    }
    if (config.gamma_grid.empty() || config.xi_grid.empty()) {
        throw ConfigError("gamma and xi grids must be nonempty");
    }
    if (config.trials < 2) {
        throw ConfigError("sweep needs trials >= 2, got " +
                          std::to_string(config.trials));
    }
    if (config.n < 1) {
        throw ConfigError("n must be positive");
    }
    if (!(config.r > 0.0)) {
        throw ConfigError("r must be positive");
    }
    for (const EstimatorSpec& spec : config.estimators) {
        validate_spec(spec);
        if (spec.rule == ParamRule::FromGrid && config.b_grid.empty()) {
            throw ConfigError("estimator '" + spec.label() +
                              "' takes b from the grid, but b-grid is empty");
        }
    }

    std::vector<SweepRow> rows;
    for (const EstimatorSpec& spec : config.estimators) {
        const bool uses_grid = spec.rule == ParamRule::FromGrid;
        const std::vector<int> cell_bs =
            uses_grid ? config.b_grid : std::vector<int>{0};
        for (const double gamma : config.gamma_grid) {
            for (const double xi : config.xi_grid) {
                for (const int cell_b : cell_bs) {
                    EstimatorSpec cs = spec;
                    if (uses_grid) {
                        cs.rule = ParamRule::Fixed;
                        cs.b = cell_b;
                    }
                    const int b_total = cs.batch_total();
                    const int n = resolve_n(config, b_total);

                    SweepRow row;
                    row.estimator = spec.label();
                    row.n = n;
                    row.gamma = gamma;
                    row.xi = xi;
                    row.mean = kNaN;
                    row.std_error = kNaN;
                    try {
                        const long p = std::llround(n * gamma);
                        if (p < 1) {
                            throw DomainError("gamma " + std::to_string(gamma) +
                                              " gives p < 1 at n = " +
                                              std::to_string(n));
                        }
                        // p must be an integer; simulate the nearest ratio and
                        // report it, rather than rejecting the cell.
                        const double gamma_eff = static_cast<double>(p) / n;
                        const ModelParams params =
                            make_params(n, gamma_eff, xi, config.r);
                        row.p = params.p;
                        row.gamma = gamma_eff;
                        row.seed = cell_seed(config.seed, params, config.beta_mode);

                        if (cs.kind == EstimatorKind::Ridge &&
                            cs.rule == ParamRule::Tuned) {
                            const TunedRidge tuned =
                                tune_ridge(params, config.beta_mode, config.trials,
                                           row.seed, threads);
                            row.mean = tuned.risk.mean;
                            row.std_error = tuned.risk.std_error;
                            row.trials = tuned.risk.trials;
                        } else {
                            const EstimatorSpec resolved = resolve_spec(cs, params);
                            switch (resolved.kind) {
                                case EstimatorKind::BatchMinNorm:
                                case EstimatorKind::ShrunkBatchMinNorm:
                                case EstimatorKind::ServerAverage:
                                    row.b = resolved.b;
                                    break;
                                case EstimatorKind::IterativeBMN:
                                    row.b = resolved.batch_total();
                                    break;
                                default:
                                    row.b = 0;
                                    break;
                            }
                            const RiskEstimate est =
                                estimate_risk(resolved, params, config.beta_mode,
                                              config.trials, row.seed, threads);
                            row.mean = est.mean;
                            row.std_error = est.std_error;
                            row.trials = est.trials;
                        }
                    } catch (const Error& e) {
                        row.error = e.what();
                        row.mean = kNaN;
                        row.std_error = kNaN;
                        row.trials = 0;
                    }
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

TunedRidge tune_ridge(const ModelParams& params, BetaMode beta_mode, int trials,
                      std::uint64_t seed, int threads) {
    if (trials < 1) {
        throw ConfigError("trials must be positive, got " + std::to_string(trials));
    }

    // Per-trial spectral cache: with G = Q diag(lam) Q^T, the ridge risk at
    // any lambda costs O(n) via
    //   ||beta_hat - beta||^2 = s^T diag(lam) s - 2 s^T v + r^2,
    //   s_i = (Q^T y)_i / (lam_i + lambda),  v = Q^T X beta.
    struct TrialCache {
        Eigen::VectorXd lam;
        Eigen::VectorXd qty;
        Eigen::VectorXd v;
    };
    std::vector<TrialCache> cache(trials);
    run_trials(trials, threads, [&](int t) {
        const Instance inst = generate_instance(params, beta_mode,
                                                hash_combine(seed, t));
        const Eigen::MatrixXd G = inst.X * inst.X.transpose();
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
        if (es.info() != Eigen::Success) {
            throw SingularGram("tune_ridge: eigendecomposition failed in trial " +
                               std::to_string(t));
        }
        cache[t].lam = es.eigenvalues().cwiseMax(0.0);
        cache[t].qty = es.eigenvectors().transpose() * inst.y;
        cache[t].v = es.eigenvectors().transpose() * (inst.X * inst.beta);
    });

    const double r2 = params.r * params.r;
    const auto trial_risk = [&](const TrialCache& c, double lambda) {
        const Eigen::ArrayXd s = c.qty.array() / (c.lam.array() + lambda);
        const double norm2 = (s * s * c.lam.array()).sum();
        const double inner = (s * c.v.array()).sum();
        return (norm2 - 2.0 * inner + r2) / r2;
    };
    const auto mean_risk = [&](double log10_lambda) {
        const double lambda = std::pow(10.0, log10_lambda);
        double sum = 0.0;
        for (const TrialCache& c : cache) {
            sum += trial_risk(c, lambda);
        }
        return sum / trials;
    };

    constexpr double kInvPhi = 0.6180339887498949;
    double lo = -4.0, hi = 4.0;
    double m1 = hi - kInvPhi * (hi - lo);
    double m2 = lo + kInvPhi * (hi - lo);
    double f1 = mean_risk(m1);
    double f2 = mean_risk(m2);
    while (hi - lo > 1e-4) {
        if (f1 <= f2) {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - kInvPhi * (hi - lo);
            f1 = mean_risk(m1);
        } else {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + kInvPhi * (hi - lo);
            f2 = mean_risk(m2);
        }
    }
    const double log_best = 0.5 * (lo + hi);

    TunedRidge out;
    out.lambda = std::pow(10.0, log_best);
    std::vector<double> risks(trials);
    for (int t = 0; t < trials; ++t) {
        risks[t] = trial_risk(cache[t], out.lambda);
    }
    out.risk = summarize(risks);
    return out;
}

}  // namespace bmn
