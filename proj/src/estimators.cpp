#include "bmn/estimators.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "bmn/errors.hpp"
#include "bmn/format.hpp"

namespace bmn {

namespace {

constexpr double kMaxGramCondition = 1e12;

void check_dims(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.rows() != y.size()) {
        throw DimensionMismatch("X has " + std::to_string(X.rows()) +
                                " rows but y has " + std::to_string(y.size()) +
                                " entries");
    }
    if (X.rows() == 0 || X.cols() == 0) {
        throw DimensionMismatch("X must be nonempty");
    }
}

void check_batch(Eigen::Index n, int b) {
    if (b <= 0 || n % b != 0) {
        throw BatchMismatch("batch size " + std::to_string(b) +
                            " does not divide n = " + std::to_string(n));
    }
}

// Solves G z = rhs for symmetric positive definite G without forming G^{-1}.
Eigen::VectorXd solve_gram(const Eigen::MatrixXd& G, const Eigen::VectorXd& rhs,
                           const char* context) {
    const Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success || llt.rcond() < 1.0 / kMaxGramCondition) {
        throw SingularGram(std::string(context) + ": Gram matrix of size " +
                           std::to_string(G.rows()) +
                           " is singular or ill conditioned");
    }
    return llt.solve(rhs);
}

}  // namespace

Eigen::VectorXd min_norm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    check_dims(X, y);
    const Eigen::MatrixXd G = X * X.transpose();
    return X.transpose() * solve_gram(G, y, "min_norm");
}

ModifiedModel build_modified_model(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                   int b) {
    check_dims(X, y);
    check_batch(X.rows(), b);
    const Eigen::Index m = X.rows() / b;
    const Eigen::Index p = X.cols();

    ModifiedModel model;
    model.Xp.resize(m, p);
    model.Yp.resize(m);
    model.A.resize(m, b);
    for (Eigen::Index j = 0; j < m; ++j) {
        const auto Xj = X.middleRows(j * b, b);
        const auto yj = y.segment(j * b, b);
        const Eigen::MatrixXd Gj = Xj * Xj.transpose();
        // A_j = y_j^T G_j^{-1}; G_j is symmetric so the transpose solve suffices.
        const Eigen::VectorXd Aj = solve_gram(Gj, yj, "build_modified_model");
        model.A.row(j) = Aj.transpose();
        model.Xp.row(j) = Aj.transpose() * Xj;
        model.Yp(j) = Aj.dot(yj);
    }
    return model;
}

Eigen::VectorXd batch_min_norm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               int b) {
    const ModifiedModel model = build_modified_model(X, y, b);
    return min_norm(model.Xp, model.Yp);
}

Eigen::VectorXd shrunk_batch_min_norm(const Eigen::MatrixXd& X,
                                      const Eigen::VectorXd& y, int b, double xi,
                                      ShrinkMode mode) {
    if (!(xi > 0.0) || xi > 1.0) {
        throw InvalidXi("xi must lie in (0, 1], got " + std::to_string(xi));
    }
    if (mode == ShrinkMode::Exact) {
        // mu_j = (1 - xi) Y'_j shrinks the modified samples to xi * Y', and
        // min-norm is linear in the response, so scale the estimate directly.
        return xi * batch_min_norm(X, y, b);
    }
    ModifiedModel model = build_modified_model(X, y, b);
    const double p = static_cast<double>(X.cols());
    const Eigen::Index m = model.Yp.size();
    for (Eigen::Index j = 0; j < m; ++j) {
        const double energy = y.segment(static_cast<Eigen::Index>(j) * b, b).squaredNorm();
        model.Yp(j) -= (1.0 - xi) * energy / p;
    }
    return min_norm(model.Xp, model.Yp);
}

Eigen::VectorXd iterative_batch_min_norm(const Eigen::MatrixXd& X,
                                         const Eigen::VectorXd& y,
                                         const std::vector<int>& b_list) {
    Eigen::MatrixXd Xc = X;
    Eigen::VectorXd yc = y;
    for (const int b : b_list) {
        ModifiedModel model = build_modified_model(Xc, yc, b);
        Xc = std::move(model.Xp);
        yc = std::move(model.Yp);
    }
    return min_norm(Xc, yc);
}

Eigen::VectorXd server_average(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               int b) {
    check_dims(X, y);
    check_batch(X.rows(), b);
    const Eigen::Index m = X.rows() / b;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(X.cols());
    for (Eigen::Index j = 0; j < m; ++j) {
        acc += min_norm(X.middleRows(j * b, b), y.segment(j * b, b));
    }
    return acc / static_cast<double>(m);
}

Eigen::VectorXd subsample_min_norm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                   double keep_ratio) {
    check_dims(X, y);
    const auto keep = static_cast<Eigen::Index>(
        std::llround(keep_ratio * static_cast<double>(X.rows())));
    if (keep < 1 || keep > X.rows()) {
        throw DomainError("keep_ratio " + std::to_string(keep_ratio) +
                          " keeps " + std::to_string(keep) + " of " +
                          std::to_string(X.rows()) + " rows");
    }
    return min_norm(X.topRows(keep), y.head(keep));
}

std::string EstimatorSpec::label() const {
    switch (kind) {
        case EstimatorKind::MinNorm:
            return "mn";
        case EstimatorKind::BatchMinNorm:
            if (rule == ParamRule::FromGrid) return "bmn";
            if (rule == ParamRule::Optimal) return "bmn(b=opt)";
            return "bmn(b=" + std::to_string(b) + ")";
        case EstimatorKind::ShrunkBatchMinNorm: {
            const std::string tag =
                shrink_mode == ShrinkMode::SampleEnergy ? ",sample-energy" : "";
            if (rule == ParamRule::FromGrid) {
                return tag.empty() ? "sbmn" : "sbmn(sample-energy)";
            }
            if (rule == ParamRule::Optimal) return "sbmn(b=opt" + tag + ")";
            return "sbmn(b=" + std::to_string(b) + tag + ")";
        }
        case EstimatorKind::IterativeBMN: {
            std::string stages;
            for (const int s : b_list) {
                if (!stages.empty()) stages += 'x';
                stages += std::to_string(s);
            }
            return "ibmn(" + stages + ")";
        }
        case EstimatorKind::ServerAverage:
            if (rule == ParamRule::FromGrid) return "avg";
            return "avg(b=" + std::to_string(b) + ")";
        case EstimatorKind::SubsampleMN:
            if (rule == ParamRule::Optimal) return "sub(keep=opt)";
            return "sub(keep=" + format_double(keep_ratio) + ")";
        case EstimatorKind::Ridge:
            if (rule == ParamRule::Tuned) return "ridge(tuned)";
            return "ridge(lambda=" + format_double(lambda) + ")";
    }
    return "unknown";
}

int EstimatorSpec::batch_total() const {
    switch (kind) {
        case EstimatorKind::BatchMinNorm:
        case EstimatorKind::ShrunkBatchMinNorm:
        case EstimatorKind::ServerAverage:
            return rule == ParamRule::Fixed ? b : 1;
        case EstimatorKind::IterativeBMN:
            return std::accumulate(b_list.begin(), b_list.end(), 1,
                                   [](int acc, int s) { return acc * s; });
        default:
            return 1;
    }
}

void validate_spec(const EstimatorSpec& spec) {
    switch (spec.kind) {
        case EstimatorKind::MinNorm:
            break;
        case EstimatorKind::BatchMinNorm:
        case EstimatorKind::ShrunkBatchMinNorm:
        case EstimatorKind::ServerAverage:
            if (spec.rule == ParamRule::Fixed && spec.b < 1) {
                throw ConfigError("batch size must be >= 1, got " +
                                  std::to_string(spec.b));
            }
            if (spec.rule == ParamRule::Optimal &&
                spec.kind == EstimatorKind::ServerAverage) {
                throw ConfigError("server averaging has no optimal-batch rule");
            }
            if (spec.rule == ParamRule::Tuned) {
                throw ConfigError("only ridge supports the tuned rule");
            }
            break;
        case EstimatorKind::IterativeBMN:
            if (spec.b_list.empty()) {
                throw ConfigError("iterative estimator needs at least one stage");
            }
            for (const int s : spec.b_list) {
                if (s < 1) {
                    throw ConfigError("iterative stage sizes must be >= 1");
                }
            }
            break;
        case EstimatorKind::SubsampleMN:
            if (spec.rule == ParamRule::Fixed &&
                (!(spec.keep_ratio > 0.0) || spec.keep_ratio > 1.0)) {
                throw ConfigError("keep_ratio must lie in (0, 1], got " +
                                  format_double(spec.keep_ratio));
            }
            if (spec.rule == ParamRule::FromGrid || spec.rule == ParamRule::Tuned) {
                throw ConfigError("subsampling supports fixed or optimal ratios");
            }
            break;
        case EstimatorKind::Ridge:
            if (spec.rule == ParamRule::Fixed && !(spec.lambda > 0.0)) {
                throw ConfigError("ridge lambda must be positive, got " +
                                  format_double(spec.lambda));
            }
            if (spec.rule == ParamRule::FromGrid || spec.rule == ParamRule::Optimal) {
                throw ConfigError("ridge supports fixed or tuned lambda");
            }
            break;
    }
}

Eigen::VectorXd ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      double lambda) {
    check_dims(X, y);
    if (!(lambda > 0.0)) {
        throw DomainError("ridge lambda must be positive, got " +
                          std::to_string(lambda));
    }
    Eigen::MatrixXd G = X * X.transpose();
    G.diagonal().array() += lambda;
    const Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success) {
        throw SingularGram("ridge: regularized Gram factorization failed");
    }
    return X.transpose() * llt.solve(y);
}

}  // namespace bmn
