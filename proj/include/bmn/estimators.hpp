#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bmn {

// Per-batch weak estimators assembled into a smaller linear system.
// Row j of Xp is the j-th batch's min-norm estimate (as a row vector),
// Yp(j) is the matching modified sample, and row j of A holds the
// coefficients A_j = y_j^T (X_j X_j^T)^{-1}.
struct ModifiedModel {
    Eigen::MatrixXd Xp;  // (n/b) x p
    Eigen::VectorXd Yp;  // n/b
    Eigen::MatrixXd A;   // (n/b) x b
};

enum class ShrinkMode {
    Exact,         // mu_j = (1 - xi) * Y'_j, so the output is exactly xi * BMN
    SampleEnergy,  // mu_j = (1 - xi) * ||y_j||^2 / p
};

enum class EstimatorKind {
    MinNorm,
    BatchMinNorm,
    ShrunkBatchMinNorm,
    IterativeBMN,
    ServerAverage,
    SubsampleMN,
    Ridge,
};

// How a spec's tunable parameter gets its value: a literal, the sweep's
// b-grid, the closed-form optimum for the cell's (gamma, xi), or a Monte
// Carlo search (ridge only).
enum class ParamRule {
    Fixed,
    FromGrid,
    Optimal,
    Tuned,
};

struct EstimatorSpec {
    EstimatorKind kind = EstimatorKind::MinNorm;
    ParamRule rule = ParamRule::Fixed;
    int b = 1;                               // batch kinds
    std::vector<int> b_list;                 // IterativeBMN stages
    ShrinkMode shrink_mode = ShrinkMode::Exact;
    double keep_ratio = 1.0;                 // SubsampleMN
    double lambda = 1.0;                     // Ridge

    // Stable curve identity for output tables: symbolic rules stay symbolic
    // ("bmn", "bmn(b=opt)"), so one configured estimator is one label.
    std::string label() const;

    // Rows consumed per final modified sample; drives the divisibility
    // adjustment of n. 1 for kinds without a batch parameter.
    int batch_total() const;
};

// Throws UsageError subtypes when the spec's parameters are out of range.
void validate_spec(const EstimatorSpec& spec);

// Minimum-l2-norm interpolator X^T (X X^T)^{-1} y. Throws SingularGram when
// the Gram matrix is numerically rank deficient (condition > 1e12).
Eigen::VectorXd min_norm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

// Splits rows into consecutive blocks of size b and solves one Gram system
// per block. Throws BatchMismatch unless b divides n.
ModifiedModel build_modified_model(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                   int b);

// Min-norm applied to the modified model.
Eigen::VectorXd batch_min_norm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               int b);

Eigen::VectorXd shrunk_batch_min_norm(const Eigen::MatrixXd& X,
                                      const Eigen::VectorXd& y, int b, double xi,
                                      ShrinkMode mode = ShrinkMode::Exact);

// Applies the modified-model construction once per entry of b_list, then one
// final min-norm on whatever system remains.
Eigen::VectorXd iterative_batch_min_norm(const Eigen::MatrixXd& X,
                                         const Eigen::VectorXd& y,
                                         const std::vector<int>& b_list);

// Unweighted mean of the per-batch min-norm estimators.
Eigen::VectorXd server_average(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               int b);

// Min-norm on the first round(keep_ratio * n) rows.
Eigen::VectorXd subsample_min_norm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                   double keep_ratio);

// Dual-form ridge X^T (X X^T + lambda I)^{-1} y; lambda must be positive.
Eigen::VectorXd ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      double lambda);

}  // namespace bmn
