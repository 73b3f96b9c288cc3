#include <doctest.h>

#include <vector>

#include <Eigen/Dense>

#include "bmn/errors.hpp"
#include "bmn/estimators.hpp"
#include "bmn/model.hpp"

using namespace bmn;

namespace {

Instance draw(int n, double gamma, double xi, std::uint64_t seed) {
    return generate_instance(make_params(n, gamma, xi, 1.0),
                             BetaMode::UniformSphere, seed);
}

Eigen::MatrixXd random_orthogonal(int p, std::uint64_t seed) {
    const Instance inst = draw(p, 1.0, 0.8, seed);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(inst.X);
    return qr.householderQ() * Eigen::MatrixXd::Identity(p, p);
}

}  // namespace

TEST_CASE("min_norm on single-row systems") {
    Eigen::MatrixXd X(1, 3);
    Eigen::VectorXd y(1);

    X << 2.0, 0.0, 0.0;
    y << 4.0;
    Eigen::VectorXd beta = min_norm(X, y);
    CHECK(beta(0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(beta(1) == 0.0);
    CHECK(beta(2) == 0.0);

    X << 1.0, 1.0, 0.0;
    y << 2.0;
    beta = min_norm(X, y);
    CHECK(beta(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(beta(1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(beta(2) == 0.0);
}

TEST_CASE("min_norm interpolates and lies in the row space") {
    const Instance inst = draw(6, 2.0, 0.8, 21);
    const Eigen::VectorXd beta = min_norm(inst.X, inst.y);
    CHECK((inst.X * beta - inst.y).norm() < 1e-10);
    // The row-space component is the whole estimate: projecting onto the
    // orthogonal complement of the rows must annihilate it.
    const Eigen::MatrixXd pinv =
        inst.X.completeOrthogonalDecomposition().pseudoInverse();
    const Eigen::VectorXd null_part = beta - pinv * (inst.X * beta);
    CHECK(null_part.norm() < 1e-10 * beta.norm());
}

TEST_CASE("min_norm rejects rank-deficient rows") {
    Eigen::MatrixXd X(2, 4);
    X.row(0) << 1.0, 2.0, 3.0, 4.0;
    X.row(1) = X.row(0);
    Eigen::VectorXd y(2);
    y << 1.0, 1.0;
    CHECK_THROWS_AS(min_norm(X, y), SingularGram);
}

TEST_CASE("min_norm rejects mismatched shapes") {
    const Instance inst = draw(6, 2.0, 0.8, 22);
    CHECK_THROWS_AS(min_norm(inst.X, inst.y.head(3)), DimensionMismatch);
}

TEST_CASE("modified model at b = 1 rescales rows by y_j / ||x_j||^2") {
    const Instance inst = draw(5, 2.0, 0.8, 23);
    const ModifiedModel mm = build_modified_model(inst.X, inst.y, 1);
    REQUIRE(mm.Xp.rows() == 5);
    REQUIRE(mm.A.cols() == 1);
    for (int j = 0; j < 5; ++j) {
        const double aj = inst.y(j) / inst.X.row(j).squaredNorm();
        CHECK(mm.A(j, 0) == doctest::Approx(aj).epsilon(1e-12));
        CHECK((mm.Xp.row(j) - aj * inst.X.row(j)).norm() < 1e-12);
        CHECK(mm.Yp(j) == doctest::Approx(aj * inst.y(j)).epsilon(1e-12));
    }
}

TEST_CASE("modified model solves each batch gram system") {
    const Instance inst = draw(6, 2.0, 0.8, 24);
    const int b = 3;
    const ModifiedModel mm = build_modified_model(inst.X, inst.y, b);
    REQUIRE(mm.Xp.rows() == 2);
    for (int j = 0; j < 2; ++j) {
        const Eigen::MatrixXd Xj = inst.X.middleRows(j * b, b);
        const Eigen::VectorXd yj = inst.y.segment(j * b, b);
        const Eigen::VectorXd aj = (Xj * Xj.transpose()).ldlt().solve(yj);
        CHECK((mm.A.row(j).transpose() - aj).norm() < 1e-10);
        CHECK((mm.Xp.row(j).transpose() - Xj.transpose() * aj).norm() < 1e-10);
        CHECK(mm.Yp(j) == doctest::Approx(aj.dot(yj)).epsilon(1e-10));
    }
}

TEST_CASE("batch size must divide the sample count") {
    const Instance inst = draw(8, 2.0, 0.8, 25);
    CHECK_THROWS_AS(build_modified_model(inst.X, inst.y, 5), BatchMismatch);
    CHECK_THROWS_AS(build_modified_model(inst.X, inst.y, 0), BatchMismatch);
    CHECK_THROWS_AS(build_modified_model(inst.X, inst.y, -2), BatchMismatch);
    CHECK_THROWS_AS(batch_min_norm(inst.X, inst.y, 3), BatchMismatch);
}

TEST_CASE("batch min-norm with one batch per sample equals min-norm") {
    const Instance inst = draw(12, 2.0, 0.8, 26);
    const Eigen::VectorXd mn = min_norm(inst.X, inst.y);
    const Eigen::VectorXd bmn = batch_min_norm(inst.X, inst.y, 1);
    CHECK((mn - bmn).norm() < 1e-10 * mn.norm());
}

TEST_CASE("batch min-norm matches an explicit pseudoinverse construction") {
    const Instance inst = draw(4, 1.5, 0.8, 27);
    const int b = 2;
    Eigen::MatrixXd Xp(2, 6);
    Eigen::VectorXd Yp(2);
    for (int j = 0; j < 2; ++j) {
        const Eigen::MatrixXd Xj = inst.X.middleRows(j * b, b);
        const Eigen::VectorXd yj = inst.y.segment(j * b, b);
        const Eigen::MatrixXd gram_pinv =
            (Xj * Xj.transpose()).completeOrthogonalDecomposition().pseudoInverse();
        const Eigen::VectorXd aj = gram_pinv * yj;
        Xp.row(j) = (Xj.transpose() * aj).transpose();
        Yp(j) = aj.dot(yj);
    }
    const Eigen::MatrixXd mn_pinv =
        Xp.completeOrthogonalDecomposition().pseudoInverse();
    const Eigen::VectorXd oracle = mn_pinv * Yp;
    const Eigen::VectorXd ours = batch_min_norm(inst.X, inst.y, b);
    CHECK((oracle - ours).norm() < 1e-9 * (oracle.norm() + 1.0));
}

TEST_CASE("orthogonal rows collapse every batch size to min-norm") {
    // With orthonormal rows all batch grams are identities, so the modified
    // system spans the same interpolation constraints as the original one.
    const Eigen::MatrixXd Q = random_orthogonal(16, 31);
    const Eigen::MatrixXd X = Q.topRows(8);
    const Instance helper = draw(8, 2.0, 0.8, 32);
    const Eigen::VectorXd y = helper.y;
    const Eigen::VectorXd mn = min_norm(X, y);
    for (const int b : {1, 2, 4, 8}) {
        CAPTURE(b);
        const Eigen::VectorXd bmn = batch_min_norm(X, y, b);
        CHECK((mn - bmn).norm() < 1e-8 * mn.norm());
    }
}

TEST_CASE("estimators are rotation equivariant") {
    const Instance inst = draw(8, 2.0, 0.8, 33);
    const Eigen::MatrixXd Q = random_orthogonal(16, 34);
    const Eigen::MatrixXd XQ = inst.X * Q;
    {
        const Eigen::VectorXd direct = min_norm(inst.X, inst.y);
        const Eigen::VectorXd rotated = min_norm(XQ, inst.y);
        CHECK((rotated - Q.transpose() * direct).norm() < 1e-9);
    }
    {
        const Eigen::VectorXd direct = batch_min_norm(inst.X, inst.y, 2);
        const Eigen::VectorXd rotated = batch_min_norm(XQ, inst.y, 2);
        CHECK((rotated - Q.transpose() * direct).norm() < 1e-9);
    }
    {
        const Eigen::VectorXd direct = ridge(inst.X, inst.y, 0.7);
        const Eigen::VectorXd rotated = ridge(XQ, inst.y, 0.7);
        CHECK((rotated - Q.transpose() * direct).norm() < 1e-9);
    }
}

TEST_CASE("exact shrinkage is literally xi times batch min-norm") {
    const Instance inst = draw(8, 2.0, 0.8, 35);
    const double xi = 0.8;
    const Eigen::VectorXd bmn = batch_min_norm(inst.X, inst.y, 2);
    const Eigen::VectorXd sbmn =
        shrunk_batch_min_norm(inst.X, inst.y, 2, xi, ShrinkMode::Exact);
    CHECK((sbmn - xi * bmn).norm() == 0.0);
}

TEST_CASE("sample-energy shrinkage is a different estimator") {
    const Instance inst = draw(8, 2.0, 0.8, 36);
    const Eigen::VectorXd exact =
        shrunk_batch_min_norm(inst.X, inst.y, 2, 0.8, ShrinkMode::Exact);
    const Eigen::VectorXd energy =
        shrunk_batch_min_norm(inst.X, inst.y, 2, 0.8, ShrinkMode::SampleEnergy);
    CHECK((exact - energy).norm() > 1e-8);
}

TEST_CASE("shrinkage validates xi") {
    const Instance inst = draw(8, 2.0, 0.8, 37);
    CHECK_THROWS_AS(shrunk_batch_min_norm(inst.X, inst.y, 2, 0.0), InvalidXi);
    CHECK_THROWS_AS(shrunk_batch_min_norm(inst.X, inst.y, 2, 1.5), InvalidXi);
    CHECK_NOTHROW(shrunk_batch_min_norm(inst.X, inst.y, 2, 1.0));
}

TEST_CASE("a single iterative stage equals plain batch min-norm") {
    const Instance inst = draw(12, 2.0, 0.8, 38);
    const Eigen::VectorXd staged =
        iterative_batch_min_norm(inst.X, inst.y, {3});
    const Eigen::VectorXd flat = batch_min_norm(inst.X, inst.y, 3);
    CHECK((staged - flat).norm() < 1e-12);
}

TEST_CASE("iterative stages shrink the system multiplicatively") {
    const Instance inst = draw(12, 2.0, 0.8, 39);
    // 12 -> 6 -> 2 rows; the final min-norm sees a 2 x p system.
    const Eigen::VectorXd beta =
        iterative_batch_min_norm(inst.X, inst.y, {2, 3});
    CHECK(beta.size() == inst.X.cols());
    CHECK_THROWS_AS(iterative_batch_min_norm(inst.X, inst.y, {5, 2}),
                    BatchMismatch);
    // Stage sizes must divide what is left after the previous stage.
    CHECK_THROWS_AS(iterative_batch_min_norm(inst.X, inst.y, {2, 4}),
                    BatchMismatch);
}

TEST_CASE("unit iterative stages reduce to min-norm") {
    const Instance inst = draw(6, 2.0, 0.8, 40);
    const Eigen::VectorXd staged =
        iterative_batch_min_norm(inst.X, inst.y, {1, 1});
    const Eigen::VectorXd mn = min_norm(inst.X, inst.y);
    CHECK((staged - mn).norm() < 1e-9 * mn.norm());
}

TEST_CASE("server average with one batch is min-norm") {
    const Instance inst = draw(6, 2.0, 0.8, 41);
    const Eigen::VectorXd avg = server_average(inst.X, inst.y, 6);
    const Eigen::VectorXd mn = min_norm(inst.X, inst.y);
    CHECK((avg - mn).norm() < 1e-12);
}

TEST_CASE("server average with singleton batches averages row projections") {
    const Instance inst = draw(4, 2.0, 0.8, 42);
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(8);
    for (int j = 0; j < 4; ++j) {
        expected +=
            inst.X.row(j).transpose() * (inst.y(j) / inst.X.row(j).squaredNorm());
    }
    expected /= 4.0;
    const Eigen::VectorXd avg = server_average(inst.X, inst.y, 1);
    CHECK((avg - expected).norm() < 1e-12);
}

TEST_CASE("subsampling keeps a row prefix") {
    const Instance inst = draw(8, 2.0, 0.8, 43);
    const Eigen::VectorXd full = subsample_min_norm(inst.X, inst.y, 1.0);
    const Eigen::VectorXd mn = min_norm(inst.X, inst.y);
    CHECK((full - mn).norm() == 0.0);
    const Eigen::VectorXd half = subsample_min_norm(inst.X, inst.y, 0.5);
    const Eigen::VectorXd top = min_norm(inst.X.topRows(4), inst.y.head(4));
    CHECK((half - top).norm() == 0.0);
    CHECK_THROWS_AS(subsample_min_norm(inst.X, inst.y, 0.0), DomainError);
    CHECK_THROWS_AS(subsample_min_norm(inst.X, inst.y, 1.2), DomainError);
}

TEST_CASE("ridge approaches min-norm as the penalty vanishes") {
    const Instance inst = draw(6, 2.0, 0.8, 44);
    const Eigen::VectorXd mn = min_norm(inst.X, inst.y);
    const Eigen::VectorXd almost = ridge(inst.X, inst.y, 1e-10);
    CHECK((almost - mn).norm() < 1e-6 * mn.norm());
    CHECK_THROWS_AS(ridge(inst.X, inst.y, 0.0), DomainError);
    CHECK_THROWS_AS(ridge(inst.X, inst.y, -1.0), DomainError);
}

TEST_CASE("ridge norm decreases with the penalty") {
    const Instance inst = draw(6, 2.0, 0.8, 45);
    double prev = ridge(inst.X, inst.y, 0.01).norm();
    for (const double lam : {0.1, 1.0, 10.0, 100.0}) {
        const double cur = ridge(inst.X, inst.y, lam).norm();
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("spec labels stay symbolic for symbolic rules") {
    EstimatorSpec spec;
    spec.kind = EstimatorKind::BatchMinNorm;
    spec.rule = ParamRule::Fixed;
    spec.b = 2;
    CHECK(spec.label() == "bmn(b=2)");
    CHECK(spec.batch_total() == 2);
    spec.rule = ParamRule::Optimal;
    CHECK(spec.label() == "bmn(b=opt)");
    CHECK(spec.batch_total() == 1);
    spec.rule = ParamRule::FromGrid;
    CHECK(spec.label() == "bmn");

    EstimatorSpec ibmn;
    ibmn.kind = EstimatorKind::IterativeBMN;
    ibmn.b_list = {2, 3};
    CHECK(ibmn.label() == "ibmn(2x3)");
    CHECK(ibmn.batch_total() == 6);
}

TEST_CASE("validate_spec rejects inconsistent rules") {
    EstimatorSpec spec;
    spec.kind = EstimatorKind::BatchMinNorm;
    spec.b = 0;
    CHECK_THROWS_AS(validate_spec(spec), ConfigError);
    spec.b = 2;
    spec.rule = ParamRule::Tuned;
    CHECK_THROWS_AS(validate_spec(spec), ConfigError);

    EstimatorSpec avg;
    avg.kind = EstimatorKind::ServerAverage;
    avg.rule = ParamRule::Optimal;
    CHECK_THROWS_AS(validate_spec(avg), ConfigError);

    EstimatorSpec sub;
    sub.kind = EstimatorKind::SubsampleMN;
    sub.rule = ParamRule::Fixed;
    sub.keep_ratio = 0.0;
    CHECK_THROWS_AS(validate_spec(sub), ConfigError);

    EstimatorSpec ridge_spec;
    ridge_spec.kind = EstimatorKind::Ridge;
    ridge_spec.rule = ParamRule::Fixed;
    ridge_spec.lambda = -1.0;
    CHECK_THROWS_AS(validate_spec(ridge_spec), ConfigError);

    EstimatorSpec ibmn;
    ibmn.kind = EstimatorKind::IterativeBMN;
    ibmn.b_list = {};
    CHECK_THROWS_AS(validate_spec(ibmn), ConfigError);
    ibmn.b_list = {2, 0};
    CHECK_THROWS_AS(validate_spec(ibmn), ConfigError);
}
