#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>
#include <string>

#include "bmn/cli.hpp"
#include "bmn/errors.hpp"
#include "bmn/estimators.hpp"
#include "bmn/model.hpp"
#include "bmn/montecarlo.hpp"
#include "bmn/theory.hpp"
#include "bmn/version.hpp"

namespace py = pybind11;

namespace {

double choice_to_float(const bmn::BatchChoice& choice) {
    return choice.infinite ? std::numeric_limits<double>::infinity()
                           : static_cast<double>(choice.b);
}

bmn::BetaMode mode_from_string(const std::string& text) {
    return bmn::parse_beta_mode(text);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "Batch minimum-norm regression: estimators, closed-form risk bounds "
        "and Monte Carlo risk estimates";
    m.attr("__version__") = bmn::kVersion;

    py::register_exception<bmn::UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<bmn::NumericError>(m, "NumericError",
                                              PyExc_ArithmeticError);

    py::class_<bmn::BoundPair>(m, "BoundPair")
        .def_readonly("bias", &bmn::BoundPair::bias)
        .def_readonly("noise", &bmn::BoundPair::noise)
        .def_readonly("total", &bmn::BoundPair::total)
        .def("__repr__", [](const bmn::BoundPair& bp) {
            return "BoundPair(bias=" + std::to_string(bp.bias) +
                   ", noise=" + std::to_string(bp.noise) +
                   ", total=" + std::to_string(bp.total) + ")";
        });

    // Estimators. X is n x p (rows are samples); all return the coefficient
    // estimate as a length-p vector.
    m.def("min_norm", &bmn::min_norm, py::arg("X"), py::arg("y"),
          "Minimum-l2-norm interpolator");
    m.def("batch_min_norm", &bmn::batch_min_norm, py::arg("X"), py::arg("y"),
          py::arg("b"), "Batch min-norm with batch size b (b must divide n)");
    m.def(
        "shrunk_batch_min_norm",
        [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int b, double xi,
           const std::string& mode) {
            const bmn::ShrinkMode sm = mode == "sample-energy"
                                           ? bmn::ShrinkMode::SampleEnergy
                                           : bmn::ShrinkMode::Exact;
            if (mode != "exact" && mode != "sample-energy") {
                throw bmn::ConfigError("bad shrink mode '" + mode +
                                       "': expected exact or sample-energy");
            }
            return bmn::shrunk_batch_min_norm(X, y, b, xi, sm);
        },
        py::arg("X"), py::arg("y"), py::arg("b"), py::arg("xi"),
        py::arg("mode") = "exact", "Shrunk batch min-norm");
    m.def("iterative_batch_min_norm", &bmn::iterative_batch_min_norm,
          py::arg("X"), py::arg("y"), py::arg("b_list"),
          "Batch min-norm applied in stages");
    m.def("server_average", &bmn::server_average, py::arg("X"), py::arg("y"),
          py::arg("b"), "Mean of per-batch min-norm estimators");
    m.def("subsample_min_norm", &bmn::subsample_min_norm, py::arg("X"),
          py::arg("y"), py::arg("keep_ratio"),
          "Min-norm on the first round(keep_ratio * n) rows");
    m.def("ridge", &bmn::ridge, py::arg("X"), py::arg("y"), py::arg("lam"),
          "Dual-form ridge regression");

    // Closed-form theory.
    m.def("mn_asymptotic_risk", &bmn::mn_asymptotic_risk, py::arg("gamma"),
          py::arg("xi"));
    m.def("bmn_upper_bound", &bmn::bmn_upper_bound, py::arg("b"),
          py::arg("gamma"), py::arg("xi"));
    m.def("bmn_lower_bound", &bmn::bmn_lower_bound, py::arg("b"),
          py::arg("gamma"), py::arg("xi"));
    m.def("sbmn_upper_bound", &bmn::sbmn_upper_bound, py::arg("b"),
          py::arg("gamma"), py::arg("xi"));
    m.def("sbmn_lower_bound", &bmn::sbmn_lower_bound, py::arg("b"),
          py::arg("gamma"), py::arg("xi"));
    m.def("bmn_upper_bound_limit", &bmn::bmn_upper_bound_limit, py::arg("gamma"),
          py::arg("xi"));
    m.def("sbmn_upper_bound_limit", &bmn::sbmn_upper_bound_limit,
          py::arg("gamma"), py::arg("xi"));
    m.def("sbmn_b1_risk", &bmn::sbmn_b1_risk, py::arg("gamma"), py::arg("xi"));
    m.def("lb_c_factor", &bmn::lb_c_factor, py::arg("b"), py::arg("gamma"),
          py::arg("xi"));
    m.def("lb_c_factor_limit", &bmn::lb_c_factor_limit, py::arg("gamma"),
          py::arg("xi"));
    m.def(
        "bmn_optimal_batch",
        [](double gamma, double xi) {
            return choice_to_float(bmn::bmn_optimal_batch(gamma, xi));
        },
        py::arg("gamma"), py::arg("xi"),
        "Risk-bound-minimizing batch size; math.inf when unbounded");
    m.def(
        "sbmn_optimal_batch",
        [](double gamma, double xi) {
            return choice_to_float(bmn::sbmn_optimal_batch(gamma, xi));
        },
        py::arg("gamma"), py::arg("xi"),
        "Shrunk-variant optimal batch size; math.inf when unbounded");
    m.def("bmn_snr_threshold", &bmn::bmn_snr_threshold);
    m.def("mn_gamma_opt", &bmn::mn_gamma_opt, py::arg("xi"));
    m.def("server_avg_asymptotic_risk", &bmn::server_avg_asymptotic_risk,
          py::arg("gamma"), py::arg("xi"), py::arg("gamma_tilde"));
    m.def("server_avg_optimal_batch", &bmn::server_avg_optimal_batch,
          py::arg("gamma"), py::arg("xi"), py::arg("n"));

    // Data generation and Monte Carlo.
    m.def(
        "generate_instance",
        [](int n, double gamma, double xi, double r, const std::string& beta_mode,
           std::uint64_t seed) {
            const bmn::ModelParams params = bmn::make_params(n, gamma, xi, r);
            const bmn::Instance inst =
                bmn::generate_instance(params, mode_from_string(beta_mode), seed);
            return py::make_tuple(inst.X, inst.y, inst.beta);
        },
        py::arg("n"), py::arg("gamma"), py::arg("xi"), py::arg("r") = 1.0,
        py::arg("beta_mode") = "sphere", py::arg("seed") = 42,
        "Draw one instance; returns (X, y, beta)");
    m.def(
        "estimate_risk",
        [](const std::string& estimator, int n, double gamma, double xi, double r,
           const std::string& beta_mode, int trials, std::uint64_t seed,
           int threads) {
            const bmn::EstimatorSpec spec = bmn::parse_estimator(estimator);
            if (spec.rule == bmn::ParamRule::FromGrid) {
                throw bmn::ConfigError("estimator '" + estimator +
                                       "' needs an explicit parameter here");
            }
            const bmn::ModelParams params = bmn::make_params(n, gamma, xi, r);
            const bmn::BetaMode mode = mode_from_string(beta_mode);
            bmn::RiskEstimate est;
            {
                py::gil_scoped_release release;
                const std::uint64_t cell = bmn::cell_seed(seed, params, mode);
                est = bmn::estimate_risk(spec, params, mode, trials, cell, threads);
            }
            return py::make_tuple(est.mean, est.std_error, est.trials);
        },
        py::arg("estimator"), py::arg("n"), py::arg("gamma"), py::arg("xi"),
        py::arg("r") = 1.0, py::arg("beta_mode") = "sphere",
        py::arg("trials") = 200, py::arg("seed") = 42, py::arg("threads") = 1,
        "Monte Carlo normalized risk; returns (mean, stderr, trials). The "
        "estimator token uses the CLI grammar, e.g. 'bmn:2' or 'sbmn:opt'");
}
