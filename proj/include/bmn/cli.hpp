#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bmn/estimators.hpp"
#include "bmn/model.hpp"

namespace bmn {

// Grid syntax shared by flags and config files: comma-separated entries,
// each a scalar or an inclusive "start:stop[:step]" range (step defaults
// to 1). Range points are snapped to 12 significant digits so that e.g.
// 0.15 + k*0.05 renders as the decimal a reader expects.
std::vector<double> parse_real_grid(const std::string& text);
std::vector<int> parse_int_grid(const std::string& text);

// Estimator tokens:
//   mn | bmn[:<b|opt>] | sbmn[:<b|opt>[:exact|sample-energy]]
//   | ibmn:<b1>x<b2>[x...] | avg[:<b>] | sub:<ratio|opt> | ridge:<lambda|tuned>
// A bare bmn/sbmn/avg takes its batch size from the sweep's b-grid.
EstimatorSpec parse_estimator(const std::string& token);
std::vector<EstimatorSpec> parse_estimator_list(const std::string& text);

// Round-trip of parse_estimator, used to render resolved manifests.
std::string estimator_token(const EstimatorSpec& spec);

struct NSpec {
    int n = 400;
    bool n_auto = false;
};
// "400", "auto" (base 400) or "auto:<base>".
NSpec parse_n_spec(const std::string& text);

// "sphere" or "first-axis".
BetaMode parse_beta_mode(const std::string& text);

// Flat key=value lines; '#' comments and blank lines ignored. Duplicate keys
// and malformed lines are reported with their line number.
std::vector<std::pair<std::string, std::string>> parse_config_file(
    const std::string& path);

// Unset fields fall through to the next layer: flags > config file > preset
// > built-in defaults. Values stay in flag syntax until the merged result is
// validated, so every layer shares one parser and one set of diagnostics.
struct RiskCurveOptions {
    std::optional<std::string> estimators;
    std::optional<std::string> gamma_grid;
    std::optional<std::string> xi_grid;
    std::optional<std::string> b_grid;
    std::optional<std::string> n;
    std::optional<double> r;
    std::optional<std::string> beta_mode;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<bool> theory;
};

// Overlay wins where it has a value.
RiskCurveOptions merge_options(RiskCurveOptions base, const RiskCurveOptions& overlay);

// Named figure presets: fig1/fig2 configure opt-batch, fig3..fig12 configure
// risk-curve. Lookup failure lists the valid names.
bool is_opt_batch_preset(const std::string& name);
RiskCurveOptions risk_curve_preset(const std::string& name);
void opt_batch_preset(const std::string& name, std::string& family,
                      std::string& gamma_grid, std::string& xi_grid);

int run_cli(int argc, const char* const* argv);

}  // namespace bmn
