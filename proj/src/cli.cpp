#include "bmn/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "bmn/errors.hpp"
#include "bmn/format.hpp"
#include "bmn/lemma_verify.hpp"
#include "bmn/model.hpp"
#include "bmn/montecarlo.hpp"
#include "bmn/report.hpp"
#include "bmn/theory.hpp"
#include "bmn/version.hpp"

namespace bmn {
namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string::size_type pos = 0;
    while (true) {
        const auto next = text.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(text.substr(pos));
            return out;
        }
        out.push_back(text.substr(pos, next - pos));
        pos = next + 1;
    }
}

double parse_double(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last || t.empty()) {
        throw ConfigError("bad " + what + " '" + text + "': expected a number");
    }
    return value;
}

long long parse_int(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    long long value = 0;
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last || t.empty()) {
        throw ConfigError("bad " + what + " '" + text + "': expected an integer");
    }
    return value;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    std::uint64_t value = 0;
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last || t.empty()) {
        throw ConfigError("bad " + what + " '" + text +
                          "': expected a non-negative integer");
    }
    return value;
}

// Kills the binary-fraction residue of start + k * step so grid points print
// as the decimals the user wrote (0.15 + 13 * 0.05 -> 0.8, not 0.80000...01).
double snap12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

bool parse_bool(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    if (t == "true" || t == "1") return true;
    if (t == "false" || t == "0") return false;
    throw ConfigError("bad " + what + " '" + text + "': expected true or false");
}

std::string render_bool(bool v) { return v ? "true" : "false"; }

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (const std::string& p : parts) {
        if (!out.empty()) out += sep;
        out += p;
    }
    return out;
}

// render_csv cells may not contain commas or newlines; diagnostics can.
std::string sanitize_cell(std::string text) {
    for (char& c : text) {
        if (c == ',') c = ';';
        if (c == '\n' || c == '\r') c = ' ';
    }
    return text;
}

std::string render_real_grid(const std::vector<double>& grid) {
    std::vector<std::string> parts;
    parts.reserve(grid.size());
    for (const double v : grid) parts.push_back(format_double(v));
    return join(parts, ',');
}

std::string render_int_grid(const std::vector<int>& grid) {
    std::vector<std::string> parts;
    parts.reserve(grid.size());
    for (const int v : grid) parts.push_back(std::to_string(v));
    return join(parts, ',');
}

}  // namespace

std::vector<double> parse_real_grid(const std::string& text) {
    std::vector<double> out;
    for (const std::string& raw : split(text, ',')) {
        const std::string entry = trim(raw);
        if (entry.empty()) {
            throw ConfigError("empty grid entry in '" + text + "'");
        }
        const std::vector<std::string> parts = split(entry, ':');
        if (parts.size() == 1) {
            out.push_back(parse_double(parts[0], "grid value"));
            continue;
        }
        if (parts.size() > 3) {
            throw ConfigError("bad grid entry '" + entry +
                              "': expected start:stop[:step]");
        }
        const double start = parse_double(parts[0], "grid start");
        const double stop = parse_double(parts[1], "grid stop");
        const double step =
            parts.size() == 3 ? parse_double(parts[2], "grid step") : 1.0;
        if (!(step > 0.0)) {
            throw ConfigError("grid step must be positive in '" + entry + "'");
        }
        if (stop < start - 1e-12) {
            throw ConfigError("grid stop below start in '" + entry + "'");
        }
        const long count = std::lround(std::floor((stop - start) / step + 1e-9)) + 1;
        for (long k = 0; k < count; ++k) {
            out.push_back(snap12(start + static_cast<double>(k) * step));
        }
    }
    if (out.empty()) throw ConfigError("grid '" + text + "' is empty");
    return out;
}

std::vector<int> parse_int_grid(const std::string& text) {
    std::vector<int> out;
    for (const double v : parse_real_grid(text)) {
        const long long rounded = std::llround(v);
        if (std::abs(v - static_cast<double>(rounded)) > 1e-9) {
            throw ConfigError("grid '" + text + "' holds non-integer value " +
                              format_double(v));
        }
        if (rounded < -1000000000LL || rounded > 1000000000LL) {
            throw ConfigError("grid value " + format_double(v) + " out of range");
        }
        out.push_back(static_cast<int>(rounded));
    }
    return out;
}

EstimatorSpec parse_estimator(const std::string& token) {
    const std::string t = trim(token);
    const std::vector<std::string> parts = split(t, ':');
    const std::string& head = parts[0];
    EstimatorSpec spec;
    const auto reject_extra = [&](std::size_t max_parts) {
        if (parts.size() > max_parts) {
            throw ConfigError("bad estimator '" + t + "'");
        }
    };

    if (head == "mn") {
        reject_extra(1);
        spec.kind = EstimatorKind::MinNorm;
        return spec;
    }
    if (head == "bmn" || head == "sbmn" || head == "avg") {
        spec.kind = head == "bmn"     ? EstimatorKind::BatchMinNorm
                    : head == "sbmn"  ? EstimatorKind::ShrunkBatchMinNorm
                                      : EstimatorKind::ServerAverage;
        reject_extra(head == "sbmn" ? 3 : 2);
        if (head == "sbmn" && parts.size() == 2 &&
            (parts[1] == "exact" || parts[1] == "sample-energy")) {
            // Mode without a batch rule: the batch comes from the grid.
            spec.rule = ParamRule::FromGrid;
            spec.shrink_mode = parts[1] == "exact" ? ShrinkMode::Exact
                                                   : ShrinkMode::SampleEnergy;
            validate_spec(spec);
            return spec;
        }
        if (parts.size() == 1) {
            spec.rule = ParamRule::FromGrid;
        } else if (parts[1] == "opt") {
            if (head == "avg") {
                throw ConfigError(
                    "bad estimator '" + t +
                    "': averaging has no closed-form optimum; give a batch size");
            }
            spec.rule = ParamRule::Optimal;
        } else {
            spec.rule = ParamRule::Fixed;
            spec.b = static_cast<int>(parse_int(parts[1], "batch size"));
        }
        if (head == "sbmn" && parts.size() == 3) {
            if (parts[2] == "exact") {
                spec.shrink_mode = ShrinkMode::Exact;
            } else if (parts[2] == "sample-energy") {
                spec.shrink_mode = ShrinkMode::SampleEnergy;
            } else {
                throw ConfigError("bad shrink mode '" + parts[2] + "' in '" + t +
                                  "': expected exact or sample-energy");
            }
        }
        validate_spec(spec);
        return spec;
    }
    if (head == "ibmn") {
        reject_extra(2);
        if (parts.size() != 2 || parts[1].empty()) {
            throw ConfigError("bad estimator '" + t + "': expected ibmn:<b1>x<b2>...");
        }
        spec.kind = EstimatorKind::IterativeBMN;
        for (const std::string& stage : split(parts[1], 'x')) {
            spec.b_list.push_back(static_cast<int>(parse_int(stage, "batch stage")));
        }
        validate_spec(spec);
        return spec;
    }
    if (head == "sub") {
        reject_extra(2);
        if (parts.size() != 2) {
            throw ConfigError("bad estimator '" + t + "': expected sub:<ratio|opt>");
        }
        spec.kind = EstimatorKind::SubsampleMN;
        if (parts[1] == "opt") {
            spec.rule = ParamRule::Optimal;
        } else {
            spec.rule = ParamRule::Fixed;
            spec.keep_ratio = parse_double(parts[1], "keep ratio");
        }
        validate_spec(spec);
        return spec;
    }
    if (head == "ridge") {
        reject_extra(2);
        if (parts.size() != 2) {
            throw ConfigError("bad estimator '" + t +
                              "': expected ridge:<lambda|tuned>");
        }
        spec.kind = EstimatorKind::Ridge;
        if (parts[1] == "tuned") {
            spec.rule = ParamRule::Tuned;
        } else {
            spec.rule = ParamRule::Fixed;
            spec.lambda = parse_double(parts[1], "ridge penalty");
        }
        validate_spec(spec);
        return spec;
    }
    throw ConfigError("unknown estimator '" + t +
                      "': expected mn, bmn, sbmn, ibmn, avg, sub or ridge");
}

std::vector<EstimatorSpec> parse_estimator_list(const std::string& text) {
    std::vector<EstimatorSpec> out;
    for (const std::string& token : split(text, ',')) {
        out.push_back(parse_estimator(token));
    }
    if (out.empty()) throw ConfigError("estimator list is empty");
    return out;
}

std::string estimator_token(const EstimatorSpec& spec) {
    switch (spec.kind) {
        case EstimatorKind::MinNorm:
            return "mn";
        case EstimatorKind::BatchMinNorm:
        case EstimatorKind::ShrunkBatchMinNorm:
        case EstimatorKind::ServerAverage: {
            std::string head = spec.kind == EstimatorKind::BatchMinNorm ? "bmn"
                               : spec.kind == EstimatorKind::ShrunkBatchMinNorm
                                   ? "sbmn"
                                   : "avg";
            if (spec.rule == ParamRule::Optimal) {
                head += ":opt";
            } else if (spec.rule == ParamRule::Fixed) {
                head += ":" + std::to_string(spec.b);
            }
            if (spec.kind == EstimatorKind::ShrunkBatchMinNorm &&
                spec.shrink_mode == ShrinkMode::SampleEnergy) {
                head += ":sample-energy";
            }
            return head;
        }
        case EstimatorKind::IterativeBMN: {
            std::string stages;
            for (const int s : spec.b_list) {
                if (!stages.empty()) stages += 'x';
                stages += std::to_string(s);
            }
            return "ibmn:" + stages;
        }
        case EstimatorKind::SubsampleMN:
            return spec.rule == ParamRule::Optimal
                       ? "sub:opt"
                       : "sub:" + format_double(spec.keep_ratio);
        case EstimatorKind::Ridge:
            return spec.rule == ParamRule::Tuned
                       ? "ridge:tuned"
                       : "ridge:" + format_double(spec.lambda);
    }
    return "unknown";
}

NSpec parse_n_spec(const std::string& text) {
    const std::string t = trim(text);
    NSpec out;
    if (t == "auto") {
        out.n_auto = true;
        out.n = 400;
        return out;
    }
    if (t.rfind("auto:", 0) == 0) {
        out.n_auto = true;
        out.n = static_cast<int>(parse_int(t.substr(5), "auto n base"));
    } else {
        out.n = static_cast<int>(parse_int(t, "n"));
    }
    if (out.n < 1) throw ConfigError("n must be positive, got '" + t + "'");
    return out;
}

BetaMode parse_beta_mode(const std::string& text) {
    const std::string t = trim(text);
    if (t == "sphere") return BetaMode::UniformSphere;
    if (t == "first-axis") return BetaMode::FirstAxis;
    throw ConfigError("bad beta-mode '" + text +
                      "': expected sphere or first-axis");
}

std::vector<std::pair<std::string, std::string>> parse_config_file(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::vector<std::pair<std::string, std::string>> out;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected key = value");
        }
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        }
        if (!seen.insert(key).second) {
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": duplicate key '" + key + "'");
        }
        out.emplace_back(key, value);
    }
    return out;
}

RiskCurveOptions merge_options(RiskCurveOptions base,
                               const RiskCurveOptions& overlay) {
    if (overlay.estimators) base.estimators = overlay.estimators;
    if (overlay.gamma_grid) base.gamma_grid = overlay.gamma_grid;
    if (overlay.xi_grid) base.xi_grid = overlay.xi_grid;
    if (overlay.b_grid) base.b_grid = overlay.b_grid;
    if (overlay.n) base.n = overlay.n;
    if (overlay.r) base.r = overlay.r;
    if (overlay.beta_mode) base.beta_mode = overlay.beta_mode;
    if (overlay.trials) base.trials = overlay.trials;
    if (overlay.seed) base.seed = overlay.seed;
    if (overlay.theory) base.theory = overlay.theory;
    return base;
}

namespace {

RiskCurveOptions config_file_options(const std::string& path) {
    RiskCurveOptions o;
    for (const auto& [key, value] : parse_config_file(path)) {
        if (key == "estimators") {
            o.estimators = value;
        } else if (key == "gamma-grid") {
            o.gamma_grid = value;
        } else if (key == "xi-grid") {
            o.xi_grid = value;
        } else if (key == "b-grid") {
            o.b_grid = value;
        } else if (key == "n") {
            o.n = value;
        } else if (key == "r") {
            o.r = parse_double(value, "r");
        } else if (key == "beta-mode") {
            o.beta_mode = value;
        } else if (key == "trials") {
            o.trials = static_cast<int>(parse_int(value, "trials"));
        } else if (key == "seed") {
            o.seed = parse_u64(value, "seed");
        } else if (key == "theory") {
            o.theory = parse_bool(value, "theory");
        } else {
            throw ConfigError(
                path + ": unknown key '" + key +
                "' (expected estimators, gamma-grid, xi-grid, b-grid, n, r, "
                "beta-mode, trials, seed or theory)");
        }
    }
    return o;
}

}  // namespace

bool is_opt_batch_preset(const std::string& name) {
    return name == "fig1" || name == "fig2";
}

void opt_batch_preset(const std::string& name, std::string& family,
                      std::string& gamma_grid, std::string& xi_grid) {
    if (name == "fig1") {
        family = "bmn";
    } else if (name == "fig2") {
        family = "sbmn";
    } else {
        throw ConfigError("unknown opt-batch preset '" + name +
                          "': expected fig1 or fig2");
    }
    gamma_grid = "1.05:4:0.05";
    xi_grid = "0.45:0.95:0.05";
}

RiskCurveOptions risk_curve_preset(const std::string& name) {
    RiskCurveOptions o;
    if (name == "fig3") {
        o.estimators = "bmn:2";
        o.gamma_grid = "0.55:4:0.05";
        o.xi_grid = "0.2,0.6,0.95";
        o.n = "400";
        o.theory = true;
    } else if (name == "fig4") {
        o.estimators = "bmn:6";
        o.gamma_grid = "0.2:4:0.05";
        o.xi_grid = "0.2,0.6,0.95";
        o.n = "auto:420";
        o.theory = true;
    } else if (name == "fig5") {
        o.estimators = "mn,bmn:1,bmn:2,bmn:10,sbmn:1,sbmn:2,sbmn:10";
        o.gamma_grid = "1.05:4:0.05";
        o.xi_grid = "0.8";
        o.n = "400";
    } else if (name == "fig6") {
        o.estimators = "sbmn:2,sbmn:6";
        o.gamma_grid = "0.55:4:0.05";
        o.xi_grid = "0.2,0.6,0.95";
        o.n = "auto:420";
        o.theory = true;
    } else if (name == "fig7") {
        o.estimators = "bmn";
        o.b_grid = "1:10";
        o.gamma_grid = "2";
        o.xi_grid = "0.5,0.6,0.7,0.8,0.9";
        o.n = "auto:1000";
    } else if (name == "fig8") {
        o.estimators = "mn,bmn:2,bmn:opt,sbmn:opt,sub:opt,ridge:tuned";
        o.gamma_grid = "1.5";
        o.xi_grid = "0.15:0.95:0.05";
        o.n = "400";
    } else if (name == "fig9") {
        o.estimators = "mn,bmn:2,bmn:opt,sbmn:opt,sub:opt,ridge:tuned";
        o.gamma_grid = "1.05:4:0.05";
        o.xi_grid = "0.7";
        o.n = "400";
    } else if (name == "fig10") {
        o.estimators = "bmn:2,sbmn:2,avg:2,bmn:200,sbmn:200,avg:200";
        o.gamma_grid = "0.55:3:0.05";
        o.xi_grid = "0.75";
        o.n = "400";
    } else if (name == "fig11") {
        o.estimators = "bmn,sbmn,avg";
        o.b_grid = "1:50,57,67,80,100,133,200,400";
        o.gamma_grid = "1.2,2";
        o.xi_grid = "0.6";
        o.n = "auto:400";
    } else if (name == "fig12") {
        o.estimators = "bmn:4,ibmn:2x2,bmn:6,ibmn:3x2";
        o.gamma_grid = "1.05:3:0.05";
        o.xi_grid = "0.8";
        o.n = "auto:420";
    } else {
        throw ConfigError("unknown preset '" + name +
                          "': expected fig1..fig12 (fig1 and fig2 belong to "
                          "opt-batch)");
    }
    return o;
}

namespace {

// ---------------------------------------------------------------------------
// bounds

int cmd_bounds(const std::string& gamma_grid_text, double xi,
               const std::string& b_grid_text, const std::string& out_path) {
    const std::vector<double> gammas = parse_real_grid(gamma_grid_text);
    const std::vector<int> bs = parse_int_grid(b_grid_text);

    RunManifest manifest;
    manifest.command = "bounds";
    manifest.add("gamma-grid", render_real_grid(gammas));
    manifest.add("xi", format_double(xi));
    manifest.add("b-grid", render_int_grid(bs));

    const std::vector<std::string> columns = {
        "gamma", "xi",      "b",       "bmn_ub_bias", "bmn_ub_noise", "bmn_ub",
        "bmn_lb", "sbmn_ub", "sbmn_lb", "mn_risk",     "error"};
    std::vector<std::vector<std::string>> rows;
    const std::string nan = "nan";
    for (const double gamma : gammas) {
        for (const int b : bs) {
            std::vector<std::string> row = {format_double(gamma),
                                            format_double(xi),
                                            std::to_string(b)};
            std::string error;
            try {
                const BoundPair ub = bmn_upper_bound(b, gamma, xi);
                const BoundPair lb = bmn_lower_bound(b, gamma, xi);
                const BoundPair sub = sbmn_upper_bound(b, gamma, xi);
                const BoundPair slb = sbmn_lower_bound(b, gamma, xi);
                row.insert(row.end(),
                           {format_double(ub.bias), format_double(ub.noise),
                            format_double(ub.total), format_double(lb.total),
                            format_double(sub.total), format_double(slb.total)});
            } catch (const UsageError& e) {
                error = e.what();
                row.insert(row.end(), {nan, nan, nan, nan, nan, nan});
            }
            // Plain min-norm needs gamma > 1 regardless of b; an undefined
            // point is not a row error.
            row.push_back(gamma > 1.0 ? format_double(mn_asymptotic_risk(gamma, xi))
                                      : nan);
            row.push_back(sanitize_cell(error));
            rows.push_back(std::move(row));
        }
    }
    write_output(out_path, render_csv(manifest, columns, rows));
    return 0;
}

// ---------------------------------------------------------------------------
// opt-batch

int cmd_opt_batch(const std::string& family, const std::string& gamma_grid_text,
                  const std::string& xi_grid_text, const std::string& out_path) {
    enum class Family { Bmn, Sbmn, Avg } fam = Family::Bmn;
    int avg_n = 0;
    if (family == "bmn") {
        fam = Family::Bmn;
    } else if (family == "sbmn") {
        fam = Family::Sbmn;
    } else if (family.rfind("avg:", 0) == 0) {
        fam = Family::Avg;
        avg_n = static_cast<int>(parse_int(family.substr(4), "avg sample count"));
        if (avg_n < 2) {
            throw ConfigError("avg:<n> needs n >= 2, got '" + family + "'");
        }
    } else {
        throw ConfigError("bad family '" + family +
                          "': expected bmn, sbmn or avg:<n>");
    }

    const std::vector<double> gammas = parse_real_grid(gamma_grid_text);
    const std::vector<double> xis = parse_real_grid(xi_grid_text);

    RunManifest manifest;
    manifest.command = "opt-batch";
    manifest.add("family", family);
    manifest.add("gamma-grid", render_real_grid(gammas));
    manifest.add("xi-grid", render_real_grid(xis));

    const std::vector<std::string> columns = {"gamma", "xi", "b_opt", "error"};
    std::vector<std::vector<std::string>> rows;
    for (const double gamma : gammas) {
        for (const double xi : xis) {
            std::vector<std::string> row = {format_double(gamma), format_double(xi)};
            try {
                std::string b_opt;
                if (fam == Family::Avg) {
                    b_opt = std::to_string(server_avg_optimal_batch(gamma, xi, avg_n));
                } else {
                    const BatchChoice choice = fam == Family::Bmn
                                                   ? bmn_optimal_batch(gamma, xi)
                                                   : sbmn_optimal_batch(gamma, xi);
                    b_opt = choice.infinite ? "inf" : std::to_string(choice.b);
                }
                row.push_back(std::move(b_opt));
                row.emplace_back();
            } catch (const UsageError& e) {
                row.emplace_back("nan");
                row.push_back(sanitize_cell(e.what()));
            }
            rows.push_back(std::move(row));
        }
    }
    write_output(out_path, render_csv(manifest, columns, rows));
    return 0;
}

// ---------------------------------------------------------------------------
// risk-curve

// Closed-form curves rendered in sweep-row shape so one table carries both.
// Emitted per Monte Carlo row, after all of them: bound rows for fixed-b and
// grid-b batch estimators, the exact asymptote for mn and for sbmn at b = 1,
// and the averaging asymptote. Cells where a curve is undefined (e.g.
// gamma * b <= 1) are skipped, not errors.
std::vector<SweepRow> theory_rows(const std::vector<EstimatorSpec>& specs,
                                  const std::vector<SweepRow>& mc_rows) {
    std::map<std::string, EstimatorSpec> by_label;
    for (const EstimatorSpec& spec : specs) {
        by_label.emplace(spec.label(), spec);
    }

    std::vector<SweepRow> out;
    const auto push = [&](const SweepRow& base, std::string name, int b,
                          double value) {
        SweepRow row;
        row.estimator = std::move(name);
        row.n = base.n;
        row.p = base.p;
        row.gamma = base.gamma;
        row.xi = base.xi;
        row.b = b;
        row.mean = value;
        row.std_error = 0.0;
        row.trials = 0;
        row.seed = 0;
        out.push_back(std::move(row));
    };

    for (const SweepRow& row : mc_rows) {
        const auto it = by_label.find(row.estimator);
        if (it == by_label.end()) continue;
        const EstimatorSpec& spec = it->second;
        const double gamma = row.gamma;
        const double xi = row.xi;
        // Symbolic batch rules have no single curve; plain grids and fixed
        // batches do. Grid specs drop the (b=...) suffix so the b column
        // keeps the curve connected.
        const bool fixed = spec.rule == ParamRule::Fixed;
        const bool grid = spec.rule == ParamRule::FromGrid;
        const std::string suffix =
            fixed ? "(b=" + std::to_string(row.b) + ")" : "";
        switch (spec.kind) {
            case EstimatorKind::MinNorm:
                if (gamma > 1.0) {
                    push(row, "mn_theory", 0, mn_asymptotic_risk(gamma, xi));
                }
                break;
            case EstimatorKind::BatchMinNorm:
                if ((fixed || grid) && row.b >= 1 && gamma * row.b > 1.0) {
                    push(row, "bmn_ub" + suffix, row.b,
                         bmn_upper_bound(row.b, gamma, xi).total);
                    push(row, "bmn_lb" + suffix, row.b,
                         bmn_lower_bound(row.b, gamma, xi).total);
                }
                break;
            case EstimatorKind::ShrunkBatchMinNorm:
                if ((fixed || grid) && row.b >= 1 && gamma * row.b > 1.0) {
                    push(row, "sbmn_ub" + suffix, row.b,
                         sbmn_upper_bound(row.b, gamma, xi).total);
                    push(row, "sbmn_lb" + suffix, row.b,
                         sbmn_lower_bound(row.b, gamma, xi).total);
                    if (row.b == 1 && gamma > 1.0) {
                        push(row, "sbmn_theory(b=1)", 1, sbmn_b1_risk(gamma, xi));
                    }
                }
                break;
            case EstimatorKind::ServerAverage:
                if ((fixed || grid) && row.b >= 1 && row.p > row.b) {
                    const double gamma_tilde =
                        static_cast<double>(row.p) / row.b;
                    if (gamma_tilde > 1.0) {
                        push(row, "avg_theory" + suffix, row.b,
                             server_avg_asymptotic_risk(gamma, xi, gamma_tilde));
                    }
                }
                break;
            default:
                break;
        }
    }
    return out;
}

int resolve_threads(const std::string& text) {
    if (text == "auto") {
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }
    const int threads = static_cast<int>(parse_int(text, "threads"));
    if (threads < 1) throw ConfigError("threads must be >= 1");
    return threads;
}

int cmd_risk_curve(const RiskCurveOptions& flag_opts, const std::string& preset,
                   const std::string& config_path, const std::string& threads_text,
                   const std::string& out_path) {
    RiskCurveOptions defaults;
    defaults.estimators = "mn";
    defaults.gamma_grid = "1.05:4:0.05";
    defaults.xi_grid = "0.8";
    defaults.n = "400";
    defaults.r = 1.0;
    defaults.beta_mode = "sphere";
    defaults.trials = 200;
    defaults.seed = 42;
    defaults.theory = false;

    RiskCurveOptions merged = defaults;
    if (!preset.empty()) {
        if (is_opt_batch_preset(preset)) {
            throw ConfigError("preset '" + preset +
                              "' configures opt-batch, not risk-curve");
        }
        merged = merge_options(merged, risk_curve_preset(preset));
    }
    if (!config_path.empty()) {
        merged = merge_options(merged, config_file_options(config_path));
    }
    merged = merge_options(merged, flag_opts);

    SweepConfig config;
    config.estimators = parse_estimator_list(*merged.estimators);
    config.gamma_grid = parse_real_grid(*merged.gamma_grid);
    config.xi_grid = parse_real_grid(*merged.xi_grid);
    if (merged.b_grid && !merged.b_grid->empty()) {
        config.b_grid = parse_int_grid(*merged.b_grid);
    }
    const NSpec n_spec = parse_n_spec(*merged.n);
    config.n = n_spec.n;
    config.n_auto = n_spec.n_auto;
    config.r = *merged.r;
    config.beta_mode = parse_beta_mode(*merged.beta_mode);
    config.trials = *merged.trials;
    config.seed = *merged.seed;
    const bool with_theory = *merged.theory;
    const int threads = resolve_threads(threads_text);

    RunManifest manifest;
    manifest.command = "risk-curve";
    if (!preset.empty()) manifest.add("preset", preset);
    {
        std::vector<std::string> tokens;
        tokens.reserve(config.estimators.size());
        for (const EstimatorSpec& spec : config.estimators) {
            tokens.push_back(estimator_token(spec));
        }
        manifest.add("estimators", join(tokens, ','));
    }
    manifest.add("gamma-grid", render_real_grid(config.gamma_grid));
    manifest.add("xi-grid", render_real_grid(config.xi_grid));
    if (!config.b_grid.empty()) {
        manifest.add("b-grid", render_int_grid(config.b_grid));
    }
    manifest.add("n", (config.n_auto ? "auto:" : "") + std::to_string(config.n));
    manifest.add("r", format_double(config.r));
    manifest.add("beta-mode", config.beta_mode == BetaMode::UniformSphere
                                  ? "sphere"
                                  : "first-axis");
    manifest.add("trials", std::to_string(config.trials));
    manifest.add("theory", render_bool(with_theory));
    manifest.seed = config.seed;

    const auto start = std::chrono::steady_clock::now();
    std::vector<SweepRow> rows = sweep(config, threads);
    if (with_theory) {
        std::vector<SweepRow> extra = theory_rows(config.estimators, rows);
        rows.insert(rows.end(), std::make_move_iterator(extra.begin()),
                    std::make_move_iterator(extra.end()));
    }
    const auto elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();

    const std::vector<std::string> columns = {"estimator", "n",      "p",
                                              "gamma",     "xi",     "b",
                                              "mean",      "stderr", "trials",
                                              "seed",      "error"};
    std::vector<std::vector<std::string>> cells;
    cells.reserve(rows.size());
    for (const SweepRow& row : rows) {
        cells.push_back({sanitize_cell(row.estimator), std::to_string(row.n),
                         std::to_string(row.p), format_double(row.gamma),
                         format_double(row.xi), std::to_string(row.b),
                         format_double(row.mean), format_double(row.std_error),
                         std::to_string(row.trials), std::to_string(row.seed),
                         sanitize_cell(row.error)});
    }
    write_output(out_path, render_csv(manifest, columns, cells));

    int failed = 0;
    for (const SweepRow& row : rows) {
        if (!row.error.empty()) ++failed;
    }
    std::cerr << "risk-curve: " << rows.size() << " rows";
    if (failed > 0) std::cerr << " (" << failed << " with errors)";
    std::cerr << ", " << config.trials << " trials/cell, " << threads
              << (threads == 1 ? " thread, " : " threads, ") << format_double(elapsed)
              << "s\n";
    return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyRow {
    std::string check;
    double empirical = 0.0;
    double predicted = 0.0;
    double rel_err = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

int emit_verify(const RunManifest& manifest, const std::vector<VerifyRow>& rows,
                const std::string& out_path) {
    const std::vector<std::string> columns = {"check",   "empirical", "predicted",
                                              "rel_err", "tolerance", "pass"};
    std::vector<std::vector<std::string>> cells;
    bool all_pass = true;
    for (const VerifyRow& row : rows) {
        all_pass = all_pass && row.pass;
        cells.push_back({row.check, format_double(row.empirical),
                         format_double(row.predicted), format_double(row.rel_err),
                         format_double(row.tolerance), row.pass ? "1" : "0"});
    }
    write_output(out_path, render_csv(manifest, columns, cells));
    std::cerr << "verify: " << rows.size() << " checks, "
              << (all_pass ? "all passed" : "FAILED") << "\n";
    return all_pass ? 0 : 1;
}

int cmd_verify_lemma1(const ProjectionScenario& s, double tolerance,
                      const std::string& out_path) {
    RunManifest manifest;
    manifest.command = "verify lemma1";
    manifest.add("p", std::to_string(s.p));
    manifest.add("b", std::to_string(s.b));
    manifest.add("delta", format_double(s.delta));
    manifest.add("alpha", format_double(s.alpha));
    manifest.add("r", format_double(s.r));
    manifest.add("sigma", format_double(s.sigma));
    manifest.add("t-mode", s.t_mode == TMode::One ? "one" : "wishart");
    manifest.add("trials", std::to_string(s.trials));
    manifest.add("tolerance", format_double(tolerance));
    manifest.seed = s.seed;

    const LemmaCheck check = check_noisy_projection(s);
    VerifyRow row;
    row.check = "noisy_projection";
    row.empirical = check.empirical;
    row.predicted = check.predicted;
    row.rel_err = check.rel_err;
    row.tolerance = tolerance;
    row.pass = check.rel_err <= tolerance;
    return emit_verify(manifest, {row}, out_path);
}

int cmd_verify_qcov(const ModifiedNoiseScenario& s, double diag_tol,
                    double offdiag_tol, const std::string& out_path) {
    RunManifest manifest;
    manifest.command = "verify qcov";
    manifest.add("b", std::to_string(s.b));
    manifest.add("r", format_double(s.r));
    manifest.add("sigma", format_double(s.sigma));
    manifest.add("trials", std::to_string(s.trials));
    manifest.add("tolerance-diag", format_double(diag_tol));
    manifest.add("tolerance-offdiag", format_double(offdiag_tol));
    manifest.seed = s.seed;

    const QCovarianceResult result = check_q_covariance(s);
    std::vector<VerifyRow> rows(2);
    rows[0].check = "qcov_diag";
    rows[0].empirical = result.diag.empirical;
    rows[0].predicted = result.diag.predicted;
    rows[0].rel_err = result.diag.rel_err;
    rows[0].tolerance = diag_tol;
    rows[0].pass = result.diag.rel_err <= diag_tol;
    rows[1].check = "qcov_offdiag";
    rows[1].empirical = result.offdiag.empirical;
    rows[1].predicted = result.offdiag.predicted;
    rows[1].rel_err = result.offdiag.rel_err;
    rows[1].tolerance = offdiag_tol;
    rows[1].pass = result.offdiag.rel_err <= offdiag_tol;
    return emit_verify(manifest, rows, out_path);
}

int cmd_verify_convergence(const std::string& p_list_text, int b, double r,
                           double sigma, int trials, std::uint64_t seed,
                           double tolerance, const std::string& out_path) {
    const std::vector<int> p_list = parse_int_grid(p_list_text);

    RunManifest manifest;
    manifest.command = "verify convergence";
    manifest.add("p-list", render_int_grid(p_list));
    manifest.add("b", std::to_string(b));
    manifest.add("r", format_double(r));
    manifest.add("sigma", format_double(sigma));
    manifest.add("trials", std::to_string(trials));
    manifest.add("tolerance", format_double(tolerance));
    manifest.seed = seed;

    const std::vector<ConvergenceRow> table =
        check_modified_convergence(p_list, b, r, sigma, trials, seed);

    std::vector<VerifyRow> rows;
    for (const ConvergenceRow& row : table) {
        VerifyRow a;
        a.check = "a_rel(p=" + std::to_string(row.p) + ")";
        a.empirical = row.a_rel;
        a.predicted = 0.0;
        a.rel_err = row.a_rel;
        a.tolerance = tolerance;
        a.pass = row.a_rel <= tolerance;
        rows.push_back(a);
        VerifyRow y;
        y.check = "y_rel(p=" + std::to_string(row.p) + ")";
        y.empirical = row.y_rel;
        y.predicted = 0.0;
        y.rel_err = row.y_rel;
        y.tolerance = tolerance;
        y.pass = row.y_rel <= tolerance;
        rows.push_back(y);
    }
    // Concentration must tighten as p grows: every consecutive a_rel ratio
    // below 1 means the whole table is decreasing.
    if (table.size() >= 2) {
        double worst = 0.0;
        for (std::size_t i = 1; i < table.size(); ++i) {
            if (table[i - 1].a_rel > 0.0) {
                worst = std::max(worst, table[i].a_rel / table[i - 1].a_rel);
            }
        }
        VerifyRow mono;
        mono.check = "a_rel_monotone";
        mono.empirical = worst;
        mono.predicted = 1.0;
        mono.rel_err = std::max(0.0, worst - 1.0);
        mono.tolerance = 0.0;
        mono.pass = worst <= 1.0;
        rows.push_back(mono);
    }
    return emit_verify(manifest, rows, out_path);
}

// ---------------------------------------------------------------------------
// tune-ridge

int cmd_tune_ridge(int n, double gamma, double xi, double r,
                   const std::string& beta_mode_text, int trials,
                   std::uint64_t seed, const std::string& threads_text,
                   const std::string& out_path) {
    const BetaMode beta_mode = parse_beta_mode(beta_mode_text);
    const int threads = resolve_threads(threads_text);
    const ModelParams params = make_params(n, gamma, xi, r);

    RunManifest manifest;
    manifest.command = "tune-ridge";
    manifest.add("n", std::to_string(params.n));
    manifest.add("gamma", format_double(params.gamma()));
    manifest.add("xi", format_double(params.xi()));
    manifest.add("r", format_double(params.r));
    manifest.add("beta-mode", beta_mode_text);
    manifest.add("trials", std::to_string(trials));
    manifest.seed = seed;

    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t cell = cell_seed(seed, params, beta_mode);
    const TunedRidge tuned = tune_ridge(params, beta_mode, trials, cell, threads);
    const auto elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();

    const std::vector<std::string> columns = {"n",      "p",      "gamma",
                                              "xi",     "lambda", "mean",
                                              "stderr", "trials", "seed"};
    const std::vector<std::vector<std::string>> rows = {
        {std::to_string(params.n), std::to_string(params.p),
         format_double(params.gamma()), format_double(params.xi()),
         format_double(tuned.lambda), format_double(tuned.risk.mean),
         format_double(tuned.risk.std_error), std::to_string(tuned.risk.trials),
         std::to_string(cell)}};
    write_output(out_path, render_csv(manifest, columns, rows));
    std::cerr << "tune-ridge: lambda = " << format_double(tuned.lambda) << ", "
              << threads << (threads == 1 ? " thread, " : " threads, ")
              << format_double(elapsed) << "s\n";
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"batch minimum-norm regression: closed-form risk bounds and "
                 "Monte Carlo experiments"};
    app.set_version_flag("--version", std::string("bmn ") + kVersion);
    app.require_subcommand(1);
    int exit_code = 0;

    // bounds ----------------------------------------------------------------
    auto* bounds = app.add_subcommand(
        "bounds", "Tabulate closed-form risk bounds over a gamma grid");
    auto b_gamma = std::make_shared<std::string>("1.05:4:0.05");
    auto b_xi = std::make_shared<double>(0.8);
    auto b_bgrid = std::make_shared<std::string>("1,2,4,6,10");
    auto b_out = std::make_shared<std::string>();
    bounds->add_option("--gamma-grid", *b_gamma, "gamma values (list or a:b:step)");
    bounds->add_option("--xi", *b_xi, "signal fraction in (0, 1]");
    bounds->add_option("--b-grid", *b_bgrid, "batch sizes");
    bounds->add_option("--out", *b_out, "output CSV path (default stdout)");
    bounds->callback([=, &exit_code] {
        exit_code = cmd_bounds(*b_gamma, *b_xi, *b_bgrid, *b_out);
    });

    // opt-batch ---------------------------------------------------------------
    auto* opt = app.add_subcommand(
        "opt-batch", "Closed-form optimal batch size over a (gamma, xi) grid");
    auto o_family = std::make_shared<std::string>();
    auto o_gamma = std::make_shared<std::string>();
    auto o_xi = std::make_shared<std::string>();
    auto o_preset = std::make_shared<std::string>();
    auto o_out = std::make_shared<std::string>();
    opt->add_option("--family", *o_family, "bmn, sbmn or avg:<n>");
    opt->add_option("--gamma-grid", *o_gamma, "gamma values");
    opt->add_option("--xi-grid", *o_xi, "xi values");
    opt->add_option("--preset", *o_preset, "fig1 (bmn) or fig2 (sbmn)");
    opt->add_option("--out", *o_out, "output CSV path (default stdout)");
    opt->callback([=, &exit_code] {
        std::string family = "bmn";
        std::string gamma = "1.05:4:0.05";
        std::string xi = "0.45:0.95:0.05";
        if (!o_preset->empty()) {
            if (!is_opt_batch_preset(*o_preset)) {
                throw ConfigError("preset '" + *o_preset +
                                  "' configures risk-curve, not opt-batch");
            }
            opt_batch_preset(*o_preset, family, gamma, xi);
        }
        if (!o_family->empty()) family = *o_family;
        if (!o_gamma->empty()) gamma = *o_gamma;
        if (!o_xi->empty()) xi = *o_xi;
        exit_code = cmd_opt_batch(family, gamma, xi, *o_out);
    });

    // risk-curve --------------------------------------------------------------
    auto* curve = app.add_subcommand(
        "risk-curve", "Monte Carlo risk sweep over estimators and grids");
    auto c_opts = std::make_shared<RiskCurveOptions>();
    auto c_preset = std::make_shared<std::string>();
    auto c_config = std::make_shared<std::string>();
    auto c_threads = std::make_shared<std::string>("1");
    auto c_out = std::make_shared<std::string>();
    curve->add_option("--estimators", c_opts->estimators,
                      "comma list of estimator tokens (mn, bmn:2, sbmn:opt, "
                      "ibmn:2x2, avg:4, sub:opt, ridge:tuned, ...)");
    curve->add_option("--gamma-grid", c_opts->gamma_grid, "gamma values");
    curve->add_option("--xi-grid", c_opts->xi_grid, "xi values");
    curve->add_option("--b-grid", c_opts->b_grid,
                      "batch sizes consumed by bare bmn/sbmn/avg tokens");
    curve->add_option("--n", c_opts->n, "sample count: <int> or auto[:base]");
    curve->add_option("--r", c_opts->r, "signal norm");
    curve->add_option("--beta-mode", c_opts->beta_mode, "sphere or first-axis");
    curve->add_option("--trials", c_opts->trials, "Monte Carlo trials per cell");
    curve->add_option("--seed", c_opts->seed, "master seed");
    curve->add_flag_callback("--theory",
                             [c_opts] { c_opts->theory = true; },
                             "append closed-form curves as extra rows");
    curve->add_option("--preset", *c_preset, "figure preset fig3..fig12");
    curve->add_option("--config", *c_config, "key=value config file");
    curve->add_option("--threads", *c_threads, "worker threads or auto");
    curve->add_option("--out", *c_out, "output CSV path (default stdout)");
    curve->callback([=, &exit_code] {
        exit_code = cmd_risk_curve(*c_opts, *c_preset, *c_config, *c_threads,
                                   *c_out);
    });

    // verify --------------------------------------------------------------
    auto* verify = app.add_subcommand(
        "verify", "Numerical checks of the probabilistic building blocks");
    verify->require_subcommand(1);

    auto* lemma1 = verify->add_subcommand(
        "lemma1", "Noisy-projection second-moment identity");
    auto l_scenario = std::make_shared<ProjectionScenario>();
    auto l_xi = std::make_shared<double>(0.0);
    auto l_tmode = std::make_shared<std::string>("one");
    auto l_tol = std::make_shared<double>(0.05);
    auto l_out = std::make_shared<std::string>();
    lemma1->add_option("--p", l_scenario->p, "ambient dimension");
    lemma1->add_option("--b", l_scenario->b, "projected directions");
    lemma1->add_option("--delta", l_scenario->delta, "subspace fraction");
    lemma1->add_option("--alpha", l_scenario->alpha, "in-subspace signal fraction");
    lemma1->add_option("--r", l_scenario->r, "signal norm");
    lemma1->add_option("--sigma", l_scenario->sigma, "noise scale");
    auto* l_xi_opt = lemma1->add_option(
        "--xi", *l_xi, "signal fraction; overrides --sigma via r and xi");
    lemma1->add_option("--t-mode", *l_tmode, "one or wishart");
    lemma1->add_option("--trials", l_scenario->trials, "Monte Carlo trials");
    lemma1->add_option("--seed", l_scenario->seed, "seed");
    lemma1->add_option("--tolerance", *l_tol, "relative error gate");
    lemma1->add_option("--out", *l_out, "output CSV path (default stdout)");
    lemma1->callback([=, &exit_code] {
        ProjectionScenario s = *l_scenario;
        if (l_xi_opt->count() > 0) {
            if (!(*l_xi > 0.0) || !(*l_xi <= 1.0)) {
                throw InvalidXi("xi must lie in (0, 1], got " + format_double(*l_xi));
            }
            s.sigma = s.r * std::sqrt((1.0 - *l_xi) / *l_xi);
        }
        if (*l_tmode == "one") {
            s.t_mode = TMode::One;
        } else if (*l_tmode == "wishart") {
            s.t_mode = TMode::WishartEigen;
        } else {
            throw ConfigError("bad t-mode '" + *l_tmode +
                              "': expected one or wishart");
        }
        exit_code = cmd_verify_lemma1(s, *l_tol, *l_out);
    });

    auto* qcov = verify->add_subcommand(
        "qcov", "Covariance of the normalized modified noise");
    auto q_scenario = std::make_shared<ModifiedNoiseScenario>();
    auto q_tol = std::make_shared<double>(0.0);
    auto q_out = std::make_shared<std::string>();
    qcov->add_option("--b", q_scenario->b, "batch size");
    qcov->add_option("--r", q_scenario->r, "signal norm");
    qcov->add_option("--sigma", q_scenario->sigma, "noise scale");
    qcov->add_option("--trials", q_scenario->trials, "Monte Carlo trials");
    qcov->add_option("--seed", q_scenario->seed, "seed");
    auto* q_tol_opt = qcov->add_option(
        "--tolerance", *q_tol, "relative error gate for both moments "
                               "(defaults: 0.02 diagonal, 0.03 off)");
    qcov->add_option("--out", *q_out, "output CSV path (default stdout)");
    qcov->callback([=, &exit_code] {
        const bool overridden = q_tol_opt->count() > 0;
        const double diag_tol = overridden ? *q_tol : 0.02;
        const double offdiag_tol = overridden ? *q_tol : 0.03;
        exit_code = cmd_verify_qcov(*q_scenario, diag_tol, offdiag_tol, *q_out);
    });

    auto* conv = verify->add_subcommand(
        "convergence", "Concentration of the modified model in p");
    auto v_plist = std::make_shared<std::string>("250,500,1000,2000,4000");
    auto v_b = std::make_shared<int>(1);
    auto v_r = std::make_shared<double>(1.0);
    auto v_sigma = std::make_shared<double>(0.5);
    auto v_trials = std::make_shared<int>(400);
    auto v_seed = std::make_shared<std::uint64_t>(42);
    auto v_tol = std::make_shared<double>(0.1);
    auto v_out = std::make_shared<std::string>();
    conv->add_option("--p-list", *v_plist, "dimensions to test");
    conv->add_option("--b", *v_b, "batch size");
    conv->add_option("--r", *v_r, "signal norm");
    conv->add_option("--sigma", *v_sigma, "noise scale");
    conv->add_option("--trials", *v_trials, "Monte Carlo trials per p");
    conv->add_option("--seed", *v_seed, "seed");
    conv->add_option("--tolerance", *v_tol, "relative deviation gate per p");
    conv->add_option("--out", *v_out, "output CSV path (default stdout)");
    conv->callback([=, &exit_code] {
        exit_code = cmd_verify_convergence(*v_plist, *v_b, *v_r, *v_sigma,
                                           *v_trials, *v_seed, *v_tol, *v_out);
    });

    // tune-ridge ------------------------------------------------------------
    auto* tune = app.add_subcommand(
        "tune-ridge", "Monte Carlo search for the best ridge penalty");
    auto t_n = std::make_shared<int>(400);
    auto t_gamma = std::make_shared<double>(2.0);
    auto t_xi = std::make_shared<double>(0.8);
    auto t_r = std::make_shared<double>(1.0);
    auto t_mode = std::make_shared<std::string>("sphere");
    auto t_trials = std::make_shared<int>(200);
    auto t_seed = std::make_shared<std::uint64_t>(42);
    auto t_threads = std::make_shared<std::string>("1");
    auto t_out = std::make_shared<std::string>();
    tune->add_option("--n", *t_n, "sample count");
    tune->add_option("--gamma", *t_gamma, "overparametrization ratio p/n");
    tune->add_option("--xi", *t_xi, "signal fraction in (0, 1]");
    tune->add_option("--r", *t_r, "signal norm");
    tune->add_option("--beta-mode", *t_mode, "sphere or first-axis");
    tune->add_option("--trials", *t_trials, "Monte Carlo trials");
    tune->add_option("--seed", *t_seed, "master seed");
    tune->add_option("--threads", *t_threads, "worker threads or auto");
    tune->add_option("--out", *t_out, "output CSV path (default stdout)");
    tune->callback([=, &exit_code] {
        exit_code = cmd_tune_ridge(*t_n, *t_gamma, *t_xi, *t_r, *t_mode, *t_trials,
                                   *t_seed, *t_threads, *t_out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return exit_code;
}

}  // namespace bmn
