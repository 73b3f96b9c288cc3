#include "bmn/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bmn/errors.hpp"

namespace bmn {

namespace {

void check_xi(double xi, bool allow_one = true) {
    if (!(xi > 0.0) || xi > 1.0 || (!allow_one && xi == 1.0)) {
        throw InvalidXi("xi must lie in (0, 1" + std::string(allow_one ? "]" : ")") +
                        ", got " + std::to_string(xi));
    }
}

void check_gamma_gt1(double gamma) {
    if (!(gamma > 1.0)) {
        throw DomainError("gamma must exceed 1, got " + std::to_string(gamma));
    }
}

void check_bound_domain(double b, double gamma) {
    if (!(b >= 1.0)) {
        throw DomainError("batch size must be >= 1, got " + std::to_string(b));
    }
    if (!(gamma * b > 1.0)) {
        throw DomainError("bounds require gamma * b > 1, got gamma = " +
                          std::to_string(gamma) + ", b = " + std::to_string(b));
    }
}

double ub_bias(double b, double gamma, double xi) {
    return (gamma * b - 1.0) / (gamma * b + (b - 1.0) * xi);
}

double lb_bias(double b, double gamma, double xi) {
    return std::pow(1.0 - 1.0 / (gamma * b), 1.0 + (b - 1.0) * xi);
}

// Derivative of the shrunk upper bound in b; used to detect whether the
// bound is still decreasing at the search edge.
double sbmn_ub_derivative(double b, double gamma, double xi) {
    const double u = (gamma + xi) * b - xi;   // bias denominator
    const double v = gamma * b - 1.0;         // noise denominator
    return (gamma + xi - gamma * xi) / (u * u) - gamma * (1.0 - xi) / (v * v);
}

}  // namespace

double mn_asymptotic_risk(double gamma, double xi) {
    check_gamma_gt1(gamma);
    check_xi(xi);
    return 1.0 - 1.0 / gamma + (1.0 - xi) / xi / (gamma - 1.0);
}

BoundPair bmn_upper_bound(double b, double gamma, double xi) {
    check_bound_domain(b, gamma);
    check_xi(xi);
    BoundPair out;
    out.bias = ub_bias(b, gamma, xi);
    out.noise = (1.0 - xi) / xi * (b - (b - 1.0) * xi) / (gamma * b - 1.0);
    out.total = out.bias + out.noise;
    return out;
}

BoundPair bmn_lower_bound(double b, double gamma, double xi) {
    check_bound_domain(b, gamma);
    check_xi(xi);
    BoundPair out;
    out.bias = lb_bias(b, gamma, xi);
    out.noise = (1.0 - xi) / xi * (b - (b - 1.0) * xi) / (gamma * b - 1.0) *
                lb_c_factor(b, gamma, xi);
    out.total = out.bias + out.noise;
    return out;
}

BoundPair sbmn_upper_bound(double b, double gamma, double xi) {
    check_bound_domain(b, gamma);
    check_xi(xi);
    BoundPair out;
    out.bias = ub_bias(b, gamma, xi);
    out.noise = (1.0 - xi) / (gamma * b - 1.0);
    out.total = out.bias + out.noise;
    return out;
}

BoundPair sbmn_lower_bound(double b, double gamma, double xi) {
    check_bound_domain(b, gamma);
    check_xi(xi);
    BoundPair out;
    out.bias = lb_bias(b, gamma, xi);
    out.noise = (1.0 - xi) / (gamma * b - 1.0) * lb_c_factor(b, gamma, xi);
    out.total = out.bias + out.noise;
    return out;
}

double lb_c_factor(double b, double gamma, double xi) {
    check_bound_domain(b, gamma);
    check_xi(xi);
    const double w = (1.0 + (b - 1.0) * xi) / (gamma * b - 1.0);
    return 1.0 - w / (1.0 + w);
}

double lb_c_factor_limit(double gamma, double xi) {
    check_gamma_gt1(gamma);
    check_xi(xi);
    return gamma / (gamma + xi);
}

double bmn_upper_bound_limit(double gamma, double xi) {
    check_gamma_gt1(gamma);
    check_xi(xi);
    // Addend limits: bias -> gamma / (gamma + xi), noise -> (1-xi)^2 / (xi gamma).
    return gamma / (gamma + xi) + (1.0 - xi) * (1.0 - xi) / (xi * gamma);
}

double sbmn_upper_bound_limit(double gamma, double xi) {
    check_gamma_gt1(gamma);
    check_xi(xi);
    return gamma / (gamma + xi);
}

double sbmn_b1_risk(double gamma, double xi) {
    check_gamma_gt1(gamma);
    check_xi(xi);
    return 1.0 - (2.0 * xi - xi * xi) / gamma +
           (1.0 - xi) / xi * (xi * xi) / (gamma - 1.0);
}

BatchStationary bmn_batch_stationary(double gamma, double xi) {
    check_gamma_gt1(gamma);
    check_xi(xi);
    const double g = gamma;
    const double g2 = g * g;
    const double x = xi;
    const double x2 = x * x;
    const double x3 = x2 * x;
    const double x4 = x3 * x;

    const double num = 2.0 * x2 * g2 - x3 * g2 + x * g - x * g2 - 3.0 * x2 * g +
                       2.0 * x3 * g - x4 * g + x2 - 2.0 * x3 + x4;
    const double den = -x4 * g + x4 - 2.0 * x3 * g2 + 3.0 * x3 * g - 2.0 * x3 +
                       2.0 * x2 * g2 - 4.0 * x2 * g + x2 - 2.0 * x * g2 +
                       2.0 * x * g + g2;
    const double s = -x * (x - 1.0) * (x * g - x + 1.0) *
                     std::pow(x + g - x * g, 3.0);
    const double root = std::sqrt(std::max(s, 0.0));

    BatchStationary st;
    st.c = -x4 * (1.0 - g) - x3 * (-2.0 * g2 + 3.0 * g - 2.0) -
           x2 * (2.0 * g2 - 4.0 * g + 1.0) - x * (2.0 * g - 2.0 * g2) - g2;
    st.b1 = (num + root) / den;
    st.b2 = (num - root) / den;

    const bool a1 = st.c < 0.0 && st.b1 < st.b2;
    const bool a2 = st.c > 0.0 && st.b1 > st.b2;
    double t = (a1 || a2) ? std::max(st.b1, 1.0) : std::max(st.b2, 1.0);
    if (!std::isfinite(t)) {
        t = 1.0;  // degenerate den = 0; the argmin over {1, inf} still applies
    }
    st.t = t;
    return st;
}

BatchChoice bmn_optimal_batch(double gamma, double xi) {
    check_gamma_gt1(gamma);
    check_xi(xi);
    const BatchStationary st = bmn_batch_stationary(gamma, xi);

    const double limit = bmn_upper_bound_limit(gamma, xi);
    int best_b = 1;
    double best_ub = bmn_upper_bound(1.0, gamma, xi).total;
    const int lo = std::max(1, static_cast<int>(std::floor(st.t)));
    const int hi = std::max(1, static_cast<int>(std::ceil(st.t)));
    for (const int cand : {lo, hi}) {
        const double ub = bmn_upper_bound(cand, gamma, xi).total;
        if (ub < best_ub || (ub == best_ub && cand < best_b)) {
            best_ub = ub;
            best_b = cand;
        }
    }
    if (limit < best_ub) {
        return BatchChoice::Infinite();
    }
    return BatchChoice::Finite(best_b);
}

BatchChoice sbmn_optimal_batch(double gamma, double xi) {
    check_gamma_gt1(gamma);
    check_xi(xi);
    constexpr double kBMax = 1e6;
    if (sbmn_ub_derivative(kBMax, gamma, xi) < 0.0) {
        return BatchChoice::Infinite();
    }
    // At most one interior stationary point, so golden-section is exact here.
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = 1.0, hi = kBMax;
    double m1 = hi - kInvPhi * (hi - lo);
    double m2 = lo + kInvPhi * (hi - lo);
    double f1 = sbmn_upper_bound(m1, gamma, xi).total;
    double f2 = sbmn_upper_bound(m2, gamma, xi).total;
    while (hi - lo > 1e-8) {
        if (f1 <= f2) {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - kInvPhi * (hi - lo);
            f1 = sbmn_upper_bound(m1, gamma, xi).total;
        } else {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + kInvPhi * (hi - lo);
            f2 = sbmn_upper_bound(m2, gamma, xi).total;
        }
    }
    const double t = 0.5 * (lo + hi);
    int best_b = 1;
    double best_ub = sbmn_upper_bound(1.0, gamma, xi).total;
    for (const int cand : {std::max(1, static_cast<int>(std::floor(t))),
                           std::max(1, static_cast<int>(std::ceil(t)))}) {
        const double ub = sbmn_upper_bound(cand, gamma, xi).total;
        if (ub < best_ub || (ub == best_ub && cand < best_b)) {
            best_ub = ub;
            best_b = cand;
        }
    }
    return BatchChoice::Finite(best_b);
}

double bmn_snr_threshold() {
    const auto poly = [](double x) {
        return 2.0 * x * x * x - 2.0 * x * x + 2.0 * x - 1.0;
    };
    double lo = 0.0, hi = 1.0;  // poly(0) = -1 < 0 < 1 = poly(1)
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (poly(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double mn_gamma_opt(double xi) {
    check_xi(xi);
    if (xi <= 0.5) {
        return std::numeric_limits<double>::infinity();
    }
    if (xi == 1.0) {
        return 1.0;  // noiseless limit: sqrt(SNR) -> infinity
    }
    const double root_snr = std::sqrt(xi / (1.0 - xi));
    return root_snr / (root_snr - 1.0);
}

double server_avg_asymptotic_risk(double gamma, double xi, double gamma_tilde) {
    if (!(gamma_tilde > 1.0)) {
        throw DomainError("server averaging requires gamma_tilde > 1, got " +
                          std::to_string(gamma_tilde));
    }
    check_xi(xi);
    const double gt = gamma_tilde;
    return (1.0 - 1.0 / gt) * (gamma + gt * (gt - 1.0)) / (gt * gt) +
           (1.0 - xi) / xi * (gamma / gt) / (gt - 1.0);
}

int server_avg_optimal_batch(double gamma, double xi, int n) {
    if (n < 2) {
        throw DomainError("server_avg_optimal_batch needs n >= 2, got " +
                          std::to_string(n));
    }
    check_xi(xi);
    int best_b = 0;
    double best_risk = std::numeric_limits<double>::infinity();
    for (int b = 1; b <= n / 2; ++b) {
        if (n % b != 0) {
            continue;
        }
        const double gt = gamma * static_cast<double>(n) / b;
        if (!(gt > 1.0)) {
            continue;
        }
        const double risk = server_avg_asymptotic_risk(gamma, xi, gt);
        if (risk < best_risk) {
            best_risk = risk;
            best_b = b;
        }
    }
    if (best_b == 0) {
        throw DomainError("no batch size in [1, n/2] gives gamma_tilde > 1");
    }
    return best_b;
}

}  // namespace bmn
