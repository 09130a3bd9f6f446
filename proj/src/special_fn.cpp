#include "tfd/special_fn.hpp"

#include <Eigen/Eigenvalues>
#include <cstdint>
#include <stdexcept>

namespace tfd {

double HermiteExpansion::eval(double x) const {
    double acc = 0.0;
    for (const auto& [deg, c] : terms) acc += c * hermite_poly(deg, x);
    return acc;
}

double HermiteExpansion::eval_abs(double x) const {
    double acc = 0.0;
    for (const auto& [deg, c] : terms) acc += std::abs(c * hermite_poly(deg, x));
    return acc;
}

double hermite_poly(int n, double x) {
    if (n < 0) throw std::domain_error("hermite_poly: negative degree");
    require_finite(x, "hermite_poly");
    if (n == 0) return 1.0;
    double hm = 1.0, h = 2.0 * x;
    for (int k = 1; k < n; ++k) {
        const double hn = 2.0 * x * h - 2.0 * k * hm;
        hm = h;
        h = hn;
    }
    return h;
}

double hermite_normalized(int n, double y) {
    if (n < 0) throw std::domain_error("hermite_normalized: negative degree");
    require_finite(y, "hermite_normalized");
    if (n == 0) return 1.0;
    double hm = 1.0, h = std::sqrt(2.0) * y;
    for (int k = 1; k < n; ++k) {
        const double hn = std::sqrt(2.0 / (k + 1.0)) * y * h - std::sqrt(k / (k + 1.0)) * hm;
        hm = h;
        h = hn;
    }
    return h;
}

double hermite_gauss(int n, double y) {
    return hermite_normalized(n, y) * std::exp(-0.5 * y * y);
}

double hermite_fn(int n, double x, const OscillatorParams& p) {
    require_finite(x, "hermite_fn");
    const double xi = p.xi_scale() * x;
    return std::sqrt(p.xi_scale()) * inv_quartic_root_pi * hermite_gauss(n, xi);
}

std::vector<SignedLog> hermite_log_scan(int max_degree, double x) {
    require_finite(x, "hermite_log_scan");
    std::vector<SignedLog> out(static_cast<size_t>(max_degree) + 1);
    auto record = [&](int d, double value, double log_scale) {
        if (value == 0.0)
            out[d] = {-infinity, 0};
        else
            out[d] = {std::log(std::abs(value)) + log_scale, value > 0.0 ? 1 : -1};
    };
    double hm = 1.0, h = 2.0 * x, log_scale = 0.0;
    record(0, hm, 0.0);
    if (max_degree == 0) return out;
    record(1, h, 0.0);
    constexpr double rescale_at = 1e280;
    constexpr double log_rescale = 280.0 * 2.302585092994046;  // ln(1e280)
    for (int k = 1; k < max_degree; ++k) {
        double hn = 2.0 * x * h - 2.0 * k * hm;
        hm = h;
        h = hn;
        if (std::abs(h) > rescale_at || std::abs(hm) > rescale_at) {
            h /= rescale_at;
            hm /= rescale_at;
            log_scale += log_rescale;
        }
        record(k + 1, h, log_scale);
    }
    return out;
}

HermiteExpansion hermite_product_linearize(int m, int n) {
    if (m < 0 || n < 0) throw std::domain_error("hermite_product_linearize: negative degree");
    HermiteExpansion e;
    const int rmax = std::min(m, n);
    double pow2_fact = 1.0;  // 2^r r!, exact while it fits the mantissa
    for (int r = 0; r <= rmax; ++r) {
        if (r > 0) pow2_fact *= 2.0 * r;
        const double c = pow2_fact * binomial(m, r) * binomial(n, r);
        if (!std::isfinite(c))
            throw std::domain_error("hermite_product_linearize: coefficients overflow double at these degrees");
        e.terms[m + n - 2 * r] = c;
    }
    return e;
}

QuadratureRule gauss_hermite_rule(int k) {
    if (k < 1 || k > 512) throw std::domain_error("gauss_hermite_rule: k out of range [1, 512]");
    QuadratureRule rule;
    if (k == 1) {
        rule.nodes = Eigen::VectorXd::Zero(1);
        rule.weights = Eigen::VectorXd::Constant(1, sqrt_pi);
        return rule;
    }
    // Golub-Welsch eigenvalues of the Jacobi matrix (zero diagonal,
    // off-diagonal sqrt(j/2)) seed the nodes; a few Newton steps with the
    // normalized recurrence polish them to machine precision. Weights come
    // from w_i = sqrt(pi) / (k * hhat_{k-1}(x_i)^2), which keeps full
    // relative accuracy even where the extreme weights underflow toward
    // 1e-160 (eigenvector-based weights bottom out near eps^2 absolutely).
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd sub(k - 1);
    for (int j = 1; j < k; ++j) sub[j - 1] = std::sqrt(0.5 * j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("gauss_hermite_rule: eigen-solve failed");

    // Rescaled normalized recurrence: hhat_{k-1} alone overflows near the
    // extreme nodes of the largest rules, but the Newton ratio and the
    // log-magnitude survive the rescaling.
    const auto scan = [](int deg, double x, double& log_scale) {
        double hm = 1.0, h = std::sqrt(2.0) * x;
        log_scale = 0.0;
        if (deg == 0) return 1.0;
        for (int j = 1; j < deg; ++j) {
            const double hn = std::sqrt(2.0 / (j + 1.0)) * x * h - std::sqrt(j / (j + 1.0)) * hm;
            hm = h;
            h = hn;
            if (std::abs(h) > 1e120 || std::abs(hm) > 1e120) {
                h *= 1e-120;
                hm *= 1e-120;
                log_scale += 120.0 * 2.302585092994046;
            }
        }
        return h;
    };

    rule.nodes = es.eigenvalues();
    rule.weights.resize(k);
    for (int i = 0; i < k; ++i) {
        double x = rule.nodes[i];
        for (int it = 0; it < 4; ++it) {
            double ls_k = 0.0, ls_k1 = 0.0;
            const double hk = scan(k, x, ls_k);
            const double hk1 = scan(k - 1, x, ls_k1);
            const double step = hk / (std::sqrt(2.0 * k) * hk1) * std::exp(ls_k - ls_k1);
            x -= step;
            if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
        }
        double ls = 0.0;
        const double hk1 = scan(k - 1, x, ls);
        rule.nodes[i] = x;
        // w = sqrt(pi) / (k hhat_{k-1}^2); extreme weights of rules past
        // k ~ 400 genuinely underflow binary64 and round to zero.
        rule.weights[i] =
            std::exp(0.5 * std::log(pi) - std::log(static_cast<double>(k)) - 2.0 * (std::log(std::abs(hk1)) + ls));
    }

    // Fold the symmetric halves together so the rule is exactly
    // antisymmetric and two equal-k rules are bitwise identical.
    for (int i = 0; i < k / 2; ++i) {
        const int j = k - 1 - i;
        const double node = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        rule.nodes[i] = -node;
        rule.nodes[j] = node;
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.weights[i] = w;
        rule.weights[j] = w;
    }
    if (k % 2 == 1) rule.nodes[k / 2] = 0.0;
    return rule;
}

double ln_factorial(int n) {
    if (n < 0) throw std::domain_error("ln_factorial: negative argument");
    return std::lgamma(n + 1.0);
}

double binomial(int n, int r) {
    if (r < 0 || n < 0 || r > n) throw std::domain_error("binomial: require 0 <= r <= n");
    if (r > n - r) r = n - r;
    if (n <= 62) {
        // Exact: every intermediate C(n-r+i, i) * (n-r+i+1) fits in 64 bits.
        std::uint64_t acc = 1;
        for (int i = 1; i <= r; ++i) {
            acc = acc * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
        }
        return static_cast<double>(acc);
    }
    return std::exp(ln_factorial(n) - ln_factorial(r) - ln_factorial(n - r));
}

}  // namespace tfd
