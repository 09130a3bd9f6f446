#pragma once

#include <Eigen/Core>
#include <map>
#include <vector>

#include "tfd/model.hpp"
#include "tfd/numeric.hpp"

namespace tfd {

// Gauss-Hermite rule for the weight exp(-y^2) on the whole real line.
// Nodes are strictly increasing and exactly symmetric about 0.
struct QuadratureRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;

    int size() const { return static_cast<int>(nodes.size()); }
};

// Finite combination sum_d coeff_d * H_d(x) in the physicists' convention.
struct HermiteExpansion {
    std::map<int, double> terms;  // degree -> coefficient; absent degree means 0

    double coeff(int degree) const {
        auto it = terms.find(degree);
        return it == terms.end() ? 0.0 : it->second;
    }
    double eval(double x) const;
    double eval_abs(double x) const;  // sum of |coeff * H_d(x)|, the conditioning scale of eval
};

// Physicists' Hermite polynomial H_n(x) by the three-term recurrence
// H_{n+1} = 2x H_n - 2n H_{n-1}.
double hermite_poly(int n, double x);

// H_n(y) / sqrt(2^n n!) via the normalized recurrence; stays bounded where
// the raw polynomial would overflow.
double hermite_normalized(int n, double y);

// H_n(y) exp(-y^2/2) / sqrt(2^n n!) - the oscillator eigenfunction kernel in
// dimensionless coordinates, without the (m w / pi hbar)^(1/4) prefactor.
double hermite_gauss(int n, double y);

// Normalized eigenfunction psi_n(x) of the oscillator with parameters p,
// computed with the normalized recurrence so no intermediate overflows for
// n well beyond 200.
double hermite_fn(int n, double x, const OscillatorParams& p = {});

// Log-magnitude/sign table of H_d(x) for d = 0..max_degree, rescaled during
// the recurrence so degrees in the hundreds remain representable.
struct SignedLog {
    double log_abs;  // -inf when the value is exactly 0
    int sign;        // -1, 0, +1
};
std::vector<SignedLog> hermite_log_scan(int max_degree, double x);

// Linearization H_m H_n = sum_r 2^r r! C(m,r) C(n,r) H_{m+n-2r}.
HermiteExpansion hermite_product_linearize(int m, int n);

// k-point Gauss-Hermite rule by Golub-Welsch (symmetric tridiagonal
// eigen-solve). 1 <= k <= 512.
QuadratureRule gauss_hermite_rule(int k);

double ln_factorial(int n);

// Exact for n <= 62 (fits in 64-bit integer arithmetic), log-scale beyond.
double binomial(int n, int r);

}  // namespace tfd
