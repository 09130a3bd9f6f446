#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <utility>

#include "tfd/model.hpp"

namespace tfd::fock {

using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

struct OracleError : std::runtime_error {
    OracleError(const std::string& msg, double diag) : std::runtime_error(msg), diagnostic(diag) {}
    double diagnostic;  // residual estimate or norm deficit, depending on the failure
};

// Coefficient grid c(k,l) of a state on the doubled number basis |k> x |l~>,
// truncated at `cutoff` in both indices. States enter the pipeline with unit
// norm, so 1 - |c|^2 is the accumulated truncation loss.
struct FockState2 {
    Matrix c;

    int cutoff() const { return static_cast<int>(c.rows()) - 1; }
    double norm2() const { return c.squaredNorm(); }
    double deficit() const { return 1.0 - norm2(); }
};

// a|k> = sqrt(k)|k-1>, adag|k> = sqrt(k+1)|k+1>, truncated at N.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> ladder_matrices(int N);

// e^M v by substepped Taylor series: the substep count scales with the
// operator norm so each partial series converges fast; truncation error of
// the series is kept below tol * |v|. Throws OracleError with a residual
// estimate when the substep budget is exhausted.
Vector matrix_exp_apply(const Matrix& M, const Vector& v, double tol);

// Same contract for a matrix-free operator with a caller-supplied norm bound.
template <class MatVec>
Vector expm_apply_op(const MatVec& apply, double norm_est, Vector v, double tol) {
    if (!(norm_est >= 0.0) || !std::isfinite(norm_est))
        throw std::domain_error("expm_apply_op: invalid norm estimate");
    const long substeps = std::max(1L, static_cast<long>(std::ceil(norm_est / 2.0)));
    constexpr long max_substeps = 200000;
    if (substeps > max_substeps)
        throw OracleError("expm_apply_op: operator norm too large for the substep budget", norm_est);
    const double inv_s = 1.0 / static_cast<double>(substeps);
    const double tol_sub = std::max(tol * inv_s, 1e-17);
    for (long step = 0; step < substeps; ++step) {
        Vector acc = v, term = v;
        bool converged = false;
        for (int k = 1; k <= 64; ++k) {
            term = apply(term) * (inv_s / k);
            acc += term;
            if (term.norm() <= tol_sub * acc.norm()) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw OracleError("expm_apply_op: Taylor series did not converge within the term cap",
                              term.norm() / acc.norm());
        v = std::move(acc);
    }
    return v;
}

// D(alpha) S(z) |n> reported at cutoff N (internal headroom 2N+16); the
// squeeze acts first. Deficit of the reported vector is the mass left above
// the cutoff.
Vector displaced_squeezed_number_vector(const Displacement& alpha, const Squeeze& z, int n, int N,
                                        double tol = 1e-13, double max_deficit = 0.5);

// Entrywise complex conjugate: the tilde partner has conjugated parameters,
// and the ladder matrices are real.
Vector tilde_vector(const Vector& v);

// |psi> x |psi~> as a coefficient grid.
FockState2 product_state(const Vector& v, const Vector& v_tilde);

// exp{-theta (a a~ - adag adag~)} applied stripe-wise: the generator
// conserves k - l, and on each stripe it is an antisymmetric tridiagonal
// whose exponential is computed exactly through a real symmetric
// eigen-decomposition (unitary by construction).
FockState2 thermalize(const FockState2& in, double theta, double tol = 1e-13);

// Diagonal phases exp{-i wt (k - l)}; exactly norm-preserving.
FockState2 time_evolve(const FockState2& in, double omega_t);

// Matrix of psi_k(x_g) for k = 0..N over a grid, used for position synthesis.
Eigen::MatrixXd eigenfunction_matrix(const Eigen::VectorXd& xs, int N, const OscillatorParams& p = {});

// Single-mode position synthesis sum_k v_k psi_k(x).
Complex wavefunction1(const Vector& v, double x, const OscillatorParams& p = {});

// Doubled-space synthesis sum_{kl} c_{kl} psi_k(x) psi_l(xt).
Complex wavefunction2(const FockState2& s, double x, double x_tilde, const OscillatorParams& p = {});

// Marginal position density: tilde-basis orthonormality replaces the tilde
// integral, sum_l |sum_k c_{kl} psi_k(x)|^2.
double marginal_density(const FockState2& s, double x, const OscillatorParams& p = {});
Eigen::VectorXd marginal_density_grid(const FockState2& s, const Eigen::VectorXd& xs,
                                      const OscillatorParams& p = {});

// <x> and Var x through the ladder representation of x on the physical
// index; no quadrature involved. Normalized by the retained norm.
std::pair<double, double> oracle_moments(const FockState2& s, const OscillatorParams& p = {});

// Ladder actions on the doubled grid, physical and tilde index.
Matrix apply_a_physical(const Matrix& c);
Matrix apply_adag_physical(const Matrix& c);
Matrix apply_a_tilde(const Matrix& c);
Matrix apply_adag_tilde(const Matrix& c);

struct CutoffPolicy {
    int fixed = -1;  // >= 1 pins the cutoff; -1 means adaptive
    double deficit_ceiling = 1e-10;
    // The heated number states carry polynomially-enhanced geometric tails;
    // the coldest corner of the supported parameter range (beta_hw = 0.5,
    // n = 5) converges near N ~ 420, so the cap sits above that.
    int max_cutoff = 512;
    double exp_tol = 1e-13;
};

struct BuildResult {
    FockState2 state;
    int cutoff = 0;
    double deficit = 0.0;
    int attempts = 1;
};

// Full pipeline: |n> -> squeeze -> displace -> tensor with the conjugate
// tilde copy -> thermalize -> evolve. Starts from an occupation estimate
// 4(n + |alpha|^2 + sinh^2 r + nbar) + 20 and doubles the cutoff until the
// deficit ceiling holds; errors past max_cutoff.
BuildResult build_state(const StateSpec& spec, const ThermalParams& th, double omega_t,
                        const CutoffPolicy& policy = {});

}  // namespace tfd::fock
