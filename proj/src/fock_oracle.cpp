#include "tfd/fock_oracle.hpp"

namespace tfd::fock {

namespace {

const Complex I{0.0, 1.0};

// alpha adag - alpha* a on a single-mode vector.
Vector displacement_generator(const Complex& alpha, const Vector& v) {
    const long W = v.size() - 1;
    Vector out = Vector::Zero(v.size());
    for (long k = 0; k <= W; ++k) {
        Complex acc{0.0, 0.0};
        if (k > 0) acc += alpha * std::sqrt(static_cast<double>(k)) * v[k - 1];
        if (k < W) acc -= std::conj(alpha) * std::sqrt(k + 1.0) * v[k + 1];
        out[k] = acc;
    }
    return out;
}

// -(z* a a - z adag adag)/2 on a single-mode vector.
Vector squeeze_generator(const Complex& zval, const Vector& v) {
    const long W = v.size() - 1;
    Vector out = Vector::Zero(v.size());
    for (long k = 0; k <= W; ++k) {
        Complex acc{0.0, 0.0};
        if (k + 2 <= W) acc -= 0.5 * std::conj(zval) * std::sqrt((k + 1.0) * (k + 2.0)) * v[k + 2];
        if (k >= 2) acc += 0.5 * zval * std::sqrt(static_cast<double>(k) * (k - 1.0)) * v[k - 2];
        out[k] = acc;
    }
    return out;
}

}  // namespace

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> ladder_matrices(int N) {
    if (N < 1) throw std::domain_error("ladder_matrices: N must be at least 1");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(N + 1, N + 1);
    for (int k = 1; k <= N; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return {a, a.transpose()};
}

Vector matrix_exp_apply(const Matrix& M, const Vector& v, double tol) {
    if (M.rows() != M.cols() || M.rows() != v.size())
        throw std::domain_error("matrix_exp_apply: dimension mismatch");
    const double norm1 = M.cwiseAbs().colwise().sum().maxCoeff();
    if (!std::isfinite(norm1)) throw std::domain_error("matrix_exp_apply: non-finite operator");
    return expm_apply_op([&](const Vector& u) { return Vector(M * u); }, norm1, v, tol);
}

Vector displaced_squeezed_number_vector(const Displacement& alpha, const Squeeze& z, int n, int N,
                                        double tol, double max_deficit) {
    if (N < 1) throw std::domain_error("displaced_squeezed_number_vector: N must be at least 1");
    if (n < 0 || 2 * n > N)
        throw std::domain_error("displaced_squeezed_number_vector: require 0 <= n <= N/2");
    const int W = 2 * N + 16;
    Vector v = Vector::Zero(W + 1);
    v[n] = 1.0;
    if (!z.is_zero()) {
        const double norm_est = std::abs(z.value()) * (W + 2.0);
        v = expm_apply_op([&](const Vector& u) { return squeeze_generator(z.value(), u); }, norm_est, v, tol);
    }
    if (!alpha.is_zero()) {
        const double norm_est = 2.0 * std::abs(alpha.value()) * std::sqrt(W + 1.0);
        v = expm_apply_op([&](const Vector& u) { return displacement_generator(alpha.value(), u); }, norm_est,
                          v, tol);
    }
    Vector reported = v.head(N + 1);
    const double deficit = 1.0 - reported.squaredNorm();
    if (deficit > max_deficit)
        throw OracleError("displaced_squeezed_number_vector: cutoff too small for the requested state",
                          deficit);
    return reported;
}

Vector tilde_vector(const Vector& v) { return v.conjugate(); }

FockState2 product_state(const Vector& v, const Vector& v_tilde) {
    if (v.size() != v_tilde.size()) throw std::domain_error("product_state: dimension mismatch");
    return {v * v_tilde.transpose()};
}

FockState2 thermalize(const FockState2& in, double theta, double tol) {
    if (theta < 0.0 || !std::isfinite(theta)) throw std::domain_error("thermalize: theta must be >= 0");
    if (theta == 0.0) return in;
    const int N = in.cutoff();
    const int W = N + std::max(32, N / 4);

    FockState2 out{Matrix::Zero(N + 1, N + 1)};
    for (int d = -N; d <= N; ++d) {
        const int ad = std::abs(d);
        const int len_in = N + 1 - ad;
        Vector y = Vector::Zero(W + 1 - ad);
        for (int j = 0; j < len_in; ++j) y[j] = (d >= 0) ? in.c(j + d, j) : in.c(j, j + ad);
        if (y.squaredNorm() < 1e-32) continue;

        // Stripe generator couples j <-> j+1 with weight theta*sqrt((j+1+|d|)(j+1))
        // and is antisymmetric, so the substepped series stays norm-preserving
        // to within the series tolerance.
        const int L = static_cast<int>(y.size());
        Eigen::VectorXd gamma(L - 1);
        double norm1 = 0.0;
        for (int j = 0; j + 1 < L; ++j) gamma[j] = theta * std::sqrt((j + 1.0 + ad) * (j + 1.0));
        for (int j = 0; j < L; ++j) {
            const double col = (j > 0 ? gamma[j - 1] : 0.0) + (j + 1 < L ? gamma[j] : 0.0);
            norm1 = std::max(norm1, col);
        }
        y = expm_apply_op(
            [&](const Vector& u) {
                Vector g = Vector::Zero(L);
                for (int j = 0; j < L; ++j) {
                    Complex acc{0.0, 0.0};
                    if (j > 0) acc += gamma[j - 1] * u[j - 1];
                    if (j + 1 < L) acc -= gamma[j] * u[j + 1];
                    g[j] = acc;
                }
                return g;
            },
            norm1, std::move(y), tol);

        for (int j = 0; j < len_in; ++j) {
            if (d >= 0)
                out.c(j + d, j) = y[j];
            else
                out.c(j, j + ad) = y[j];
        }
    }
    return out;
}

FockState2 time_evolve(const FockState2& in, double omega_t) {
    require_finite(omega_t, "time_evolve");
    const int N = in.cutoff();
    FockState2 out{Matrix(N + 1, N + 1)};
    for (int k = 0; k <= N; ++k)
        for (int l = 0; l <= N; ++l) out.c(k, l) = in.c(k, l) * std::exp(-I * omega_t * static_cast<double>(k - l));
    return out;
}

Eigen::MatrixXd eigenfunction_matrix(const Eigen::VectorXd& xs, int N, const OscillatorParams& p) {
    const long G = xs.size();
    Eigen::MatrixXd H(G, N + 1);
    const double scale = std::sqrt(p.xi_scale()) * inv_quartic_root_pi;
    for (long g = 0; g < G; ++g) {
        const double xi = p.xi_scale() * xs[g];
        double prev = 0.0, cur = scale * std::exp(-0.5 * xi * xi);
        H(g, 0) = cur;
        for (int k = 0; k < N; ++k) {
            const double next = std::sqrt(2.0 / (k + 1.0)) * xi * cur - std::sqrt(k / (k + 1.0)) * prev;
            prev = cur;
            cur = next;
            H(g, k + 1) = cur;
        }
    }
    return H;
}

Complex wavefunction1(const Vector& v, double x, const OscillatorParams& p) {
    Eigen::VectorXd xs(1);
    xs[0] = x;
    const Eigen::MatrixXd H = eigenfunction_matrix(xs, static_cast<int>(v.size()) - 1, p);
    const Vector h = H.row(0).transpose().cast<Complex>();
    return h.dot(v);  // dot conjugates its first argument, which is real here
}

Complex wavefunction2(const FockState2& s, double x, double x_tilde, const OscillatorParams& p) {
    Eigen::VectorXd xs(2);
    xs[0] = x;
    xs[1] = x_tilde;
    const Eigen::MatrixXd H = eigenfunction_matrix(xs, s.cutoff(), p);
    const Vector partial = s.c * H.row(1).transpose().cast<Complex>();
    const Vector h0 = H.row(0).transpose().cast<Complex>();
    return h0.dot(partial);
}

double marginal_density(const FockState2& s, double x, const OscillatorParams& p) {
    Eigen::VectorXd xs(1);
    xs[0] = x;
    return marginal_density_grid(s, xs, p)[0];
}

Eigen::VectorXd marginal_density_grid(const FockState2& s, const Eigen::VectorXd& xs,
                                      const OscillatorParams& p) {
    const Eigen::MatrixXd H = eigenfunction_matrix(xs, s.cutoff(), p);
    const Matrix M = H.cast<Complex>() * s.c;
    Eigen::VectorXd out(xs.size());
    for (long g = 0; g < xs.size(); ++g) out[g] = M.row(g).squaredNorm();
    return out;
}

std::pair<double, double> oracle_moments(const FockState2& s, const OscillatorParams& p) {
    const double len = std::sqrt(0.5) / p.xi_scale();  // sqrt(hbar / 2 m w)
    const Matrix xc = len * (apply_a_physical(s.c) + apply_adag_physical(s.c));
    const double norm2 = s.norm2();
    const double mean = (s.c.conjugate().cwiseProduct(xc)).sum().real() / norm2;
    const double second = xc.squaredNorm() / norm2;
    return {mean, second - mean * mean};
}

Matrix apply_a_physical(const Matrix& c) {
    const long N = c.rows() - 1;
    Matrix out = Matrix::Zero(c.rows(), c.cols());
    for (long k = 0; k < N; ++k) out.row(k) = std::sqrt(k + 1.0) * c.row(k + 1);
    return out;
}

Matrix apply_adag_physical(const Matrix& c) {
    const long N = c.rows() - 1;
    Matrix out = Matrix::Zero(c.rows(), c.cols());
    for (long k = 1; k <= N; ++k) out.row(k) = std::sqrt(static_cast<double>(k)) * c.row(k - 1);
    return out;
}

Matrix apply_a_tilde(const Matrix& c) {
    const long N = c.cols() - 1;
    Matrix out = Matrix::Zero(c.rows(), c.cols());
    for (long l = 0; l < N; ++l) out.col(l) = std::sqrt(l + 1.0) * c.col(l + 1);
    return out;
}

Matrix apply_adag_tilde(const Matrix& c) {
    const long N = c.cols() - 1;
    Matrix out = Matrix::Zero(c.rows(), c.cols());
    for (long l = 1; l <= N; ++l) out.col(l) = std::sqrt(static_cast<double>(l)) * c.col(l - 1);
    return out;
}

BuildResult build_state(const StateSpec& spec, const ThermalParams& th, double omega_t,
                        const CutoffPolicy& policy) {
    const double nbar = th.zero_temperature() ? 0.0 : 1.0 / std::expm1(th.beta_hw);
    const double occupancy = spec.n + spec.alpha.abs2() + sq(std::sinh(spec.z.r)) + nbar;
    int N = (policy.fixed >= 1) ? policy.fixed
                                : static_cast<int>(std::ceil(4.0 * occupancy)) + 20;
    N = std::max(N, 2 * spec.n + 2);
    if (policy.fixed < 1 && N > policy.max_cutoff)
        throw OracleError("build_state: occupancy estimate already exceeds the cutoff cap", occupancy);

    BuildResult result;
    for (int attempt = 1;; ++attempt) {
        const Vector v = displaced_squeezed_number_vector(spec.alpha, spec.z, spec.n, N, policy.exp_tol, 1.0);
        FockState2 state = product_state(v, tilde_vector(v));
        state = thermalize(state, th.theta, policy.exp_tol);
        state = time_evolve(state, omega_t);
        result.state = std::move(state);
        result.cutoff = N;
        result.deficit = result.state.deficit();
        result.attempts = attempt;
        if (policy.fixed >= 1 || result.deficit <= policy.deficit_ceiling) return result;
        N *= 2;
        if (N > policy.max_cutoff)
            throw OracleError("build_state: deficit ceiling unreachable below the cutoff cap",
                              result.deficit);
    }
}

}  // namespace tfd::fock
