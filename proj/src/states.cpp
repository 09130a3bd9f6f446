#include "tfd/states.hpp"

namespace tfd {

namespace {

const Complex I{0.0, 1.0};

// All evaluation happens in the dimensionless coordinate xi = sqrt(mw/hbar) x;
// each doubled-space amplitude carries one factor sqrt(xi_scale) per coordinate.
double xi_of(double x, const OscillatorParams& p) { return p.xi_scale() * x; }

}  // namespace

Complex psi_displaced_number(double x, const Displacement& alpha, int n, const OscillatorParams& p) {
    require_finite(x, "psi_displaced_number");
    const double xi = xi_of(x, p);
    const double u = xi - std::sqrt(2.0) * alpha.alpha1;
    const double amp = std::sqrt(p.xi_scale()) * inv_quartic_root_pi * hermite_gauss(n, u);
    return amp * std::exp(I * (std::sqrt(2.0) * alpha.alpha2 * xi - alpha.alpha1 * alpha.alpha2));
}

Complex psi_squeezed_number(double x, const Displacement& alpha, const Squeeze& z, int n,
                            const OscillatorParams& p) {
    require_finite(x, "psi_squeezed_number");
    const double xi = xi_of(x, p);
    const double u = xi - std::sqrt(2.0) * alpha.alpha1;
    // The real part of F2 equals 1/F4^2, so H_n(u/F4) exp(-F2 u^2/2) splits
    // into the bounded eigenfunction kernel at u/F4 times a pure phase.
    const Complex residual = -0.5 * (z.F2 - 1.0 / sq(z.F4)) * sq(u);
    const Complex pref = std::pow(std::sqrt(z.F3), n) / std::sqrt(z.F1);
    const double amp = std::sqrt(p.xi_scale()) * inv_quartic_root_pi * hermite_gauss(n, u / z.F4);
    return pref * amp * std::exp(residual + I * (std::sqrt(2.0) * alpha.alpha2 * xi - alpha.alpha1 * alpha.alpha2));
}

double psi_thermal_vacuum(double x, double x_tilde, const ThermalParams& th, const OscillatorParams& p) {
    require_finite(x, "psi_thermal_vacuum");
    require_finite(x_tilde, "psi_thermal_vacuum");
    const auto [xb, xtb] = thermal_coords(xi_of(x, p), xi_of(x_tilde, p), th.theta);
    return p.xi_scale() / sqrt_pi * std::exp(-0.5 * (sq(xb) + sq(xtb)));
}

Complex psi_tdn_t0(double x, double x_tilde, const Displacement& alpha, int n, const ThermalParams& th,
                   const OscillatorParams& p) {
    require_finite(x, "psi_tdn_t0");
    require_finite(x_tilde, "psi_tdn_t0");
    const auto [xb, xtb] = thermal_coords(xi_of(x, p), xi_of(x_tilde, p), th.theta);
    const double u = xb - std::sqrt(2.0) * alpha.alpha1;
    const double v = xtb - std::sqrt(2.0) * alpha.alpha1;
    const double amp = p.xi_scale() / sqrt_pi * hermite_gauss(n, u) * hermite_gauss(n, v);
    return amp * std::exp(I * std::sqrt(2.0) * alpha.alpha2 * (xb - xtb));
}

Complex psi_tdn(double x, double x_tilde, const Displacement& alpha, int n, const ThermalParams& th,
                const OscillatorParams& p, double omega_t) {
    require_finite(x, "psi_tdn");
    require_finite(x_tilde, "psi_tdn");
    require_finite(omega_t, "psi_tdn");
    const auto [xb, xtb] = thermal_coords(xi_of(x, p), xi_of(x_tilde, p), th.theta);
    const TimePoint t = time_point(omega_t);
    const Complex a = alpha.value();
    const double abar = alpha.rotated_re(omega_t);

    const double u = xb - std::sqrt(2.0) * abar;
    const double v = xtb - std::sqrt(2.0) * abar;

    // Time-dependent normalization factor: exp{(a^2/A + a*^2/A*) cos(wt) - 2 a1^2}.
    const double lnP = 2.0 * std::real(a * a / t.A) * std::cos(omega_t) - 2.0 * sq(alpha.alpha1);
    // Gaussians centred at the complex points sqrt(2) a/A and its conjugate;
    // the e^{-u^2/2} halves live inside hermite_gauss, the remainder here.
    const Complex gx = -0.5 * sq(Complex(xb, 0.0) - std::sqrt(2.0) * a / t.A) + 0.5 * sq(u);
    const Complex gt = -0.5 * sq(Complex(xtb, 0.0) - std::sqrt(2.0) * std::conj(a) / std::conj(t.A)) + 0.5 * sq(v);

    const double amp = p.xi_scale() / sqrt_pi * hermite_gauss(n, u) * hermite_gauss(n, v);
    return amp * std::exp(lnP + gx + gt);
}

Complex psi_tsn_t0(double x, double x_tilde, const Displacement& alpha, const Squeeze& z, int n,
                   const ThermalParams& th, const OscillatorParams& p) {
    require_finite(x, "psi_tsn_t0");
    require_finite(x_tilde, "psi_tsn_t0");
    const auto [xb, xtb] = thermal_coords(xi_of(x, p), xi_of(x_tilde, p), th.theta);
    const double u = xb - std::sqrt(2.0) * alpha.alpha1;
    const double v = xtb - std::sqrt(2.0) * alpha.alpha1;

    const Complex expo = -0.5 * z.F2 * sq(u) - 0.5 * std::conj(z.F2) * sq(v) +
                         I * std::sqrt(2.0) * alpha.alpha2 * (xb - xtb) +
                         0.5 * (sq(u / z.F4) + sq(v / z.F4));
    const double pref = std::pow(std::abs(z.F3), n) / std::abs(z.F1);
    const double amp = p.xi_scale() / sqrt_pi * hermite_gauss(n, u / z.F4) * hermite_gauss(n, v / z.F4);
    return pref * amp * std::exp(expo);
}

Complex psi_tsn(double x, double x_tilde, const Displacement& alpha, const Squeeze& z, int n,
                const ThermalParams& th, const OscillatorParams& p, double omega_t) {
    require_finite(x, "psi_tsn");
    require_finite(x_tilde, "psi_tsn");
    require_finite(omega_t, "psi_tsn");
    const auto [xb, xtb] = thermal_coords(xi_of(x, p), xi_of(x_tilde, p), th.theta);
    const TimePoint t = time_point(omega_t, z);
    const double c = std::cos(omega_t), s = std::sin(omega_t);
    const double a1 = alpha.alpha1, a2 = alpha.alpha2;
    const double abar = alpha.rotated_re(omega_t);
    const double sigma = z.F4 * t.abs_B();

    const double w1 = (xb - std::sqrt(2.0) * abar) / sigma;
    const double w2 = (xtb - std::sqrt(2.0) * abar) / sigma;

    const Complex e1 = -(z.F2 * c * sq(a1) + 2.0 * z.F2 * s * a1 * a2 + I * s * sq(a2)) / t.B;
    const Complex e3 = -0.5 * (z.F2 * c + I * s) / t.B * sq(xb) + std::sqrt(2.0) * (z.F2 * a1 + I * a2) / t.B * xb;
    // Tilde-side factors are the complex conjugates of e1, e3 at xt_beta.
    const Complex e2 = std::conj(e1);
    const Complex e4 = -0.5 * (std::conj(z.F2) * c - I * s) / std::conj(t.B) * sq(xtb) +
                       std::sqrt(2.0) * (std::conj(z.F2) * a1 - I * a2) / std::conj(t.B) * xtb;

    const Complex expo = e1 + e2 + e3 + e4 + 0.5 * (sq(w1) + sq(w2));
    const double pref = std::pow(std::abs(z.F3), n) / (std::abs(z.F1) * t.abs_B());
    const double amp = p.xi_scale() / sqrt_pi * hermite_gauss(n, w1) * hermite_gauss(n, w2);
    return pref * amp * std::exp(expo);
}

}  // namespace tfd
