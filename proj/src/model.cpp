#include "tfd/model.hpp"

#include <stdexcept>

namespace tfd {

OscillatorParams::OscillatorParams(double m, double w, double hb) : mass(m), omega(w), hbar(hb) {
    if (!(m > 0.0) || !std::isfinite(m)) throw std::domain_error("OscillatorParams: mass must be positive");
    if (!(w > 0.0) || !std::isfinite(w)) throw std::domain_error("OscillatorParams: omega must be positive");
    if (!(hb > 0.0) || !std::isfinite(hb)) throw std::domain_error("OscillatorParams: hbar must be positive");
}

ThermalParams thermal_params_from(double beta_hw) {
    if (std::isnan(beta_hw) || beta_hw <= 0.0)
        throw std::domain_error("thermal_params_from: beta*hbar*omega must be positive");
    if (beta_hw < min_beta_hw)
        throw std::domain_error("thermal_params_from: temperature too high / unphysical (beta*hbar*omega below 1e-6)");
    if (beta_hw == infinity) return {infinity, 0.0};
    return {beta_hw, std::atanh(std::exp(-0.5 * beta_hw))};
}

Displacement::Displacement(double a1, double a2) : alpha1(a1), alpha2(a2) {
    require_finite(a1, "Displacement");
    require_finite(a2, "Displacement");
}

Squeeze squeeze_from(double z1, double z2) {
    require_finite(z1, "squeeze_from");
    require_finite(z2, "squeeze_from");
    Squeeze s;
    s.z1 = z1;
    s.z2 = z2;
    s.r = std::hypot(z1, z2);
    s.phi = (s.r == 0.0) ? 0.0 : std::atan2(z2, z1);
    const double shc = sinhc(s.r);
    s.S = std::cosh(s.r) + z1 * shc;
    s.kappa = z2 * shc / (2.0 * s.S);
    const Complex one_p{1.0, 2.0 * s.kappa};
    s.F1 = s.S * one_p;
    s.F2 = 1.0 / (s.S * s.S * one_p) - Complex{0.0, 2.0 * s.kappa};
    s.F3 = Complex{1.0, -2.0 * s.kappa} / one_p;
    s.F4 = s.S * std::sqrt(1.0 + 4.0 * s.kappa * s.kappa);
    return s;
}

TimePoint time_point(double omega_t, const Squeeze& z) {
    require_finite(omega_t, "time_point");
    const double c = std::cos(omega_t), s = std::sin(omega_t);
    return {omega_t, Complex{c, s}, Complex{c, 0.0} + Complex{0.0, s} * z.F2};
}

StateSpec StateSpec::thermal_vacuum() { return {}; }

StateSpec StateSpec::displaced_number(Displacement alpha, int n) {
    if (n < 0) throw std::domain_error("StateSpec: n must be non-negative");
    StateSpec s;
    s.kind = StateKind::DisplacedNumber;
    s.alpha = alpha;
    s.n = n;
    return s;
}

StateSpec StateSpec::squeezed_number(Displacement alpha, Squeeze z, int n) {
    if (n < 0) throw std::domain_error("StateSpec: n must be non-negative");
    StateSpec s;
    s.kind = StateKind::SqueezedNumber;
    s.alpha = alpha;
    s.z = z;
    s.n = n;
    return s;
}

std::pair<double, double> thermal_coords(double x, double x_tilde, double theta) {
    const double ch = std::cosh(theta), sh = std::sinh(theta);
    return {x * ch - x_tilde * sh, x_tilde * ch - x * sh};
}

std::pair<double, double> thermal_coords_inverse(double x_beta, double xt_beta, double theta) {
    const double ch = std::cosh(theta), sh = std::sinh(theta);
    return {x_beta * ch + xt_beta * sh, xt_beta * ch + x_beta * sh};
}

}  // namespace tfd
