#pragma once

#include <utility>

#include "tfd/numeric.hpp"

namespace tfd {

// Physical constants of the oscillator. All default to 1.
struct OscillatorParams {
    double mass = 1.0;
    double omega = 1.0;
    double hbar = 1.0;

    OscillatorParams() = default;
    OscillatorParams(double m, double w, double hb);

    // sqrt(m w / hbar), the inverse length scale of the dimensionless
    // coordinate xi = sqrt(m w / hbar) x.
    double xi_scale() const { return std::sqrt(mass * omega / hbar); }
};

// Inverse temperature as the dimensionless group beta*hbar*omega, together
// with the thermal mixing angle. theta is always derived from beta_hw via
// tanh(theta) = exp(-beta_hw / 2); beta_hw = +inf means zero temperature
// (theta = 0) and is a first-class value, not a large-number stand-in.
struct ThermalParams {
    double beta_hw;
    double theta;

    bool zero_temperature() const { return beta_hw == infinity; }
};

// Rejects beta_hw below this floor: the mixing angle diverges as the
// temperature grows and every coth factor downstream blows up with it.
inline constexpr double min_beta_hw = 1e-6;

ThermalParams thermal_params_from(double beta_hw);

struct Displacement {
    double alpha1 = 0.0;
    double alpha2 = 0.0;

    Displacement() = default;
    Displacement(double a1, double a2);

    Complex value() const { return {alpha1, alpha2}; }
    double abs2() const { return alpha1 * alpha1 + alpha2 * alpha2; }
    bool is_zero() const { return alpha1 == 0.0 && alpha2 == 0.0; }

    // alpha_1 cos(wt) + alpha_2 sin(wt): the real displacement the state is
    // centred on after evolving for a phase wt.
    double rotated_re(double omega_t) const {
        return alpha1 * std::cos(omega_t) + alpha2 * std::sin(omega_t);
    }
    // alpha_2 cos(wt) - alpha_1 sin(wt), the conjugate component.
    double rotated_im(double omega_t) const {
        return alpha2 * std::cos(omega_t) - alpha1 * std::sin(omega_t);
    }
};

// Squeeze parameter z = z1 + i z2 = r e^{i phi} with the derived scale
// factors used by every squeezed wavefunction:
//   S  = cosh r + z1 sinh(r)/r
//   k  = z2 sinh(r) / (2 r S)
//   F1 = S (1 + 2ik)            F2 = 1/(S^2 (1 + 2ik)) - 2ik
//   F3 = (1 - 2ik)/(1 + 2ik)    F4 = S sqrt(1 + 4k^2)
// |F3| = 1 identically and F4 = |F1| > 0.
struct Squeeze {
    double z1 = 0.0, z2 = 0.0;
    double r = 0.0, phi = 0.0;
    double S = 1.0;
    double kappa = 0.0;
    Complex F1{1.0, 0.0};
    Complex F2{1.0, 0.0};
    Complex F3{1.0, 0.0};
    double F4 = 1.0;

    bool is_zero() const { return z1 == 0.0 && z2 == 0.0; }
    Complex value() const { return {z1, z2}; }
};

Squeeze squeeze_from(double z1, double z2);

// Phase factors of the evolved states at a given dimensionless time wt:
// A = exp(i wt); B = cos(wt) + i F2 sin(wt) for the squeeze in force
// (B = A when z = 0).
struct TimePoint {
    double omega_t;
    Complex A;
    Complex B;

    double abs_B() const { return std::abs(B); }
};

TimePoint time_point(double omega_t, const Squeeze& z = {});

enum class StateKind { ThermalVacuum, DisplacedNumber, SqueezedNumber };

// One of: thermal vacuum | thermalized displaced number state (alpha, n) |
// thermalized squeezed number state (alpha, z, n). The tilde partners are
// fixed to the complex conjugates throughout.
struct StateSpec {
    StateKind kind = StateKind::ThermalVacuum;
    Displacement alpha;
    Squeeze z;
    int n = 0;

    static StateSpec thermal_vacuum();
    static StateSpec displaced_number(Displacement alpha, int n);
    static StateSpec squeezed_number(Displacement alpha, Squeeze z, int n);
};

inline constexpr int default_max_n = 64;

// Hyperbolic mixing of the doubled coordinates:
//   x_beta  = x cosh(theta) - xt sinh(theta)
//   xt_beta = xt cosh(theta) - x sinh(theta)
// The map has unit Jacobian determinant.
std::pair<double, double> thermal_coords(double x, double x_tilde, double theta);

// Inverse of the above (the +sinh mixing).
std::pair<double, double> thermal_coords_inverse(double x_beta, double xt_beta, double theta);

}  // namespace tfd
