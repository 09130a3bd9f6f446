#pragma once

#include "tfd/model.hpp"
#include "tfd/special_fn.hpp"

namespace tfd {

struct WavefunctionSample {
    Complex value;
    double x = 0.0;
    double x_tilde = 0.0;
    double omega_t = 0.0;
};

// Single-mode displaced number state <x|alpha,n>: Gaussian centred at
// sqrt(2 hbar / m w) alpha1 carrying the plane-wave phase of alpha2, with
// the Hermite factor H_n(xi - sqrt(2) alpha1).
Complex psi_displaced_number(double x, const Displacement& alpha, int n, const OscillatorParams& p = {});

// Single-mode squeezed number state <x|alpha,z,n>. Principal branches for
// sqrt(F3) and sqrt(F1).
Complex psi_squeezed_number(double x, const Displacement& alpha, const Squeeze& z, int n,
                            const OscillatorParams& p = {});

// Thermal vacuum <xt,x|0(beta)>: the doubled ground-state Gaussian in the
// thermal coordinates. Real, positive, and independent of time.
double psi_thermal_vacuum(double x, double x_tilde, const ThermalParams& th, const OscillatorParams& p = {});

// Thermalized displaced number state at wt = 0 (the static closed form) and
// at general time. The two are independent code paths; they agree at wt = 0.
Complex psi_tdn_t0(double x, double x_tilde, const Displacement& alpha, int n, const ThermalParams& th,
                   const OscillatorParams& p = {});
Complex psi_tdn(double x, double x_tilde, const Displacement& alpha, int n, const ThermalParams& th,
                const OscillatorParams& p, double omega_t);

// Thermalized squeezed number state, same pairing of code paths.
Complex psi_tsn_t0(double x, double x_tilde, const Displacement& alpha, const Squeeze& z, int n,
                   const ThermalParams& th, const OscillatorParams& p = {});
Complex psi_tsn(double x, double x_tilde, const Displacement& alpha, const Squeeze& z, int n,
                const ThermalParams& th, const OscillatorParams& p, double omega_t);

}  // namespace tfd
