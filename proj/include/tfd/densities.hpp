#pragma once

#include <Eigen/Core>
#include <atomic>
#include <memory>

#include "tfd/model.hpp"
#include "tfd/special_fn.hpp"

namespace tfd {

// The a1,a2,b1,b2 block of the tilde-integration, exposed for cross-checks:
// a = b1/a1 = tanh(theta), b = -a*a2 + b2.
struct SumIntermediates {
    double a1, a2, b1, b2;
    double a, b;
};

SumIntermediates sum_intermediates(double x, const Displacement& alpha, const ThermalParams& th,
                                   const OscillatorParams& p, double omega_t);

// Marginal position density of a thermalized state, tilde coordinate
// integrated out analytically. Combinatorial factors are evaluated in log
// space with sign tracking on the Hermite values, so n up to the configured
// cap stays finite at any temperature.
//
// Two algebraically equivalent routes are kept alive:
//   operator()/raw  - the fully reduced closed form (tanh/sech groupings)
//   general_form    - the intermediate (a, b) form before those groupings
//
// The signed Hermite sum is a narrow-weight representation of a broad
// density, so at large n the terms cancel far below their own magnitude and
// binary64 runs out of digits (around n ~ 16 at moderate temperatures; the
// zero-temperature path is exempt, having no signed sum). Each evaluation
// carries a running error bound: negatives within the bound are clamped to
// zero and counted, and a point whose bound exceeds 1e-6 of the density
// scale is a hard error rather than silent noise.
class DensityEvaluator {
  public:
    static DensityEvaluator vacuum(const ThermalParams& th, const OscillatorParams& p = {});
    static DensityEvaluator tdn(const Displacement& alpha, int n, const ThermalParams& th,
                                const OscillatorParams& p, double omega_t);
    static DensityEvaluator tsn(const Displacement& alpha, const Squeeze& z, int n, const ThermalParams& th,
                                const OscillatorParams& p, double omega_t);

    double operator()(double x) const;   // clamped and bound-guarded
    double raw(double x) const;          // unclamped, unguarded
    double error_bound(double x) const;  // roundoff bound on raw(x)
    double general_form(double x) const; // (a, b) route, guarded the same way

    double mean() const;
    double variance() const;
    double scale() const { return scale_; }  // natural magnitude of the density peak

    long clamped_count() const { return clamped_->load(); }

  private:
    DensityEvaluator() = default;
    struct KernelValue {
        double value;
        double abs_sum;  // same exponential scaling as value; feeds the error bound
    };
    KernelValue kernel(double w) const;  // K(w), even in w
    KernelValue kernel_ab(double warg, double a, double ln_gauss) const;
    double bound_of(double abs_sum) const;
    double guard(double v, double abs_sum) const;

    Displacement alpha_;
    Squeeze z_;
    int n_ = 0;
    ThermalParams th_{infinity, 0.0};
    OscillatorParams p_;
    double omega_t_ = 0.0;
    double sigma_ = 1.0;       // F4 |B|
    double tanh_s_ = 1.0;      // tanh(beta hw / 2), 1 at zero temperature
    double sech_s_ = 0.0;
    double scale_ = 1.0;
    Eigen::MatrixXd log_coef_;  // (n+1)^2 x-independent log coefficients
    std::shared_ptr<std::atomic<long>> clamped_ = std::make_shared<std::atomic<long>>(0);
};

// Free-function faces over the evaluator.
double rho_vacuum(double x, const ThermalParams& th, const OscillatorParams& p = {});
double rho_tdn(double x, const Displacement& alpha, int n, const ThermalParams& th,
               const OscillatorParams& p, double omega_t);
double rho_tsn(double x, const Displacement& alpha, const Squeeze& z, int n, const ThermalParams& th,
               const OscillatorParams& p, double omega_t);

// <x> = sqrt(coth(beta hw/4)) sqrt(2 hbar/m w) (a1 cos wt + a2 sin wt);
// independent of n and z.
double mean_x(const Displacement& alpha, const Squeeze& z, int n, const ThermalParams& th,
              const OscillatorParams& p, double omega_t);

// (Delta_n x)^2 = coth(beta hw/2) (2n+1) hbar F4^2 |B|^2 / (2 m w);
// independent of alpha.
double var_x(const Displacement& alpha, const Squeeze& z, int n, const ThermalParams& th,
             const OscillatorParams& p, double omega_t);

// Printed special cases kept verbatim for the errata comparison: the n = 0
// normal density and the n = 1 quartic-correction form.
double rho_tsn_n0_printed(double x, const Displacement& alpha, const Squeeze& z, const ThermalParams& th,
                          const OscillatorParams& p, double omega_t);
double rho_tsn_n1_printed(double x, const Displacement& alpha, const Squeeze& z, const ThermalParams& th,
                          const OscillatorParams& p, double omega_t);

struct DensityProfile {
    Eigen::VectorXd grid;
    Eigen::VectorXd values;
    StateSpec state;
    double beta_hw = infinity;
    double omega_t = 0.0;
    long clamped = 0;
};

DensityEvaluator make_evaluator(const StateSpec& state, const ThermalParams& th, const OscillatorParams& p,
                                double omega_t);

// mean +/- 8 standard deviations, `count` points.
Eigen::VectorXd auto_grid(const StateSpec& state, const ThermalParams& th, const OscillatorParams& p,
                          double omega_t, int count = 801);

DensityProfile make_profile(const StateSpec& state, const ThermalParams& th, const OscillatorParams& p,
                            double omega_t, const Eigen::VectorXd& grid);

}  // namespace tfd
