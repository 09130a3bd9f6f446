#include <doctest.h>

#include <cmath>

#include "tfd/densities.hpp"
#include "tfd/fock_oracle.hpp"
#include "tfd/special_fn.hpp"
#include "tfd/states.hpp"

using namespace tfd;

namespace {

struct Moments {
    double integral, mean, variance;
};

// Black-box Gauss-Hermite moments; the substitution matches a correct
// density's Gaussian factor, making the integrand polynomial.
template <class Rho>
Moments quad_moments(const Rho& rho, double center, double width, int k = 200) {
    const auto rule = gauss_hermite_rule(k);
    std::vector<double> t(k);
    double s0 = 0.0, s1 = 0.0;
    for (int i = 0; i < k; ++i) {
        const double y = rule.nodes[i];
        const double r = rho(center + width * y);
        // exp(y^2) overflows past the 400-node rules; go through logs there
        t[i] = (r == 0.0) ? 0.0
               : (y * y < 700.0) ? r * std::exp(y * y) * rule.weights[i]
                                 : std::exp(std::log(r) + y * y) * rule.weights[i];
        s0 += t[i];
        s1 += t[i] * y;
    }
    const double mean = center + width * s1 / s0;
    double s2 = 0.0;
    for (int i = 0; i < k; ++i) s2 += t[i] * sq(center + width * rule.nodes[i] - mean);
    return {width * s0, mean, s2 / s0};
}

double gauss_width(const Squeeze& z, const ThermalParams& th, double wt) {
    return std::sqrt(2.0 * var_x({}, z, 0, th, {}, wt));
}

}  // namespace

TEST_SUITE_BEGIN("densities");

TEST_CASE("vacuum density values and normalization") {
    CHECK(rho_vacuum(0.0, thermal_params_from(infinity)) ==
          doctest::Approx(1.0 / sqrt_pi).epsilon(1e-14));
    CHECK(rho_vacuum(0.0, thermal_params_from(1.0)) ==
          doctest::Approx(std::sqrt(std::tanh(0.5) / pi)).epsilon(1e-14));
    for (double beta : {0.3, 1.0, 10.0}) {
        const auto th = thermal_params_from(beta);
        const auto m = quad_moments([&](double x) { return rho_vacuum(x, th); }, 0.0,
                                    gauss_width({}, th, 0.0));
        CHECK(m.integral == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(m.variance == doctest::Approx(0.5 / std::tanh(0.5 * beta)).epsilon(1e-12));
    }
}

TEST_CASE("reduction chain: tsn(z=0) == tdn == vacuum at n=0, alpha=0") {
    for (double beta : {0.5, 2.0, infinity}) {
        const auto th = thermal_params_from(beta);
        const auto ev_t = DensityEvaluator::tdn({}, 0, th, {}, 0.3);
        const auto ev_s = DensityEvaluator::tsn({}, squeeze_from(0.0, 0.0), 0, th, {}, 0.3);
        for (double x = -5.0; x <= 5.0; x += 0.25) {
            const double v = rho_vacuum(x, th);
            CHECK(std::abs(ev_t(x) - v) <= 1e-12 * std::max(1e-30, v));
            CHECK(std::abs(ev_s(x) - v) <= 1e-12 * std::max(1e-30, v));
        }
    }
    // z = 0 at any n and time collapses tsn onto tdn
    const auto th = thermal_params_from(1.0);
    const Displacement alpha(1.0, 0.5);
    for (int n : {1, 4})
        for (double wt : {0.0, 0.7}) {
            const auto ev_d = DensityEvaluator::tdn(alpha, n, th, {}, wt);
            const auto ev_s = DensityEvaluator::tsn(alpha, squeeze_from(0.0, 0.0), n, th, {}, wt);
            for (double x = -4.0; x <= 6.0; x += 0.5)
                CHECK(std::abs(ev_s(x) - ev_d(x)) <= 1e-12 * std::max(1e-30, ev_d(x)));
        }
}

TEST_CASE("zero-temperature density is the single-mode density with shifted parameters") {
    const auto th0 = thermal_params_from(infinity);
    const Displacement alpha(1.0, 0.0);
    // n = 0, wt = 0: the coherent-state density from the displaced wavefunction
    const auto ev = DensityEvaluator::tdn(alpha, 0, th0, {}, 0.0);
    for (double x = -3.0; x <= 5.0; x += 0.4) {
        const double coherent = std::norm(psi_displaced_number(x, alpha, 0));
        CHECK(ev(x) == doctest::Approx(coherent).epsilon(1e-12));
    }
    // general (n, z, wt): time evolution only rotates alpha and rescales F4 by |B|
    const Displacement a2(1.0, 0.5);
    const Squeeze z = squeeze_from(0.3, 0.4);
    for (int n : {0, 1, 3})
        for (double wt : {0.0, 0.7, 0.5 * pi}) {
            const auto evs = DensityEvaluator::tsn(a2, z, n, th0, {}, wt);
            const double sigma = z.F4 * time_point(wt, z).abs_B();
            const double abar = a2.rotated_re(wt);
            for (double x = -5.0; x <= 5.0; x += 0.25) {
                const double w = (x - std::sqrt(2.0) * abar) / sigma;
                const double single = sq(hermite_gauss(n, w)) / (sigma * sqrt_pi);
                CHECK(std::abs(evs(x) - single) <= 1e-9 * std::max(1e-30, single));
            }
        }
}

TEST_CASE("closed-form density matches the Fock oracle at spot points") {
    const auto th = thermal_params_from(1.0);
    const Displacement alpha(1.0, 0.5);
    const auto built = fock::build_state(StateSpec::displaced_number(alpha, 2), th, 0.7);
    const auto ev = DensityEvaluator::tdn(alpha, 2, th, {}, 0.7);
    const double peak = ev(mean_x(alpha, {}, 2, th, {}, 0.7));
    for (double x : {-2.0, 0.0, 2.0}) {
        const double oracle = fock::marginal_density(built.state, x);
        CHECK(std::abs(ev(x) - oracle) <= 1e-6 * peak);
    }

    const Squeeze z = squeeze_from(0.5, 0.0);
    const auto built_s = fock::build_state(StateSpec::squeezed_number(alpha, z, 1), th, 0.7);
    const auto ev_s = DensityEvaluator::tsn(alpha, z, 1, th, {}, 0.7);
    const double peak_s = ev_s(mean_x(alpha, z, 1, th, {}, 0.7));
    for (double x : {-2.0, 0.0, 2.0}) {
        const double oracle = fock::marginal_density(built_s.state, x);
        CHECK(std::abs(ev_s(x) - oracle) <= 1e-6 * peak_s);
    }
}

TEST_CASE("normalization and positivity for n up to 10") {
    const Displacement alpha(1.0, 0.5);
    const Squeeze z = squeeze_from(0.3, 0.4);
    for (int n : {0, 1, 3, 6, 10})
        for (double beta : {0.5, 1.0, infinity}) {
            const auto th = thermal_params_from(beta);
            const auto ev = DensityEvaluator::tsn(alpha, z, n, th, {}, 0.7);
            const auto m = quad_moments([&](double x) { return ev(x); },
                                        mean_x(alpha, z, n, th, {}, 0.7), gauss_width(z, th, 0.7));
            CHECK(m.integral == doctest::Approx(1.0).epsilon(1e-8));

            const double mu = ev.mean(), sd = std::sqrt(ev.variance());
            double min_raw = 0.0;
            for (int i = 0; i < 400; ++i) min_raw = std::min(min_raw, ev.raw(mu - 8.0 * sd + i * sd / 25.0));
            CHECK(min_raw >= -1e-12 * ev.scale());
            CHECK(ev.clamped_count() >= 0);
        }
}

TEST_CASE("quadrature moments reproduce the closed formulas across the lattice") {
    const Displacement alpha(1.0, 0.5);
    for (int n : {0, 1, 3})
        for (double beta : {0.5, 1.0, 2.0, infinity})
            for (const auto& z : {Squeeze{}, squeeze_from(0.5, 0.0), squeeze_from(0.3, 0.4)})
                for (double wt : {0.0, 0.7, 0.5 * pi}) {
                    const auto th = thermal_params_from(beta);
                    const auto ev = DensityEvaluator::tsn(alpha, z, n, th, {}, wt);
                    const double m_ref = mean_x(alpha, z, n, th, {}, wt);
                    const double v_ref = var_x(alpha, z, n, th, {}, wt);
                    const auto m = quad_moments([&](double x) { return ev(x); }, m_ref,
                                                gauss_width(z, th, wt));
                    CHECK(std::abs(m.mean - m_ref) <= 1e-8 * std::max(std::abs(m_ref), 1.0));
                    CHECK(m.variance == doctest::Approx(v_ref).epsilon(1e-8));
                }
}

TEST_CASE("mean and variance formulas: spot values and parameter independence") {
    const auto th2 = thermal_params_from(2.0);
    const auto thinf = thermal_params_from(infinity);
    CHECK(mean_x(Displacement(1.0, 0.0), {}, 0, thinf, {}, 0.0) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(mean_x(Displacement(1.0, 0.0), {}, 0, th2, {}, 0.0) ==
          doctest::Approx(std::sqrt(2.0 / std::tanh(0.5))).epsilon(1e-14));
    CHECK(mean_x({}, {}, 3, th2, {}, 1.3) == 0.0);

    CHECK(var_x({}, {}, 0, thinf, {}, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(var_x({}, {}, 1, th2, {}, 0.0) == doctest::Approx(1.5 / std::tanh(1.0)).epsilon(1e-14));

    // mean does not depend on n or z; variance does not depend on alpha
    const Squeeze z = squeeze_from(0.3, 0.4);
    CHECK(mean_x(Displacement(1.0, 0.5), z, 4, th2, {}, 0.7) ==
          mean_x(Displacement(1.0, 0.5), {}, 0, th2, {}, 0.7));
    CHECK(var_x(Displacement(1.0, 0.5), z, 2, th2, {}, 0.7) ==
          var_x(Displacement(-2.0, 0.1), z, 2, th2, {}, 0.7));

    // harmonic motion of the mean; z = 0 variance is stationary
    const Displacement alpha(0.8, -0.6);
    for (double wt : {0.0, 0.9, 2.4}) {
        const double expect = std::sqrt(2.0 / std::tanh(0.5)) *
                              (alpha.alpha1 * std::cos(wt) + alpha.alpha2 * std::sin(wt));
        CHECK(mean_x(alpha, {}, 2, th2, {}, wt) == doctest::Approx(expect).epsilon(1e-13));
        CHECK(var_x(alpha, {}, 2, th2, {}, wt) ==
              doctest::Approx(var_x(alpha, {}, 2, th2, {}, 0.0)).epsilon(1e-13));
    }

    // physical units
    const OscillatorParams p(2.0, 3.0, 0.5);
    CHECK(var_x({}, {}, 0, thinf, p, 0.0) ==
          doctest::Approx(0.5 * p.hbar / (p.mass * p.omega)).epsilon(1e-14));
}

TEST_CASE("oracle moments agree with the closed formulas") {
    const Displacement alpha(1.0, 0.5);
    const Squeeze z = squeeze_from(0.3, 0.4);
    for (double beta : {1.0, 2.0})
        for (double wt : {0.0, 0.7}) {
            const auto th = thermal_params_from(beta);
            const auto built = fock::build_state(StateSpec::squeezed_number(alpha, z, 1), th, wt);
            const auto [mean, var] = fock::oracle_moments(built.state);
            CHECK(mean == doctest::Approx(mean_x(alpha, z, 1, th, {}, wt)).epsilon(1e-7));
            CHECK(var == doctest::Approx(var_x(alpha, z, 1, th, {}, wt)).epsilon(1e-7));
        }
}

TEST_CASE("general (a,b) form equals the reduced closed form pointwise") {
    const Displacement alpha(1.0, 0.5);
    const Squeeze z = squeeze_from(0.3, 0.4);
    for (int n : {0, 1, 3, 7})
        for (double beta : {0.5, 1.0, 2.0, infinity})
            for (double wt : {0.0, 0.7}) {
                // the two log-space routes cancel differently inside the
                // signed Hermite sums, and the cancellation grows with the
                // degree 4n
                const double tol = (n <= 3) ? 1e-12 : 1e-9;
                const auto th = thermal_params_from(beta);
                const auto ev_d = DensityEvaluator::tdn(alpha, n, th, {}, wt);
                const auto ev_s = DensityEvaluator::tsn(alpha, z, n, th, {}, wt);
                double peak_d = 0.0, peak_s = 0.0, sup_d = 0.0, sup_s = 0.0;
                for (double x = -6.0; x <= 6.0; x += 0.2) {
                    sup_d = std::max(sup_d, std::abs(ev_d(x) - ev_d.general_form(x)));
                    peak_d = std::max(peak_d, ev_d(x));
                    sup_s = std::max(sup_s, std::abs(ev_s(x) - ev_s.general_form(x)));
                    peak_s = std::max(peak_s, ev_s(x));
                }
                CHECK(sup_d <= tol * peak_d);
                CHECK(sup_s <= tol * peak_s);
            }
}

TEST_CASE("sum intermediates carry tanh(theta)") {
    const Displacement alpha(1.0, 0.5);
    for (double beta : {0.5, 1.0, 5.0, infinity}) {
        const auto th = thermal_params_from(beta);
        for (double x : {-2.0, 0.0, 1.3}) {
            const auto si = sum_intermediates(x, alpha, th, {}, 0.7);
            CHECK(si.a == doctest::Approx(std::tanh(th.theta)).epsilon(1e-14));
            CHECK(si.a >= 0.0);
            CHECK(si.a < 1.0);
            CHECK(si.b == doctest::Approx(-si.a * si.a2 + si.b2).epsilon(1e-14));
        }
    }
}

TEST_CASE("printed special cases: n=0 gaussian holds, n=1 quartic form agrees") {
    const Displacement alpha(1.0, 0.5);
    const Squeeze z = squeeze_from(0.3, 0.4);
    for (double beta : {1.0, infinity})
        for (double wt : {0.0, 0.7}) {
            const auto th = thermal_params_from(beta);
            const auto ev0 = DensityEvaluator::tsn(alpha, z, 0, th, {}, wt);
            const auto ev1 = DensityEvaluator::tsn(alpha, z, 1, th, {}, wt);
            const double mu = mean_x(alpha, z, 0, th, {}, wt);
            const double sd = std::sqrt(var_x(alpha, z, 0, th, {}, wt));
            double sup0 = 0.0, peak0 = 0.0, sup1 = 0.0, peak1 = 0.0;
            for (double u = -6.0; u <= 6.0; u += 0.05) {
                const double x = mu + u * sd;
                sup0 = std::max(sup0, std::abs(ev0(x) - rho_tsn_n0_printed(x, alpha, z, th, {}, wt)));
                peak0 = std::max(peak0, ev0(x));
                sup1 = std::max(sup1, std::abs(ev1(x) - rho_tsn_n1_printed(x, alpha, z, th, {}, wt)));
                peak1 = std::max(peak1, ev1(x));
            }
            CHECK(sup0 <= 1e-10 * peak0);
            CHECK(sup1 <= 1e-9 * peak1);
        }
}

TEST_CASE("free functions, profile generation, and the auto grid") {
    const auto th = thermal_params_from(1.0);
    const Displacement alpha(1.0, 0.0);
    CHECK(rho_tdn(0.5, alpha, 1, th, {}, 0.2) ==
          DensityEvaluator::tdn(alpha, 1, th, {}, 0.2)(0.5));
    CHECK(rho_tsn(0.5, alpha, squeeze_from(0.3, 0.4), 1, th, {}, 0.2) ==
          DensityEvaluator::tsn(alpha, squeeze_from(0.3, 0.4), 1, th, {}, 0.2)(0.5));

    const StateSpec spec = StateSpec::displaced_number(alpha, 1);
    const Eigen::VectorXd grid = auto_grid(spec, th, {}, 0.2, 801);
    CHECK(grid.size() == 801);
    const double mu = mean_x(alpha, {}, 1, th, {}, 0.2);
    const double sd = std::sqrt(var_x(alpha, {}, 1, th, {}, 0.2));
    CHECK(grid[0] == doctest::Approx(mu - 8.0 * sd).epsilon(1e-12));
    CHECK(grid[800] == doctest::Approx(mu + 8.0 * sd).epsilon(1e-12));

    const DensityProfile prof = make_profile(spec, th, {}, 0.2, grid);
    CHECK(prof.values.size() == 801);
    CHECK(prof.values.minCoeff() >= 0.0);
    CHECK(prof.beta_hw == 1.0);
    // trapezoid integral over +-8 sigma picks up everything
    double integral = 0.0;
    for (int i = 0; i + 1 < 801; ++i)
        integral += 0.5 * (prof.values[i] + prof.values[i + 1]) * (grid[i + 1] - grid[i]);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("time periodicity of the densities") {
    const Displacement alpha(1.0, 0.5);
    const Squeeze z = squeeze_from(0.3, 0.4);
    const auto th = thermal_params_from(1.0);
    const auto ev = DensityEvaluator::tsn(alpha, z, 2, th, {}, 0.7);
    const auto ev_p = DensityEvaluator::tsn(alpha, z, 2, th, {}, 0.7 + 2.0 * pi);
    for (double x = -5.0; x <= 5.0; x += 0.5)
        CHECK(std::abs(ev(x) - ev_p(x)) <= 1e-10 * std::max(1e-30, ev(x)));
}

TEST_CASE("invalid states are rejected") {
    CHECK_THROWS_AS(DensityEvaluator::tdn({}, -1, thermal_params_from(1.0), {}, 0.0), std::domain_error);
    CHECK_THROWS_AS(rho_vacuum(std::nan(""), thermal_params_from(1.0)), std::domain_error);
}

TEST_CASE("high n: exact where the signed sum is conditioned, loud where it is not") {
    const Displacement alpha(1.0, 0.5);
    const Squeeze z = squeeze_from(0.3, 0.4);
    // n = 10 is the edge of the fully conditioned band at warm temperatures
    for (double beta : {0.5, 10.0}) {
        const auto th = thermal_params_from(beta);
        const auto ev = DensityEvaluator::tsn(alpha, z, 10, th, {}, 0.7);
        const double m_ref = ev.mean(), v_ref = ev.variance();
        const auto m = quad_moments([&](double x) { return ev(x); }, m_ref, gauss_width(z, th, 0.7), 400);
        CHECK(m.integral == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(std::abs(m.mean - m_ref) <= 1e-8 * std::max(std::abs(m_ref), 1.0));
        CHECK(m.variance == doctest::Approx(v_ref).epsilon(1e-8));
    }
    // the zero-temperature path has no signed sum at all and holds at the cap
    {
        const auto th = thermal_params_from(infinity);
        const auto ev = DensityEvaluator::tsn(alpha, z, default_max_n, th, {}, 0.7);
        const auto m = quad_moments([&](double x) { return ev(x); }, ev.mean(), gauss_width(z, th, 0.7), 400);
        CHECK(m.integral == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(m.variance == doctest::Approx(ev.variance()).epsilon(1e-8));
    }
    // past the conditioned band the evaluator refuses instead of returning
    // noise (quadrature checks alone cannot see this: the noise is a
    // high-degree Hermite perturbation that integrates to ~zero)
    for (int n : {16, 32, default_max_n}) {
        const auto th = thermal_params_from(1.0);
        const auto ev = DensityEvaluator::tsn(alpha, z, n, th, {}, 0.7);
        const double mu = ev.mean(), sd = std::sqrt(ev.variance());
        bool tripped = false;
        for (double u = 0.0; u <= 6.0 && !tripped; u += 0.25) {
            try {
                ev(mu + u * sd);
            } catch (const std::runtime_error&) {
                tripped = true;
            }
        }
        CHECK(tripped);
    }
}

TEST_CASE("oracle comparison is sensitive: a tampered F2 sign is caught loudly") {
    const Displacement alpha(1.0, 0.5);
    const Squeeze z = squeeze_from(0.3, 0.4);
    Squeeze tampered = z;
    tampered.F2 = std::conj(tampered.F2);  // flips Im F2, which feeds |B|
    const auto th = thermal_params_from(1.0);
    const auto built = fock::build_state(StateSpec::squeezed_number(alpha, z, 1), th, 0.7);
    const auto bad = DensityEvaluator::tsn(alpha, tampered, 1, th, {}, 0.7);
    double sup = 0.0, peak = 0.0;
    for (double x = -6.0; x <= 6.0; x += 0.1) {
        sup = std::max(sup, std::abs(bad(x) - fock::marginal_density(built.state, x)));
        peak = std::max(peak, bad(x));
    }
    CHECK(sup / peak > 1e-3);  // orders of magnitude above the 1e-6 acceptance line
}

TEST_SUITE_END();
