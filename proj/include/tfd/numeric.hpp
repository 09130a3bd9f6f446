#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace tfd {

using Complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double sqrt_pi = 1.77245385090551602730;
inline constexpr double inv_quartic_root_pi = 0.75112554446494248286;  // pi^(-1/4)

inline constexpr double infinity = std::numeric_limits<double>::infinity();

inline double sq(double x) { return x * x; }
inline Complex sq(const Complex& z) { return z * z; }

// log(cosh(s)) without overflow for large s.
inline double lncosh(double s) {
    s = std::abs(s);
    if (s > 20.0) return s - 0.6931471805599453 + std::log1p(std::exp(-2.0 * s));
    return std::log(std::cosh(s));
}

// sinh(r)/r with the removable singularity at r = 0 expanded in series.
inline double sinhc(double r) {
    if (std::abs(r) < 1e-4) {
        const double r2 = r * r;
        return 1.0 + r2 / 6.0 + r2 * r2 / 120.0;
    }
    return std::sinh(r) / r;
}

inline void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw std::domain_error(std::string(what) + ": non-finite argument");
}

}  // namespace tfd
