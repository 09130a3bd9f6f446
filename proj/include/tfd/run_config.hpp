#pragma once

#include <optional>
#include <string>

#include "tfd/densities.hpp"
#include "tfd/model.hpp"

namespace tfd {

struct GridSpec {
    bool auto_grid = true;
    double min = 0.0;
    double max = 0.0;
    int count = 801;

    bool operator==(const GridSpec&) const = default;
};

// One run of the tool: state, temperature, time, units, grid, numerical
// knobs, output routing. Emitting and re-parsing a config reproduces it
// exactly.
struct RunConfig {
    StateKind kind = StateKind::ThermalVacuum;
    int n = 0;
    double alpha1 = 0.0, alpha2 = 0.0;
    double z1 = 0.0, z2 = 0.0;
    double beta_hw = infinity;
    double omega_t = 0.0;
    double unit_m = 1.0, unit_omega = 1.0, unit_hbar = 1.0;
    GridSpec grid;
    int cutoff = -1;  // -1 = auto
    double tol = 1e-8;
    int quad_points = 200;
    int max_n = default_max_n;
    std::string format = "csv";  // csv | json
    std::string out;             // empty = stdout

    bool operator==(const RunConfig&) const = default;

    StateSpec state() const;
    ThermalParams thermal() const;
    OscillatorParams units() const;
    Eigen::VectorXd make_grid() const;

    // Throws std::invalid_argument with a usable message on any bad field.
    void validate() const;

    std::string to_json() const;
    static RunConfig from_json(const std::string& text);
};

// Shortest round-trip decimal representation of a binary64 value; "inf" for
// the infinities. Identical inputs always produce identical bytes.
std::string format_double(double v);
double parse_double(const std::string& s);

// Parses "MIN:MAX:COUNT" or "auto".
GridSpec parse_grid_spec(const std::string& s);
std::string grid_spec_string(const GridSpec& g);

// Writes through a temp file in the same directory, then renames.
void write_atomic(const std::string& path, const std::string& content);

std::string density_csv(const DensityProfile& profile);
std::string density_json(const DensityProfile& profile);
std::string moments_json(double mean, double variance, double beta_hw, double omega_t);
std::string moments_csv(double mean, double variance, double beta_hw, double omega_t);

}  // namespace tfd
