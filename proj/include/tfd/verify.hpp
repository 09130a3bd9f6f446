#pragma once

#include <string>
#include <vector>

namespace tfd::verify {

enum class Level { quick, full };

struct Check {
    std::string id;
    std::string params;
    std::string metric;
    double threshold = 0.0;
    double measured = 0.0;
    bool pass = false;
    bool gating = true;  // non-gating checks are recorded but never fail the run
    int criterion = 0;   // acceptance criterion this check belongs to; 0 = supplementary
};

struct Report {
    std::vector<Check> checks;
    std::vector<std::string> notes;

    int passed() const;
    int failed() const;  // gating failures only
    bool all_pass() const { return failed() == 0; }

    std::string to_json() const;  // deterministic byte-for-byte
    std::string text() const;
};

struct Options {
    int quad_points = 200;  // Gauss-Hermite nodes for the quadrature cross-checks
};

// quick: reduced lattice, a few seconds. full: the complete acceptance
// lattice n x beta_hw x alpha x z x omega_t.
Report run(Level level, const Options& options = {});

}  // namespace tfd::verify
