// Acceptance driver: runs the CLI verification suite end-to-end, checks
// byte-for-byte determinism of the tool outputs, and prints one pass/fail
// line per acceptance criterion.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    return rc;
}

struct CriterionLine {
    std::string description;
    double worst = 0.0;        // measured value with the largest measured/threshold ratio
    double threshold = 0.0;
    double worst_ratio = -1.0;
    int checks = 0;
    int failed_gating = 0;
};

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: tfd_acceptance <path-to-cli>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const fs::path dir = fs::temp_directory_path() / "tfd_acceptance";
    fs::create_directories(dir);

    const fs::path rep1 = dir / "verify1.json";
    const fs::path rep2 = dir / "verify2.json";
    std::printf("running full verification suite twice through the CLI...\n");
    std::fflush(stdout);
    const int rc1 = run(cli + " verify --level full --out " + rep1.string());
    const int rc2 = run(cli + " verify --level full --out " + rep2.string());

    // Criterion 8a: byte-identical full verify reports.
    const std::string report_text = slurp(rep1);
    const bool verify_deterministic = (report_text == slurp(rep2));

    // Criterion 8b: byte-identical density output, including a run replayed
    // from the emitted config.
    const std::string dflags = " density --state squeezed --n 2 --alpha 1,0.5 --z 0.3,0.4"
                               " --beta-hw 1 --omega-t 0.7 --grid -6:6:241";
    const fs::path csv1 = dir / "rho1.csv", csv2 = dir / "rho2.csv", csv3 = dir / "rho3.csv";
    const fs::path cfg = dir / "run.json";
    run(cli + dflags + " --out " + csv1.string() + " --emit-config " + cfg.string());
    run(cli + dflags + " --out " + csv2.string());
    run(cli + " density --config " + cfg.string() + " --out " + csv3.string());
    // the emitted config carries its own --out; the replay's explicit --out wins
    const bool density_deterministic = slurp(csv1) == slurp(csv2) && slurp(csv1) == slurp(csv3);

    // Criteria 1..7 from the report.
    const nlohmann::json report = nlohmann::json::parse(report_text);
    std::map<int, CriterionLine> lines;
    lines[1] = {"oracle equivalence of the closed-form densities (sup-rel <= 1e-6, |x| <= 6)"};
    lines[2] = {"closed-form densities normalized (|integral - 1| <= 1e-8)"};
    lines[3] = {"quadrature moments match the mean/variance formulas (rel <= 1e-8)"};
    lines[4] = {"zero-temperature reduction to single-mode densities (sup-rel <= 1e-9)"};
    lines[5] = {"thermal vacuum: oracle match, time invariance, Gaussian variance"};
    lines[6] = {"algebraic identities: |F3|=1, Hermite linearization, commutation, diagonal"};
    lines[7] = {"printed special cases: n=0 Gaussian required, n=1 comparison recorded"};

    for (const auto& c : report.at("checks")) {
        const int crit = c.at("criterion").get<int>();
        if (!lines.count(crit)) continue;
        auto& line = lines[crit];
        ++line.checks;
        const bool gating = c.at("gating").get<bool>();
        if (!c.at("pass").get<bool>() && gating) ++line.failed_gating;
        const double measured = std::strtod(c.at("measured").get<std::string>().c_str(), nullptr);
        const double threshold = std::strtod(c.at("threshold").get<std::string>().c_str(), nullptr);
        if (gating && threshold > 0.0 && measured / threshold > line.worst_ratio) {
            line.worst_ratio = measured / threshold;
            line.worst = measured;
            line.threshold = threshold;
        }
    }

    int failures = 0;
    for (const auto& [crit, line] : lines) {
        const bool pass = line.failed_gating == 0 && line.checks > 0;
        if (!pass) ++failures;
        std::printf("[%s] criterion %d: %s (%d checks, worst %.3e vs %.1e)\n", pass ? "PASS" : "FAIL",
                    crit, line.description.c_str(), line.checks, line.worst, line.threshold);
    }
    {
        const bool pass = verify_deterministic && density_deterministic && rc1 == rc2;
        if (!pass) ++failures;
        std::printf("[%s] criterion 8: byte-identical outputs across repeated runs "
                    "(verify report %s, density csv + config replay %s)\n",
                    pass ? "PASS" : "FAIL", verify_deterministic ? "identical" : "DIFFERS",
                    density_deterministic ? "identical" : "DIFFERS");
    }

    for (const auto& note : report.at("notes"))
        std::printf("note: %s\n", note.get<std::string>().c_str());

    const bool verify_exit_ok = (rc1 == 0);
    if (!verify_exit_ok) {
        std::printf("[FAIL] verify exit code was nonzero\n");
        ++failures;
    }

    // Supplementary command-level behavior.
    int cli_failures = 0;
    auto expect = [&](bool ok, const char* what) {
        if (!ok) ++cli_failures;
        std::printf("  [%s] %s\n", ok ? "ok" : "FAIL", what);
    };
    std::printf("command-level checks:\n");
    {
        const fs::path five = dir / "vac5.csv";
        run(cli + " density --state vacuum --beta-hw 1 --grid -4:4:5 --out " + five.string());
        const std::string text = slurp(five);
        const auto center = text.find("\n0,");
        const double rho0 =
            center == std::string::npos ? -1.0 : std::strtod(text.c_str() + center + 3, nullptr);
        expect(std::count(text.begin(), text.end(), '\n') == 6 &&
                   std::abs(rho0 - std::sqrt(std::tanh(0.5) / 3.14159265358979323846)) < 1e-12,
               "vacuum density on a 5-point grid has the right shape and centre value");

        const fs::path a = dir / "vac.csv", b = dir / "disp0.csv";
        run(cli + " density --state vacuum --beta-hw 1 --grid -4:4:101 --out " + a.string());
        run(cli + " density --state displaced --n 0 --alpha 0,0 --beta-hw 1 --grid -4:4:101 --out " +
            b.string());
        expect(slurp(a) == slurp(b), "displaced n=0 alpha=0 produces the vacuum file byte-for-byte");

        const fs::path c = dir / "disp1.csv", d = dir / "sq0.csv";
        const std::string common = " --n 1 --alpha 1,0.5 --beta-hw 2 --omega-t 0.4 --grid -5:7:101";
        run(cli + " density --state displaced" + common + " --out " + c.string());
        run(cli + " density --state squeezed --z 0,0" + common + " --out " + d.string());
        expect(slurp(c) == slurp(d), "squeezed z=0 equals displaced byte-for-byte");

        const fs::path e = dir / "workers.csv";
        run("TFD_WORKERS=2 " + cli + " density --state displaced" + common + " --out " + e.string());
        expect(slurp(c) == slurp(e), "parallel grid evaluation is byte-deterministic");
    }
    {
        const fs::path sw = dir / "sweep_beta.csv";
        run(cli + " sweep --param beta_hw --values 0.5,1,2,inf --quantity moments"
                  " --state displaced --n 0 --alpha 1,0 --out " + sw.string());
        std::istringstream in(slurp(sw));
        std::string line;
        std::getline(in, line);
        bool monotone = (line == "param,mean_x,var_x");
        double prev = 1e300, last = 0.0;
        while (std::getline(in, line)) {
            const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
            last = std::strtod(line.substr(c1 + 1, c2 - c1 - 1).c_str(), nullptr);
            monotone = monotone && last < prev;
            prev = last;
        }
        expect(monotone && std::abs(last - std::sqrt(2.0)) < 1e-12,
               "mean_x decreases with beta_hw toward sqrt(2)");

        const fs::path sn = dir / "sweep_n.csv";
        run(cli + " sweep --param n --values 0,1,2 --quantity moments --state displaced --alpha 1,0"
                  " --beta-hw 2 --out " + sn.string());
        std::istringstream in2(slurp(sn));
        std::getline(in2, line);
        std::vector<double> vars;
        while (std::getline(in2, line)) {
            const auto c2 = line.rfind(',');
            vars.push_back(std::strtod(line.substr(c2 + 1).c_str(), nullptr));
        }
        expect(vars.size() == 3 && std::abs(vars[1] / vars[0] - 3.0) < 1e-12 &&
                   std::abs(vars[2] / vars[0] - 5.0) < 1e-12,
               "var_x follows the 2n+1 progression across an n sweep");

        const fs::path st = dir / "sweep_t.csv";
        char tvals[96];
        std::snprintf(tvals, sizeof tvals, "0,%.17g,%.17g", std::acos(-1.0) / 2, std::acos(-1.0));
        run(cli + " sweep --param omega_t --values " + tvals +
            " --quantity moments --state displaced --alpha 1,0 --beta-hw 2 --out " + st.string());
        std::istringstream in3(slurp(st));
        std::getline(in3, line);
        std::vector<double> means;
        while (std::getline(in3, line)) {
            const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
            means.push_back(std::strtod(line.substr(c1 + 1, c2 - c1 - 1).c_str(), nullptr));
        }
        expect(means.size() == 3 && std::abs(means[1]) < 1e-12 * means[0] &&
                   std::abs(means[2] + means[0]) < 1e-12 * means[0],
               "mean_x samples the cosine across an omega_t sweep");
    }
    {
        const int rc_bad_beta =
            run(cli + " density --state vacuum --beta-hw 1e-9 --out " + (dir / "never.csv").string());
        expect(rc_bad_beta != 0 && !fs::exists(dir / "never.csv"),
               "beta_hw below the floor is a clean usage error with no partial output");
        const int rc_bad_sweep = run(cli + " sweep --param nonsense --values 1,2 --state vacuum"
                                           " --out " + (dir / "never2.csv").string());
        expect(rc_bad_sweep != 0, "unknown sweep parameter is a usage error");
        const int rc_multi = run(cli + " sweep --param n --param beta_hw --values 1,2 --state vacuum"
                                       " --out " + (dir / "never4.csv").string());
        expect(rc_multi != 0, "sweeping more than one parameter is a usage error");
        const int rc_bad_z = run(cli + " density --state displaced --n 1 --alpha 1,0 --z 0.5,0"
                                       " --beta-hw 1 --out " + (dir / "never3.csv").string());
        expect(rc_bad_z != 0, "z on a displaced state is a usage error");
    }
    if (cli_failures > 0) {
        std::printf("[FAIL] %d command-level checks failed\n", cli_failures);
        ++failures;
    }

    std::printf(failures == 0 ? "ACCEPTANCE: PASS\n" : "ACCEPTANCE: FAIL (%d criteria)\n", failures);
    return failures == 0 ? 0 : 1;
}
