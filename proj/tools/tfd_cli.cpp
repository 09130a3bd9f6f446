// Command-line front door: density profiles, moments, parameter sweeps, and
// the verification suite for the thermal oscillator states.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tfd/densities.hpp"
#include "tfd/run_config.hpp"
#include "tfd/verify.hpp"

namespace {

struct CommonFlags {
    std::string state = "vacuum";
    int n = 0;
    std::string alpha = "0,0";
    std::string z = "0,0";
    std::string beta_hw = "inf";
    double omega_t = 0.0;
    std::string grid = "auto";
    std::string units = "1,1,1";
    std::string cutoff = "auto";
    double tol = 1e-8;
    std::string format = "csv";
    std::string out;
    std::string config_path;
    std::string emit_config;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--state", f.state, "vacuum|displaced|squeezed")->default_str("vacuum");
    cmd->add_option("--n", f.n, "number-state index");
    cmd->add_option("--alpha", f.alpha, "displacement RE,IM");
    cmd->add_option("--z", f.z, "squeeze RE,IM");
    cmd->add_option("--beta-hw", f.beta_hw, "dimensionless beta*hbar*omega, or inf");
    cmd->add_option("--omega-t", f.omega_t, "dimensionless time omega*t");
    cmd->add_option("--grid", f.grid, "MIN:MAX:COUNT or auto");
    cmd->add_option("--units", f.units, "M,OMEGA,HBAR");
    cmd->add_option("--cutoff", f.cutoff, "Fock cutoff for oracle-backed checks: auto or N (carried in the config)");
    cmd->add_option("--tol", f.tol, "tolerance knob for oracle-backed checks (carried in the config)");
    cmd->add_option("--format", f.format, "csv|json");
    cmd->add_option("--out", f.out, "output path (default stdout)");
    cmd->add_option("--config", f.config_path, "load a previously emitted JSON config");
    cmd->add_option("--emit-config", f.emit_config, "write the effective config to this path");
}

std::pair<double, double> parse_pair(const std::string& s, const char* what) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument(std::string(what) + " must be RE,IM, got '" + s + "'");
    return {tfd::parse_double(s.substr(0, comma)), tfd::parse_double(s.substr(comma + 1))};
}

tfd::RunConfig config_from(const CommonFlags& f) {
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw std::invalid_argument("cannot read config '" + f.config_path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        tfd::RunConfig c = tfd::RunConfig::from_json(buf.str());
        if (!f.out.empty()) c.out = f.out;  // explicit --out wins over the stored path
        return c;
    }
    tfd::RunConfig c;
    if (f.state == "vacuum")
        c.kind = tfd::StateKind::ThermalVacuum;
    else if (f.state == "displaced")
        c.kind = tfd::StateKind::DisplacedNumber;
    else if (f.state == "squeezed")
        c.kind = tfd::StateKind::SqueezedNumber;
    else
        throw std::invalid_argument("unknown --state '" + f.state + "'");
    c.n = f.n;
    std::tie(c.alpha1, c.alpha2) = parse_pair(f.alpha, "--alpha");
    std::tie(c.z1, c.z2) = parse_pair(f.z, "--z");
    c.beta_hw = tfd::parse_double(f.beta_hw);
    c.omega_t = f.omega_t;
    c.grid = tfd::parse_grid_spec(f.grid);
    const auto c1 = f.units.find(',');
    const auto c2 = (c1 == std::string::npos) ? std::string::npos : f.units.find(',', c1 + 1);
    if (c2 == std::string::npos) throw std::invalid_argument("--units must be M,OMEGA,HBAR");
    c.unit_m = tfd::parse_double(f.units.substr(0, c1));
    c.unit_omega = tfd::parse_double(f.units.substr(c1 + 1, c2 - c1 - 1));
    c.unit_hbar = tfd::parse_double(f.units.substr(c2 + 1));
    c.cutoff = (f.cutoff == "auto") ? -1 : static_cast<int>(tfd::parse_double(f.cutoff));
    c.tol = f.tol;
    c.format = f.format;
    c.out = f.out;
    return c;
}

void deliver(const std::string& content, const std::string& out) {
    if (out.empty())
        std::cout << content;
    else
        tfd::write_atomic(out, content);
}

void finish(const tfd::RunConfig& cfg, const CommonFlags& f) {
    if (!f.emit_config.empty()) tfd::write_atomic(f.emit_config, cfg.to_json());
}

int cmd_density(const CommonFlags& f) {
    const tfd::RunConfig cfg = config_from(f);
    cfg.validate();
    const tfd::DensityProfile prof =
        tfd::make_profile(cfg.state(), cfg.thermal(), cfg.units(), cfg.omega_t, cfg.make_grid());
    deliver(cfg.format == "csv" ? tfd::density_csv(prof) : tfd::density_json(prof), cfg.out);
    finish(cfg, f);
    return 0;
}

int cmd_moments(const CommonFlags& f) {
    const tfd::RunConfig cfg = config_from(f);
    cfg.validate();
    const tfd::StateSpec spec = cfg.state();
    const double mean = tfd::mean_x(spec.alpha, spec.z, spec.n, cfg.thermal(), cfg.units(), cfg.omega_t);
    const double var = tfd::var_x(spec.alpha, spec.z, spec.n, cfg.thermal(), cfg.units(), cfg.omega_t);
    deliver(cfg.format == "json" ? tfd::moments_json(mean, var, cfg.beta_hw, cfg.omega_t)
                                 : tfd::moments_csv(mean, var, cfg.beta_hw, cfg.omega_t),
            cfg.out);
    finish(cfg, f);
    return 0;
}

struct SweepFlags {
    std::string param;
    std::string values;
    std::string quantity = "density";
};

int cmd_sweep(const CommonFlags& f, const SweepFlags& sf) {
    static const std::vector<std::string> sweepable = {"beta_hw", "omega_t", "n",
                                                       "alpha1",  "alpha2",  "z1", "z2"};
    if (std::find(sweepable.begin(), sweepable.end(), sf.param) == sweepable.end())
        throw std::invalid_argument("--param must be one of beta_hw|omega_t|n|alpha1|alpha2|z1|z2");
    if (sf.quantity != "density" && sf.quantity != "moments")
        throw std::invalid_argument("--quantity must be density or moments");

    std::vector<double> values;
    std::stringstream ss(sf.values);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(tfd::parse_double(item));
    if (values.empty()) throw std::invalid_argument("--values must list at least one value");
    std::sort(values.begin(), values.end());  // rows ordered by (param, x)

    const tfd::RunConfig base = config_from(f);
    std::string csv = (sf.quantity == "density") ? "param,x,rho\n" : "param,mean_x,var_x\n";
    for (double v : values) {
        tfd::RunConfig cfg = base;
        if (sf.param == "beta_hw") cfg.beta_hw = v;
        else if (sf.param == "omega_t") cfg.omega_t = v;
        else if (sf.param == "n") cfg.n = static_cast<int>(v);
        else if (sf.param == "alpha1") cfg.alpha1 = v;
        else if (sf.param == "alpha2") cfg.alpha2 = v;
        else if (sf.param == "z1") cfg.z1 = v;
        else if (sf.param == "z2") cfg.z2 = v;
        cfg.validate();
        const tfd::StateSpec spec = cfg.state();
        if (sf.quantity == "density") {
            const tfd::DensityProfile prof =
                tfd::make_profile(spec, cfg.thermal(), cfg.units(), cfg.omega_t, cfg.make_grid());
            for (long i = 0; i < prof.grid.size(); ++i)
                csv += tfd::format_double(v) + "," + tfd::format_double(prof.grid[i]) + "," +
                       tfd::format_double(prof.values[i]) + "\n";
        } else {
            const double mean = tfd::mean_x(spec.alpha, spec.z, spec.n, cfg.thermal(), cfg.units(), cfg.omega_t);
            const double var = tfd::var_x(spec.alpha, spec.z, spec.n, cfg.thermal(), cfg.units(), cfg.omega_t);
            csv += tfd::format_double(v) + "," + tfd::format_double(mean) + "," + tfd::format_double(var) + "\n";
        }
    }
    deliver(csv, base.out);
    finish(base, f);
    return 0;
}

int cmd_verify(const std::string& level, const std::string& out, const std::string& format,
               int quad_points) {
    if (level != "quick" && level != "full")
        throw std::invalid_argument("--level must be quick or full");
    tfd::verify::Options options;
    options.quad_points = quad_points;
    const tfd::verify::Report report =
        tfd::verify::run(level == "quick" ? tfd::verify::Level::quick : tfd::verify::Level::full, options);
    deliver(format == "text" ? report.text() : report.to_json(), out);
    if (!out.empty()) std::cerr << (report.all_pass() ? "verify: PASS\n" : "verify: FAIL\n");
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"thermal oscillator states: densities, moments, verification"};
    app.require_subcommand(1);

    CommonFlags fd, fm, fs;
    SweepFlags sf;
    std::string verify_level = "quick", verify_out, verify_format = "json";

    CLI::App* density = app.add_subcommand("density", "position probability density profile");
    add_common(density, fd);
    CLI::App* moments = app.add_subcommand("moments", "mean and variance of the position");
    add_common(moments, fm);
    CLI::App* sweep = app.add_subcommand("sweep", "sweep one parameter, long-format CSV");
    add_common(sweep, fs);
    sweep->add_option("--param", sf.param, "parameter to sweep")
        ->required()
        ->multi_option_policy(CLI::MultiOptionPolicy::Throw);
    sweep->add_option("--values", sf.values, "comma-separated values")
        ->required()
        ->multi_option_policy(CLI::MultiOptionPolicy::Throw);
    sweep->add_option("--quantity", sf.quantity, "density|moments");
    CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
    verify->add_option("--level", verify_level, "quick|full");
    verify->add_option("--out", verify_out, "report path (default stdout)");
    verify->add_option("--format", verify_format, "json|text");
    int verify_quad_points = 200;
    verify->add_option("--quad-points", verify_quad_points, "Gauss-Hermite nodes for the quadrature checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (density->parsed()) return cmd_density(fd);
        if (moments->parsed()) return cmd_moments(fm);
        if (sweep->parsed()) return cmd_sweep(fs, sf);
        if (verify->parsed()) return cmd_verify(verify_level, verify_out, verify_format, verify_quad_points);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
