#include "tfd/run_config.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace tfd {

using nlohmann::ordered_json;

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) throw std::invalid_argument("format_double: NaN is not representable");
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    if (s == "inf" || s == "+inf") return infinity;
    if (s == "-inf") return -infinity;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("parse_double: cannot parse '" + s + "'");
    return v;
}

GridSpec parse_grid_spec(const std::string& s) {
    if (s == "auto") return {};
    GridSpec g;
    g.auto_grid = false;
    const auto c1 = s.find(':');
    const auto c2 = (c1 == std::string::npos) ? std::string::npos : s.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw std::invalid_argument("grid spec must be MIN:MAX:COUNT or auto, got '" + s + "'");
    g.min = parse_double(s.substr(0, c1));
    g.max = parse_double(s.substr(c1 + 1, c2 - c1 - 1));
    const std::string count = s.substr(c2 + 1);
    g.count = static_cast<int>(parse_double(count));
    if (std::to_string(g.count) != count)
        throw std::invalid_argument("grid COUNT must be an integer, got '" + count + "'");
    return g;
}

std::string grid_spec_string(const GridSpec& g) {
    if (g.auto_grid) return "auto";
    return format_double(g.min) + ":" + format_double(g.max) + ":" + std::to_string(g.count);
}

StateSpec RunConfig::state() const {
    switch (kind) {
        case StateKind::ThermalVacuum: return StateSpec::thermal_vacuum();
        case StateKind::DisplacedNumber:
            return StateSpec::displaced_number(Displacement(alpha1, alpha2), n);
        case StateKind::SqueezedNumber:
            return StateSpec::squeezed_number(Displacement(alpha1, alpha2), squeeze_from(z1, z2), n);
    }
    throw std::logic_error("RunConfig::state: unreachable");
}

ThermalParams RunConfig::thermal() const { return thermal_params_from(beta_hw); }

OscillatorParams RunConfig::units() const { return {unit_m, unit_omega, unit_hbar}; }

Eigen::VectorXd RunConfig::make_grid() const {
    if (grid.auto_grid) return auto_grid(state(), thermal(), units(), omega_t, grid.count);
    return Eigen::VectorXd::LinSpaced(grid.count, grid.min, grid.max);
}

void RunConfig::validate() const {
    try {
        (void)units();
        (void)thermal();
        (void)state();
    } catch (const std::domain_error& e) {
        throw std::invalid_argument(e.what());
    }
    if (n < 0 || n > max_n)
        throw std::invalid_argument("n out of range [0, " + std::to_string(max_n) + "]");
    if (kind != StateKind::SqueezedNumber && (z1 != 0.0 || z2 != 0.0))
        throw std::invalid_argument("z is only meaningful for --state squeezed");
    if (kind == StateKind::ThermalVacuum && (n != 0 || alpha1 != 0.0 || alpha2 != 0.0))
        throw std::invalid_argument("n and alpha are not meaningful for --state vacuum");
    if (!std::isfinite(omega_t)) throw std::invalid_argument("omega_t must be finite");
    if (!grid.auto_grid && !(grid.min < grid.max))
        throw std::invalid_argument("grid MIN must be below MAX");
    if (grid.count < 2 || grid.count > 2000000)
        throw std::invalid_argument("grid COUNT out of range [2, 2000000]");
    if (cutoff != -1 && (cutoff < 1 || cutoff > 4096))
        throw std::invalid_argument("cutoff must be auto or in [1, 4096]");
    if (!(tol > 0.0) || tol > 1e-2) throw std::invalid_argument("tol must be in (0, 1e-2]");
    if (quad_points < 1 || quad_points > 512)
        throw std::invalid_argument("quad_points out of range [1, 512]");
    if (format != "csv" && format != "json")
        throw std::invalid_argument("format must be csv or json");
}

namespace {

const char* kind_name(StateKind k) {
    switch (k) {
        case StateKind::ThermalVacuum: return "vacuum";
        case StateKind::DisplacedNumber: return "displaced";
        case StateKind::SqueezedNumber: return "squeezed";
    }
    return "vacuum";
}

StateKind kind_from(const std::string& s) {
    if (s == "vacuum") return StateKind::ThermalVacuum;
    if (s == "displaced") return StateKind::DisplacedNumber;
    if (s == "squeezed") return StateKind::SqueezedNumber;
    throw std::invalid_argument("unknown state kind '" + s + "'");
}

// Doubles go through format_double so inf survives and emit->parse is exact.
ordered_json jnum(double v) { return ordered_json(format_double(v)); }
double jdouble(const ordered_json& j) {
    return j.is_string() ? parse_double(j.get<std::string>()) : j.get<double>();
}

}  // namespace

std::string RunConfig::to_json() const {
    ordered_json j;
    j["state"] = {{"kind", kind_name(kind)},
                  {"n", n},
                  {"alpha", {jnum(alpha1), jnum(alpha2)}},
                  {"z", {jnum(z1), jnum(z2)}}};
    j["beta_hw"] = jnum(beta_hw);
    j["omega_t"] = jnum(omega_t);
    j["units"] = {{"m", jnum(unit_m)}, {"omega", jnum(unit_omega)}, {"hbar", jnum(unit_hbar)}};
    j["grid"] = grid_spec_string(grid);
    j["cutoff"] = (cutoff == -1) ? ordered_json("auto") : ordered_json(cutoff);
    j["tol"] = jnum(tol);
    j["quad_points"] = quad_points;
    j["max_n"] = max_n;
    j["format"] = format;
    j["out"] = out;
    return j.dump(2) + "\n";
}

RunConfig RunConfig::from_json(const std::string& text) {
    const ordered_json j = ordered_json::parse(text);
    RunConfig c;
    const auto& st = j.at("state");
    c.kind = kind_from(st.at("kind").get<std::string>());
    c.n = st.at("n").get<int>();
    c.alpha1 = jdouble(st.at("alpha").at(0));
    c.alpha2 = jdouble(st.at("alpha").at(1));
    c.z1 = jdouble(st.at("z").at(0));
    c.z2 = jdouble(st.at("z").at(1));
    c.beta_hw = jdouble(j.at("beta_hw"));
    c.omega_t = jdouble(j.at("omega_t"));
    c.unit_m = jdouble(j.at("units").at("m"));
    c.unit_omega = jdouble(j.at("units").at("omega"));
    c.unit_hbar = jdouble(j.at("units").at("hbar"));
    c.grid = parse_grid_spec(j.at("grid").get<std::string>());
    c.cutoff = j.at("cutoff").is_string() ? -1 : j.at("cutoff").get<int>();
    c.tol = jdouble(j.at("tol"));
    c.quad_points = j.at("quad_points").get<int>();
    c.max_n = j.at("max_n").get<int>();
    c.format = j.at("format").get<std::string>();
    c.out = j.at("out").get<std::string>();
    return c;
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        f << content;
        if (!f.flush()) throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
    fs::rename(tmp, target);
}

std::string density_csv(const DensityProfile& profile) {
    std::string s = "x,rho\n";
    for (long i = 0; i < profile.grid.size(); ++i)
        s += format_double(profile.grid[i]) + "," + format_double(profile.values[i]) + "\n";
    return s;
}

std::string density_json(const DensityProfile& profile) {
    ordered_json j;
    auto& xs = j["x"] = ordered_json::array();
    auto& rho = j["rho"] = ordered_json::array();
    for (long i = 0; i < profile.grid.size(); ++i) {
        xs.push_back(jnum(profile.grid[i]));
        rho.push_back(jnum(profile.values[i]));
    }
    return j.dump(2) + "\n";
}

std::string moments_json(double mean, double variance, double beta_hw, double omega_t) {
    ordered_json j;
    j["mean_x"] = jnum(mean);
    j["var_x"] = jnum(variance);
    j["beta_hw"] = jnum(beta_hw);
    j["omega_t"] = jnum(omega_t);
    return j.dump(2) + "\n";
}

std::string moments_csv(double mean, double variance, double beta_hw, double omega_t) {
    return "mean_x,var_x,beta_hw,omega_t\n" + format_double(mean) + "," + format_double(variance) + "," +
           format_double(beta_hw) + "," + format_double(omega_t) + "\n";
}

}  // namespace tfd
