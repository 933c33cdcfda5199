#include "preytaxis/config.hpp"

#include "preytaxis/error.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace preytaxis {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

class Parser {
public:
    explicit Parser(std::string_view source) : source_(source) {}

    [[noreturn]] void fail(int line, const std::string& what) const {
        throw Error(ErrorCode::ConfigError, std::string(source_) + ":" + std::to_string(line) + ": " + what);
    }

    double number(int line, std::string_view key, std::string_view text) const {
        double v = 0.0;
        const auto* end = text.data() + text.size();
        const auto res = std::from_chars(text.data(), end, v);
        if (res.ec != std::errc{} || res.ptr != end)
            fail(line, "'" + std::string(key) + "' expects a number, got '" + std::string(text) + "'");
        return v;
    }

    int integer(int line, std::string_view key, std::string_view text) const {
        int v = 0;
        const auto* end = text.data() + text.size();
        const auto res = std::from_chars(text.data(), end, v);
        if (res.ec != std::errc{} || res.ptr != end)
            fail(line, "'" + std::string(key) + "' expects an integer, got '" + std::string(text) + "'");
        return v;
    }

    bool boolean(int line, std::string_view key, std::string_view text) const {
        if (text == "true" || text == "1" || text == "yes") return true;
        if (text == "false" || text == "0" || text == "no") return false;
        fail(line, "'" + std::string(key) + "' expects true or false");
    }

    std::vector<double> list(int line, std::string_view key, std::string_view text) const {
        std::vector<double> out;
        while (!text.empty()) {
            const auto comma = text.find(',');
            out.push_back(number(line, key, trim(text.substr(0, comma))));
            if (comma == std::string_view::npos) break;
            text.remove_prefix(comma + 1);
        }
        return out;
    }

private:
    std::string_view source_;
};

}  // namespace

RunConfig parse_config(std::string_view text, std::string_view source) {
    const Parser ps(source);
    RunConfig cfg;
    Parameters& p = cfg.parameters;
    SolverConfig& sv = cfg.solver;
    AnalysisConfig& an = cfg.analysis;

    std::optional<double> sens_c, sens_a;
    std::optional<std::vector<double>> sens_coeffs;

    using Setter = std::function<void(int, std::string_view, std::string_view)>;
    auto num = [&](double& field) -> Setter {
        return [&ps, &field](int ln, std::string_view k, std::string_view v) { field = ps.number(ln, k, v); };
    };
    auto integer = [&](int& field) -> Setter {
        return [&ps, &field](int ln, std::string_view k, std::string_view v) { field = ps.integer(ln, k, v); };
    };
    auto flag = [&](bool& field) -> Setter {
        return [&ps, &field](int ln, std::string_view k, std::string_view v) { field = ps.boolean(ln, k, v); };
    };

    using KeyTable = std::map<std::string, Setter, std::less<>>;
    const std::map<std::string, KeyTable, std::less<>> sections = {
        {"scenario",
         {{"name", [&](int, std::string_view, std::string_view v) { cfg.scenario = std::string(v); }}}},
        {"parameters",
         {{"d1", num(p.d1)},         {"d2", num(p.d2)},         {"d3", num(p.d3)},
          {"alpha1", num(p.alpha1)}, {"alpha2", num(p.alpha2)}, {"alpha3", num(p.alpha3)},
          {"beta1", num(p.beta1)},   {"beta2", num(p.beta2)},   {"beta31", num(p.beta31)},
          {"beta32", num(p.beta32)}, {"chi", num(p.chi)},       {"xi", num(p.xi)},
          {"L", num(p.L)}}},
        {"sensitivity",
         {{"c", [&](int ln, std::string_view k, std::string_view v) { sens_c = ps.number(ln, k, v); }},
          {"a", [&](int ln, std::string_view k, std::string_view v) { sens_a = ps.number(ln, k, v); }},
          {"coefficients",
           [&](int ln, std::string_view k, std::string_view v) { sens_coeffs = ps.list(ln, k, v); }}}},
        {"solver",
         {{"n", integer(cfg.grid_n)},
          {"cfl_factor", num(sv.cfl_factor)},
          {"dt_max", num(sv.dt_max)},
          {"t_end", num(sv.t_end)},
          {"snapshot_interval", num(sv.snapshot_interval)},
          {"probe_interval", num(sv.probe_interval)},
          {"steady_check_interval", num(sv.steady_check_interval)},
          {"steady_tolerance", num(sv.steady_tolerance)},
          {"steady_checks", integer(sv.steady_checks)},
          {"steady_min_time", num(sv.steady_min_time)},
          {"stop_when_steady", flag(sv.stop_when_steady)},
          {"probe_x", [&](int ln, std::string_view k, std::string_view v) { sv.probe_x = ps.list(ln, k, v); }},
          {"monitor_positivity", flag(sv.monitor_positivity)},
          {"monitor_w_range", flag(sv.monitor_w_range)},
          {"monitor_l1", flag(sv.monitor_l1)},
          {"abort_on_violation", flag(sv.abort_on_violation)},
          {"initial_amplitude", num(cfg.initial.amplitude)},
          {"initial_mode", integer(cfg.initial.mode)},
          {"initial_convention",
           [&](int ln, std::string_view, std::string_view v) {
               if (v == "literal") cfg.initial.convention = CosineConvention::Literal;
               else if (v == "scaled") cfg.initial.convention = CosineConvention::Scaled;
               else ps.fail(ln, "initial_convention must be literal or scaled");
           }}}},
        {"analysis",
         {{"purity_threshold", num(an.purity_threshold)},
          {"homogeneity_threshold", num(an.homogeneity_threshold)},
          {"transient", num(an.transient)},
          {"period_confidence", num(an.period_confidence)},
          {"kmax", integer(an.kmax)},
          {"threshold_kmax", integer(cfg.threshold_kmax)}}},
    };

    const KeyTable* current = nullptr;
    std::string current_name;
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view s = raw;
        if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;

        if (s.front() == '[') {
            if (s.back() != ']') ps.fail(line, "malformed section header");
            const auto name = trim(s.substr(1, s.size() - 2));
            const auto it = sections.find(name);
            if (it == sections.end()) ps.fail(line, "unknown section [" + std::string(name) + "]");
            current = &it->second;
            current_name = std::string(name);
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) ps.fail(line, "expected key = value");
        const auto key = trim(s.substr(0, eq));
        const auto value = trim(s.substr(eq + 1));
        if (!current) ps.fail(line, "key '" + std::string(key) + "' outside any section");
        const auto setter = current->find(key);
        if (setter == current->end())
            ps.fail(line, "unknown key '" + std::string(key) + "' in [" + current_name + "]");
        if (!seen.insert(current_name + "." + std::string(key)).second)
            ps.fail(line, "duplicate key '" + std::string(key) + "'");
        setter->second(line, key, value);
    }

    if (sens_coeffs && (sens_c || sens_a))
        throw Error(ErrorCode::ConfigError, std::string(source) + ": give either coefficients or (c, a)");
    if (sens_coeffs) {
        cfg.sensitivity = Sensitivity(*sens_coeffs);
    } else if (sens_c || sens_a) {
        if (!(sens_c && sens_a))
            throw Error(ErrorCode::ConfigError, std::string(source) + ": product form needs both c and a");
        cfg.sensitivity = Sensitivity::product_form(*sens_c, *sens_a);
    } else {
        throw Error(ErrorCode::ConfigError, std::string(source) + ": missing [sensitivity]");
    }
    if (cfg.grid_n < 16) throw Error(ErrorCode::ConfigError, std::string(source) + ": solver.n must be >= 16");
    if (!(sv.cfl_factor > 0.0) || !(sv.dt_max > 0.0) || !(sv.t_end >= 0.0) || !(sv.probe_interval > 0.0) ||
        !(sv.steady_check_interval > 0.0) || sv.steady_checks < 1)
        throw Error(ErrorCode::ConfigError, std::string(source) + ": invalid solver settings");

    cfg.parameters = validate_parameters(p);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot read config file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path);
}

}  // namespace preytaxis
