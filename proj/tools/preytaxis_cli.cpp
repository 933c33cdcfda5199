// Command-line front end: thresholds, sweep, k2, simulate, spectrum.

#include "preytaxis/analysis.hpp"
#include "preytaxis/bifurcation.hpp"
#include "preytaxis/config.hpp"
#include "preytaxis/error.hpp"
#include "preytaxis/report.hpp"
#include "preytaxis/solver.hpp"
#include "preytaxis/stability.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace pt = preytaxis;

namespace {

struct Options {
    std::string config;
    std::string out;
    int k = 0;
    std::string L_range;
    int grid_n = 0;
    long long seed = 0;
    std::string input;
    std::string field = "u";
};

std::string out_path(const Options& o, const std::string& name) { return o.out + "/" + name; }

int threshold_kmax(const pt::RunConfig& cfg) {
    return cfg.threshold_kmax > 0 ? cfg.threshold_kmax : pt::tail_kmax(cfg.parameters, cfg.sensitivity);
}

int cmd_thresholds(const Options& o) {
    const pt::RunConfig cfg = pt::load_config(o.config);
    const pt::ThresholdTable t = pt::chi_zero(cfg.parameters, cfg.sensitivity, threshold_kmax(cfg));
    auto csv = pt::open_output(out_path(o, "thresholds.csv"));
    csv << "k,chi_S,chi_H,chi_M\n";
    for (const auto& r : t.rows) {
        csv << r.k << ',';
        pt::write_csv_row(csv, {r.chi_S, r.chi_H, r.chi_M});
    }
    csv << "trailer," << pt::format_number(t.chi0) << ',' << t.k_star << ',' << pt::to_string(t.kind) << '\n';

    const pt::Equilibrium e = pt::equilibrium(cfg.parameters);
    std::cout << "equilibrium = (" << pt::format_number(e.u_bar, 6) << ", " << pt::format_number(e.v_bar, 6)
              << ", " << pt::format_number(e.w_bar, 6) << ")\n"
              << "chi0 = " << pt::format_number(t.chi0, 6) << " at k = " << t.k_star << " ("
              << pt::to_string(t.kind) << ")\n";
    return 0;
}

std::vector<double> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw pt::Error(pt::ErrorCode::ConfigError, "--L expects A:B");
    auto parse = [&](std::string_view s) {
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
            throw pt::Error(pt::ErrorCode::ConfigError, "--L: bad number '" + std::string(s) + "'");
        return v;
    };
    const std::string_view sv = text;
    const double a = parse(sv.substr(0, colon)), b = parse(sv.substr(colon + 1));
    std::vector<double> out;
    for (double L = a; L <= b + 1e-9; L += 1.0) out.push_back(L);
    if (out.empty() || !(a > 0.0)) throw pt::Error(pt::ErrorCode::ConfigError, "--L range is empty: " + text);
    return out;
}

int cmd_sweep(const Options& o) {
    const pt::RunConfig cfg = pt::load_config(o.config);
    const std::vector<double> lengths = parse_range(o.L_range);
    const auto rows = pt::table_threshold_sweep(cfg.parameters, cfg.sensitivity, lengths);
    auto csv = pt::open_output(out_path(o, "sweep.csv"));
    csv << "L,k0,chi0,kind\n";
    for (const auto& r : rows) {
        csv << pt::format_number(r.L) << ',' << r.k0 << ',' << pt::format_number(r.chi0) << ','
            << pt::to_string(r.kind) << '\n';
        std::cout << "L = " << pt::format_number(r.L) << ": k0 = " << r.k0
                  << ", chi0 = " << pt::format_number(r.chi0, 6) << " (" << pt::to_string(r.kind) << ")\n";
    }
    return 0;
}

int cmd_k2(const Options& o) {
    const pt::RunConfig cfg = pt::load_config(o.config);
    if (o.k < 1) throw pt::Error(pt::ErrorCode::ZeroMode, "--k must be >= 1");
    const pt::K2Result r = pt::compute_K2(cfg.parameters, cfg.sensitivity, o.k);
    const int kmax = std::max(threshold_kmax(cfg), o.k);
    const auto verdicts = pt::branch_verdict(cfg.parameters, cfg.sensitivity, kmax);

    std::string verdict = "Unstable";
    for (const auto& v : verdicts)
        if (v.k == o.k && v.kind == pt::BranchKind::SteadyState) verdict = std::string(pt::to_string(v.stability));

    auto csv = pt::open_output(out_path(o, "k2.csv"));
    csv << "k,chi_S_k,P_k,Q_k,detM,K2,verdict\n" << r.k << ',';
    csv << pt::format_number(r.chi_S) << ',' << pt::format_number(r.amplitudes.P) << ','
        << pt::format_number(r.amplitudes.Q) << ',' << pt::format_number(r.detM) << ','
        << pt::format_number(r.K2) << ',' << verdict << '\n';

    auto ledger = pt::open_output(out_path(o, "k2_ledger.txt"));
    ledger << pt::ledger_text(r);

    auto branches = pt::open_output(out_path(o, "branches.csv"));
    branches << "k,kind,stability,reason\n";
    for (const auto& v : verdicts)
        branches << v.k << ',' << pt::to_string(v.kind) << ',' << pt::to_string(v.stability) << ',' << v.reason
                 << '\n';

    std::cout << "K2(" << r.k << ") = " << pt::format_number(r.K2, 6) << ", detM = " << pt::format_number(r.detM, 6)
              << ", verdict = " << verdict << '\n';
    return 0;
}

void write_run(const Options& o, const pt::RunRecord& run, const pt::Grid& g) {
    auto snaps = pt::open_output(out_path(o, "snapshots.csv"));
    snaps << "t,x,u,v,w\n";
    for (const auto& s : run.snapshots)
        for (int i = 0; i < g.n(); ++i) {
            const auto c = static_cast<std::size_t>(i);
            pt::write_csv_row(snaps, {s.t, g.x(i), s.u[c], s.v[c], s.w[c]});
        }
    for (std::size_t j = 0; j < run.probes.size(); ++j) {
        auto probe = pt::open_output(out_path(o, "probe_" + std::to_string(j) + ".csv"));
        probe << "t,u,v,w\n";
        for (const auto& sm : run.probes[j].samples) pt::write_csv_row(probe, {sm.t, sm.u, sm.v, sm.w});
    }
    auto log = pt::open_output(out_path(o, "monitor.log"));
    for (const auto& ev : run.log) log << "t=" << pt::format_number(ev.t) << ' ' << ev.message << '\n';
    log << "termination=" << pt::to_string(run.termination) << " steps=" << run.steps
        << " violations=" << run.violations << '\n';
}

int cmd_simulate(const Options& o) {
    const pt::RunConfig cfg = pt::load_config(o.config);
    const pt::Grid g(cfg.parameters.L, o.grid_n > 0 ? o.grid_n : cfg.grid_n);
    const pt::StateField s0 = pt::initial_cosine(cfg.parameters, g, cfg.initial.amplitude, cfg.initial.mode,
                                                 cfg.initial.convention, cfg.solver.monitor_w_range);
    const pt::RunRecord run = pt::integrate(cfg.parameters, cfg.sensitivity, g, s0, cfg.solver);
    write_run(o, run, g);

    const pt::PatternReport rep = pt::classify(run, cfg.parameters, cfg.sensitivity, g, cfg.analysis);
    std::ostringstream text;
    text << "scenario = " << cfg.scenario << '\n'
         << "termination = " << pt::to_string(run.termination) << '\n'
         << "t_final = " << pt::format_number(run.final_state().t, 9) << '\n'
         << pt::report_text(rep);
    auto report = pt::open_output(out_path(o, "pattern.txt"));
    report << text.str();
    std::cout << text.str();

    if (run.termination == pt::Termination::BlowupGuard || run.termination == pt::Termination::Violation) {
        std::cerr << "error: " << run.failure << '\n';
        return 4;
    }
    return 0;
}

/// Reads one column of a CSV profile; with a `t` column only the last time is kept.
std::vector<double> read_profile(const std::string& path, const std::string& field) {
    std::ifstream in(path);
    if (!in) throw pt::Error(pt::ErrorCode::ConfigError, "cannot read " + path);
    std::string line;
    if (!std::getline(in, line)) throw pt::Error(pt::ErrorCode::ConfigError, path + " is empty");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    const auto col = std::find(header.begin(), header.end(), field) - header.begin();
    const auto tcol = std::find(header.begin(), header.end(), std::string("t")) - header.begin();
    if (col == static_cast<long>(header.size()))
        throw pt::Error(pt::ErrorCode::ConfigError, path + " has no column '" + field + "'");
    const bool timed = tcol != static_cast<long>(header.size());

    std::vector<double> values;
    double current_t = 0.0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != header.size()) throw pt::Error(pt::ErrorCode::ConfigError, path + ": ragged row");
        if (timed) {
            const double t = row[static_cast<std::size_t>(tcol)];
            if (values.empty() || t != current_t) {
                if (!values.empty() && t < current_t)
                    throw pt::Error(pt::ErrorCode::ConfigError, path + ": time not increasing");
                if (t != current_t) values.clear();
                current_t = t;
            }
        }
        values.push_back(row[static_cast<std::size_t>(col)]);
    }
    return values;
}

int cmd_spectrum(const Options& o) {
    const pt::RunConfig cfg = pt::load_config(o.config);
    const std::vector<double> profile = read_profile(o.input, o.field);
    const pt::Grid g(cfg.parameters.L, static_cast<int>(profile.size()));
    const int kmax = std::min(cfg.analysis.kmax, (g.n() - 1) / 2);
    const pt::ModeSpectrum spec = pt::cosine_spectrum(profile, g, kmax);
    auto csv = pt::open_output(out_path(o, "spectrum.csv"));
    csv << "k,a_k\n";
    for (int k = 0; k <= spec.kmax(); ++k)
        csv << k << ',' << pt::format_number(spec.a[static_cast<std::size_t>(k)]) << '\n';
    const pt::DominantMode dom = pt::dominant_mode(spec);
    std::cout << "dominant mode = " << dom.k << ", purity = " << pt::format_number(dom.purity, 6) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-predator/one-prey prey-taxis laboratory"};
    app.require_subcommand(1);

    Options o;
    const char* env_out = std::getenv("PREYTAXIS_OUT");
    o.out = env_out && *env_out ? env_out : "./out";

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "scenario config file")->required();
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--seed", o.seed, "reserved, ignored");
    };
    auto* thresholds = app.add_subcommand("thresholds", "threshold table chi_S, chi_H, chi_M per mode");
    auto* sweep = app.add_subcommand("sweep", "(L, k0, chi0, kind) over integer domain lengths");
    auto* k2 = app.add_subcommand("k2", "pitchfork coefficient ledger and branch verdicts");
    auto* simulate = app.add_subcommand("simulate", "integrate the PDE and classify the pattern");
    auto* spectrum = app.add_subcommand("spectrum", "cosine spectrum of a profile CSV");
    for (auto* sub : {thresholds, sweep, k2, simulate, spectrum}) common(sub);
    sweep->add_option("--L", o.L_range, "domain lengths A:B")->required();
    k2->add_option("--k", o.k, "mode number")->required();
    simulate->add_option("--grid-n", o.grid_n, "override the number of cells");
    spectrum->add_option("--input", o.input, "profile or snapshot CSV")->required();
    spectrum->add_option("--field", o.field, "column to analyze (default u)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*thresholds) return cmd_thresholds(o);
        if (*sweep) return cmd_sweep(o);
        if (*k2) return cmd_k2(o);
        if (*simulate) return cmd_simulate(o);
        if (*spectrum) return cmd_spectrum(o);
    } catch (const pt::Error& e) {
        std::cerr << "error [" << pt::to_string(e.code()) << "]: " << e.what() << '\n';
        return pt::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
