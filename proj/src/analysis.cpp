#include "preytaxis/analysis.hpp"

#include "preytaxis/error.hpp"
#include "preytaxis/report.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace preytaxis {

double ModeSpectrum::ac_mass() const {
    double m = 0.0;
    for (std::size_t k = 1; k < a.size(); ++k) m += std::abs(a[k]);
    return m;
}

ModeSpectrum cosine_spectrum(std::span<const double> profile, const Grid& g, int kmax) {
    const int n = g.n();
    if (static_cast<int>(profile.size()) != n)
        throw Error(ErrorCode::ConfigError, "profile length does not match the grid");
    if (kmax < 0 || 2 * kmax >= n)
        throw Error(ErrorCode::KmaxTooLarge, "kmax = " + std::to_string(kmax) + " needs kmax < n/2");

    ModeSpectrum spec;
    spec.a.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
    double mean = 0.0;
    for (double x : profile) mean += x;
    spec.a[0] = mean / n;
    for (int k = 1; k <= kmax; ++k) {
        double acc = 0.0;
        const double q = k * std::numbers::pi / g.L();
        for (int i = 0; i < n; ++i) acc += profile[static_cast<std::size_t>(i)] * std::cos(q * g.x(i));
        spec.a[static_cast<std::size_t>(k)] = 2.0 / g.L() * acc * g.h();
    }
    return spec;
}

DominantMode dominant_mode(const ModeSpectrum& spec) {
    DominantMode best{1, 0.0};
    double best_abs = -1.0;
    for (int k = 1; k <= spec.kmax(); ++k) {
        const double a = std::abs(spec.a[static_cast<std::size_t>(k)]);
        if (a > best_abs) {
            best_abs = a;
            best.k = k;
        }
    }
    const double mass = spec.ac_mass();
    best.purity = mass > 0.0 ? best_abs / mass : 0.0;
    return best;
}

PeriodEstimate estimate_period(std::span<const double> times, std::span<const double> values,
                               double transient) {
    if (times.size() != values.size())
        throw Error(ErrorCode::ConfigError, "period estimate: times and values differ in length");
    if (times.size() < 3) throw Error(ErrorCode::InsufficientPeaks, "series shorter than 3 samples");

    const double t_cut = times.front() + transient * (times.back() - times.front());
    const auto first = static_cast<std::size_t>(
        std::lower_bound(times.begin(), times.end(), t_cut) - times.begin());
    if (times.size() - first < 3) throw Error(ErrorCode::InsufficientPeaks, "window too short");

    const auto window = values.subspan(first);
    const auto [lo, hi] = std::minmax_element(window.begin(), window.end());
    if (*hi - *lo < 1e-6) throw Error(ErrorCode::NoOscillation, "peak-to-trough amplitude < 1e-6");
    const double midline = 0.5 * (*hi + *lo);

    std::vector<double> peaks;
    for (std::size_t i = first + 1; i + 1 < values.size(); ++i) {
        const double y0 = values[i - 1], y1 = values[i], y2 = values[i + 1];
        if (!(y1 > y0 && y1 >= y2) || y1 < midline) continue;
        // Vertex of the parabola through the three samples.
        const double t0 = times[i - 1], t1 = times[i], t2 = times[i + 1];
        const double d01 = (y1 - y0) / (t1 - t0), d12 = (y2 - y1) / (t2 - t1);
        const double curv = (d12 - d01) / (t2 - t0);
        double tp = t1;
        if (curv < 0.0) tp = 0.5 * (t0 + t1) - d01 / (2.0 * curv);
        peaks.push_back(std::clamp(tp, t0, t2));
    }
    if (peaks.size() < 4)
        throw Error(ErrorCode::InsufficientPeaks, "found " + std::to_string(peaks.size()) + " peaks, need 4");

    std::vector<double> gaps(peaks.size() - 1);
    for (std::size_t i = 0; i + 1 < peaks.size(); ++i) gaps[i] = peaks[i + 1] - peaks[i];
    const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / static_cast<double>(gaps.size());
    double var = 0.0;
    for (double gap : gaps) var += (gap - mean) * (gap - mean);
    const double sd = std::sqrt(var / static_cast<double>(gaps.size()));
    return {mean, sd / mean, static_cast<int>(peaks.size())};
}

std::string_view to_string(PatternKind kind) {
    switch (kind) {
    case PatternKind::Homogeneous: return "Homogeneous";
    case PatternKind::StationaryPattern: return "StationaryPattern";
    case PatternKind::TimePeriodic: return "TimePeriodic";
    case PatternKind::Irregular: return "Irregular";
    }
    return "?";
}

PatternReport classify(const RunRecord& run, const Parameters& /*p*/, const Sensitivity& /*s*/, const Grid& g,
                       const AnalysisConfig& cfg) {
    const int kmax = std::clamp(cfg.kmax, 1, (g.n() - 1) / 2);
    const StateField& last = run.final_state();

    PatternReport r;
    r.u_spectrum = cosine_spectrum(last.u, g, kmax);
    r.v_spectrum = cosine_spectrum(last.v, g, kmax);
    r.w_spectrum = cosine_spectrum(last.w, g, kmax);
    const DominantMode dom = dominant_mode(r.u_spectrum);
    r.k = dom.k;
    r.purity = dom.purity;
    r.amplitude = std::abs(r.u_spectrum.a[static_cast<std::size_t>(dom.k)]);

    if (run.termination == Termination::BlowupGuard || run.termination == Termination::Violation) {
        r.kind = PatternKind::Irregular;
        r.note = "run stopped early: " + run.failure;
        return r;
    }

    const bool flat = [&] {
        for (const auto* sp : {&r.u_spectrum, &r.v_spectrum, &r.w_spectrum})
            if (sp->ac_mass() >= cfg.homogeneity_threshold * std::abs(sp->a[0])) return false;
        return true;
    }();

    if (run.termination == Termination::Steady) {
        if (flat) {
            r.kind = PatternKind::Homogeneous;
            r.k = 0;
        } else if (dom.purity > cfg.purity_threshold) {
            r.kind = PatternKind::StationaryPattern;
        } else {
            r.kind = PatternKind::Irregular;
            r.note = "steady but no dominant mode (purity " + format_number(dom.purity, 3) + ")";
        }
        return r;
    }

    // Not steady: look for a clean oscillation at the first probe.
    if (!run.probes.empty()) {
        const auto& samples = run.probes.front().samples;
        std::vector<double> t(samples.size()), y(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) {
            t[i] = samples[i].t;
            y[i] = samples[i].u;
        }
        try {
            const PeriodEstimate pe = estimate_period(t, y, cfg.transient);
            r.period = pe.period;
            r.period_confidence = pe.confidence;
            if (pe.confidence < cfg.period_confidence) {
                // The spatial mode must persist over the last three periods.
                const double t_from = last.t - 3.0 * pe.period;
                int checked = 0;
                bool stable_mode = true;
                for (const auto& snap : run.snapshots) {
                    if (snap.t < t_from) continue;
                    const ModeSpectrum sp = cosine_spectrum(snap.u, g, kmax);
                    if (sp.ac_mass() < cfg.homogeneity_threshold * std::abs(sp.a[0])) continue;
                    ++checked;
                    if (dominant_mode(sp).k != dom.k) stable_mode = false;
                }
                if (stable_mode && checked >= 2) {
                    r.kind = PatternKind::TimePeriodic;
                    return r;
                }
                r.note = checked < 2 ? "too few snapshots in the last three periods"
                                     : "dominant spatial mode changes over the last three periods";
            } else {
                r.note = "peak gaps spread " + format_number(pe.confidence, 3);
            }
        } catch (const Error& err) {
            if (err.code() == ErrorCode::NoOscillation && flat) {
                r.kind = PatternKind::Homogeneous;
                r.k = 0;
                return r;
            }
            r.note = std::string(to_string(err.code()));
        }
    }
    r.kind = PatternKind::Irregular;
    return r;
}

std::string report_text(const PatternReport& r) {
    std::ostringstream os;
    os << "classification = " << to_string(r.kind) << '\n';
    os << "mode = " << r.k << '\n';
    os << "purity = " << format_number(r.purity, 6) << '\n';
    os << "amplitude = " << format_number(r.amplitude, 6) << '\n';
    if (r.kind == PatternKind::TimePeriodic || r.period > 0.0) {
        os << "period = " << format_number(r.period, 6) << '\n';
        os << "period_spread = " << format_number(r.period_confidence, 3) << '\n';
    }
    if (!r.note.empty()) os << "note = " << r.note << '\n';
    os << "u_mean = " << format_number(r.u_spectrum.a[0], 9) << '\n';
    os << "u_spectrum =";
    for (std::size_t k = 1; k < r.u_spectrum.a.size(); ++k) os << ' ' << format_number(r.u_spectrum.a[k], 6);
    os << '\n';
    return os.str();
}

std::vector<SweepRow> table_threshold_sweep(const Parameters& p, const Sensitivity& s,
                                            std::span<const double> lengths, int kmax) {
    std::vector<SweepRow> rows;
    rows.reserve(lengths.size());
    for (double L : lengths) {
        Parameters q = p;
        q.L = L;
        q = validate_parameters(q);
        const ThresholdTable t = kmax > 0 ? chi_zero(q, s, kmax) : chi_zero(q, s);
        rows.push_back({L, t.k_star, t.chi0, t.kind});
    }
    return rows;
}

}  // namespace preytaxis
