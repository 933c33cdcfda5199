#pragma once

#include "preytaxis/model.hpp"
#include "preytaxis/solver.hpp"
#include "preytaxis/stability.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace preytaxis {

/// Projection of a cell-centered profile onto cos(k pi x / L), k = 0..kmax.
struct ModeSpectrum {
    std::vector<double> a;  // a[0] is the cell mean
    int kmax() const { return static_cast<int>(a.size()) - 1; }
    double ac_mass() const;  // sum of |a_k| for k >= 1
};

/// Throws KmaxTooLarge unless kmax < n/2.
ModeSpectrum cosine_spectrum(std::span<const double> profile, const Grid& g, int kmax);

struct DominantMode {
    int k;
    double purity;  // |a_k| / sum_{j>=1} |a_j|, 0 for a flat profile
};

/// Largest |a_k| over k >= 1, ties to the smaller k.
DominantMode dominant_mode(const ModeSpectrum& spec);

struct PeriodEstimate {
    double period;
    double confidence;  // std/mean of successive peak gaps
    int peaks;
};

/// Mean gap between maxima of `values` after dropping the first `transient`
/// fraction of the time span. Throws NoOscillation for a flat window and
/// InsufficientPeaks for fewer than four maxima.
PeriodEstimate estimate_period(std::span<const double> times, std::span<const double> values,
                               double transient = 0.5);

enum class PatternKind { Homogeneous, StationaryPattern, TimePeriodic, Irregular };
std::string_view to_string(PatternKind kind);

struct AnalysisConfig {
    double purity_threshold = 0.8;
    double homogeneity_threshold = 1e-4;
    double transient = 0.5;
    double period_confidence = 0.05;
    int kmax = 32;  // clamped below n/2
};

struct PatternReport {
    PatternKind kind = PatternKind::Irregular;
    int k = 0;
    double period = 0.0;
    double period_confidence = 0.0;
    double purity = 0.0;
    double amplitude = 0.0;  // |a_k| of the final u-profile at the dominant mode
    ModeSpectrum u_spectrum, v_spectrum, w_spectrum;
    std::string note;
};

PatternReport classify(const RunRecord& run, const Parameters& p, const Sensitivity& s, const Grid& g,
                       const AnalysisConfig& cfg = {});

/// Structured plain-text summary.
std::string report_text(const PatternReport& r);

struct SweepRow {
    double L;
    int k0;
    double chi0;
    InstabilityKind kind;
};

/// chi_zero for each domain length; kmax <= 0 selects the tail rule per L.
std::vector<SweepRow> table_threshold_sweep(const Parameters& p, const Sensitivity& s,
                                            std::span<const double> lengths, int kmax = 0);

}  // namespace preytaxis
