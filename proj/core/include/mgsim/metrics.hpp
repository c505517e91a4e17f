#pragma once

#include <span>
#include <string>
#include <vector>

namespace mgsim {

// The six indices reported for every experiment. Integral indices are
// accumulated from the disturbance onset t0; times are measured from t0.
// max_overshoot carries the peak absolute excursion from the final value
// for tracking loops and the peak absolute deviation for regulation loops
// (same formula, different reading; the report label says which).
struct PerformanceReport {
  double ise = 0.0;
  double itse = 0.0;
  double iae = 0.0;
  double itae = 0.0;
  double max_overshoot = 0.0;
  double settling_time = 0.0;  // s from t0; horizon - t0 when not settled
  bool settled = true;
  double band_fraction = 0.05;
};

// Robust final-value estimate: mean of the trailing 5% of the window
// starting at t0 (at least one sample).
double final_value_estimate(std::span<const double> signal, double dt,
                            double t0);

// Peak |signal - final_value| over [t0, end): the excursion the settling
// band is scaled by. For a tracking step the onset sample realizes the
// full step size; for a rejection transient it is the peak deviation.
double peak_excursion(std::span<const double> signal, double final_value,
                      double dt, double t0);

// Indices of an error signal sampled at dt, integrating from t0 onward
// (trapezoidal). The settling band is band_fraction times band_scale;
// band_scale = 0 selects the trace's own peak excursion from the final
// value. Comparison tables pass the baseline controller's excursion so
// every contender is judged against the same absolute tolerance.
PerformanceReport compute_indices(std::span<const double> error, double dt,
                                  double t0, double band_fraction = 0.05,
                                  double band_scale = 0.0);

// Time from t0 of the last exit from [final +/- band_fraction*ref], where
// ref is the excursion magnitude as above. Returns 0 when never outside.
// When the signal is still outside the band at the end, *settled is false
// and the full window length is returned.
double settling_time(std::span<const double> signal, double final_value,
                     double band_fraction, double dt, double t0,
                     bool* settled = nullptr);

// Same, with an absolute band half-width instead of a fraction of the
// signal's own excursion. band_abs must be > 0.
double settling_time_abs(std::span<const double> signal, double final_value,
                         double band_abs, double dt, double t0,
                         bool* settled = nullptr);

struct ReportRow {
  std::string name;
  PerformanceReport report;
};

// Aligned plain-text table, columns ISE ITSE IAE ITAE MO SettlingTime.
// Unsettled rows are marked with '*' and a footnote.
std::string render_report_text(const std::vector<ReportRow>& rows,
                               const std::string& peak_label = "MO");
// CSV rendering, same column order plus a trailing settled flag.
std::string render_report_csv(const std::vector<ReportRow>& rows);

}  // namespace mgsim
