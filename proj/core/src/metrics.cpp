#include "mgsim/metrics.hpp"

#include "mgsim/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace mgsim {

namespace {

std::size_t onset_index(std::size_t n, double dt, double t0) {
  if (t0 <= 0.0) return 0;
  const auto i = static_cast<std::size_t>(std::ceil(t0 / dt - 1e-9));
  return std::min(i, n - 1);
}

// Mean of the trailing 5% (at least one sample) as the final-value
// estimate; robust against residual noise.
double tail_mean(std::span<const double> s, std::size_t from) {
  const std::size_t n = s.size() - from;
  const std::size_t tail = std::max<std::size_t>(1, n / 20);
  double acc = 0.0;
  for (std::size_t i = s.size() - tail; i < s.size(); ++i) acc += s[i];
  return acc / static_cast<double>(tail);
}

// Band scale: the peak deviation from the final value over the window.
// For a tracking step the onset sample realizes the full step size, so
// this is the textbook 5%-of-step band; for a rejection transient (which
// starts and ends near zero) it is the peak excursion. Both are the
// natural 100% mark, and neither collapses when the signal returns to
// its starting level.
double settle_reference(std::span<const double> s, std::size_t i0,
                        double final_value) {
  double peak = 0.0;
  for (std::size_t i = i0; i < s.size(); ++i) {
    peak = std::max(peak, std::abs(s[i] - final_value));
  }
  return peak;
}

}  // namespace

double final_value_estimate(std::span<const double> signal, double dt,
                            double t0) {
  if (signal.empty()) throw std::invalid_argument("metrics of empty signal");
  if (!(dt > 0.0)) throw std::invalid_argument("metrics need dt > 0");
  return tail_mean(signal, onset_index(signal.size(), dt, t0));
}

double peak_excursion(std::span<const double> signal, double final_value,
                      double dt, double t0) {
  if (signal.empty()) throw std::invalid_argument("metrics of empty signal");
  if (!(dt > 0.0)) throw std::invalid_argument("metrics need dt > 0");
  return settle_reference(signal, onset_index(signal.size(), dt, t0),
                          final_value);
}

double settling_time_abs(std::span<const double> signal, double final_value,
                         double band_abs, double dt, double t0,
                         bool* settled) {
  if (signal.empty()) throw std::invalid_argument("settling of empty signal");
  if (!(dt > 0.0)) throw std::invalid_argument("settling needs dt > 0");
  if (!(band_abs > 0.0)) {
    throw std::invalid_argument("settling band must be > 0");
  }
  const std::size_t i0 = onset_index(signal.size(), dt, t0);
  if (settled) *settled = true;

  std::size_t last_out = i0;  // sentinel: no exit found
  bool any_out = false;
  for (std::size_t i = signal.size(); i-- > i0;) {
    if (std::abs(signal[i] - final_value) > band_abs) {
      last_out = i;
      any_out = true;
      break;
    }
  }
  if (!any_out) return 0.0;
  if (last_out + 1 >= signal.size()) {
    if (settled) *settled = false;
    return static_cast<double>(signal.size() - 1 - i0) * dt;
  }
  return static_cast<double>(last_out + 1 - i0) * dt;
}

double settling_time(std::span<const double> signal, double final_value,
                     double band_fraction, double dt, double t0,
                     bool* settled) {
  if (signal.empty()) throw std::invalid_argument("settling of empty signal");
  if (!(dt > 0.0)) throw std::invalid_argument("settling needs dt > 0");
  if (!(band_fraction > 0.0)) {
    throw std::invalid_argument("band fraction must be > 0");
  }
  const std::size_t i0 = onset_index(signal.size(), dt, t0);
  const double ref = settle_reference(signal, i0, final_value);
  if (ref == 0.0) {
    if (settled) *settled = true;
    return 0.0;
  }
  return settling_time_abs(signal, final_value, band_fraction * ref, dt, t0,
                           settled);
}

PerformanceReport compute_indices(std::span<const double> error, double dt,
                                  double t0, double band_fraction,
                                  double band_scale) {
  if (error.empty()) throw std::invalid_argument("metrics of empty signal");
  if (!(dt > 0.0)) throw std::invalid_argument("metrics need dt > 0");
  if (band_scale < 0.0) {
    throw std::invalid_argument("band scale must be >= 0");
  }

  PerformanceReport r;
  r.band_fraction = band_fraction;
  const std::size_t i0 = onset_index(error.size(), dt, t0);

  for (std::size_t i = i0; i + 1 < error.size(); ++i) {
    const double ta = static_cast<double>(i - i0) * dt;
    const double tb = ta + dt;
    const double ea = error[i];
    const double eb = error[i + 1];
    r.ise += 0.5 * dt * (ea * ea + eb * eb);
    r.itse += 0.5 * dt * (ta * ea * ea + tb * eb * eb);
    r.iae += 0.5 * dt * (std::abs(ea) + std::abs(eb));
    r.itae += 0.5 * dt * (ta * std::abs(ea) + tb * std::abs(eb));
  }
  for (std::size_t i = i0; i < error.size(); ++i) {
    r.max_overshoot = std::max(r.max_overshoot, std::abs(error[i]));
  }

  const double final_value = tail_mean(error, i0);
  const double ref = band_scale > 0.0 ? band_scale
                                      : settle_reference(error, i0,
                                                         final_value);
  if (ref == 0.0) {
    r.settling_time = 0.0;
    r.settled = true;
  } else {
    r.settling_time = settling_time_abs(error, final_value,
                                        band_fraction * ref, dt, t0,
                                        &r.settled);
  }
  return r;
}

namespace {

std::string fixed(double v, int width, int prec) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%*.*f", width, prec, v);
  return buf;
}

}  // namespace

std::string render_report_text(const std::vector<ReportRow>& rows,
                               const std::string& peak_label) {
  std::size_t name_w = 10;
  for (const auto& row : rows) name_w = std::max(name_w, row.name.size());

  std::string out;
  char head[256];
  std::snprintf(head, sizeof(head), "%-*s %10s %10s %10s %10s %10s %13s\n",
                static_cast<int>(name_w), "Controller", "ISE", "ITSE", "IAE",
                "ITAE", peak_label.c_str(), "SettlingTime");
  out += head;
  bool any_unsettled = false;
  for (const auto& row : rows) {
    const auto& r = row.report;
    char line[256];
    std::snprintf(line, sizeof(line), "%-*s %10.4g %10.4g %10.4g %10.4g %10.4g",
                  static_cast<int>(name_w), row.name.c_str(), r.ise, r.itse,
                  r.iae, r.itae, r.max_overshoot);
    out += line;
    out += fixed(r.settling_time, 12, 3);
    out += r.settled ? " " : "*";
    out += '\n';
    if (!r.settled) any_unsettled = true;
  }
  if (any_unsettled) {
    out += "* not settled within the horizon; value is the window length\n";
  }
  return out;
}

std::string render_report_csv(const std::vector<ReportRow>& rows) {
  std::string out = "name,ise,itse,iae,itae,mo,settling_time,settled\n";
  for (const auto& row : rows) {
    const auto& r = row.report;
    out += row.name;
    for (double v : {r.ise, r.itse, r.iae, r.itae, r.max_overshoot,
                     r.settling_time}) {
      out += ',';
      out += format_csv_value(v);
    }
    out += r.settled ? ",1\n" : ",0\n";
  }
  return out;
}

}  // namespace mgsim
