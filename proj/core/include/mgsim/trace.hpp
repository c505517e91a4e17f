#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mgsim {

// Uniformly sampled multi-channel recording of one simulation run.
// Sample i sits at time i*dt.
class Trace {
 public:
  Trace() = default;
  Trace(double dt, std::vector<std::string> channel_names);

  double dt() const { return dt_; }
  std::size_t size() const { return samples_; }
  double time(std::size_t i) const { return static_cast<double>(i) * dt_; }
  double duration() const {
    return samples_ == 0 ? 0.0 : time(samples_ - 1);
  }

  const std::vector<std::string>& channel_names() const { return names_; }
  bool has_channel(std::string_view name) const;
  // Throws std::invalid_argument on an unknown channel name.
  std::span<const double> channel(std::string_view name) const;

  // One value per channel, in declaration order.
  void append_row(std::span<const double> values);

  // CSV with a time column first, full-precision decimal, LF endings.
  void write_csv(std::ostream& os) const;
  void write_csv(std::ostream& os,
                 const std::vector<std::string>& channels) const;

 private:
  std::size_t index_of(std::string_view name) const;

  double dt_ = 0.0;
  std::size_t samples_ = 0;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

// Fixed "%.17g" rendering used for every numeric CSV field.
std::string format_csv_value(double v);

}  // namespace mgsim
