#include "mgsim/trace.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace mgsim {

std::string format_csv_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Trace::Trace(double dt, std::vector<std::string> channel_names)
    : dt_(dt), names_(std::move(channel_names)) {
  if (!(dt_ > 0.0)) throw std::invalid_argument("trace dt must be > 0");
  if (names_.empty()) throw std::invalid_argument("trace needs channels");
  columns_.resize(names_.size());
}

std::size_t Trace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  throw std::invalid_argument("unknown trace channel: " + std::string(name));
}

bool Trace::has_channel(std::string_view name) const {
  for (const auto& n : names_) {
    if (n == name) return true;
  }
  return false;
}

std::span<const double> Trace::channel(std::string_view name) const {
  return columns_[index_of(name)];
}

void Trace::append_row(std::span<const double> values) {
  if (values.size() != names_.size()) {
    throw std::invalid_argument("trace row width mismatch");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    columns_[i].push_back(values[i]);
  }
  ++samples_;
}

void Trace::write_csv(std::ostream& os) const { write_csv(os, names_); }

void Trace::write_csv(std::ostream& os,
                      const std::vector<std::string>& channels) const {
  std::vector<std::size_t> idx;
  idx.reserve(channels.size());
  os << "time";
  for (const auto& name : channels) {
    idx.push_back(index_of(name));
    os << ',' << name;
  }
  os << '\n';
  for (std::size_t i = 0; i < samples_; ++i) {
    os << format_csv_value(time(i));
    for (std::size_t j : idx) {
      os << ',' << format_csv_value(columns_[j][i]);
    }
    os << '\n';
  }
}

}  // namespace mgsim
