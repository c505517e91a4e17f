#include "mgsim/sysid.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mgsim/analysis.hpp"
#include "mgsim/state_space.hpp"

namespace mgsim {

void IdDataset::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("dataset dt must be > 0");
  if (u.size() != y.size()) {
    throw std::invalid_argument("dataset u and y must have equal length");
  }
  if (u.size() < 30) {
    throw std::invalid_argument(
        "dataset too short: need at least 30 samples (10x parameter count)");
  }
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos
                         ? std::string{}
                         : field.substr(b, e - b + 1));
  }
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what) {
  throw std::invalid_argument("csv line " + std::to_string(line_no) + ": " +
                              what);
}

}  // namespace

IdDataset parse_id_dataset_csv(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> times, us, ys;
  std::vector<std::size_t> row_lines;
  int col_t = 0, col_u = 1, col_y = 2;
  bool saw_data = false;

  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (!saw_data && line_no == 1) {
      double probe;
      if (!parse_double(fields[0], probe)) {
        // Header row: map columns by name where recognizable.
        for (std::size_t i = 0; i < fields.size(); ++i) {
          const std::string name = lower(fields[i]);
          if (name == "time" || name == "t") col_t = static_cast<int>(i);
          if (name == "u" || name == "input" || name == "duty") {
            col_u = static_cast<int>(i);
          }
          if (name == "y" || name == "output" || name == "freq" ||
              name == "frequency") {
            col_y = static_cast<int>(i);
          }
        }
        if (fields.size() < 3) {
          fail_line(line_no, "need time,u,y columns, got " +
                                 std::to_string(fields.size()));
        }
        continue;
      }
    }
    if (fields.size() < 3) {
      fail_line(line_no,
                "need 3 fields (time,u,y), got " + std::to_string(fields.size()));
    }
    double t, u, y;
    if (!parse_double(fields[static_cast<std::size_t>(col_t)], t) ||
        !parse_double(fields[static_cast<std::size_t>(col_u)], u) ||
        !parse_double(fields[static_cast<std::size_t>(col_y)], y)) {
      fail_line(line_no, "non-numeric field");
    }
    times.push_back(t);
    us.push_back(u);
    ys.push_back(y);
    row_lines.push_back(line_no);
    saw_data = true;
  }
  if (times.size() < 2) {
    throw std::invalid_argument("csv: fewer than 2 data rows");
  }

  const double dt = times[1] - times[0];
  if (!(dt > 0.0)) {
    fail_line(row_lines[1], "time column must be strictly increasing");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs(times[i] - times[i - 1] - dt) > 1e-6 * std::max(dt, 1e-12)) {
      fail_line(row_lines[i], "non-uniform sample time");
    }
  }

  IdDataset data;
  data.dt = dt;
  data.u = std::move(us);
  data.y = std::move(ys);
  data.validate();
  return data;
}

IdDataset load_id_dataset_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open dataset: " + path);
  return parse_id_dataset_csv(is);
}

namespace {

// State-variable filter wf^2/(s + wf)^2 producing the filtered signal and
// its first two derivatives from the filter states.
struct Svf {
  double wf;
  double x1 = 0.0, x2 = 0.0;

  void step(double v, double dt) {
    auto f = [this, v](double a, double b, double& d1, double& d2) {
      d1 = b;
      d2 = wf * wf * (v - a) - 2.0 * wf * b;
    };
    double k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
    f(x1, x2, k1a, k1b);
    f(x1 + 0.5 * dt * k1a, x2 + 0.5 * dt * k1b, k2a, k2b);
    f(x1 + 0.5 * dt * k2a, x2 + 0.5 * dt * k2b, k3a, k3b);
    f(x1 + dt * k3a, x2 + dt * k3b, k4a, k4b);
    x1 += dt / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
    x2 += dt / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
  }

  double f0() const { return x1; }                       // F v
  double f1() const { return x2; }                       // s F v
  double f2(double v) const {                            // s^2 F v
    return wf * wf * (v - x1) - 2.0 * wf * x2;
  }
};

struct LsSolution {
  double a1, a0, b0;
};

LsSolution svf_least_squares(const IdDataset& data, double wf) {
  const std::size_t n = data.u.size();
  const std::size_t skip = std::max<std::size_t>(10, n / 50);
  const std::size_t rows = n - skip;

  Eigen::MatrixXd A(rows, 3);
  Eigen::VectorXd b(rows);
  Svf fu{wf}, fy{wf};
  std::size_t r = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= skip) {
      A(static_cast<Eigen::Index>(r), 0) = -fy.f1();
      A(static_cast<Eigen::Index>(r), 1) = -fy.f0();
      A(static_cast<Eigen::Index>(r), 2) = fu.f0();
      b(static_cast<Eigen::Index>(r)) = fy.f2(data.y[i]);
      ++r;
    }
    fu.step(data.u[i], data.dt);
    fy.step(data.y[i], data.dt);
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) {
    throw std::runtime_error(
        "rank-deficient identification regression; the input is not "
        "persistently exciting");
  }
  const Eigen::Vector3d theta = qr.solve(b);
  return {theta(0), theta(1), theta(2)};
}

double simulate_fit(const IdDataset& data, const TransferFunction& model,
                    std::vector<double>& yhat) {
  StateSpaceModel ss = StateSpaceModel::from_transfer_function(model);
  yhat.resize(data.y.size());
  yhat[0] = ss.output(data.u[0]);
  for (std::size_t i = 1; i < data.u.size(); ++i) {
    yhat[i] = ss.step_rk4(data.u[i - 1], data.dt);
  }
  double num = 0.0, den = 0.0, mean = 0.0;
  for (double v : data.y) mean += v;
  mean /= static_cast<double>(data.y.size());
  for (std::size_t i = 0; i < data.y.size(); ++i) {
    num += (data.y[i] - yhat[i]) * (data.y[i] - yhat[i]);
    den += (data.y[i] - mean) * (data.y[i] - mean);
  }
  if (den == 0.0) {
    throw std::runtime_error("output has no variance; nothing to fit");
  }
  return std::clamp(100.0 * (1.0 - std::sqrt(num / den)), 0.0, 100.0);
}

}  // namespace

IdResult fit_second_order(const IdDataset& data, double svf_bandwidth) {
  data.validate();

  double wf = svf_bandwidth;
  const double wf_max = 0.2 / data.dt;
  if (wf <= 0.0) {
    wf = std::min(1.0 / (20.0 * data.dt), wf_max);
  }

  LsSolution sol = svf_least_squares(data, wf);

  if (svf_bandwidth <= 0.0) {
    // One self-tuning pass: re-filter at ten times the identified
    // dominant (slowest) pole so the regression runs in-band.
    const Polynomial den{sol.a0, sol.a1, 1.0};
    if (!den.is_zero() && den.degree() == 2) {
      const auto rts = polynomial_roots(den);
      double slowest = std::numeric_limits<double>::infinity();
      for (const auto& p : rts) {
        slowest = std::min(slowest, std::abs(p.real()) + std::abs(p.imag()));
      }
      if (std::isfinite(slowest) && slowest > 0.0) {
        const double wf2 = std::clamp(10.0 * slowest, 1e-3, wf_max);
        sol = svf_least_squares(data, wf2);
      }
    }
  }

  IdResult result;
  result.a1 = sol.a1;
  result.a0 = sol.a0;
  result.b0 = sol.b0;
  result.model = TransferFunction(Polynomial::constant(sol.b0),
                                  Polynomial{sol.a0, sol.a1, 1.0});
  std::vector<double> yhat;
  result.fit_percent = simulate_fit(data, result.model, yhat);
  result.stable = routh_hurwitz_stable(result.model.den());
  return result;
}

StabilityCheck verify_stability(const IdResult& result, double ki) {
  const TransferFunction loop =
      compose_series(TransferFunction::integrator(ki), result.model);
  const TransferFunction closed =
      compose_feedback(loop, TransferFunction::gain(1.0));
  StabilityCheck check;
  check.closed_loop_poles = poles(closed);
  check.stable = routh_hurwitz_stable(closed.den());
  return check;
}

double critical_integral_gain(const IdResult& result) {
  if (result.b0 == 0.0) {
    throw std::invalid_argument("critical gain undefined for b0 = 0");
  }
  return result.a1 * result.a0 / result.b0;
}

}  // namespace mgsim
