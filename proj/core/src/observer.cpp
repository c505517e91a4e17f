#include "mgsim/observer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mgsim {

DisturbanceObserver::DisturbanceObserver(TransferFunction nominal, QFilter q,
                                         double saturation)
    : nominal_(std::move(nominal)),
      q_(std::move(q)),
      yq_tf_(compose_series(q_.tf, nominal_.inverse())),
      branch_yq_(StateSpaceModel::from_transfer_function(yq_tf_)),
      branch_xq_(StateSpaceModel::from_transfer_function(q_.tf)),
      saturation_(saturation) {}

double DisturbanceObserver::observe_step(double y, double x, double dt) {
  const double from_output = branch_yq_.step_rk4(y, dt);
  const double from_input = branch_xq_.step_rk4(x, dt);
  last_estimate_ =
      std::clamp(from_output - from_input, -saturation_, saturation_);
  return last_estimate_;
}

void DisturbanceObserver::reset() {
  branch_yq_.reset();
  branch_xq_.reset();
  last_estimate_ = 0.0;
}

DisturbanceObserver make_observer(const TransferFunction& nominal,
                                  const QFilter& q, double saturation) {
  const int required = nominal.relative_degree();
  if (required < 0) {
    throw std::invalid_argument("nominal plant must be proper");
  }
  if (q.order < required) {
    throw std::invalid_argument(
        "q-filter order " + std::to_string(q.order) +
        " is below the required minimum " + std::to_string(required) +
        " (relative degree of the nominal plant)");
  }
  if (!(saturation > 0.0)) {
    throw std::invalid_argument(
        "observer saturation must be > 0 (pass +inf to disable clamping)");
  }
  return DisturbanceObserver(nominal, q, saturation);
}

}  // namespace mgsim
