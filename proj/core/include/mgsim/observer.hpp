#pragma once

#include "mgsim/qfilter.hpp"
#include "mgsim/state_space.hpp"
#include "mgsim/transfer_function.hpp"

namespace mgsim {

// Input-equivalent disturbance estimator. Two filter branches:
//   d_hat = [Q*Gn^{-1}](y) - [Q](x)
// where x is the commanded plant input and y the measured output. The
// inverse never exists on its own; Q*Gn^{-1} is realized as one proper
// rational block. The estimate is clamped to +/- saturation to bound the
// inverse-plant transient spike.
class DisturbanceObserver {
 public:
  DisturbanceObserver(TransferFunction nominal, QFilter q, double saturation);

  const TransferFunction& nominal() const { return nominal_; }
  const QFilter& q() const { return q_; }
  double saturation() const { return saturation_; }

  const TransferFunction& yq_tf() const { return yq_tf_; }
  const StateSpaceModel& branch_yq() const { return branch_yq_; }
  const StateSpaceModel& branch_xq() const { return branch_xq_; }

  // Advances both branches one step and returns the clamped estimate.
  double observe_step(double y, double x, double dt);
  double last_estimate() const { return last_estimate_; }
  void reset();

 private:
  TransferFunction nominal_;
  QFilter q_;
  TransferFunction yq_tf_;
  StateSpaceModel branch_yq_;
  StateSpaceModel branch_xq_;
  double saturation_;
  double last_estimate_ = 0.0;
};

// Validates the order rule (q.order >= relative degree of nominal); the
// error message names the required minimum. saturation must be positive
// (pass +infinity to disable clamping).
DisturbanceObserver make_observer(const TransferFunction& nominal,
                                  const QFilter& q, double saturation = 10.0);

// Feed-forward correction at the plant input.
inline double feed_forward(double controller_output, double d_hat) {
  return controller_output - d_hat;
}

}  // namespace mgsim
