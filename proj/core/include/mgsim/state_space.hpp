#pragma once

#include <Eigen/Dense>
#include <complex>

#include "mgsim/transfer_function.hpp"

namespace mgsim {

// Controllable-canonical realization of a proper transfer function with a
// classical fixed-step RK4 integrator and zero-order-hold inputs. Biproper
// blocks carry a direct feedthrough term; pure gains realize with order 0.
class StateSpaceModel {
 public:
  StateSpaceModel() : d_(0.0) {}

  // Throws std::invalid_argument on an improper transfer function.
  static StateSpaceModel from_transfer_function(const TransferFunction& tf);

  int order() const { return static_cast<int>(a_.rows()); }

  const Eigen::MatrixXd& a() const { return a_; }
  const Eigen::VectorXd& b() const { return b_; }
  const Eigen::RowVectorXd& c() const { return c_; }
  double d() const { return d_; }

  const Eigen::VectorXd& state() const { return x_; }
  void set_state(const Eigen::VectorXd& x);
  void reset() { x_.setZero(); }

  // y = C x + D u at the stored state.
  double output(double u) const { return output_at(x_, u); }

  // Advance one step of width dt with u held constant; returns the output
  // at the new state. Throws std::runtime_error if the state leaves the
  // representable range (numerical blow-up).
  double step_rk4(double u, double dt);

  // Stateless pieces for integrating several blocks as one network.
  void derivative(const Eigen::Ref<const Eigen::VectorXd>& x, double u,
                  Eigen::Ref<Eigen::VectorXd> dx) const;
  double output_at(const Eigen::Ref<const Eigen::VectorXd>& x, double u) const;

  // C (sI - A)^{-1} B + D.
  std::complex<double> response(const std::complex<double>& s) const;

 private:
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  Eigen::RowVectorXd c_;
  double d_;
  Eigen::VectorXd x_;
};

inline StateSpaceModel to_state_space(const TransferFunction& tf) {
  return StateSpaceModel::from_transfer_function(tf);
}

}  // namespace mgsim
