#include "mgsim/state_space.hpp"

#include <stdexcept>

namespace mgsim {

StateSpaceModel StateSpaceModel::from_transfer_function(
    const TransferFunction& tf) {
  if (!tf.proper()) {
    throw std::invalid_argument(
        "improper transfer function has no state-space realization");
  }
  const TransferFunction norm = tf.normalized();
  const Polynomial& den = norm.den();
  const Polynomial& num = norm.num();
  const int n = den.degree();

  StateSpaceModel ss;
  ss.a_ = Eigen::MatrixXd::Zero(n, n);
  ss.b_ = Eigen::VectorXd::Zero(n);
  ss.c_ = Eigen::RowVectorXd::Zero(n);
  ss.x_ = Eigen::VectorXd::Zero(n);

  // Biproper ratios split as D + strictly proper remainder.
  ss.d_ = (num.degree() == n) ? num.coeff(n) : 0.0;

  if (n == 0) return ss;

  for (int i = 0; i + 1 < n; ++i) ss.a_(i, i + 1) = 1.0;
  for (int j = 0; j < n; ++j) ss.a_(n - 1, j) = -den.coeff(j);
  ss.b_(n - 1) = 1.0;
  for (int j = 0; j < n; ++j) {
    ss.c_(j) = num.coeff(j) - ss.d_ * den.coeff(j);
  }
  return ss;
}

void StateSpaceModel::set_state(const Eigen::VectorXd& x) {
  if (x.size() != a_.rows()) {
    throw std::invalid_argument("state dimension mismatch");
  }
  x_ = x;
}

double StateSpaceModel::output_at(const Eigen::Ref<const Eigen::VectorXd>& x,
                                  double u) const {
  double y = d_ * u;
  if (order() > 0) y += c_ * x;
  return y;
}

void StateSpaceModel::derivative(const Eigen::Ref<const Eigen::VectorXd>& x,
                                 double u,
                                 Eigen::Ref<Eigen::VectorXd> dx) const {
  dx.noalias() = a_ * x;
  dx.noalias() += b_ * u;
}

double StateSpaceModel::step_rk4(double u, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step size must be > 0");
  if (order() == 0) return d_ * u;

  const Eigen::VectorXd bu = b_ * u;
  const Eigen::VectorXd k1 = a_ * x_ + bu;
  const Eigen::VectorXd k2 = a_ * (x_ + 0.5 * dt * k1) + bu;
  const Eigen::VectorXd k3 = a_ * (x_ + 0.5 * dt * k2) + bu;
  const Eigen::VectorXd k4 = a_ * (x_ + dt * k3) + bu;
  x_ += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

  if (!x_.allFinite()) {
    throw std::runtime_error("state-space integration diverged");
  }
  return output(u);
}

std::complex<double> StateSpaceModel::response(
    const std::complex<double>& s) const {
  if (order() == 0) return d_;
  Eigen::MatrixXcd m = -a_.cast<std::complex<double>>();
  m.diagonal().array() += s;
  const Eigen::VectorXcd v = m.partialPivLu().solve(b_.cast<std::complex<double>>());
  return (c_.cast<std::complex<double>>() * v).value() + d_;
}

}  // namespace mgsim
