#include "flexibo/cost.hpp"

#include <cmath>
#include <string>

namespace flexibo {

CostModel::CostModel(std::array<double, 2> theta, double phi) : theta_(theta), phi_(phi) {
  if (!(theta_[0] > 0.0) || !(theta_[1] > 0.0) || !std::isfinite(theta_[0]) || !std::isfinite(theta_[1]))
    throw CostModelError("objective efforts theta must be positive and finite");
  if (!(phi_ > 0.0) || !std::isfinite(phi_)) throw CostModelError("balancing parameter phi must be positive");
  cheapest_ = theta_[1] < theta_[0] ? 1 : 0;
  const double theta_cheap = theta_[cheapest_];
  for (std::size_t i = 0; i < 2; ++i) {
    psi_[i] = i == cheapest_ ? 1.0 : theta_[i] / (phi_ * theta_cheap);
    if (psi_[i] < 1.0)
      throw CostModelError("derived cost for objective " + std::to_string(i + 1) + " is " +
                           std::to_string(psi_[i]) + " < 1; phi is too large");
  }
}

}  // namespace flexibo
