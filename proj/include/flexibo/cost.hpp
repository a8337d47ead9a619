#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>

namespace flexibo {

class CostModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Normalized per-objective evaluation cost. The objective with the lowest
/// raw effort theta costs exactly 1; any other costs
/// theta_i / (phi * theta_cheap), which must not fall below 1.
class CostModel {
 public:
  CostModel() : CostModel({1.0, 10.0}, 1.0) {}
  CostModel(std::array<double, 2> theta, double phi);

  const std::array<double, 2>& theta() const { return theta_; }
  double phi() const { return phi_; }
  std::size_t cheapest() const { return cheapest_; }
  std::size_t expensive() const { return 1 - cheapest_; }
  double psi(std::size_t objective) const { return psi_.at(objective); }
  const std::array<double, 2>& psi_all() const { return psi_; }
  double joint() const { return psi_[0] + psi_[1]; }

 private:
  std::array<double, 2> theta_;
  double phi_;
  std::size_t cheapest_ = 0;
  std::array<double, 2> psi_{};
};

inline double psi(const CostModel& costs, std::size_t objective) { return costs.psi(objective); }

}  // namespace flexibo
