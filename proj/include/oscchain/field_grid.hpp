#pragma once

#include <Eigen/Core>

#include "oscchain/errors.hpp"

namespace oscchain {

// Uniform truncation of the field axis. Functional integrals over phi are
// rectangle-rule sums: integral f(phi) dphi  ->  sum_i f(phi_i) * spacing.
class FieldGrid {
 public:
  // Symmetric grid on [-phi_max, phi_max].
  FieldGrid(int n_points, double phi_max)
      : FieldGrid(n_points, -phi_max, phi_max, /*allow_asymmetric=*/false) {}

  // General grid; asymmetric ranges must be requested explicitly.
  FieldGrid(int n_points, double phi_min, double phi_max, bool allow_asymmetric);

  int n_points() const { return n_points_; }
  double phi_min() const { return phi_min_; }
  double phi_max() const { return phi_max_; }
  double spacing() const { return spacing_; }

  double point(int i) const { return points_[i]; }
  const Eigen::VectorXd& points() const { return points_; }

  bool operator==(const FieldGrid& other) const {
    return n_points_ == other.n_points_ && phi_min_ == other.phi_min_ &&
           phi_max_ == other.phi_max_;
  }
  bool operator!=(const FieldGrid& other) const { return !(*this == other); }

 private:
  int n_points_;
  double phi_min_;
  double phi_max_;
  double spacing_;
  Eigen::VectorXd points_;
};

}  // namespace oscchain
