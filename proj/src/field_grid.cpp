#include "oscchain/field_grid.hpp"

#include <cmath>

namespace oscchain {

FieldGrid::FieldGrid(int n_points, double phi_min, double phi_max,
                     bool allow_asymmetric)
    : n_points_(n_points), phi_min_(phi_min), phi_max_(phi_max) {
  if (n_points < 3) throw DomainError("FieldGrid: n_points must be >= 3");
  if (!(phi_max > phi_min)) throw DomainError("FieldGrid: phi_max must exceed phi_min");
  if (!allow_asymmetric && phi_min != -phi_max)
    throw DomainError("FieldGrid: grid must be symmetric about 0 unless overridden");
  spacing_ = (phi_max_ - phi_min_) / (n_points_ - 1);
  points_.resize(n_points_);
  for (int i = 0; i < n_points_; ++i)
    points_[i] = phi_min_ + spacing_ * i;
  // Pin the endpoints so phi_i = -phi_{n-1-i} holds exactly on symmetric grids.
  points_[n_points_ - 1] = phi_max_;
  if (!allow_asymmetric) {
    for (int i = 0; i < n_points_ / 2; ++i)
      points_[n_points_ - 1 - i] = -points_[i];
    if (n_points_ % 2 == 1) points_[n_points_ / 2] = 0.0;
  }
}

}  // namespace oscchain
