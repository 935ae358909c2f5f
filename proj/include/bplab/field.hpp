#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "bplab/aligned.hpp"
#include "bplab/grid.hpp"

namespace bplab {

/// Real grid function. Value type: copies own their samples.
class Field {
 public:
  explicit Field(Grid grid);
  Field(Grid grid, RealVector samples);
  Field(Grid grid, double value);

  /// Samples f(x, y) at every node (y = 0 in 1D).
  static Field sample(const Grid& grid, const std::function<double(double, double)>& f);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return samples_.size(); }
  std::span<double> values() noexcept { return samples_; }
  std::span<const double> values() const noexcept { return samples_; }
  double* data() noexcept { return samples_.data(); }
  const double* data() const noexcept { return samples_.data(); }
  double& operator[](std::size_t i) noexcept { return samples_[i]; }
  double operator[](std::size_t i) const noexcept { return samples_[i]; }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);
  /// this += a * x
  Field& axpy(double a, const Field& x);

  bool is_finite() const noexcept;
  double max_abs() const noexcept;
  double min() const noexcept;
  double max() const noexcept;

 private:
  Grid grid_;
  RealVector samples_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator-(Field a);
Field operator*(double s, Field a);
/// Pointwise (collocation) product.
Field operator*(const Field& a, const Field& b);
/// Pointwise quotient.
Field operator/(const Field& a, const Field& b);
Field operator+(double s, Field a);
Field map(const Field& a, const std::function<double(double)>& f);

/// Quadrature L2 inner product: cell volume times the sample dot product.
double inner(const Field& a, const Field& b);
double norm_l2(const Field& a);

/// d-component vector field on one grid.
class VecField {
 public:
  explicit VecField(const Grid& grid);
  explicit VecField(std::vector<Field> components);

  const Grid& grid() const noexcept { return components_.front().grid(); }
  int dim() const noexcept { return static_cast<int>(components_.size()); }
  Field& operator[](int axis) noexcept { return components_[static_cast<std::size_t>(axis)]; }
  const Field& operator[](int axis) const noexcept { return components_[static_cast<std::size_t>(axis)]; }

  VecField& operator+=(const VecField& other);
  VecField& operator-=(const VecField& other);
  VecField& operator*=(double s);
  VecField& axpy(double a, const VecField& x);

  bool is_finite() const noexcept;
  double max_abs() const noexcept;

 private:
  std::vector<Field> components_;
};

VecField operator+(VecField a, const VecField& b);
VecField operator-(VecField a, const VecField& b);
VecField operator-(VecField a);
VecField operator*(double s, VecField a);
/// Scales every component pointwise by f.
VecField operator*(const Field& f, const VecField& v);
/// Pointwise dot product sum_a v_a w_a.
Field pointwise_dot(const VecField& v, const VecField& w);

double inner(const VecField& a, const VecField& b);
double norm_l2(const VecField& a);

}  // namespace bplab
