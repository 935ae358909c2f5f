#include "bplab/field.hpp"

#include <algorithm>
#include <cmath>

#include "bplab/errors.hpp"
#include "bplab/simd/kernels.hpp"

namespace bplab {

Field::Field(Grid grid) : grid_(std::move(grid)), samples_(grid_.size(), 0.0) {}

Field::Field(Grid grid, RealVector samples) : grid_(std::move(grid)), samples_(std::move(samples)) {
  if (samples_.size() != grid_.size()) {
    throw Error(ErrorCode::InvalidArgument, "sample count does not match grid");
  }
}

Field::Field(Grid grid, double value) : grid_(std::move(grid)), samples_(grid_.size(), value) {}

Field Field::sample(const Grid& grid, const std::function<double(double, double)>& f) {
  Field out(grid);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = grid.coordinate(0, i);
    const double y = grid.dim() == 2 ? grid.coordinate(1, i) : 0.0;
    out[i] = f(x, y);
  }
  return out;
}

Field& Field::operator+=(const Field& other) { return axpy(1.0, other); }
Field& Field::operator-=(const Field& other) { return axpy(-1.0, other); }

Field& Field::operator*=(double s) {
  for (double& v : samples_) v *= s;
  return *this;
}

Field& Field::axpy(double a, const Field& x) {
  require_same_grid(grid_, x.grid_);
  simd::active().axpy(a, x.data(), data(), size());
  return *this;
}

bool Field::is_finite() const noexcept {
  return std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); });
}

double Field::max_abs() const noexcept { return simd::active().max_abs(data(), size()); }
double Field::min() const noexcept { return *std::min_element(samples_.begin(), samples_.end()); }
double Field::max() const noexcept { return *std::max_element(samples_.begin(), samples_.end()); }

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator-(Field a) { return a *= -1.0; }
Field operator*(double s, Field a) { return a *= s; }

Field operator*(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  Field out(a.grid());
  simd::active().mul(a.data(), b.data(), out.data(), a.size());
  return out;
}

Field operator/(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  Field out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] / b[i];
  return out;
}

Field operator+(double s, Field a) {
  for (double& v : a.values()) v += s;
  return a;
}

Field map(const Field& a, const std::function<double(double)>& f) {
  Field out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i]);
  return out;
}

double inner(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  return a.grid().cell_volume() * simd::active().dot(a.data(), b.data(), a.size());
}

double norm_l2(const Field& a) { return std::sqrt(inner(a, a)); }

VecField::VecField(const Grid& grid) {
  components_.reserve(static_cast<std::size_t>(grid.dim()));
  for (int a = 0; a < grid.dim(); ++a) components_.emplace_back(grid);
}

VecField::VecField(std::vector<Field> components) : components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorCode::InvalidArgument, "vector field needs components");
  const Grid& g = components_.front().grid();
  if (static_cast<int>(components_.size()) != g.dim()) {
    throw Error(ErrorCode::InvalidArgument, "component count must equal grid dimension");
  }
  for (const Field& c : components_) require_same_grid(g, c.grid());
}

VecField& VecField::operator+=(const VecField& other) { return axpy(1.0, other); }
VecField& VecField::operator-=(const VecField& other) { return axpy(-1.0, other); }

VecField& VecField::operator*=(double s) {
  for (Field& c : components_) c *= s;
  return *this;
}

VecField& VecField::axpy(double a, const VecField& x) {
  if (x.dim() != dim()) throw Error(ErrorCode::GridMismatch, "vector field dimension mismatch");
  for (int i = 0; i < dim(); ++i) (*this)[i].axpy(a, x[i]);
  return *this;
}

bool VecField::is_finite() const noexcept {
  return std::all_of(components_.begin(), components_.end(), [](const Field& c) { return c.is_finite(); });
}

double VecField::max_abs() const noexcept {
  double m = 0.0;
  for (const Field& c : components_) {
    const double a = c.max_abs();
    if (!(a <= m)) m = a;
  }
  return m;
}

VecField operator+(VecField a, const VecField& b) { return a += b; }
VecField operator-(VecField a, const VecField& b) { return a -= b; }
VecField operator-(VecField a) { return a *= -1.0; }
VecField operator*(double s, VecField a) { return a *= s; }

VecField operator*(const Field& f, const VecField& v) {
  std::vector<Field> comps;
  comps.reserve(static_cast<std::size_t>(v.dim()));
  for (int a = 0; a < v.dim(); ++a) comps.push_back(f * v[a]);
  return VecField(std::move(comps));
}

Field pointwise_dot(const VecField& v, const VecField& w) {
  Field out = v[0] * w[0];
  for (int a = 1; a < v.dim(); ++a) out += v[a] * w[a];
  return out;
}

double inner(const VecField& a, const VecField& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += inner(a[i], b[i]);
  return s;
}

double norm_l2(const VecField& a) { return std::sqrt(inner(a, a)); }

}  // namespace bplab
