#include "bplab/spectral.hpp"

#include <cmath>

#include "bplab/errors.hpp"
#include "bplab/simd/kernels.hpp"

namespace bplab {

ComplexVector forward(const Field& f) {
  ComplexVector out(f.grid().spectral_size());
  f.grid().forward(f.data(), out.data());
  return out;
}

Field inverse(const Grid& grid, ComplexVector spectrum) {
  Field out(grid);
  grid.inverse(spectrum.data(), out.data());
  return out;
}

Field apply_multiplier(const Field& f, std::span<const double> symbol) {
  ComplexVector c = forward(f);
  simd::active().scale_spectrum(symbol.data(), c.data(), c.size());
  return inverse(f.grid(), std::move(c));
}

Field partial(const Field& f, int axis) {
  const Grid& g = f.grid();
  if (axis < 0 || axis >= g.dim()) throw Error(ErrorCode::InvalidArgument, "axis out of range");
  const ComplexVector c = forward(f);
  ComplexVector d(c.size());
  simd::active().imag_multiply(g.derivative_symbol(axis).data(), c.data(), d.data(), c.size());
  return inverse(g, std::move(d));
}

VecField grad_gamma(const Field& f) {
  const Grid& g = f.grid();
  const ComplexVector c = forward(f);
  std::vector<Field> comps;
  for (int a = 0; a < g.dim(); ++a) {
    ComplexVector d(c.size());
    simd::active().imag_multiply(g.derivative_symbol(a).data(), c.data(), d.data(), c.size());
    comps.push_back(inverse(g, std::move(d)));
  }
  return VecField(std::move(comps));
}

Field div_gamma(const VecField& v) {
  const Grid& g = v.grid();
  ComplexVector acc(g.spectral_size(), cplx(0.0, 0.0));
  for (int a = 0; a < v.dim(); ++a) {
    const ComplexVector c = forward(v[a]);
    simd::active().imag_multiply_add(g.derivative_symbol(a).data(), c.data(), acc.data(), c.size());
  }
  return inverse(g, std::move(acc));
}

VecField perp_grad(const Field& f) {
  const Grid& g = f.grid();
  if (g.dim() == 1) return VecField(g);
  const ComplexVector c = forward(f);
  ComplexVector dx(c.size()), dy(c.size());
  simd::active().imag_multiply(g.derivative_symbol(0).data(), c.data(), dx.data(), c.size());
  simd::active().imag_multiply(g.derivative_symbol(1).data(), c.data(), dy.data(), c.size());
  Field first = inverse(g, std::move(dy));
  first *= -1.0;
  return VecField({std::move(first), inverse(g, std::move(dx))});
}

Field perp_div(const VecField& v) {
  const Grid& g = v.grid();
  if (g.dim() == 1) return Field(g);
  const ComplexVector c1 = forward(v[0]);
  const ComplexVector c2 = forward(v[1]);
  ComplexVector acc(g.spectral_size(), cplx(0.0, 0.0));
  simd::active().imag_multiply_add(g.derivative_symbol(0).data(), c2.data(), acc.data(), acc.size());
  ComplexVector dy(acc.size());
  simd::active().imag_multiply(g.derivative_symbol(1).data(), c1.data(), dy.data(), dy.size());
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] -= dy[k];
  return inverse(g, std::move(acc));
}

Field laplacian_gamma(const Field& f) {
  const auto lap = f.grid().laplacian_symbol();
  RealVector symbol(lap.size());
  for (std::size_t k = 0; k < lap.size(); ++k) symbol[k] = -lap[k];
  return apply_multiplier(f, symbol);
}

Field lambda_s(const Field& f, double s) {
  if (s == 0.0) return f;
  const auto xi2 = f.grid().wavenumber_sq();
  RealVector symbol(xi2.size());
  for (std::size_t k = 0; k < xi2.size(); ++k) symbol[k] = std::pow(1.0 + xi2[k], 0.5 * s);
  return apply_multiplier(f, symbol);
}

namespace {

RealVector mollifier_symbol(const Grid& g, double delta, int power) {
  if (!(delta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "mollifier delta must be >= 0");
  if (power != -2 && power != -1 && power != 1 && power != 2) {
    throw Error(ErrorCode::InvalidArgument, "mollifier power must be one of -2, -1, 1, 2");
  }
  const auto lap = g.laplacian_symbol();
  RealVector symbol(lap.size());
  for (std::size_t k = 0; k < lap.size(); ++k) {
    const double base = 1.0 + delta * lap[k];
    double v = base;
    if (std::abs(power) == 2) v = base * base;
    symbol[k] = power < 0 ? 1.0 / v : v;
  }
  return symbol;
}

}  // namespace

Field mollify(const Field& f, double delta, int power) {
  const RealVector symbol = mollifier_symbol(f.grid(), delta, power);
  if (delta == 0.0) return f;
  return apply_multiplier(f, symbol);
}

VecField mollify(const VecField& v, double delta, int power) {
  const RealVector symbol = mollifier_symbol(v.grid(), delta, power);
  if (delta == 0.0) return v;
  std::vector<Field> comps;
  for (int a = 0; a < v.dim(); ++a) comps.push_back(apply_multiplier(v[a], symbol));
  return VecField(std::move(comps));
}

Field dealias(const Field& f) { return apply_multiplier(f, f.grid().dealias_mask()); }

Field dealiased_product(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  return dealias(dealias(a) * dealias(b));
}

double sobolev_norm(const Field& f, double s) {
  const Grid& g = f.grid();
  const ComplexVector c = forward(f);
  const auto w = g.parseval_weight();
  const auto xi2 = g.wavenumber_sq();
  double sum = 0.0;
  if (s == 0.0) {
    sum = simd::active().weighted_norm2(w.data(), c.data(), c.size());
  } else {
    RealVector weight(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) weight[k] = w[k] * std::pow(1.0 + xi2[k], s);
    sum = simd::active().weighted_norm2(weight.data(), c.data(), c.size());
  }
  const double n = static_cast<double>(g.size());
  return std::sqrt(g.cell_volume() * sum / n);
}

double sobolev_norm(const VecField& v, double s) {
  double sum = 0.0;
  for (int a = 0; a < v.dim(); ++a) {
    const double c = sobolev_norm(v[a], s);
    sum += c * c;
  }
  return std::sqrt(sum);
}

double xs_norm(const VecField& v, double s, double mu) {
  const double base = sobolev_norm(v, s);
  if (mu == 0.0) return base;
  const double div = sobolev_norm(div_gamma(v), s);
  return std::sqrt(base * base + mu * div * div);
}

cplx mode_coefficient(const Field& f, std::array<int, 2> mode) {
  const std::size_t k = f.grid().mode_index(mode);
  const ComplexVector c = forward(f);
  return c[k] / static_cast<double>(f.grid().size());
}

double sup_gradient(const Field& f) { return grad_gamma(f).max_abs(); }

}  // namespace bplab
