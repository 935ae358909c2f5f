#include <cmath>

#include "bplab/models.hpp"
#include "bplab/spectral.hpp"

namespace bplab {

namespace {

// (a . grad) c, dealiased; bilinear in (a, c).
VecField convect(const VecField& a, const VecField& c) {
  VecField out(c.grid());
  for (int b = 0; b < c.dim(); ++b) {
    const VecField g = grad_gamma(c[b]);
    for (int i = 0; i < a.dim(); ++i) out[b] += dealiased_product(a[i], g[i]);
  }
  return out;
}

Field transport(const VecField& a, const Field& f) {
  const VecField g = grad_gamma(f);
  Field out(f.grid());
  for (int i = 0; i < a.dim(); ++i) out += dealiased_product(a[i], g[i]);
  return out;
}

}  // namespace

// Time-Taylor coefficients c_j of (q, V, zeta) follow from matching powers of t
// in the MBP system: bilinear terms become Cauchy sums and exp(eps q) obeys
// w_k = (1/k) sum_{i=1..k} i (eps q_i) w_{k-i}. Then u_k = eps^k k! c_k.
std::vector<DerivedState> time_derivative_stack(const ModelState& state, const Model& model, int k_max) {
  const ModelParams& p = model.params();
  if (p.model != ModelKind::MBP) throw Error(ErrorCode::InvalidArgument, "time_derivative_stack needs the MBP model");
  if (k_max < 0 || k_max > 3) throw Error(ErrorCode::InvalidArgument, "k_max must lie in [0, 3]");
  if (!state.velocity) throw Error(ErrorCode::InvalidArgument, "state has no velocity");
  const Bathymetry& bath = model.bathymetry();
  const OperatorHandle& handle = *model.handle();
  const double eps = p.eps;

  std::vector<Field> q{state.surface};
  std::vector<VecField> v{*state.velocity};
  std::vector<Field> zeta{q_to_zeta(state.surface, eps, bath)};
  const Field w0 = map(state.surface, [eps](double x) { return std::exp(eps * x); });
  std::vector<Field> s;  // s_k = w_k / eps for k >= 1; s[0] unused
  s.push_back(Field(state.surface.grid()));

  const auto w = [&](int m) { return m == 0 ? w0 : eps * s[static_cast<std::size_t>(m)]; };

  for (int j = 0; j < k_max; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    Field dq = bath.inv_h_b() * div_gamma(bath.h_b() * v[uj]);
    VecField forcing = apply_weighted(OperatorKind::HbA, grad_gamma(zeta[uj]), p.mu, bath);
    if (eps != 0.0) {
      VecField conv(v[0].grid());
      for (int i = 0; i <= j; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        dq.axpy(eps, transport(v[ui], q[uj - ui]));
        conv += convect(v[ui], v[uj - ui]);
      }
      forcing.axpy(eps, bath.h_b() * conv);
    }
    const double inv = 1.0 / static_cast<double>(j + 1);
    q.push_back(-inv * dq);
    v.push_back(-inv * handle.solve(forcing));

    const int k = j + 1;
    Field sk(state.surface.grid());
    for (int i = 1; i <= k; ++i) sk.axpy(static_cast<double>(i), q[static_cast<std::size_t>(i)] * w(k - i));
    sk *= 1.0 / static_cast<double>(k);
    s.push_back(sk);
    zeta.push_back(bath.h_b() * sk);
  }

  std::vector<DerivedState> out;
  double scale = 1.0;
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) scale *= eps * static_cast<double>(k);
    const auto uk = static_cast<std::size_t>(k);
    out.push_back({scale * q[uk], scale * zeta[uk], scale * v[uk]});
  }
  return out;
}

}  // namespace bplab
