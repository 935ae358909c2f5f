#include "bplab/operators.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "bplab/errors.hpp"
#include "bplab/simd/kernels.hpp"
#include "bplab/spectral.hpp"
#include "bplab/verification.hpp"

namespace bplab {

namespace {

// Symbol coefficients of the constant-depth (h_b = c) weighted form
//   a0 I + a1 m m^T + a2 m_perp m_perp^T.
struct FlatSymbol {
  double a0 = 1.0, a1 = 0.0, a2 = 0.0;
};

FlatSymbol flat_symbol(OperatorKind kind, double mu, double c) {
  switch (kind) {
    case OperatorKind::IPlusMuTb: return {c, mu * c * c * c / 3.0, 0.0};
    case OperatorKind::HbB: return {c, mu * (c * c * c / 3.0 + c), mu};
    case OperatorKind::HbA: return {c, mu * c, 0.0};
  }
  return {};
}

VecField flat_solve(const VecField& rhs, const FlatSymbol& sym) {
  const Grid& g = rhs.grid();
  if (g.dim() == 1) {
    ComplexVector c = forward(rhs[0]);
    const auto m = g.derivative_symbol(0);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] /= sym.a0 + sym.a1 * m[k] * m[k];
    return VecField({inverse(g, std::move(c))});
  }
  ComplexVector c0 = forward(rhs[0]);
  ComplexVector c1 = forward(rhs[1]);
  const auto mx = g.derivative_symbol(0);
  const auto my = g.derivative_symbol(1);
  for (std::size_t k = 0; k < c0.size(); ++k) {
    const double s = mx[k] * mx[k] + my[k] * my[k];
    if (s == 0.0) {
      c0[k] /= sym.a0;
      c1[k] /= sym.a0;
      continue;
    }
    const double par = 1.0 / (sym.a0 + sym.a1 * s);
    const double perp = 1.0 / (sym.a0 + sym.a2 * s);
    // P = m m^T / s, P_perp = I - P
    const double pxx = mx[k] * mx[k] / s, pxy = mx[k] * my[k] / s, pyy = my[k] * my[k] / s;
    const cplx u = c0[k], w = c1[k];
    c0[k] = (par * pxx + perp * (1.0 - pxx)) * u + (par - perp) * pxy * w;
    c1[k] = (par - perp) * pxy * u + (par * pyy + perp * (1.0 - pyy)) * w;
  }
  return VecField({inverse(g, std::move(c0)), inverse(g, std::move(c1))});
}

double dot(const VecField& a, const VecField& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += simd::active().dot(a[i].data(), b[i].data(), a[i].size());
  return s;
}

}  // namespace

VecField apply_weighted_Tb(const VecField& v, const Bathymetry& bath) {
  const Field d = div_gamma(v);
  VecField out = grad_gamma(bath.h_b_cubed() * d);
  out *= -1.0 / 3.0;
  const double beta = bath.beta();
  if (beta != 0.0 && !bath.is_flat()) {
    const Field gdot = pointwise_dot(bath.grad_b(), v);
    out.axpy(0.5 * beta, grad_gamma(bath.h_b_squared() * gdot));
    out.axpy(-0.5 * beta, (bath.h_b_squared() * d) * bath.grad_b());
    out.axpy(beta * beta, (bath.h_b() * gdot) * bath.grad_b());
  }
  return out;
}

VecField apply_Tb(const VecField& v, const Bathymetry& bath) {
  return bath.inv_h_b() * apply_weighted_Tb(v, bath);
}

namespace {

// h_b grad((1/h_b) div(h_b v))
VecField weighted_depth_grad(const VecField& v, const Bathymetry& bath) {
  return bath.h_b() * grad_gamma(bath.inv_h_b() * div_gamma(bath.h_b() * v));
}

}  // namespace

VecField apply_A(const VecField& v, double mu, const Bathymetry& bath) {
  return bath.inv_h_b() * apply_weighted(OperatorKind::HbA, v, mu, bath);
}

VecField apply_B(const VecField& v, double mu, const Bathymetry& bath) {
  return bath.inv_h_b() * apply_weighted(OperatorKind::HbB, v, mu, bath);
}

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::IPlusMuTb: return "I+muTb";
    case OperatorKind::HbB: return "hbB";
    case OperatorKind::HbA: return "hbA";
  }
  return "?";
}

OperatorKind operator_kind_from_string(std::string_view name) {
  if (name == "I+muTb" || name == "IPlusMuTb") return OperatorKind::IPlusMuTb;
  if (name == "hbB" || name == "HbB") return OperatorKind::HbB;
  if (name == "hbA" || name == "HbA") return OperatorKind::HbA;
  throw Error(ErrorCode::InvalidArgument, "unknown operator '" + std::string(name) + "'");
}

VecField apply_weighted(OperatorKind kind, const VecField& v, double mu, const Bathymetry& bath) {
  require_same_grid(v.grid(), bath.grid());
  VecField out = bath.h_b() * v;
  switch (kind) {
    case OperatorKind::IPlusMuTb:
      out.axpy(mu, apply_weighted_Tb(v, bath));
      break;
    case OperatorKind::HbA:
      out.axpy(-mu, weighted_depth_grad(v, bath));
      break;
    case OperatorKind::HbB:
      out.axpy(mu, apply_weighted_Tb(v, bath));
      out.axpy(-mu, weighted_depth_grad(v, bath));
      if (v.dim() == 2) out.axpy(-mu, perp_grad(perp_div(v)));
      break;
  }
  return out;
}

struct OperatorHandle::State {
  OperatorKind kind;
  double mu;
  Bathymetry bath;
  SolverOptions options;
  FlatSymbol exact;   // valid when the bottom is flat
  FlatSymbol precond; // constant mean-depth approximation
  std::string_view method;
  std::optional<Eigen::LLT<Eigen::MatrixXd>> llt;
};

OperatorHandle::OperatorHandle(OperatorKind kind, double mu, Bathymetry bath, SolverOptions options) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw Error(ErrorCode::InvalidArgument, "mu must be finite and >= 0");
  auto st = std::make_shared<State>(State{kind, mu, std::move(bath), options, {}, {}, {}, std::nullopt});
  const Grid& g = st->bath.grid();
  const std::size_t size = g.size() * static_cast<std::size_t>(g.dim());
  double mean_depth = 0.0;
  for (double h : st->bath.h_b().values()) mean_depth += h;
  mean_depth /= static_cast<double>(g.size());
  st->exact = flat_symbol(kind, mu, 1.0);
  st->precond = flat_symbol(kind, mu, mean_depth);

  using Strategy = SolverOptions::Strategy;
  if (st->bath.is_flat() && options.strategy == Strategy::Auto) {
    st->method = "fourier";
  } else if (options.strategy == Strategy::Dense ||
             (options.strategy == Strategy::Auto && size <= options.dense_threshold)) {
    const DenseOperator m = assemble_dense(
        [&](const VecField& v) { return apply_weighted(kind, v, mu, st->bath); }, g);
    const Eigen::MatrixXd sym = 0.5 * (m.entries + m.entries.transpose());
    st->llt.emplace(sym);
    if (st->llt->info() != Eigen::Success) {
      throw Error(ErrorCode::SolverDivergence, "Cholesky factorization of " + std::string(to_string(kind)) + " failed");
    }
    st->method = "dense-cholesky";
  } else {
    st->method = "pcg";
  }
  state_ = std::move(st);
}

OperatorKind OperatorHandle::kind() const noexcept { return state_->kind; }
double OperatorHandle::mu() const noexcept { return state_->mu; }
const Bathymetry& OperatorHandle::bathymetry() const noexcept { return state_->bath; }
const SolverOptions& OperatorHandle::options() const noexcept { return state_->options; }
std::string_view OperatorHandle::method() const noexcept { return state_->method; }

VecField OperatorHandle::apply(const VecField& v) const {
  return apply_weighted(state_->kind, v, state_->mu, state_->bath);
}

VecField OperatorHandle::flat_inverse(const VecField& rhs) const { return flat_solve(rhs, state_->precond); }

VecField OperatorHandle::solve(const VecField& rhs, SolveStats* stats) const {
  const State& st = *state_;
  require_same_grid(rhs.grid(), st.bath.grid());
  if (!rhs.is_finite()) throw Error(ErrorCode::SolverDivergence, "non-finite right-hand side");
  SolveStats local;
  local.method = st.method;
  VecField x(rhs.grid());

  if (st.method == "fourier") {
    x = flat_solve(rhs, st.exact);
  } else if (st.llt) {
    x = unflatten(rhs.grid(), st.llt->solve(flatten(rhs)));
  } else {
    // Preconditioned conjugate gradients on the plain node inner product,
    // for which the weighted form is symmetric.
    const double bnorm = std::sqrt(dot(rhs, rhs));
    if (bnorm == 0.0) {
      if (stats) *stats = local;
      return x;
    }
    VecField r = rhs;
    VecField z = flat_inverse(r);
    VecField p = z;
    double rz = dot(r, z);
    double rel = 1.0;
    int it = 0;
    for (; it < st.options.max_iterations; ++it) {
      const VecField ap = apply(p);
      const double pap = dot(p, ap);
      if (!(pap > 0.0)) throw Error(ErrorCode::SolverDivergence, "operator lost positivity in CG");
      const double alpha = rz / pap;
      x.axpy(alpha, p);
      r.axpy(-alpha, ap);
      rel = std::sqrt(dot(r, r)) / bnorm;
      if (rel <= st.options.tolerance) {
        ++it;
        break;
      }
      z = flat_inverse(r);
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      p *= beta;
      p += z;
    }
    local.iterations = it;
    local.relative_residual = rel;
    if (!(rel <= st.options.tolerance)) {
      throw Error(ErrorCode::SolverDivergence, "CG for " + std::string(to_string(st.kind)) + " stalled at relative residual " +
                                                   std::to_string(rel) + " after " + std::to_string(it) + " iterations");
    }
  }
  if (!x.is_finite()) throw Error(ErrorCode::SolverDivergence, "solution is not finite");
  if (stats) *stats = local;
  return x;
}

VecField solve_I_plus_muTb(const VecField& rhs, const OperatorHandle& handle, SolveStats* stats) {
  if (handle.kind() != OperatorKind::IPlusMuTb) throw Error(ErrorCode::InvalidArgument, "handle is not I+muTb");
  return handle.solve(handle.bathymetry().h_b() * rhs, stats);
}

VecField solve_hbB(const VecField& rhs, const OperatorHandle& handle, SolveStats* stats) {
  if (handle.kind() != OperatorKind::HbB) throw Error(ErrorCode::InvalidArgument, "handle is not hbB");
  return handle.solve(rhs, stats);
}

VecField solve_hbA(const VecField& rhs, const OperatorHandle& handle, SolveStats* stats) {
  if (handle.kind() != OperatorKind::HbA) throw Error(ErrorCode::InvalidArgument, "handle is not hbA");
  return handle.solve(rhs, stats);
}

double reference_form(OperatorKind kind, const VecField& v, double mu) {
  double q = inner(v, v);
  if (kind == OperatorKind::HbB) {
    for (int a = 0; a < v.dim(); ++a) {
      const VecField gv = grad_gamma(v[a]);
      q += inner(gv, gv);
    }
  } else {
    const Field d = div_gamma(v);
    q += mu * inner(d, d);
  }
  return q;
}

CoercivityReport coercivity_report(const OperatorHandle& handle, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  const Bathymetry& bath = handle.bathymetry();
  const Grid& g = bath.grid();
  CoercivityReport rep;
  rep.kind = handle.kind();
  rep.grid = g.spec();
  rep.mu = handle.mu();
  rep.beta = bath.beta();
  rep.norm = handle.kind() == OperatorKind::HbB ? "H1" : "X0";
  rep.trials = trials;
  rep.min_quotient = std::numeric_limits<double>::infinity();
  rep.max_quotient = 0.0;

  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    // Alternate white noise with smoothed noise so both ends of the spectrum are probed.
    VecField v = random_vecfield(g, rng);
    if (t % 2 == 1) v = mollify(v, 0.05 * g.length(0) * g.length(0) / (4.0 * std::numbers::pi * std::numbers::pi), -1);
    const VecField w = random_vecfield(g, rng);
    const VecField mv = handle.apply(v);
    const VecField mw = handle.apply(w);
    const double q = inner(mv, v) / reference_form(handle.kind(), v, handle.mu());
    rep.min_quotient = std::min(rep.min_quotient, q);
    rep.max_quotient = std::max(rep.max_quotient, q);
    const double sym = std::abs(inner(mv, w) - inner(v, mw)) / (norm_l2(v) * norm_l2(w));
    rep.symmetry_residual = std::max(rep.symmetry_residual, sym);
    const VecField x = handle.solve(w);
    const double inv = norm_l2(handle.apply(x) - w) / norm_l2(w);
    rep.inverse_residual = std::max(rep.inverse_residual, inv);
  }

  const bool small = g.dim() == 1 ? g.n(0) <= 64 : (g.n(0) <= 16 && g.n(1) <= 16);
  if (small) {
    const DenseOperator m = assemble_dense(
        [&](const VecField& v) { return handle.apply(v); }, g);
    const DenseOperator gram = assemble_dense(
        handle.kind() == OperatorKind::HbB ? DenseKind::GramH1 : DenseKind::GramX0, handle.mu(), bath);
    const auto [lo, hi] = eig_extrema(m, gram);
    rep.dense_min = lo;
    rep.dense_max = hi;
  }
  rep.positive = rep.min_quotient > 0.0 && (!rep.dense_min || *rep.dense_min > 0.0);
  return rep;
}

}  // namespace bplab
