#pragma once

// Bathymetry-dependent elliptic operators of the Boussinesq-Peregrine family
//
//   T_b v = -(1/3h_b) grad(h_b^3 div v)
//           + (beta/2h_b) [grad(h_b^2 grad b . v) - h_b^2 grad b div v]
//           + beta^2 grad b (grad b . v)
//   A   v = v - mu grad((1/h_b) div(h_b v))
//   B   v = v + mu T_b v - mu grad((1/h_b) div(h_b v)) - mu (1/h_b) perp_grad(perp_div v)
//
// and their h_b-weighted forms h_b(I + mu T_b), h_b B, h_b A, which are
// symmetric positive definite for the quadrature inner product. Variable
// coefficients multiply by collocation, derivatives are spectral, so the
// discrete weighted forms are symmetric to rounding.

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>

#include "bplab/bathymetry.hpp"

namespace bplab {

VecField apply_Tb(const VecField& v, const Bathymetry& bath);
VecField apply_A(const VecField& v, double mu, const Bathymetry& bath);
VecField apply_B(const VecField& v, double mu, const Bathymetry& bath);

/// h_b * T_b v, evaluated without dividing by h_b.
VecField apply_weighted_Tb(const VecField& v, const Bathymetry& bath);

enum class OperatorKind { IPlusMuTb, HbB, HbA };

std::string_view to_string(OperatorKind kind);
OperatorKind operator_kind_from_string(std::string_view name);

/// Weighted symmetric form of `kind`: h_b(I + mu T_b), h_b B or h_b A.
VecField apply_weighted(OperatorKind kind, const VecField& v, double mu, const Bathymetry& bath);

struct SolverOptions {
  enum class Strategy { Auto, Dense, Iterative };
  Strategy strategy = Strategy::Auto;
  /// Auto uses a dense Cholesky factorization up to this many unknowns.
  std::size_t dense_threshold = 1024;
  double tolerance = 1e-10;
  int max_iterations = 500;
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
  std::string_view method;
};

/// A weighted operator with mu and the bathymetry frozen at construction,
/// plus whatever is needed to invert it: the exact Fourier inverse on flat
/// bottoms, a dense Cholesky factor on small grids, otherwise conjugate
/// gradients preconditioned by the flat-bottom inverse. Immutable and cheap
/// to copy; safe to share between threads.
class OperatorHandle {
 public:
  OperatorHandle(OperatorKind kind, double mu, Bathymetry bath, SolverOptions options = {});

  OperatorKind kind() const noexcept;
  double mu() const noexcept;
  const Bathymetry& bathymetry() const noexcept;
  const SolverOptions& options() const noexcept;
  std::string_view method() const noexcept;

  /// M v with M the weighted symmetric form.
  VecField apply(const VecField& v) const;
  /// Solves M v = rhs. Throws SolverDivergence if the residual does not reach tolerance.
  VecField solve(const VecField& rhs, SolveStats* stats = nullptr) const;
  /// Exact inverse of the flat-bottom (h_b = 1) form; the CG preconditioner.
  VecField flat_inverse(const VecField& rhs) const;

 private:
  struct State;
  std::shared_ptr<const State> state_;
};

/// v with (I + mu T_b) v = rhs.
VecField solve_I_plus_muTb(const VecField& rhs, const OperatorHandle& handle, SolveStats* stats = nullptr);
/// v with h_b B v = rhs.
VecField solve_hbB(const VecField& rhs, const OperatorHandle& handle, SolveStats* stats = nullptr);
/// v with h_b A v = rhs.
VecField solve_hbA(const VecField& rhs, const OperatorHandle& handle, SolveStats* stats = nullptr);

struct CoercivityReport {
  OperatorKind kind;
  GridSpec grid;
  double mu = 0.0;
  double beta = 0.0;
  std::string_view norm;  // "X0" or "H1"
  int trials = 0;
  double min_quotient = 0.0;  // over random fields
  double max_quotient = 0.0;
  std::optional<double> dense_min;  // generalized eigen-extrema when assembled
  std::optional<double> dense_max;
  double symmetry_residual = 0.0;   // max |(Mv,w)-(v,Mw)| / (|v||w|)
  double inverse_residual = 0.0;    // max |M solve(r) - r| / |r|
  bool positive = false;
};

/// Rayleigh quotients of the weighted form against its reference norm
/// (X^0 for h_b(I + mu T_b) and h_b A, H^1 for h_b B) over random fields,
/// and dense generalized eigen-extrema when the grid is small enough
/// (n <= 64 in 1D, n <= 16 per axis in 2D).
CoercivityReport coercivity_report(const OperatorHandle& handle, int trials, std::uint64_t seed = 1);

/// Reference quadratic form: X^0 (|v|^2 + mu |div v|^2) or H^1 (|v|^2 + |grad v|^2).
double reference_form(OperatorKind kind, const VecField& v, double mu);

}  // namespace bplab
