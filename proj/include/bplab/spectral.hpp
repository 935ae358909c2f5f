#pragma once

// Fourier-multiplier calculus on the periodic grid: twisted derivatives,
// Bessel potentials, mollifiers, 2/3-rule dealiasing and Sobolev norms.
// Everything here is a pure function of its arguments.

#include <array>
#include <span>

#include "bplab/field.hpp"

namespace bplab {

ComplexVector forward(const Field& f);
Field inverse(const Grid& grid, ComplexVector spectrum);

/// Applies a real, even Fourier multiplier (one value per half-spectrum coefficient).
Field apply_multiplier(const Field& f, std::span<const double> symbol);

/// Twisted partial derivative: d/dx for axis 0, gamma*d/dy for axis 1.
Field partial(const Field& f, int axis);

/// (d_x f, gamma d_y f) in 2D, d_x f in 1D.
VecField grad_gamma(const Field& f);
/// d_x v_1 + gamma d_y v_2 in 2D, d_x v in 1D. Negative adjoint of grad_gamma.
Field div_gamma(const VecField& v);
/// (-gamma d_y f, d_x f) in 2D; identically zero in 1D.
VecField perp_grad(const Field& f);
/// -gamma d_y v_1 + d_x v_2 in 2D; identically zero in 1D.
Field perp_div(const VecField& v);
/// div_gamma(grad_gamma f).
Field laplacian_gamma(const Field& f);

/// Bessel potential with symbol (1 + |xi^gamma|^2)^(s/2).
Field lambda_s(const Field& f, double s);

/// (1 - delta * Laplacian_gamma)^power; power in {-2, -1, 1, 2}.
Field mollify(const Field& f, double delta, int power);
VecField mollify(const VecField& v, double delta, int power);

/// Orthogonal projection onto the 2/3-rule band.
Field dealias(const Field& f);
/// P(Pa * Pb) with P the 2/3-rule projection.
Field dealiased_product(const Field& a, const Field& b);

/// H^s norm by Parseval with weight (1 + |xi^gamma|^2)^s.
double sobolev_norm(const Field& f, double s);
double sobolev_norm(const VecField& v, double s);
/// |v|_{X^s}^2 = |v|_{H^s}^2 + mu |div_gamma v|_{H^s}^2.
double xs_norm(const VecField& v, double s, double mu);

/// Fourier coefficient of integer mode (m_x[, m_y]) normalized by the node
/// count, so A*cos(k x) has coefficient A/2 at its mode.
cplx mode_coefficient(const Field& f, std::array<int, 2> mode);

/// sup over nodes of all first twisted derivatives.
double sup_gradient(const Field& f);

}  // namespace bplab
