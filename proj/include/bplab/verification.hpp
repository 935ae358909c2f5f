#pragma once

// Independent oracles used to certify the fast paths: dense assembly of
// matrix-free operators, generalized eigen-extrema, fourth-order finite
// differences and random test fields.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <random>
#include <utility>

#include "bplab/timeloop.hpp"

namespace bplab {

/// Largest dense operator the oracles will assemble.
inline constexpr std::size_t kDenseSizeLimit = 4096;

enum class DenseKind {
  Identity,
  IPlusMuTb,          // unweighted I + mu T_b
  WeightedIPlusMuTb,  // h_b (I + mu T_b)
  HbB,
  HbA,
  GramX0,             // I + mu div^T div
  GramH1,             // I + grad^T grad, componentwise
};

struct DenseOperator {
  std::size_t size = 0;
  Eigen::MatrixXd entries;
};

/// Flattening of a vector field, component-major: index = a * N + node.
Eigen::VectorXd flatten(const VecField& v);
VecField unflatten(const Grid& grid, const Eigen::VectorXd& x);

/// Column-by-column application of `op` to the canonical basis fields.
DenseOperator assemble_dense(const std::function<VecField(const VecField&)>& op, const Grid& grid);
DenseOperator assemble_dense(DenseKind kind, double mu, const Bathymetry& bath);

/// Extreme generalized Rayleigh quotients of the pencil (M, G) after
/// whitening by the Cholesky factor of G. Throws NotSPD if G does not factor.
std::pair<double, double> eig_extrema(const DenseOperator& m, const DenseOperator& g);

/// Fourth-order centered finite difference of derivative order 1 or 2 along `axis`
/// (the y derivative carries the gamma twist).
Field fd_derivative(const Field& f, int order, int axis = 0);

/// Fine-step RK4 run to `t_end` used as the reference in self-convergence checks.
Trajectory reference_trajectory(const ModelState& initial, const Model& model, double t_end, double dt_fine);

Field random_field(const Grid& grid, std::mt19937_64& rng);
VecField random_vecfield(const Grid& grid, std::mt19937_64& rng);

}  // namespace bplab
