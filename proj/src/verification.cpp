#include "bplab/verification.hpp"

#include "bplab/errors.hpp"
#include "bplab/spectral.hpp"

namespace bplab {

Eigen::VectorXd flatten(const VecField& v) {
  const std::size_t n = v.grid().size();
  Eigen::VectorXd x(static_cast<Eigen::Index>(n * static_cast<std::size_t>(v.dim())));
  for (int a = 0; a < v.dim(); ++a) {
    for (std::size_t i = 0; i < n; ++i) x(static_cast<Eigen::Index>(a * n + i)) = v[a][i];
  }
  return x;
}

VecField unflatten(const Grid& grid, const Eigen::VectorXd& x) {
  VecField v(grid);
  const std::size_t n = grid.size();
  for (int a = 0; a < v.dim(); ++a) {
    for (std::size_t i = 0; i < n; ++i) v[a][i] = x(static_cast<Eigen::Index>(a * n + i));
  }
  return v;
}

DenseOperator assemble_dense(const std::function<VecField(const VecField&)>& op, const Grid& grid) {
  const std::size_t size = grid.size() * static_cast<std::size_t>(grid.dim());
  if (size > kDenseSizeLimit) {
    throw Error(ErrorCode::SizeLimit, "dense assembly limited to " + std::to_string(kDenseSizeLimit) +
                                          " unknowns, requested " + std::to_string(size));
  }
  DenseOperator out{size, Eigen::MatrixXd(size, size)};
  const std::size_t n = grid.size();
  for (std::size_t col = 0; col < size; ++col) {
    VecField e(grid);
    e[static_cast<int>(col / n)][col % n] = 1.0;
    out.entries.col(static_cast<Eigen::Index>(col)) = flatten(op(e));
  }
  return out;
}

DenseOperator assemble_dense(DenseKind kind, double mu, const Bathymetry& bath) {
  const Grid& grid = bath.grid();
  switch (kind) {
    case DenseKind::Identity:
      return assemble_dense([](const VecField& v) { return v; }, grid);
    case DenseKind::IPlusMuTb:
      return assemble_dense([&](const VecField& v) { return v + mu * apply_Tb(v, bath); }, grid);
    case DenseKind::WeightedIPlusMuTb:
      return assemble_dense(
          [&](const VecField& v) { return apply_weighted(OperatorKind::IPlusMuTb, v, mu, bath); }, grid);
    case DenseKind::HbB:
      return assemble_dense(
          [&](const VecField& v) { return apply_weighted(OperatorKind::HbB, v, mu, bath); }, grid);
    case DenseKind::HbA:
      return assemble_dense(
          [&](const VecField& v) { return apply_weighted(OperatorKind::HbA, v, mu, bath); }, grid);
    case DenseKind::GramX0:
      return assemble_dense(
          [&](const VecField& v) {
            VecField out = v;
            out.axpy(-mu, grad_gamma(div_gamma(v)));
            return out;
          },
          grid);
    case DenseKind::GramH1:
      return assemble_dense(
          [&](const VecField& v) {
            VecField out = v;
            for (int a = 0; a < v.dim(); ++a) out[a] -= laplacian_gamma(v[a]);
            return out;
          },
          grid);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown dense operator kind");
}

std::pair<double, double> eig_extrema(const DenseOperator& m, const DenseOperator& g) {
  if (m.size != g.size) throw Error(ErrorCode::InvalidArgument, "pencil sizes differ");
  const Eigen::MatrixXd gs = 0.5 * (g.entries + g.entries.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(gs);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotSPD, "Gram matrix failed Cholesky");
  const Eigen::MatrixXd ms = 0.5 * (m.entries + m.entries.transpose());
  // C = L^{-1} M L^{-T}
  const auto l = llt.matrixL();
  Eigen::MatrixXd c = l.solve(ms);
  c = l.solve(c.transpose()).transpose();
  c = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::NotSPD, "eigensolver did not converge");
  return {eig.eigenvalues().minCoeff(), eig.eigenvalues().maxCoeff()};
}

Field fd_derivative(const Field& f, int order, int axis) {
  const Grid& g = f.grid();
  if (axis < 0 || axis >= g.dim()) throw Error(ErrorCode::InvalidArgument, "axis out of range");
  if (order != 1 && order != 2) throw Error(ErrorCode::InvalidArgument, "derivative order must be 1 or 2");
  const int nx = g.n(0);
  const int ny = g.dim() == 2 ? g.n(1) : 1;
  const double twist = axis == 1 ? g.gamma() : 1.0;
  const double h = g.spacing(axis);
  const auto at = [&](int ix, int iy) {
    ix = (ix % nx + nx) % nx;
    iy = (iy % ny + ny) % ny;
    return f[static_cast<std::size_t>(ix) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(iy)];
  };
  Field out(g);
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      const int sx = axis == 0 ? 1 : 0;
      const int sy = axis == 1 ? 1 : 0;
      const double m2 = at(ix - 2 * sx, iy - 2 * sy), m1 = at(ix - sx, iy - sy);
      const double p1 = at(ix + sx, iy + sy), p2 = at(ix + 2 * sx, iy + 2 * sy);
      double v;
      if (order == 1) {
        v = twist * (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
      } else {
        const double c = at(ix, iy);
        v = twist * twist * (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
      }
      out[static_cast<std::size_t>(ix) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(iy)] = v;
    }
  }
  return out;
}

Trajectory reference_trajectory(const ModelState& initial, const Model& model, double t_end, double dt_fine) {
  StepperConfig config;
  config.dt = dt_fine;
  config.t_end = t_end;
  config.output_stride = 1 << 30;
  return run(initial, model, config);
}

Field random_field(const Grid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Field f(grid);
  for (double& v : f.values()) v = normal(rng);
  return f;
}

VecField random_vecfield(const Grid& grid, std::mt19937_64& rng) {
  VecField v(grid);
  for (int a = 0; a < v.dim(); ++a) v[a] = random_field(grid, rng);
  return v;
}

}  // namespace bplab
