#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bplab/errors.hpp"
#include "bplab/operators.hpp"
#include "bplab/spectral.hpp"
#include "bplab/verification.hpp"

namespace {

using namespace bplab;
constexpr double pi = std::numbers::pi;

Grid grid1(int n, double L) { return Grid(GridSpec{1, {n, 1}, {L, 1.0}, 1.0}); }
Grid grid2(int n, double L, double gamma) { return Grid(GridSpec{2, {n, n}, {L, L}, gamma}); }

Bathymetry flat(const Grid& g) { return build_bathymetry(profile::Flat{}, 0.0, g); }
Bathymetry bump(const Grid& g, double beta) {
  const double c = g.length(0) / 2;
  return build_bathymetry(profile::GaussianBump{{c, c}, g.length(0) / 8, 1.0}, beta, g);
}

constexpr std::array<OperatorKind, 3> kAllKinds{OperatorKind::IPlusMuTb, OperatorKind::HbB, OperatorKind::HbA};

TEST(Operators, FlatBottomSymbols1D) {
  const Grid g = grid1(64, 2 * pi);
  const Bathymetry bath = flat(g);
  const double mu = 0.2, k = 3;
  const VecField v({Field::sample(g, [&](double x, double) { return std::cos(k * x); })});
  // 1 + mu k^2/3, 1 + 4 mu k^2/3, 1 + mu k^2
  EXPECT_LT((apply_weighted(OperatorKind::IPlusMuTb, v, mu, bath) - (1 + mu * k * k / 3) * v).max_abs(), 1e-12);
  EXPECT_LT((apply_weighted(OperatorKind::HbB, v, mu, bath) - (1 + 4 * mu * k * k / 3) * v).max_abs(), 1e-12);
  EXPECT_LT((apply_weighted(OperatorKind::HbA, v, mu, bath) - (1 + mu * k * k) * v).max_abs(), 1e-12);
  EXPECT_LT((apply_Tb(v, bath) - (k * k / 3) * v).max_abs(), 1e-11);
}

TEST(Operators, FlatBottomSymbols2DSplitIntoLongitudinalAndTransverse) {
  const double gamma = 0.7, mu = 0.1;
  const Grid g = grid2(16, 2 * pi, gamma);
  const Bathymetry bath = flat(g);
  const Field phase = Field::sample(g, [](double x, double y) { return std::cos(2 * x + y); });
  const double kx = 2, ky = gamma * 1, k2 = kx * kx + ky * ky;
  const VecField along({kx * phase, ky * phase});    // parallel to k
  const VecField across({-ky * phase, kx * phase});  // perpendicular to k
  EXPECT_LT((apply_weighted(OperatorKind::HbB, along, mu, bath) - (1 + 4 * mu * k2 / 3) * along).max_abs(), 1e-11);
  EXPECT_LT((apply_weighted(OperatorKind::HbB, across, mu, bath) - (1 + mu * k2) * across).max_abs(), 1e-11);
  EXPECT_LT((apply_weighted(OperatorKind::IPlusMuTb, across, mu, bath) - across).max_abs(), 1e-12);
  EXPECT_LT((apply_weighted(OperatorKind::HbA, along, mu, bath) - (1 + mu * k2) * along).max_abs(), 1e-11);
}

TEST(Operators, DenseFlatOperatorIsCirculantWithTheSymbol) {
  const Grid g = grid1(16, 2 * pi);
  const double mu = 0.3;
  const DenseOperator m = assemble_dense(DenseKind::IPlusMuTb, mu, flat(g));
  // Eigenvalues of a circulant are its symbol: 1 + mu m^2/3 over the derivative symbol.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m.entries + m.entries.transpose()));
  const auto sym = g.derivative_symbol(0);
  double lo = INFINITY, hi = 0;
  for (double s : sym) {
    lo = std::min(lo, 1 + mu * s * s / 3);
    hi = std::max(hi, 1 + mu * s * s / 3);
  }
  EXPECT_NEAR(eig.eigenvalues().minCoeff(), lo, 1e-12);
  EXPECT_NEAR(eig.eigenvalues().maxCoeff(), hi, 1e-12);
  EXPECT_LT((m.entries - m.entries.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  // Circulant: each row is the previous one shifted.
  for (int i = 1; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) EXPECT_NEAR(m.entries(i, j), m.entries(0, (j - i + 16) % 16), 1e-14);
  }
}

TEST(Operators, IdentityAssembly) {
  const Grid g = grid1(8, 2 * pi);
  const DenseOperator m = assemble_dense(DenseKind::Identity, 0.0, flat(g));
  EXPECT_TRUE(m.entries.isIdentity(0.0));
  const auto [lo, hi] = eig_extrema(m, m);
  EXPECT_NEAR(lo, 1.0, 1e-14);
  EXPECT_NEAR(hi, 1.0, 1e-14);
}

TEST(Operators, DenseAssemblyLimits) {
  const Grid big = grid2(64, 2 * pi, 1.0);
  try {
    assemble_dense(DenseKind::Identity, 0.0, flat(big));
    FAIL() << "expected SizeLimit";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SizeLimit);
  }
  const Grid g = grid1(8, 2 * pi);
  DenseOperator bad{16, Eigen::MatrixXd::Zero(16, 16)};
  const DenseOperator id = assemble_dense(DenseKind::Identity, 0.0, flat(g));
  try {
    eig_extrema(id, DenseOperator{8, -Eigen::MatrixXd::Identity(8, 8)});
    FAIL() << "expected NotSPD";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSPD);
  }
  (void)bad;
}

class BumpOperators : public ::testing::TestWithParam<int> {
 protected:
  Grid grid() const { return GetParam() == 1 ? grid1(32, 8 * pi) : grid2(16, 8 * pi, 0.8); }
};

TEST_P(BumpOperators, MatrixFreeMatchesDenseAndIsSymmetric) {
  const Grid g = grid();
  const Bathymetry bath = bump(g, 0.5);
  std::mt19937_64 rng(17);
  for (OperatorKind kind : kAllKinds) {
    const DenseOperator m = assemble_dense([&](const VecField& v) { return apply_weighted(kind, v, 0.1, bath); }, g);
    const double scale = m.entries.cwiseAbs().maxCoeff();
    EXPECT_LE((m.entries - m.entries.transpose()).cwiseAbs().maxCoeff() / scale, 1e-12) << to_string(kind);
    for (int t = 0; t < 20; ++t) {
      const VecField v = random_vecfield(g, rng);
      const Eigen::VectorXd a = m.entries * flatten(v);
      const Eigen::VectorXd b = flatten(apply_weighted(kind, v, 0.1, bath));
      EXPECT_LE((a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST_P(BumpOperators, DenseAndIterativeSolvesAgree) {
  const Grid g = grid();
  const Bathymetry bath = bump(g, 0.5);
  SolverOptions cg_opts;
  cg_opts.strategy = SolverOptions::Strategy::Iterative;
  std::mt19937_64 rng(23);
  for (OperatorKind kind : kAllKinds) {
    const OperatorHandle dense(kind, 0.1, bath);
    const OperatorHandle cg(kind, 0.1, bath, cg_opts);
    EXPECT_EQ(dense.method(), "dense-cholesky");
    EXPECT_EQ(cg.method(), "pcg");
    const VecField rhs = random_vecfield(g, rng);
    SolveStats stats;
    const VecField a = dense.solve(rhs);
    const VecField b = cg.solve(rhs, &stats);
    EXPECT_LE((a - b).max_abs() / a.max_abs(), 1e-9);
    EXPECT_LE(norm_l2(dense.apply(a) - rhs) / norm_l2(rhs), 1e-12);
    EXPECT_LE(stats.relative_residual, 1e-10);
    EXPECT_GT(stats.iterations, 0);
  }
}

TEST_P(BumpOperators, CoercivityAgainstReferenceNorms) {
  const Grid g = grid();
  const Bathymetry bath = bump(g, 0.5);
  for (OperatorKind kind : kAllKinds) {
    const CoercivityReport r = coercivity_report(OperatorHandle(kind, 0.1, bath), 10, 3);
    EXPECT_TRUE(r.positive) << to_string(kind);
    ASSERT_TRUE(r.dense_min.has_value());
    EXPECT_GT(*r.dense_min, 0.0);
    EXPECT_LE(*r.dense_min, r.min_quotient * (1 + 1e-12));
    EXPECT_GE(*r.dense_max, r.max_quotient * (1 - 1e-12));
    EXPECT_LE(r.symmetry_residual, 1e-12);
    EXPECT_LE(r.inverse_residual, 1e-10);
    EXPECT_EQ(r.norm, kind == OperatorKind::HbB ? "H1" : "X0");
  }
}

INSTANTIATE_TEST_SUITE_P(Dims, BumpOperators, ::testing::Values(1, 2));

TEST(Operators, FlatBottomQuotientsHaveClosedForms) {
  // h_b A equals the X^0 Gram on a flat bottom; h_b(I + mu T_b) sits between
  // (1 + mu k^2/3)/(1 + mu k^2) at the largest resolved k and 1.
  const Grid g = grid1(32, 2 * pi);
  const double mu = 0.1;
  const Bathymetry bath = flat(g);
  const DenseOperator gram = assemble_dense(DenseKind::GramX0, mu, bath);
  const auto [alo, ahi] = eig_extrema(assemble_dense(DenseKind::HbA, mu, bath), gram);
  EXPECT_NEAR(alo, 1.0, 1e-12);
  EXPECT_NEAR(ahi, 1.0, 1e-12);
  const double kmax2 = 15.0 * 15.0;
  const auto [tlo, thi] = eig_extrema(assemble_dense(DenseKind::WeightedIPlusMuTb, mu, bath), gram);
  EXPECT_NEAR(tlo, (1 + mu * kmax2 / 3) / (1 + mu * kmax2), 1e-12);
  EXPECT_NEAR(thi, 1.0, 1e-12);
}

TEST(Operators, FlatBottomWithoutDispersionHasUnitQuotient) {
  const Grid g = grid1(16, 2 * pi);
  const Bathymetry bath = flat(g);
  const auto [lo, hi] = eig_extrema(assemble_dense(DenseKind::WeightedIPlusMuTb, 0.0, bath),
                                    assemble_dense(DenseKind::GramX0, 0.0, bath));
  EXPECT_NEAR(lo, 1.0, 1e-13);
  EXPECT_NEAR(hi, 1.0, 1e-13);
}

TEST(Operators, FlatWeightedBAgainstH1Gram) {
  // Per mode: (1 + 4 mu k^2/3) / (1 + k^2), smallest at the largest resolved k, 1 at k = 0.
  const Grid g = grid1(32, 2 * pi);
  const double mu = 0.1, kmax2 = 15.0 * 15.0;
  const Bathymetry bath = flat(g);
  const auto [lo, hi] = eig_extrema(assemble_dense(DenseKind::HbB, mu, bath), assemble_dense(DenseKind::GramH1, mu, bath));
  EXPECT_NEAR(lo, (1 + 4 * mu * kmax2 / 3) / (1 + kmax2), 1e-12);
  EXPECT_NEAR(hi, 1.0, 1e-12);
  EXPECT_GE(lo, mu / (1 + mu));
}

TEST(Operators, FlatSolveIsExactFourierInverse) {
  const Grid g = grid2(32, 2 * pi, 0.5);
  const Bathymetry bath = flat(g);
  std::mt19937_64 rng(31);
  for (OperatorKind kind : kAllKinds) {
    const OperatorHandle h(kind, 0.3, bath);
    EXPECT_EQ(h.method(), "fourier");
    const VecField rhs = random_vecfield(g, rng);
    EXPECT_LE(norm_l2(h.apply(h.solve(rhs)) - rhs) / norm_l2(rhs), 1e-13);
  }
}

TEST(Operators, WeightedAInverseOfWeightedGradientIsCurlFree) {
  // (h_b A)^-1 (h_b grad f) is a gradient up to rounding: its perp-divergence vanishes.
  const Grid g = grid2(16, 8 * pi, 0.9);
  const Bathymetry bath = bump(g, 0.5);
  const OperatorHandle h(OperatorKind::HbA, 0.1, bath);
  std::mt19937_64 rng(41);
  const Field f = mollify(random_field(g, rng), 0.5, -1);
  const VecField v = solve_hbA(bath.h_b() * grad_gamma(f), h);
  EXPECT_LE(perp_div(v).max_abs() / div_gamma(v).max_abs(), 1e-10);
}

TEST(Operators, UnweightedOperatorsDivideByDepth) {
  const Grid g = grid1(32, 8 * pi);
  const Bathymetry bath = bump(g, 0.5);
  std::mt19937_64 rng(43);
  const VecField v = random_vecfield(g, rng);
  EXPECT_LT((bath.h_b() * apply_A(v, 0.1, bath) - apply_weighted(OperatorKind::HbA, v, 0.1, bath)).max_abs(), 1e-12);
  EXPECT_LT((bath.h_b() * apply_B(v, 0.1, bath) - apply_weighted(OperatorKind::HbB, v, 0.1, bath)).max_abs(), 1e-12);
  const VecField w = v + 0.1 * apply_Tb(v, bath);
  const OperatorHandle h(OperatorKind::IPlusMuTb, 0.1, bath);
  EXPECT_LE((solve_I_plus_muTb(w, h) - v).max_abs() / v.max_abs(), 1e-10);
}

TEST(Operators, HandlesRejectWrongKinds) {
  const Grid g = grid1(16, 2 * pi);
  const OperatorHandle h(OperatorKind::HbA, 0.1, flat(g));
  EXPECT_THROW(solve_hbB(VecField(g), h), Error);
  EXPECT_THROW(OperatorHandle(OperatorKind::HbA, -1.0, flat(g)), Error);
  EXPECT_EQ(operator_kind_from_string("hbB"), OperatorKind::HbB);
  EXPECT_THROW(operator_kind_from_string("nope"), Error);
}

TEST(Operators, IterativeSolverReportsStall) {
  const Grid g = grid1(64, 8 * pi);
  SolverOptions o;
  o.strategy = SolverOptions::Strategy::Iterative;
  o.max_iterations = 1;
  o.tolerance = 1e-14;
  const OperatorHandle h(OperatorKind::HbB, 0.1, bump(g, 0.8), o);
  std::mt19937_64 rng(5);
  try {
    h.solve(random_vecfield(g, rng));
    FAIL() << "expected SolverDivergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SolverDivergence);
  }
}

}  // namespace
