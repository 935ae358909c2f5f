#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bplab/bathymetry.hpp"
#include "bplab/errors.hpp"
#include "bplab/verification.hpp"

namespace {

using namespace bplab;
constexpr double pi = std::numbers::pi;

Grid grid1(int n, double L) { return Grid(GridSpec{1, {n, 1}, {L, 1.0}, 1.0}); }

TEST(Bathymetry, DepthAndCertificate) {
  const Grid g = grid1(128, 20 * pi);
  const Bathymetry bath = build_bathymetry(profile::GaussianBump{{10 * pi, 0}, 4.0, 1.0}, 0.5, g);
  EXPECT_NEAR(bath.h_min(), 0.5, 1e-12);
  EXPECT_NEAR(bath.h_max(), 1.0, 1e-9);
  EXPECT_FALSE(bath.is_flat());
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(bath.h_b()[i], 1 - 0.5 * bath.b()[i], 1e-15);
    EXPECT_NEAR(bath.inv_h_b()[i] * bath.h_b()[i], 1.0, 1e-15);
    EXPECT_NEAR(bath.h_b_cubed()[i], std::pow(bath.h_b()[i], 3), 1e-14);
  }
}

TEST(Bathymetry, GaussianUsesNearestPeriodicImage) {
  const double L = 10.0;
  const Grid g = grid1(64, L);
  const Field b = sample_profile(profile::GaussianBump{{0.0, 0}, 1.0, 1.0}, g);
  // Nodes just left of L are close to the bump at 0.
  EXPECT_NEAR(b[63], std::exp(-std::pow(L / 64, 2)), 1e-12);
  EXPECT_NEAR(b[1], b[63], 1e-14);
}

TEST(Bathymetry, RejectsDryOrInvalidBottoms) {
  const Grid g = grid1(64, 2 * pi);
  EXPECT_THROW(build_bathymetry(profile::Sinusoidal{1, 1.0}, 1.0, g), Error);
  try {
    build_bathymetry(profile::Sinusoidal{1, 1.0}, 1.0, g);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonpositiveDepth);
  }
  EXPECT_THROW(build_bathymetry(profile::Flat{}, 1.2, g), Error);
  EXPECT_THROW(build_bathymetry(profile::Flat{}, -0.1, g), Error);
}

TEST(Bathymetry, WaterHeightFlagsDryStates) {
  const Grid g = grid1(32, 2 * pi);
  const Bathymetry bath = build_bathymetry(profile::Sinusoidal{1, 1.0}, 0.5, g);
  const Field zeta(g, -20.0);
  EXPECT_TRUE(water_height(zeta, 0.1, bath).dry);
  EXPECT_FALSE(water_height(Field(g, 0.0), 0.1, bath).dry);
}

class QTransform : public ::testing::Test {
 protected:
  Grid g = grid1(128, 20 * pi);
  Bathymetry bath = build_bathymetry(profile::GaussianBump{{10 * pi, 0}, 3.0, 1.0}, 0.8, g);
};

TEST_F(QTransform, RoundTripsOnRandomAdmissibleStates) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double eps = std::pow(10.0, -3 + 3 * unit(rng));
    // Keep 1 + eps zeta / h_b >= 0.15.
    Field zeta(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double lo = -0.85 * bath.h_b()[i] / eps;
      zeta[i] = lo + (2.0 / eps - lo) * unit(rng);
    }
    const Field q = zeta_to_q(zeta, eps, bath);
    const Field back = q_to_zeta(q, eps, bath);
    EXPECT_LE((back - zeta).max_abs() / zeta.max_abs(), 1e-12);
    const Field q2 = zeta_to_q(q_to_zeta(q, eps, bath), eps, bath);
    EXPECT_LE((q2 - q).max_abs() / q.max_abs(), 1e-12);
    const Field factor = q_positivity_factor(zeta, eps, bath);
    EXPECT_GT(factor.min(), 0.0);
    EXPECT_LE((factor * zeta - q).max_abs() / q.max_abs(), 1e-12);
  }
}

TEST_F(QTransform, SmallEpsLimitIsLinear) {
  const Field zeta = Field::sample(g, [](double x, double) { return std::sin(x); });
  const Field q0 = zeta_to_q(zeta, 0.0, bath);
  EXPECT_LT((q0 - zeta / bath.h_b()).max_abs(), 1e-15);
  EXPECT_LT((zeta_to_q(zeta, 1e-9, bath) - q0).max_abs(), 1e-8);
  EXPECT_LT((q_to_zeta(q0, 0.0, bath) - zeta).max_abs(), 1e-15);
}

TEST_F(QTransform, PositivityFactorNearZeroUsesSeries) {
  const Field zeta(g, 1e-9);
  const Field factor = q_positivity_factor(zeta, 1.0, bath);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(factor[i] * bath.h_b()[i], 1.0, 1e-8);
}

TEST_F(QTransform, LogDomainAndMarginWarning) {
  Field zeta(g, 0.0);
  zeta[5] = -2.0 * bath.h_b()[5] / 0.5;
  try {
    zeta_to_q(zeta, 0.5, bath);
    FAIL() << "expected LogDomain";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LogDomain);
  }
  zeta[5] = -0.95 * bath.h_b()[5] / 0.5;
  WarningLog log;
  EXPECT_NO_THROW(zeta_to_q(zeta, 0.5, bath, &log));
  ASSERT_FALSE(log.empty());
  EXPECT_NEAR(log.front().value, 0.05, 1e-12);
  EXPECT_NEAR(admissibility_margin(zeta, 0.5, bath), 0.05, 1e-12);
}

}  // namespace
