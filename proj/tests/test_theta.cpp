#include "ellhecke/theta.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ellhecke;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace

TEST(Theta, VanishesAtZero) {
  EXPECT_EQ(theta(cplx{0.0}, ThetaParams()), cplx{0.0});
}

TEST(Theta, Odd) {
  const ThetaParams p(cplx{0.0, 0.8});
  const cplx x{0.31, 0.07};
  EXPECT_LT(rel(theta(-x, p), -theta(x, p)), 1e-12);
}

TEST(Theta, PeriodOneFlipsSign) {
  const ThetaParams p(cplx{0.0, 0.7});
  EXPECT_LT(rel(theta(cplx{1.13}, p), -theta(cplx{0.13}, p)), 1e-12);
}

// Reference values from mpmath at 30 digits:
// jtheta(1, pi x, exp(pi i tau)) / (pi * d/dx jtheta(1, x, q)|_0).
TEST(Theta, ReferenceValues) {
  const cplx a = theta(cplx{0.2, 0.1}, ThetaParams(cplx{0.0, 0.9}));
  EXPECT_LT(rel(a, cplx{0.19690849126061291617, 0.083490502160178108519}), 1e-13);
  const cplx b = theta(cplx{0.31, 0.07}, ThetaParams(cplx{0.0, 0.8}));
  EXPECT_LT(rel(b, cplx{0.27450404505476331728, 0.041933535377925336993}), 1e-13);
}

TEST(Theta, QuasiPeriodic) {
  for (cplx tau : {cplx{0.0, 0.75}, cplx{0.5, 0.9}}) {
    const ThetaParams p(tau);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int k = 0; k < 50; ++k) {
      const cplx x{u(rng), u(rng)};
      const cplx expected = -std::exp(-pi * I * tau - 2.0 * pi * I * x) * theta(x, p);
      EXPECT_LT(rel(theta(x + tau, p), expected), 1e-10) << "x = " << x;
    }
  }
}

TEST(Theta, DerivativeAtZero) {
  EXPECT_LT(std::abs(theta_derivative_at_zero(ThetaParams(cplx{0.0, 0.8})) - 1.0), 1e-8);
  EXPECT_LT(std::abs(theta_derivative_at_zero(ThetaParams(cplx{0.5, 0.9})) - 1.0), 1e-8);
  EXPECT_LT(std::abs(theta_derivative_at_zero(ThetaParams(cplx{0.0, 2.0}, 8)) - 1.0), 1e-10);
}

TEST(Theta, SimpleZeroAtLatticePoints) {
  const ThetaParams p;
  for (int k = 0; k < 6; ++k) {
    const cplx x = cplx{1.0, 1.0} * 1e-5 * std::ldexp(1.0, -k);
    EXPECT_NEAR(std::abs(theta(x, p) / x - 1.0), 0.0, 1e-9);
  }
  // Zero at tau: theta(tau + x) ~ -e^{-3 pi i tau} x.
  const cplx x{1e-7, 0.0};
  const cplx slope = theta(p.tau() + x, p) / x;
  EXPECT_LT(rel(slope, -std::exp(-pi * I * p.tau())), 1e-5);
}

TEST(Theta, TruncationConsistency) {
  const ThetaParams p(cplx{0.0, 0.75}, 64);
  const ThetaParams p2 = p.with_truncation(128);
  EXPECT_LT(p.tail_bound(), p.tol_abs());
  for (cplx x : {cplx{0.2, 0.3}, cplx{-0.4, 0.6}, cplx{0.9, -0.2}})
    EXPECT_LT(std::abs(theta(x, p) - theta(x, p2)), p.tol_abs());
}

TEST(Theta, RejectsBadParameters) {
  EXPECT_THROW(ThetaParams(cplx{0.0, -1.0}), std::domain_error);
  EXPECT_THROW(ThetaParams(cplx{0.0, 0.0}), std::domain_error);
  EXPECT_THROW(ThetaParams(cplx{0.0, 0.5}, 0), std::domain_error);
  EXPECT_THROW(ThetaParams(cplx{std::nan(""), 0.5}), std::domain_error);
}

TEST(Theta, RangeErrorFarFromRealAxis) {
  const ThetaParams p(cplx{0.0, 0.75}, 8);
  EXPECT_THROW(theta(cplx{0.1, 50.0}, p), ThetaRangeError);
  EXPECT_THROW(theta(cplx{0.1, std::numeric_limits<double>::infinity()}, p), std::domain_error);
}
