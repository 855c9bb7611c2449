#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "qnrlab/qnr.hpp"

using namespace qnrlab;

namespace {

CMatrix jordan() {
  CMatrix t = CMatrix::Zero(2, 2);
  t(0, 1) = 1.0;
  return t;
}

CMatrix flip() {
  CMatrix t = CMatrix::Zero(2, 2);
  t(0, 1) = t(1, 0) = 1.0;
  return t;
}

SolverCfg seeded(std::uint64_t seed, int oracle = 0) {
  SolverCfg c;
  c.seed = seed;
  c.oracle_samples = oracle;
  return c;
}

}  // namespace

TEST(QParam, Domain) {
  EXPECT_NO_THROW(QParam(1.0));
  EXPECT_NO_THROW(QParam(cplx(0.6, 0.8)));
  EXPECT_THROW(QParam(1.01), Error);
  EXPECT_THROW(QParam(cplx(std::nan(""), 0.0)), Error);
  EXPECT_EQ(QParam(1.0).orth_weight(), 0.0);
  EXPECT_EQ(QParam(cplx(0.6, 0.8)).orth_weight(), 0.0);
  EXPECT_NEAR(QParam(0.6).orth_weight(), 0.8, 1e-15);
}

TEST(QObjective, Examples) {
  Rng rng(1);
  const CVector x = rng.unit_vector(3);
  EXPECT_NEAR(q_objective({identity(3)}, x, 0.6), 0.6, 1e-14);

  CVector e1 = CVector::Zero(2);
  e1(0) = 1.0;
  EXPECT_NEAR(q_objective({jordan()}, e1, 0.0), 0.0, 1e-15);  // T e1 = 0
  CVector e2 = CVector::Zero(2);
  e2(1) = 1.0;
  EXPECT_NEAR(q_objective({jordan()}, e2, 0.0), 1.0, 1e-15);

  const double q = 0.6;
  const double th = 0.5 * std::asin(q);
  CVector x2(2);
  x2 << std::cos(th), std::sin(th);
  EXPECT_NEAR(q_objective({flip()}, x2, q), 1.0, 1e-14);
}

TEST(QObjective, Errors) {
  CMatrix one = CMatrix::Ones(1, 1);
  CVector x = CVector::Ones(1);
  try {
    q_objective({one}, x, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DimensionTooSmall);
  }
  EXPECT_NEAR(q_objective({one}, x, 1.0), 1.0, 1e-15);
  EXPECT_THROW(q_objective({identity(2)}, CVector::Ones(2), 0.5), Error);
}

TEST(QObjective, MatchesSampledPairs) {
  // The closed form must dominate every sampled z and be approached by the best one.
  std::mt19937_64 g(77);
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 2;
    const CMatrix t = rng.ginibre(n, n);
    const double q = 0.1 + 0.04 * trial;
    const CVector x = rng.unit_vector(n);
    const double closed = q_objective({t}, x, q);
    double best = 0.0;
    for (int k = 0; k < 20000; ++k) {
      const double v = oracle::pair_value(t, x, oracle::random_unit(g, n), q);
      EXPECT_LE(v, closed + 1e-12);
      best = std::max(best, v);
    }
    if (n == 2) EXPECT_NEAR(best, closed, 1e-6);
    else EXPECT_NEAR(best, closed, 5e-3 * closed);
  }
}

TEST(QRadius, Examples) {
  EXPECT_NEAR(q_radius(identity(2), 0.3).value, 0.3, 1e-12);
  EXPECT_NEAR(q_radius(jordan(), 0.6).value, 0.9, 1e-9);
  EXPECT_NEAR(q_radius(flip(), 0.6).value, 1.0, 1e-9);

  CMatrix a = CMatrix::Zero(3, 3);
  a(0, 0) = a(1, 1) = 1.0;
  CMatrix t = CMatrix::Zero(3, 3);
  t(0, 1) = t(1, 0) = 1.0;
  t(2, 2) = 5.0;
  EXPECT_NEAR(q_radius(build_space(a), t, 0.6).value, 1.0, 1e-9);
}

TEST(QRadius, JordanCurve) {
  for (double q : {0.0, 0.2, 0.5, 0.8, 0.95, 1.0}) {
    EXPECT_NEAR(q_radius(jordan(), q).value, oracle::jordan_wq(q), 1e-9) << "q=" << q;
  }
}

TEST(QRadius, Errors) {
  CMatrix swap = CMatrix::Zero(3, 3);
  swap(0, 2) = swap(2, 0) = swap(1, 1) = 1.0;
  CMatrix a = CMatrix::Zero(3, 3);
  a(0, 0) = a(1, 1) = 1.0;
  try {
    q_radius(build_space(a), swap, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotABounded);
  }
  try {
    q_radius(CMatrix::Ones(1, 1), 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DimensionTooSmall);
  }
}

TEST(QRadius, WitnessInvariants) {
  Rng rng(4);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 3 + trial % 2;
    const SemiSpace sp = build_space(random_psd(rng, n, n - 1));
    CMatrix t = rng.ginibre(n, n);
    t -= sp.proj * t * (identity(n) - sp.proj);
    const cplx q = std::polar(0.3 + 0.05 * trial, 0.4 * trial);
    const QNRResult r = q_radius(sp, t, q, seeded(trial, 2000));
    EXPECT_NEAR(a_norm(sp, r.witness.x), 1.0, 1e-9);
    EXPECT_NEAR(a_norm(sp, r.witness.y), 1.0, 1e-9);
    EXPECT_LT(std::abs(a_inner(sp, r.witness.x, r.witness.y) - q), 1e-9);
    EXPECT_NEAR(std::abs(a_inner(sp, CVector(t * r.witness.x), r.witness.y)), r.value, 1e-9);
    EXPECT_LE(r.oracle_lower, r.value + 1e-9);
    EXPECT_LE(r.value, a_op_norm(sp, t) + 1e-9);
  }
}

TEST(QRadius, PhaseInvarianceAndHomogeneity) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix t = rng.ginibre(3, 3);
    const double m = 0.2 + 0.07 * trial;
    const double base = q_radius(t, m, seeded(1)).value;
    EXPECT_NEAR(q_radius(t, std::polar(m, 1.1 + trial), seeded(2)).value, base, 1e-8);
    const cplx c(1.5, -0.7);
    EXPECT_NEAR(q_radius(CMatrix(c * t), m, seeded(3)).value, std::abs(c) * base, 1e-8 * std::abs(c) * base);
  }
}

TEST(QRadius, CompressionConsistency) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const SemiSpace sp = build_space(random_psd(rng, 4, 2 + trial % 3));
    CMatrix t = rng.ginibre(4, 4);
    t -= sp.proj * t * (identity(4) - sp.proj);
    const double direct = q_radius(sp, t, 0.55, seeded(9)).value;
    const double comp = q_radius(compress(sp, t).mat, 0.55, seeded(9)).value;
    EXPECT_NEAR(direct, comp, 1e-9);
  }
}

TEST(QRadius, DeterministicForSeed) {
  Rng rng(7);
  const CMatrix t = rng.ginibre(4, 4);
  const QNRResult a = q_radius(t, 0.4, seeded(123, 500));
  const QNRResult b = q_radius(t, 0.4, seeded(123, 500));
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.oracle_lower, b.oracle_lower);
  EXPECT_EQ(a.witness.x, b.witness.x);
}

TEST(QRadius, DominatesRefinedOracle) {
  Rng rng(8);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 2 + trial % 2;
    const CMatrix t = rng.ginibre(n, n);
    const double q = 0.15 + 0.1 * trial;
    const double v = q_radius(t, q, seeded(trial)).value;
    const double o = oracle::sample_pairs_refined(t, q, 40000, 1000 + trial);
    EXPECT_LE(o, v + 1e-9);
    EXPECT_LE(v - o, 1e-3 * v);
  }
}

TEST(ClassicalRadius, Examples) {
  EXPECT_NEAR(classical_radius(jordan()), 0.5, 1e-12);
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = -3.0, d(1, 1) = 2.0;
  EXPECT_NEAR(classical_radius(d), 3.0, 1e-12);
  EXPECT_NEAR(classical_radius(identity(3)), 1.0, 1e-12);
}

TEST(ClassicalRadius, AgreesWithUnitQ) {
  Rng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix t = rng.ginibre(3, 3);
    EXPECT_NEAR(classical_radius(t), q_radius(t, 1.0, seeded(trial)).value, 1e-8);
    const double w = classical_radius(t);
    EXPECT_LE(w, spectral_norm(t) + 1e-12);
    EXPECT_GE(w, 0.5 * spectral_norm(t) - 1e-12);
  }
}

TEST(QRangeSample, Examples) {
  const PointCloud id = q_range_sample(identity(2), 0.5, 50, 3);
  ASSERT_EQ(id.points.size(), 50u);
  for (cplx p : id.points) EXPECT_LT(std::abs(p - 0.5), 1e-12);

  const PointCloud j = q_range_sample(jordan(), 1.0, 400, 4);
  for (cplx p : j.points) EXPECT_LE(std::abs(p), 0.5 + 1e-9);

  EXPECT_TRUE(q_range_sample(jordan(), 0.5, 0, 1).points.empty());
}

TEST(QRangeSample, PointsBoundedByRadiusAndHullConvex) {
  Rng rng(11);
  const CMatrix t = rng.ginibre(3, 3);
  const double q = 0.7;
  const double w = q_radius(t, q).value;
  const PointCloud c = q_range_sample(t, q, 600, 5);
  for (cplx p : c.points) EXPECT_LE(std::abs(p), w + 1e-9);
  ASSERT_GE(c.hull.size(), 3u);
  for (std::size_t i = 0; i < c.hull.size(); ++i) {
    const cplx a = c.points[c.hull[i]];
    const cplx b = c.points[c.hull[(i + 1) % c.hull.size()]];
    for (cplx p : c.points) {
      const double cr = (b.real() - a.real()) * (p.imag() - a.imag()) - (b.imag() - a.imag()) * (p.real() - a.real());
      EXPECT_GE(cr, -1e-9);
    }
  }
  // directional samples reach the radius closely
  double far = 0.0;
  for (cplx p : c.points) far = std::max(far, std::abs(p));
  EXPECT_GT(far, 0.97 * w);
}

TEST(QRangeSample, CsvLayout) {
  const PointCloud c = q_range_sample(jordan(), 0.5, 12, 1);
  std::ostringstream os;
  write_point_cloud_csv(os, c);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "re,im,on_hull");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 12);
}

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5, 0.9}) EXPECT_EQ(std::stod(format_double(v)), v);
}
