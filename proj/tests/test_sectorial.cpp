#include <gtest/gtest.h>

#include "qnrlab/sectorial.hpp"

using namespace qnrlab;

namespace {

CMatrix diag2(cplx a, cplx b) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

const CMatrix kDiagPm = diag2({1, 1}, {1, -1});

}  // namespace

TEST(SectorAngle, Examples) {
  EXPECT_NEAR(sector_angle(identity(3)).alpha_min, 0.0, 1e-15);
  const SectorCert c = sector_angle(kDiagPm);
  EXPECT_NEAR(c.alpha_min, kPi / 4, 1e-14);
  EXPECT_NEAR(c.rho, 1.0, 1e-14);
  EXPECT_NEAR(c.re_min_eig, 1.0, 1e-14);
  Rng rng(1);
  EXPECT_NEAR(sector_angle(random_pd(rng, 4)).alpha_min, 0.0, 1e-12);
  try {
    sector_angle(CMatrix(-identity(2)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotAccretive);
  }
}

TEST(SectorAngle, IsTightAndUnitarilyInvariant) {
  Rng rng(2);
  for (int k = 0; k < 50; ++k) {
    const CMatrix a = random_pd(rng, 4) + kI * random_hermitian(rng, 4);
    const double al = sector_angle(a).alpha_min;
    EXPECT_TRUE(is_in_sector(a, al + 1e-6));
    EXPECT_FALSE(is_in_sector(a, al - 1e-6));
    const CMatrix u = rng.unitary(4);
    EXPECT_NEAR(sector_angle(u.adjoint() * a * u).alpha_min, al, 1e-9);
  }
}

TEST(IsInSector, Examples) {
  EXPECT_TRUE(is_in_sector(kDiagPm, kPi / 4));
  EXPECT_FALSE(is_in_sector(kDiagPm, kPi / 6));
  for (double a : {0.0, 0.5, 1.5}) EXPECT_FALSE(is_in_sector(CMatrix(-identity(2)), a));
}

TEST(NumrangeSupport, Examples) {
  SupportPoint s = numrange_support(identity(2), 0.7);
  EXPECT_NEAR(s.support, std::cos(0.7), 1e-14);  // Re(e^{-i theta}) for the point 1
  s = numrange_support(identity(2), 0.0);
  EXPECT_NEAR(s.support, 1.0, 1e-14);
  EXPECT_LT(std::abs(s.boundary_point - 1.0), 1e-14);
  EXPECT_NEAR(numrange_support(kDiagPm, 0.0).support, 1.0, 1e-14);
  CMatrix j = CMatrix::Zero(2, 2);
  j(0, 1) = 1.0;
  EXPECT_NEAR(numrange_support(j, 0.0).support, 0.5, 1e-14);
}

TEST(NumrangeSupport, BoundaryPointAttainsSupport) {
  Rng rng(3);
  const CMatrix t = rng.ginibre(4, 4);
  for (int k = 0; k < 16; ++k) {
    const double th = 2 * kPi * k / 16;
    const SupportPoint s = numrange_support(t, th);
    EXPECT_NEAR((std::polar(1.0, -th) * s.boundary_point).real(), s.support, 1e-12);
  }
}

TEST(Gen, Examples) {
  const CMatrix p = std::get<CMatrix>(gen({GenKind::psd, 3, 0.0, 2, 7}));
  const RVector ev = herm_eigenvalues(p);
  EXPECT_NEAR(ev(0), 0.0, 1e-12);
  EXPECT_GT(ev(1), 1e-6);
  EXPECT_GT(ev(2), 1e-6);

  const CMatrix s = std::get<CMatrix>(gen({GenKind::sectorial, 4, kPi / 6, std::nullopt, 1}));
  EXPECT_LE(sector_angle(s).alpha_min, kPi / 6 + 1e-9);

  const CMatrix h = std::get<CMatrix>(gen({GenKind::sectorial, 3, 0.0, std::nullopt, 2}));
  EXPECT_LT(im_part(h).norm(), 1e-14);
  EXPECT_GT(lambda_min(re_part(h)), 0.0);
}

TEST(Gen, InvalidSpecs) {
  auto code = [](GenSpec spec) {
    try {
      gen(spec);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::InvalidArgument;
  };
  EXPECT_EQ(code({GenKind::psd, 1, 0.0, std::nullopt, 0}), Errc::InvalidSpec);
  EXPECT_EQ(code({GenKind::sectorial, 3, kPi / 2, std::nullopt, 0}), Errc::InvalidSpec);
  EXPECT_EQ(code({GenKind::sectorial, 3, -0.1, std::nullopt, 0}), Errc::InvalidSpec);
  EXPECT_EQ(code({GenKind::psd, 3, 0.0, 4, 0}), Errc::InvalidSpec);
}

TEST(Gen, SectorialDrawsStayInSector) {
  const double alphas[] = {0.0, kPi / 8, kPi / 4, kPi / 3};
  for (int k = 0; k < 1000; ++k) {
    const double al = alphas[k % 4];
    const CMatrix a = std::get<CMatrix>(gen({GenKind::sectorial, 2 + k % 3, al, std::nullopt, std::uint64_t(k)}));
    EXPECT_LE(sector_angle(a).alpha_min, al + 1e-9);
  }
}

TEST(Gen, DominatedQuadruple) {
  for (int k = 0; k < 50; ++k) {
    const double al = 0.2 + 0.02 * k;
    const Quadruple q = std::get<Quadruple>(gen({GenKind::dominated_quadruple, 3, al, std::nullopt, std::uint64_t(k)}));
    for (const CMatrix& m : q) EXPECT_LE(sector_angle(m).alpha_min, al + 1e-9);
    EXPECT_GE(lambda_min(re_part(q[2]) - re_part(q[0])), -1e-12);
    EXPECT_GE(lambda_min(re_part(q[3]) - re_part(q[1])), -1e-12);
  }
}

TEST(Gen, DeterministicAndKindsParse) {
  const GenSpec spec{GenKind::ginibre, 3, 0.0, std::nullopt, 99};
  EXPECT_EQ(std::get<CMatrix>(gen(spec)), std::get<CMatrix>(gen(spec)));
  for (auto name : {"psd", "sectorial", "accretive", "hermitian", "ginibre", "dominated_quadruple"}) {
    const auto k = parse_gen_kind(name);
    ASSERT_TRUE(k);
    EXPECT_EQ(to_string(*k), name);
  }
  EXPECT_FALSE(parse_gen_kind("normal"));
  const CMatrix acc = std::get<CMatrix>(gen({GenKind::accretive, 4, 0.0, std::nullopt, 5}));
  EXPECT_TRUE(is_accretive(acc));
}

TEST(ProjectToSector, LandsInSector) {
  Rng rng(4);
  for (int k = 0; k < 20; ++k) {
    const CMatrix x = rng.ginibre(3, 3);
    const double al = 0.1 + 0.05 * k;
    const CMatrix p = project_to_sector(x, al);
    EXPECT_LE(sector_angle(p).alpha_min, al + 1e-9);
  }
}
