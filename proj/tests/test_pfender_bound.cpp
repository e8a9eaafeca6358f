#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "codebound/pfender_bound.hpp"
#include "catalog.hpp"
#include "oracles.hpp"

using namespace codebound;

namespace {

PhiSpec g1(int dim) { return PhiSpec::gegenbauer(dim, {0.0, 1.0}); }

PhiSpec square_minus(int d) { return PhiSpec::monomial({-1.0 / d, 0.0, 1.0}); }

}  // namespace

TEST(PfenderBound, TetrahedronExample) {
  const auto cert = pfender_bound(g1(3), 1.0 / 3.0, -1.0 / 3.0);
  EXPECT_TRUE(cert.verification.verified) << cert.verification.reason;
  EXPECT_NEAR(cert.bound_real, 4.0, 1e-12);
  EXPECT_EQ(cert.bound_int, 4);
  // the regular tetrahedron meets it
  const auto s = generate("simplex", 3);
  EXPECT_EQ(s.size(), 4u);
}

TEST(PfenderBound, SpecialCaseClause) {
  // phi = 0.5 G_1, phi(1) = 0.5, c = 0.25; phi + c = 0.5 r + 0.25 <= 0 on [-1, -0.5]
  const auto cert = pfender_bound(PhiSpec::gegenbauer(3, {0.0, 0.5}), 0.25, -0.5);
  EXPECT_TRUE(cert.verification.verified) << cert.verification.reason;
  EXPECT_NEAR(cert.bound_real, 3.0, 1e-12);
  EXPECT_TRUE(cert.verification.special_case_applies);
  EXPECT_EQ(cert.verification.special_case_limit, 4);
  EXPECT_LE(cert.bound_int, cert.verification.special_case_limit);
}

TEST(PfenderBound, SimplexFamilyExact) {
  for (int d = 2; d <= 50; ++d) {
    const auto cert = pfender_bound(g1(d), 1.0 / d, -1.0 / d);
    EXPECT_TRUE(cert.verification.verified) << d << ": " << cert.verification.reason;
    EXPECT_NEAR(cert.bound_real, d + 1.0, 1e-12) << d;
    EXPECT_EQ(cert.bound_int, d + 1);
  }
}

TEST(PfenderBound, Errors) {
  EXPECT_THROW(pfender_bound(g1(3), 0.0, -0.5), DomainError);
  EXPECT_THROW(pfender_bound(g1(3), -1.0, -0.5), DomainError);

  const auto not_cert = pfender_bound(g1(3), 0.25, 0.0);
  EXPECT_FALSE(not_cert.verification.verified);
  EXPECT_FALSE(not_cert.verification.condition_ii_holds);
  EXPECT_NE(not_cert.verification.reason.find("not a certificate"), std::string::npos) << not_cert.verification.reason;
  EXPECT_NEAR(not_cert.verification.condition_ii_worst_location, 0.0, 1e-9);

  const auto neg = pfender_bound(PhiSpec::gegenbauer(3, {0.0, 1.0, -0.1}), 0.5, -0.6);
  EXPECT_FALSE(neg.verification.condition_i_established);
  EXPECT_NE(neg.verification.reason.find("condition (i) not established"), std::string::npos) << neg.verification.reason;

  // a table phi carries no dimension, so it has no structural argument
  const auto tab = pfender_bound(PhiSpec::table({-1.0, 1.0}, {-1.0, 1.0}), 0.5, -0.5);
  EXPECT_FALSE(tab.verification.condition_i_established);
  EXPECT_NEAR(tab.verification.table_max_spacing, 2.0, 0.0);
}

TEST(PfenderBound, MonomialWithDimIsExpanded) {
  // r^2 - 1/3 in dim 3 is (2/3) G_2: nonnegative coefficients
  const auto cert = pfender_bound(PhiSpec::monomial({-1.0 / 3.0, 0.0, 1.0}, 3), 1.0 / 3.0, 0.0);
  EXPECT_TRUE(cert.verification.condition_i_established) << cert.verification.condition_i_evidence;
  EXPECT_NEAR(cert.bound_real, 3.0, 1e-12);
  // phi + c = r^2 is positive on [-1, 0)
  EXPECT_FALSE(cert.verification.condition_ii_holds);
  // -r in dim 3 has a_1 = -1
  const auto neg = pfender_bound(PhiSpec::monomial({0.0, -1.0}, 3), 1.0, -1.0);
  EXPECT_FALSE(neg.verification.condition_i_established);
}

TEST(PfenderBound, FromDgsMatchesDelsarte) {
  const auto r = lp_bound(8, 0.5, 6);
  ASSERT_TRUE(r.certificate);
  const auto p = pfender_from_dgs(*r.certificate);
  EXPECT_TRUE(p.verification.verified) << p.verification.reason;
  EXPECT_NEAR(p.bound_real, r.certificate->bound_real, 1e-9 * r.certificate->bound_real);
}

TEST(DoubleSum, Examples) {
  const PhiSpec sq = PhiSpec::monomial({0.0, 0.0, 1.0});
  EXPECT_DOUBLE_EQ(double_sum(sq, Eigen::MatrixXd::Identity(3, 3)), 3.0);
  for (int d = 2; d <= 16; ++d) {
    EXPECT_NEAR(double_sum(square_minus(d), Eigen::MatrixXd::Identity(d, d)), 0.0, 1e-14) << d;
  }
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd v = oracle::random_unit_vectors(rng, 7, 4);
    const Eigen::MatrixXd gram = v * v.transpose();
    const double expected = v.colwise().sum().squaredNorm();
    EXPECT_NEAR(double_sum(g1(4), gram.cwiseMax(-1.0).cwiseMin(1.0)), expected, 1e-12);
  }
}

TEST(DoubleSum, OutOfRangeNamesEntry) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
  m(1, 2) = 1.5;
  try {
    double_sum(g1(3), m);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("(1,2)"), std::string::npos) << e.what();
  }
  m(1, 2) = 1.0 + 5e-13;
  EXPECT_NO_THROW(double_sum(g1(3), m));
}

TEST(FunctionalCheck, OrthonormalFiniteSet) {
  for (int d = 2; d <= 16; ++d) {
    const Code code = euclidean_to_functional(generate("orthonormal", d));
    const auto chk = functional_pfender_check(code, square_minus(d), 1.0 / d, 0.0, PfenderVariant::kFiniteSet);
    EXPECT_EQ(chk.verdict, TheoremVerdict::kHolds) << d << ": " << chk.message;
    EXPECT_NEAR(chk.certificate.bound_real, d, 1e-12);
    EXPECT_NEAR(chk.slack, 0.0, 1e-12);
    EXPECT_EQ(chk.n, static_cast<std::size_t>(d));
  }
}

TEST(FunctionalCheck, SimplexInterval) {
  for (int d = 2; d <= 20; ++d) {
    const Code code = euclidean_to_functional(generate("simplex", d));
    const auto chk = functional_pfender_check(code, g1(d), 1.0 / d, -1.0 / d, PfenderVariant::kInterval);
    EXPECT_EQ(chk.verdict, TheoremVerdict::kHolds) << d << ": " << chk.message;
    EXPECT_NEAR(chk.certificate.bound_real, d + 1.0, 1e-12);
    EXPECT_NEAR(chk.slack, 0.0, 1e-12);
  }
}

TEST(FunctionalCheck, SinglePointCode) {
  const Code code = euclidean_to_functional(SphericalCode{3, Eigen::RowVector3d(1.0, 0.0, 0.0), -1.0});
  const auto chk = functional_pfender_check(code, g1(3), 1.0, -1.0, PfenderVariant::kInterval);
  EXPECT_EQ(chk.verdict, TheoremVerdict::kHolds) << chk.message;
  EXPECT_GE(chk.certificate.bound_real, 1.0);
}

TEST(FunctionalCheck, NotApplicableAndPrecondition) {
  const Code ortho = euclidean_to_functional(generate("orthonormal", 4));
  // interval variant: r^2 - 1/4 + 1/4 = r^2 > 0 on [-1, 0)
  const auto chk = functional_pfender_check(ortho, square_minus(4), 0.25, 0.0, PfenderVariant::kInterval);
  EXPECT_EQ(chk.verdict, TheoremVerdict::kNotApplicable);
  EXPECT_NE(chk.message.find("certificate not applicable to this code"), std::string::npos);

  // condition (i) fails: phi = -r has a negative double sum on the orthonormal code
  const auto neg = functional_pfender_check(ortho, PhiSpec::monomial({0.0, -1.0}), 0.5, 0.0, PfenderVariant::kFiniteSet);
  EXPECT_EQ(neg.verdict, TheoremVerdict::kNotApplicable);

  EXPECT_THROW(functional_pfender_check(ortho, g1(4), 0.25, -0.5, PfenderVariant::kInterval), PreconditionError);
  EXPECT_THROW(functional_pfender_check(ortho, g1(4), 0.0, 0.0, PfenderVariant::kInterval), DomainError);
}

TEST(FunctionalCheck, MetricCodes) {
  const Code metric = embed_as_metric_code(generate("simplex", 4));
  const auto chk = functional_pfender_check(metric, g1(4), 0.25, -0.25, PfenderVariant::kInterval);
  EXPECT_EQ(chk.verdict, TheoremVerdict::kHolds) << chk.message;
  EXPECT_NEAR(chk.slack, 0.0, 1e-12);
}

TEST(PfenderProperty, ScaleBehavior) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> lam(0.01, 100.0);
  const Code code = euclidean_to_functional(generate("icosahedron"));
  const auto cos_theta = declared_cos_theta(code);
  auto certs = catalog::fixed_certificates();
  for (auto& t : catalog::tailored_certificates(code)) certs.push_back(t);
  for (const auto& cert : certs) {
    const auto base = functional_pfender_check(code, cert.phi, cert.c, cos_theta, cert.variant);
    for (int i = 0; i < 3; ++i) {
      const double l = lam(rng);
      const auto scaled = functional_pfender_check(code, cert.phi.scaled(l), cert.c * l, cos_theta, cert.variant);
      EXPECT_NEAR(scaled.certificate.bound_real, base.certificate.bound_real, 1e-10 * base.certificate.bound_real)
          << cert.name;
      EXPECT_EQ(scaled.certificate.verification.condition_i_established,
                base.certificate.verification.condition_i_established)
          << cert.name;
      EXPECT_EQ(scaled.certificate.verification.condition_ii_holds, base.certificate.verification.condition_ii_holds)
          << cert.name;
    }
  }
}

TEST(PfenderProperty, StructuralSoundness) {
  std::mt19937_64 rng(20240917);
  std::uniform_int_distribution<int> n_d(1, 40);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int d : {2, 3, 5, 8}) {
    // random phi with nonnegative Gegenbauer coefficients
    std::vector<double> a(7);
    for (auto& v : a) v = u(rng);
    const auto phi = PhiSpec::gegenbauer(d, a);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = n_d(rng);
      const Eigen::MatrixXd v = oracle::random_unit_vectors(rng, n, d);
      const Eigen::MatrixXd gram = (v * v.transpose()).cwiseMax(-1.0).cwiseMin(1.0);
      EXPECT_GE(double_sum(phi, gram), -1e-8 * n * n);
    }
  }
}

TEST(PfenderProperty, SpecialCaseLimit) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double c = u(rng);
    const double a1 = u(rng);
    const auto cert = pfender_bound(PhiSpec::gegenbauer(3, {0.0, a1}), c, -1.0);
    if (cert.verification.special_case_applies) {
      EXPECT_LE(cert.bound_int, static_cast<long long>(std::floor(1.0 / c + 1e-9)));
    }
  }
}

TEST(PfenderProperty, TheoremHarnessCatalog) {
  const auto fixed = catalog::fixed_certificates();
  int applicable = 0;
  for (const auto& [name, sph] : catalog::spherical_catalog(6)) {
    const Code code = euclidean_to_functional(sph);
    auto certs = fixed;
    for (auto& t : catalog::tailored_certificates(code)) certs.push_back(t);
    for (const auto& cert : certs) {
      const auto chk = functional_pfender_check(code, cert.phi, cert.c, sph.cos_theta, cert.variant);
      EXPECT_NE(chk.verdict, TheoremVerdict::kViolation) << name << " x " << cert.name << ": " << chk.message;
      if (chk.verdict == TheoremVerdict::kHolds) {
        ++applicable;
        EXPECT_LE(static_cast<double>(chk.n), chk.certificate.bound_real + 1e-9);
      }
    }
  }
  EXPECT_GT(applicable, 50);
}
