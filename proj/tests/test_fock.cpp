#include <gtest/gtest.h>

#include <cmath>

#include "rmzeta/fock.hpp"
#include "support.hpp"

using namespace rmzeta;
using rmzeta::testing::max_abs;
using rmzeta::testing::random_contraction;
using rmzeta::testing::random_cplx;
using rmzeta::testing::random_vector;

namespace {

GaussianCompositionOp scalar_op(cplx gamma, cplx a, cplx b, cplx A) {
  GaussianCompositionOp op;
  op.gamma = gamma;
  op.a = CVector::Constant(1, a);
  op.b = CVector::Constant(1, b);
  op.A = CMatrix::Constant(1, 1, A);
  return op;
}

GaussianCompositionOp random_op(Eigen::Index m, double norm, double vec) {
  return {std::polar(1.0, rmzeta::testing::uniform(0.0, 6.28)), random_vector(m, vec), random_vector(m, vec),
          random_contraction(m, norm)};
}

double factorial(int n) { return std::tgamma(n + 1.0); }

// <K zeta_beta | zeta_alpha> from Taylor coefficients of K zeta_beta, extracted
// with a trapezoid rule on the torus |z_1| = |z_2| = 1.
CMatrix contour_matrix(const GaussianCompositionOp& op, const FockBasis& basis, int samples = 32) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  const auto m = basis.dim();
  CMatrix out = CMatrix::Zero(n, n);
  std::vector<cplx> w(samples);
  for (int k = 0; k < samples; ++k) w[k] = std::polar(1.0, 2.0 * kPi * k / samples);
  const int grid = m == 1 ? samples : samples * samples;
  for (Eigen::Index col = 0; col < n; ++col) {
    const auto& beta = basis[col];
    double norm_beta = 1.0;
    for (std::size_t j = 0; j < m; ++j) norm_beta *= std::sqrt(std::pow(kPi, beta[j]) / factorial(beta[j]));
    for (int g = 0; g < grid; ++g) {
      CVector z(static_cast<Eigen::Index>(m));
      z(0) = w[g % samples];
      if (m == 2) z(1) = w[g / samples];
      const CVector image = op.A * z + op.b;
      cplx value = op.gamma * std::exp(kPi * inner(z, op.a)) * norm_beta;
      for (std::size_t j = 0; j < m; ++j) value *= std::pow(image(static_cast<Eigen::Index>(j)), beta[j]);
      for (Eigen::Index row = 0; row < n; ++row) {
        const auto& alpha = basis[row];
        cplx c = value;
        double scale = 1.0;
        for (std::size_t j = 0; j < m; ++j) {
          c *= std::pow(std::conj(z(static_cast<Eigen::Index>(j))), alpha[j]);
          scale *= std::sqrt(factorial(alpha[j]) / std::pow(kPi, alpha[j]));
        }
        out(row, col) += c * scale;
      }
    }
  }
  return out / static_cast<double>(grid);
}

}  // namespace

TEST(FockBasis, SizesAndOrdering) {
  EXPECT_EQ(fock_basis(1, 3).size(), 4u);
  EXPECT_EQ(fock_basis(2, 2).size(), 6u);
  EXPECT_EQ(fock_basis(3, 4).size(), 35u);
  const auto b = fock_basis(1, 3);
  for (int k = 0; k <= 3; ++k) EXPECT_EQ(b[k], FockBasis::MultiIndex{k});
  const auto b2 = fock_basis(2, 2);
  const std::vector<FockBasis::MultiIndex> expected{{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}};
  EXPECT_EQ(b2.indices(), expected);
  EXPECT_EQ(b2.position({1, 1}), 4u);
  EXPECT_EQ(b2.raised(1, 0), 4u);
  EXPECT_EQ(b2.raised(4, 0), FockBasis::kNone);
}

TEST(FockBasis, CapAndDomain) {
  EXPECT_THROW(fock_basis(4, 30), ResourceError);
  EXPECT_THROW(fock_basis(0, 3), DomainError);
  EXPECT_EQ(fock_basis(2, 0).size(), 1u);
  EXPECT_THROW(fock_basis(2, 5, 20), ResourceError);
}

TEST(Kernel, ValuesAndPositivity) {
  EXPECT_EQ(kernel_eval(CVector::Zero(2), CVector::Zero(2)), cplx(1.0, 0.0));
  EXPECT_NEAR(std::abs(kernel_eval(CVector::Ones(1), CVector::Ones(1)) - std::exp(kPi)), 0.0, 1e-12);
  std::vector<CVector> pts;
  for (int i = 0; i < 4; ++i) pts.push_back(random_vector(2, 0.5));
  CMatrix gram(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) gram(i, j) = kernel_eval(pts[i], pts[j]);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
}

TEST(OpMatrix, IdentityAndDiagonal) {
  const auto basis = fock_basis(2, 4);
  EXPECT_LT(max_abs(op_matrix(GaussianCompositionOp::identity_op(2), basis) - identity(15)), 1e-14);
  const auto b1 = fock_basis(1, 6);
  const CMatrix m = op_matrix(scalar_op(1.0, 0.0, 0.0, 0.5), b1);
  for (int k = 0; k <= 6; ++k) EXPECT_NEAR(std::abs(m(k, k) - std::pow(0.5, k)), 0.0, 1e-15);
  EXPECT_NEAR(max_abs(m - CMatrix(m.diagonal().asDiagonal())), 0.0, 0.0);
}

TEST(OpMatrix, MatchesContourCoefficientsOneDim) {
  const auto basis = fock_basis(1, 8);
  for (int rep = 0; rep < 3; ++rep) {
    const auto op = random_op(1, 0.7, 0.4);
    EXPECT_LT(max_abs(op_matrix(op, basis) - contour_matrix(op, basis, 64)), 1e-10);
  }
}

TEST(OpMatrix, MatchesContourCoefficientsTwoDim) {
  const auto basis = fock_basis(2, 4);
  const auto op = random_op(2, 0.6, 0.3);
  EXPECT_LT(max_abs(op_matrix(op, basis) - contour_matrix(op, basis, 32)), 1e-10);
}

TEST(OpMatrix, DimensionMismatch) {
  EXPECT_THROW(op_matrix(GaussianCompositionOp::identity_op(2), fock_basis(1, 3)), DimensionError);
  GaussianCompositionOp bad = GaussianCompositionOp::identity_op(2);
  bad.a = CVector::Zero(3);
  EXPECT_THROW(bad.validate(), DimensionError);
}

TEST(ExactTrace, ClosedFormExamples) {
  GaussianCompositionOp op = GaussianCompositionOp::identity_op(1);
  op.A(0, 0) = 0.5;
  EXPECT_NEAR(std::abs(exact_trace(op) - 2.0), 0.0, 1e-14);
  op.A = CMatrix::Zero(3, 3);
  op.a = op.b = CVector::Zero(3);
  EXPECT_NEAR(std::abs(exact_trace(op) - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(exact_trace(scalar_op(1.0, 0.3, 0.3, 0.5)) - 2.0 * std::exp(0.18 * kPi)), 0.0, 1e-12);
  EXPECT_THROW(exact_trace(GaussianCompositionOp::identity_op(2)), SingularityError);
}

TEST(ExactTrace, TruncationConvergesMonotonically) {
  const auto op = scalar_op(1.0, 0.3, 0.3, 0.5);
  const cplx exact = exact_trace(op);
  double prev = 1e300;
  for (std::size_t D = 10; D <= 40; D += 5) {
    const double err = std::abs(op_matrix(op, fock_basis(1, D)).trace() - exact);
    EXPECT_LT(err, prev) << D;
    prev = err;
  }
  EXPECT_LT(prev / std::abs(exact), 1e-8);
}

TEST(ExactTrace, TwoDimensionalTruncation) {
  const auto op = random_op(2, 0.4, 0.25);
  EXPECT_LT(std::abs(op_matrix(op, fock_basis(2, 30)).trace() - exact_trace(op)), 1e-8);
}

TEST(HsNorm, ClosedFormAndFrobenius) {
  GaussianCompositionOp op = GaussianCompositionOp::identity_op(1);
  op.A(0, 0) = 0.0;
  EXPECT_NEAR(exact_hs_norm_sq(op), 1.0, 1e-14);
  op.A(0, 0) = 0.5;
  EXPECT_NEAR(exact_hs_norm_sq(op), 4.0 / 3.0, 1e-14);
  const auto s = scalar_op(1.0, 0.2, 0.1, 0.5);
  EXPECT_NEAR(op_matrix(s, fock_basis(1, 40)).squaredNorm(), exact_hs_norm_sq(s), 1e-6);
  const auto r = random_op(2, 0.4, 0.25);
  EXPECT_NEAR(op_matrix(r, fock_basis(2, 30)).squaredNorm() / exact_hs_norm_sq(r), 1.0, 1e-7);
  EXPECT_THROW(exact_hs_norm_sq(scalar_op(1.0, 0.0, 0.0, 1.0)), DomainError);
}

TEST(TraceNorm, ClosedFormAndSingularValues) {
  GaussianCompositionOp op = GaussianCompositionOp::identity_op(1);
  op.A(0, 0) = 0.5;
  EXPECT_NEAR(exact_trace_norm(op), 2.0, 1e-14);
  op.A(0, 0) = 0.0;
  EXPECT_NEAR(exact_trace_norm(op), 1.0, 1e-14);
  const auto s = scalar_op(1.0, 0.3, 0.3, 0.5);
  double sum = 0.0;
  for (double v : singular_values(op_matrix(s, fock_basis(1, 40)))) sum += v;
  EXPECT_NEAR(sum, exact_trace_norm(s), 1e-5);
  EXPECT_THROW(exact_trace_norm(scalar_op(1.0, 0.0, 0.0, cplx(0.0, 1.2))), DomainError);
}

TEST(TraceNorm, DominatesTrace) {
  for (int rep = 0; rep < 50; ++rep) {
    const auto op = random_op(1 + rep % 3, 0.8, 0.6);
    EXPECT_GE(exact_trace_norm(op) * (1.0 + 1e-12), std::abs(exact_trace(op)));
  }
}

TEST(Compose, ParameterIdentities) {
  const auto op = random_op(2, 0.5, 0.3);
  const auto id = GaussianCompositionOp::identity_op(2);
  const auto c = compose(id, op);
  EXPECT_LT(std::abs(c.gamma - op.gamma), 1e-15);
  EXPECT_LT(max_abs(c.A - op.A) + max_abs(c.a - op.a) + max_abs(c.b - op.b), 1e-15);
  auto p = random_op(2, 0.5, 0.3);
  p.a.setZero();
  p.b.setZero();
  const auto q = random_op(2, 0.5, 0.3);
  const auto pq = compose(p, q);
  EXPECT_LT(std::abs(pq.gamma - p.gamma * q.gamma), 1e-15);
  EXPECT_LT(max_abs(pq.a - p.A.adjoint() * q.a), 1e-15);
  EXPECT_LT(max_abs(pq.b - q.b), 1e-15);
  EXPECT_LT(max_abs(pq.A - q.A * p.A), 1e-15);
  EXPECT_THROW(compose(id, random_op(1, 0.5, 0.3)), DimensionError);
}

TEST(Compose, MatrixHomomorphism) {
  const auto basis = fock_basis(1, 30);
  for (int rep = 0; rep < 5; ++rep) {
    const auto p = random_op(1, 0.5, 0.3), q = random_op(1, 0.5, 0.3);
    const CMatrix lhs = op_matrix(compose(p, q), basis);
    const CMatrix rhs = op_matrix(p, basis) * op_matrix(q, basis);
    EXPECT_LT((lhs - rhs).norm(), 1e-8);
  }
}

TEST(Compose, TraceIsCyclic) {
  const auto p = random_op(2, 0.6, 0.4), q = random_op(2, 0.6, 0.4);
  EXPECT_LT(std::abs(exact_trace(compose(p, q)) - exact_trace(compose(q, p))), 1e-11);
}

TEST(Adjoint, InvolutionAndSelfAdjointCase) {
  const auto op = random_op(2, 0.5, 0.3);
  const auto aa = adjoint(adjoint(op));
  EXPECT_EQ(aa.gamma, op.gamma);
  EXPECT_LT(max_abs(aa.A - op.A) + max_abs(aa.a - op.a) + max_abs(aa.b - op.b), 0.0 + 1e-300);
  GaussianCompositionOp sa;
  sa.gamma = 1.3;
  sa.a = sa.b = random_vector(2, 0.3);
  const CMatrix x = random_contraction(2, 0.5);
  sa.A = 0.5 * (x + x.adjoint());
  const auto sadj = adjoint(sa);
  EXPECT_LT(max_abs(sadj.A - sa.A) + max_abs(sadj.a - sa.a) + max_abs(sadj.b - sa.b), 1e-15);
}

TEST(Adjoint, MatrixIsConjugateTranspose) {
  const auto basis = fock_basis(1, 20);
  const auto op = random_op(1, 0.6, 0.4);
  EXPECT_LT(max_abs(op_matrix(adjoint(op), basis) - op_matrix(op, basis).adjoint()), 1e-10);
  const auto b2 = fock_basis(2, 8);
  const auto op2 = random_op(2, 0.6, 0.4);
  EXPECT_LT(max_abs(op_matrix(adjoint(op2), b2) - op_matrix(op2, b2).adjoint()), 1e-10);
}

TEST(Positivity, SelfAdjointPositiveOperators) {
  GaussianCompositionOp op;
  op.gamma = 1.0;
  op.a = op.b = random_vector(2, 0.3);
  const CMatrix x = random_contraction(2, 0.8);
  op.A = x * x.adjoint();
  const CMatrix m = op_matrix(op, fock_basis(2, 16));
  EXPECT_LT(max_abs(m - m.adjoint()), 1e-12);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
}

TEST(Spectrum, OneDimensionalGeometricLadder) {
  const cplx b(0.2, 0.1);
  const double A = 0.6;
  const auto op = scalar_op(1.0, b, b, A);
  const auto ev = eigenvalues(op_matrix(op, fock_basis(1, 40))).values;
  const double scale = std::exp(kPi * std::norm(b) / (1.0 - A));
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(std::abs(ev[k] - scale * std::pow(A, k)), 0.0, 1e-6) << k;
}

TEST(PolarAbs, Examples) {
  GaussianCompositionOp op = GaussianCompositionOp::identity_op(1);
  op.A(0, 0) = 0.5;
  const auto p = polar_abs(op);
  EXPECT_LT(std::abs(p.gamma - 1.0) + max_abs(p.A - op.A) + max_abs(p.a) + max_abs(p.b), 1e-12);
  GaussianCompositionOp shift = scalar_op(1.0, 0.0, cplx(0.3, -0.2), 0.0);
  const auto q = polar_abs(shift);
  EXPECT_LT(max_abs(q.A), 1e-15);
  EXPECT_LT(max_abs(q.a - shift.b) + max_abs(q.b - shift.b), 1e-15);
  EXPECT_NEAR(q.gamma.real(), std::exp(-kPi * std::norm(cplx(0.3, -0.2)) / 2.0), 1e-15);
  EXPECT_THROW(polar_abs(scalar_op(1.0, 0.0, 0.0, 1.5)), DomainError);
}

TEST(PolarAbs, TraceEqualsTraceNormAndSquaresToGram) {
  const auto basis = fock_basis(1, 30);
  for (int rep = 0; rep < 5; ++rep) {
    const auto op = random_op(1, 0.5, 0.3);
    const auto k = polar_abs(op);
    EXPECT_NEAR(exact_trace(k).real(), exact_trace_norm(op), 1e-12 * exact_trace_norm(op));
    EXPECT_NEAR(exact_trace(k).imag(), 0.0, 1e-12);
    const CMatrix km = op_matrix(k, basis);
    const CMatrix gram = op_matrix(adjoint(op), basis) * op_matrix(op, basis);
    EXPECT_LT(max_abs(km * km - gram), 1e-7);
  }
  const auto op2 = random_op(2, 0.5, 0.3);
  EXPECT_NEAR(exact_trace(polar_abs(op2)).real(), exact_trace_norm(op2), 1e-12 * exact_trace_norm(op2));
}

TEST(GaussianIntegral, AgreesWithClosedForm) {
  const auto r1 = gaussian_integral_check(scalar_op(1.0, 0.0, 0.0, 0.5));
  EXPECT_NEAR(std::abs(r1.closed - 2.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(r1.quad - 2.0), 0.0, 1e-5);
  const auto r0 = gaussian_integral_check(scalar_op(1.0, 0.0, 0.0, 0.0));
  EXPECT_NEAR(std::abs(r0.quad - 1.0), 0.0, 1e-5);
  const auto r = gaussian_integral_check(scalar_op(1.0, 0.3, 0.3, 0.5));
  EXPECT_LT(std::abs(r.closed - r.quad), 1e-5);
  const auto rc = gaussian_integral_check(scalar_op(cplx(0.0, 2.0), cplx(0.1, 0.4), cplx(-0.3, 0.2), cplx(0.3, -0.4)));
  EXPECT_LT(std::abs(rc.closed - rc.quad), 1e-5 * std::abs(rc.closed));
}

TEST(GaussianIntegral, Guards) {
  EXPECT_THROW(gaussian_integral_check(GaussianCompositionOp::identity_op(2)), DimensionError);
  QuadratureSpec tight;
  tight.budget = 1000;
  EXPECT_THROW(gaussian_integral_check(scalar_op(1.0, 0.0, 0.0, 0.5), tight), ResourceError);
}
