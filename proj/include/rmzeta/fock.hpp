#pragma once

// Weighted Gaussian composition operators
//     (K f)(z) = gamma * exp(pi <z|a>) * f(A z + b)
// on the Bargmann-Fock space of C^m (kernel exp(pi <z|w>), weight
// exp(-pi |z|^2)), their truncated matrices in the orthonormal monomial basis
//     zeta_alpha(z) = sqrt(pi^|alpha| / alpha!) z^alpha,
// and the closed-form trace, trace norm and Hilbert-Schmidt norm.

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rmzeta/detail/combinatorics.hpp"
#include "rmzeta/errors.hpp"
#include "rmzeta/linalg.hpp"

namespace rmzeta {

inline constexpr std::size_t kDefaultBasisCap = 20000;

/// Multi-indices alpha in N_0^m with |alpha| <= D, ordered by total degree and
/// then lexicographically.
class FockBasis {
 public:
  using MultiIndex = std::vector<int>;

  FockBasis(std::size_t m, std::size_t degree, std::size_t cap = kDefaultBasisCap) : m_(m), degree_(degree) {
    if (m == 0) throw DomainError("fock_basis: dimension m must be >= 1");
    const std::size_t n = detail::binomial(m + degree, m);
    if (n > cap) {
      throw ResourceError("fock_basis: basis size " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
    }
    indices_.reserve(n);
    MultiIndex alpha(m, 0);
    for (std::size_t d = 0; d <= degree; ++d) append_degree(alpha, 0, static_cast<int>(d));
    for (std::size_t i = 0; i < indices_.size(); ++i) position_.emplace(indices_[i], i);
    raise_.assign(indices_.size() * m, kNone);
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (total_degree(i) == degree) continue;
      for (std::size_t j = 0; j < m; ++j) {
        MultiIndex up = indices_[i];
        ++up[j];
        raise_[i * m + j] = position_.at(up);
      }
    }
  }

  std::size_t dim() const { return m_; }
  std::size_t degree() const { return degree_; }
  std::size_t size() const { return indices_.size(); }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  const MultiIndex& operator[](std::size_t i) const { return indices_[i]; }

  std::size_t total_degree(std::size_t i) const {
    std::size_t s = 0;
    for (int a : indices_[i]) s += static_cast<std::size_t>(a);
    return s;
  }

  std::size_t position(const MultiIndex& alpha) const {
    auto it = position_.find(alpha);
    if (it == position_.end()) throw DomainError("FockBasis: multi-index not in basis");
    return it->second;
  }

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  /// Position of alpha + e_j, or kNone when that exceeds the degree cutoff.
  std::size_t raised(std::size_t i, std::size_t j) const { return raise_[i * m_ + j]; }

 private:
  // Emits all multi-indices with entries from slot `pos` on summing to `remaining`,
  // in lexicographic order.
  void append_degree(MultiIndex& alpha, std::size_t pos, int remaining) {
    if (pos + 1 == m_) {
      alpha[pos] = remaining;
      indices_.push_back(alpha);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      alpha[pos] = v;
      append_degree(alpha, pos + 1, remaining - v);
    }
  }

  std::size_t m_;
  std::size_t degree_;
  std::vector<MultiIndex> indices_;
  std::map<MultiIndex, std::size_t> position_;
  std::vector<std::size_t> raise_;
};

inline FockBasis fock_basis(std::size_t m, std::size_t degree, std::size_t cap = kDefaultBasisCap) {
  return FockBasis(m, degree, cap);
}

/// Reproducing kernel k(z, w) = exp(pi <z|w>).
inline cplx kernel_eval(const CVector& z, const CVector& w) { return std::exp(kPi * inner(z, w)); }

/// f -> gamma * exp(pi <z|a>) * f(A z + b).
struct GaussianCompositionOp {
  cplx gamma{1.0, 0.0};
  CVector a;
  CVector b;
  CMatrix A;

  Eigen::Index dim() const { return A.rows(); }

  void validate() const {
    require_square(A, "GaussianCompositionOp");
    if (a.size() != A.rows() || b.size() != A.rows()) {
      throw DimensionError("GaussianCompositionOp: a, b and A must share dimension m");
    }
  }

  static GaussianCompositionOp identity_op(Eigen::Index m) {
    return {cplx{1.0, 0.0}, CVector::Zero(m), CVector::Zero(m), CMatrix::Identity(m, m)};
  }
};

namespace detail {

// Multiplication of a truncated coefficient vector by c0 + sum_j c_j z_j.
// In the orthonormal basis z_j zeta_alpha = sqrt((alpha_j + 1)/pi) zeta_{alpha+e_j};
// anything pushed past the degree cutoff is dropped.
inline CVector multiply_affine(const FockBasis& basis, const CVector& v, const CVector& c, cplx c0) {
  CVector out = c0 * v;
  const std::size_t m = basis.dim();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const cplx vi = v(static_cast<Eigen::Index>(i));
    if (vi == cplx{0.0, 0.0}) continue;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t up = basis.raised(i, j);
      if (up == FockBasis::kNone) continue;
      const cplx cj = c(static_cast<Eigen::Index>(j));
      if (cj == cplx{0.0, 0.0}) continue;
      const double factor = std::sqrt((basis[i][j] + 1.0) / kPi);
      out(static_cast<Eigen::Index>(up)) += cj * factor * vi;
    }
  }
  return out;
}

inline bool is_zero(const CVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) != cplx{0.0, 0.0}) return false;
  }
  return true;
}

}  // namespace detail

/// Matrix M[alpha, beta] = <K zeta_beta | zeta_alpha> on the degree-D truncation.
/// Every entry is the exact matrix element of the full operator.
inline CMatrix op_matrix(const GaussianCompositionOp& op, const FockBasis& basis) {
  op.validate();
  if (static_cast<std::size_t>(op.dim()) != basis.dim()) {
    throw DimensionError("op_matrix: operator dimension does not match basis");
  }
  const std::size_t n = basis.size();
  const auto N = static_cast<Eigen::Index>(n);

  // Columns of the pushforward f -> f(Az + b): zeta_beta(w) = sqrt(pi/beta_i) w_i zeta_{beta - e_i}(w).
  CMatrix push = CMatrix::Zero(N, N);
  push(0, 0) = 1.0;
  for (std::size_t col = 1; col < n; ++col) {
    FockBasis::MultiIndex prev = basis[col];
    std::size_t i = 0;
    while (prev[i] == 0) ++i;
    const double bi = prev[i];
    --prev[i];
    const std::size_t pcol = basis.position(prev);
    const CVector row = op.A.row(static_cast<Eigen::Index>(i)).transpose();
    push.col(static_cast<Eigen::Index>(col)) =
        std::sqrt(kPi / bi) *
        detail::multiply_affine(basis, push.col(static_cast<Eigen::Index>(pcol)), row,
                                op.b(static_cast<Eigen::Index>(i)));
  }

  // Weight exp(pi <z|a>) = exp(pi sum_j conj(a_j) z_j), Taylor series cut at degree D.
  const CVector linear = op.a.conjugate();
  CMatrix out(N, N);
  for (Eigen::Index col = 0; col < N; ++col) {
    CVector term = push.col(col);
    CVector acc = term;
    for (std::size_t k = 1; k <= basis.degree(); ++k) {
      term = (kPi / static_cast<double>(k)) * detail::multiply_affine(basis, term, linear, cplx{0.0, 0.0});
      if (detail::is_zero(term)) break;
      acc += term;
    }
    out.col(col) = op.gamma * acc;
  }
  return out;
}

/// trace K = gamma exp(pi <(1-A)^{-1} b | a>) / det(1 - A).
inline cplx exact_trace(const GaussianCompositionOp& op) {
  op.validate();
  const CMatrix res = resolvent_at_one(op.A);
  const cplx det = lu_determinant(identity(op.dim()) - op.A);
  return op.gamma * std::exp(kPi * inner(res * op.b, op.a)) / det;
}

namespace detail {

inline void require_contraction(const CMatrix& a, const char* what) {
  if (operator_norm(a) >= 1.0) throw DomainError(std::string(what) + ": requires ||A|| < 1");
}

// pi ||(1 - A A*)^{-1/2} (A a + b)||^2 and det(1 - A A*).
inline std::pair<double, double> gram_terms(const GaussianCompositionOp& op) {
  const CMatrix gram = identity(op.dim()) - op.A * op.A.adjoint();
  const CVector x = op.A * op.a + op.b;
  const CVector y = gram.partialPivLu().solve(x);
  return {kPi * inner(y, x).real(), lu_determinant(gram).real()};
}

}  // namespace detail

/// ||K||_2^2 = |gamma|^2 exp(pi ||a||^2 + pi ||(1-AA*)^{-1/2}(Aa+b)||^2) / det(1 - AA*).
inline double exact_hs_norm_sq(const GaussianCompositionOp& op) {
  op.validate();
  detail::require_contraction(op.A, "exact_hs_norm_sq");
  const auto [quad, det] = detail::gram_terms(op);
  return std::norm(op.gamma) * std::exp(kPi * op.a.squaredNorm() + quad) / det;
}

/// ||K||_1 = |gamma| exp((pi/2) ||a||^2 + (pi/2) ||(1-AA*)^{-1/2}(Aa+b)||^2) / det(1 - |A|).
inline double exact_trace_norm(const GaussianCompositionOp& op) {
  op.validate();
  detail::require_contraction(op.A, "exact_trace_norm");
  const auto [quad, det_gram] = detail::gram_terms(op);
  (void)det_gram;
  const CMatrix abs_a = psd_sqrt(op.A.adjoint() * op.A);
  const double det = lu_determinant(identity(op.dim()) - abs_a).real();
  return std::abs(op.gamma) * std::exp(0.5 * kPi * op.a.squaredNorm() + 0.5 * quad) / det;
}

/// Operator product first * second, i.e. (first o second) f = first(second f).
inline GaussianCompositionOp compose(const GaussianCompositionOp& first, const GaussianCompositionOp& second) {
  first.validate();
  second.validate();
  if (first.dim() != second.dim()) throw DimensionError("compose: operator dimensions differ");
  GaussianCompositionOp out;
  out.gamma = first.gamma * second.gamma * std::exp(kPi * inner(first.b, second.a));
  out.a = first.a + first.A.adjoint() * second.a;
  out.b = second.A * first.b + second.b;
  out.A = second.A * first.A;
  return out;
}

inline GaussianCompositionOp adjoint(const GaussianCompositionOp& op) {
  op.validate();
  return {std::conj(op.gamma), op.b, op.a, op.A.adjoint()};
}

/// |K| = sqrt(K* K) = gamma' K_{beta, beta, Lambda} with Lambda = sqrt(AA*),
/// beta = (1 + Lambda)^{-1}(Aa + b), gamma' = |gamma| exp(pi/2 (||a||^2 - ||beta||^2)).
inline GaussianCompositionOp polar_abs(const GaussianCompositionOp& op) {
  op.validate();
  detail::require_contraction(op.A, "polar_abs");
  const CMatrix lambda = psd_sqrt(op.A * op.A.adjoint());
  const CVector beta = (identity(op.dim()) + lambda).partialPivLu().solve(op.A * op.a + op.b);
  const double g = std::abs(op.gamma) * std::exp(0.5 * kPi * (op.a.squaredNorm() - beta.squaredNorm()));
  return {cplx{g, 0.0}, beta, beta, lambda};
}

struct QuadratureSpec {
  double radius = 6.0;
  double spacing = 0.02;
  std::size_t budget = 10'000'000;
};

struct IntegralCheck {
  cplx closed;
  cplx quad;
};

/// Compares trace K with the midpoint-rule value of
///     integral over C of gamma e^{pi z conj(a)} e^{pi <Az + b | z>} e^{-pi |z|^2} dz
/// on a disk (m = 1 only).
inline IntegralCheck gaussian_integral_check(const GaussianCompositionOp& op, const QuadratureSpec& q = {}) {
  op.validate();
  if (op.dim() != 1) throw DimensionError("gaussian_integral_check: requires m = 1");
  detail::require_contraction(op.A, "gaussian_integral_check");
  if (!(q.radius > 0.0) || !(q.spacing > 0.0)) throw DomainError("gaussian_integral_check: bad grid");
  const auto half = static_cast<long long>(std::ceil(q.radius / q.spacing));
  const double cells = 4.0 * static_cast<double>(half) * static_cast<double>(half);
  if (cells > static_cast<double>(q.budget)) {
    throw ResourceError("gaussian_integral_check: quadrature grid exceeds budget");
  }
  const cplx A = op.A(0, 0), a = op.a(0), b = op.b(0);
  const double r2 = q.radius * q.radius;
  cplx sum{0.0, 0.0};
  for (long long i = -half; i < half; ++i) {
    const double x = (static_cast<double>(i) + 0.5) * q.spacing;
    cplx row{0.0, 0.0};
    for (long long j = -half; j < half; ++j) {
      const double y = (static_cast<double>(j) + 0.5) * q.spacing;
      if (x * x + y * y > r2) continue;
      const cplx z{x, y};
      const cplx zc = std::conj(z);
      row += std::exp(kPi * (z * std::conj(a) + (A * z + b) * zc - z * zc));
    }
    sum += row;
  }
  return {exact_trace(op), op.gamma * sum * q.spacing * q.spacing};
}

}  // namespace rmzeta
