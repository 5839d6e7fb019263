#pragma once

// Dense complex linear algebra used throughout the library. Storage and the
// eigen/singular-value solvers come from Eigen; determinants use a local
// partially pivoted LU so that eigenvalue products have an independent check.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "rmzeta/detail/combinatorics.hpp"
#include "rmzeta/errors.hpp"

namespace rmzeta {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;

/// Hilbert-space inner product <x|y>: linear in x, conjugate-linear in y.
inline cplx inner(const CVector& x, const CVector& y) {
  if (x.size() != y.size()) throw DimensionError("inner: vector sizes differ");
  return y.dot(x);
}

inline CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

inline void require_square(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw DimensionError(std::string(what) + ": matrix is not square (" +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + ")");
  }
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* what) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const auto z = a(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw DomainError(std::string(what) + ": non-finite entry");
      }
    }
  }
}

/// Eigenvalues repeated by algebraic multiplicity, sorted by descending
/// modulus, then ascending argument, then ascending real part.
struct Spectrum {
  std::vector<cplx> values;

  std::size_t size() const { return values.size(); }
  cplx product() const {
    cplx p{1.0, 0.0};
    for (auto v : values) p *= v;
    return p;
  }
  cplx sum() const {
    cplx s{0.0, 0.0};
    for (auto v : values) s += v;
    return s;
  }
  double radius() const { return values.empty() ? 0.0 : std::abs(values.front()); }
};

namespace detail {

inline bool spectrum_before(cplx x, cplx y) {
  const double ax = std::abs(x), ay = std::abs(y);
  const double tol = 1e-12 * std::max({1.0, ax, ay});
  if (std::abs(ax - ay) > tol) return ax > ay;
  const double px = std::arg(x), py = std::arg(y);
  if (std::abs(px - py) > 1e-12) return px < py;
  return x.real() < y.real();
}

}  // namespace detail

inline void sort_spectrum(std::vector<cplx>& values) {
  std::stable_sort(values.begin(), values.end(), detail::spectrum_before);
}

inline Spectrum eigenvalues(const CMatrix& a) {
  require_square(a, "eigenvalues");
  if (a.rows() == 0) throw DimensionError("eigenvalues: empty matrix");
  Eigen::ComplexEigenSolver<CMatrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigenvalues: eigensolver did not converge");
  }
  Spectrum s;
  const auto& ev = solver.eigenvalues();
  s.values.assign(ev.data(), ev.data() + ev.size());
  for (auto v : s.values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NumericError("eigenvalues: non-finite eigenvalue");
    }
  }
  sort_spectrum(s.values);
  return s;
}

/// Singular values in descending order.
inline std::vector<double> singular_values(const CMatrix& a) {
  if (a.size() == 0) return {};
  Eigen::JacobiSVD<CMatrix> svd(a);
  if (svd.info() != Eigen::Success) {
    throw NumericError("singular_values: SVD did not converge");
  }
  const auto& sv = svd.singularValues();
  std::vector<double> out(sv.data(), sv.data() + sv.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

inline double operator_norm(const CMatrix& a) {
  const auto s = singular_values(a);
  return s.empty() ? 0.0 : s.front();
}

inline double spectral_radius(const CMatrix& a) {
  if (a.rows() == 0) return 0.0;
  return eigenvalues(a).radius();
}

/// Determinant by Gaussian elimination with partial pivoting.
inline cplx lu_determinant(CMatrix a) {
  require_square(a, "lu_determinant");
  const Eigen::Index n = a.rows();
  cplx det{1.0, 0.0};
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index piv = k;
    double best = std::abs(a(k, k));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        piv = i;
      }
    }
    if (best == 0.0) return cplx{0.0, 0.0};
    if (piv != k) {
      a.row(k).swap(a.row(piv));
      det = -det;
    }
    det *= a(k, k);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const cplx f = a(i, k) / a(k, k);
      if (f == cplx{0.0, 0.0}) continue;
      a.row(i).tail(n - k - 1) -= f * a.row(k).tail(n - k - 1);
    }
  }
  return det;
}

struct DetTrace {
  cplx det;
  cplx trace;
};

inline DetTrace det_and_trace(const CMatrix& a) {
  require_square(a, "det_and_trace");
  return {lu_determinant(a), a.trace()};
}

/// (1 - A)^{-1}.
inline CMatrix resolvent_at_one(const CMatrix& a) {
  require_square(a, "resolvent_at_one");
  const CMatrix shifted = identity(a.rows()) - a;
  if (std::abs(lu_determinant(shifted)) <= 1e-300) {
    throw SingularityError("resolvent_at_one: 1 is an eigenvalue of A");
  }
  return shifted.partialPivLu().inverse();
}

/// Principal square root of a Hermitian positive semidefinite matrix.
/// Eigenvalues in [-tol, 0) are clamped to zero.
inline CMatrix psd_sqrt(const CMatrix& p) {
  require_square(p, "psd_sqrt");
  if (p.rows() == 0) return p;
  const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
  const double tol = 1e-12 * scale;
  if ((p - p.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw DomainError("psd_sqrt: matrix is not Hermitian");
  }
  const CMatrix herm = 0.5 * (p + p.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm);
  if (solver.info() != Eigen::Success) {
    throw NumericError("psd_sqrt: eigensolver did not converge");
  }
  Eigen::VectorXd ev = solver.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol) throw DomainError("psd_sqrt: matrix is not positive semidefinite");
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  const CMatrix& u = solver.eigenvectors();
  return u * ev.cast<cplx>().asDiagonal() * u.adjoint();
}

/// Kronecker product: (A (x) B)[(i,k),(j,l)] = A[i,j] B[k,l].
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// nu-th exterior power: the matrix of nu x nu minors over sorted index sets
/// in lexicographic order. The 0-th power is the 1x1 identity.
inline CMatrix exterior_power(const CMatrix& a, std::size_t nu) {
  require_square(a, "exterior_power");
  const auto d = static_cast<std::size_t>(a.rows());
  if (nu > d) {
    throw DomainError("exterior_power: degree " + std::to_string(nu) +
                      " exceeds dimension " + std::to_string(d));
  }
  const auto subsets = detail::k_subsets(d, nu);
  const auto n = static_cast<Eigen::Index>(subsets.size());
  CMatrix out(n, n);
  CMatrix minor(static_cast<Eigen::Index>(nu), static_cast<Eigen::Index>(nu));
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      for (std::size_t i = 0; i < nu; ++i) {
        for (std::size_t j = 0; j < nu; ++j) {
          minor(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
              a(static_cast<Eigen::Index>(subsets[r][i]), static_cast<Eigen::Index>(subsets[c][j]));
        }
      }
      out(r, c) = nu == 0 ? cplx{1.0, 0.0} : lu_determinant(minor);
    }
  }
  return out;
}

inline CMatrix matrix_power(const CMatrix& a, unsigned n) {
  require_square(a, "matrix_power");
  CMatrix result = identity(a.rows());
  CMatrix base = a;
  while (n > 0) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n > 0) base = base * base;
  }
  return result;
}

/// trace(A^k) for k = 1..n (index 0 holds k = 1).
inline std::vector<cplx> power_traces(const CMatrix& a, unsigned n) {
  require_square(a, "power_traces");
  std::vector<cplx> out;
  out.reserve(n);
  CMatrix p = a;
  for (unsigned k = 1; k <= n; ++k) {
    out.push_back(p.trace());
    if (k < n) p = p * a;
  }
  return out;
}

/// Block diagonal matrix with `copies` copies of `b`.
inline CMatrix block_diagonal(const CMatrix& b, std::size_t copies) {
  const auto m = static_cast<Eigen::Index>(copies);
  CMatrix out = CMatrix::Zero(b.rows() * m, b.cols() * m);
  for (Eigen::Index k = 0; k < m; ++k) out.block(k * b.rows(), k * b.cols(), b.rows(), b.cols()) = b;
  return out;
}

}  // namespace rmzeta
