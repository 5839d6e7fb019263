#pragma once

// Schatten norms and n0-regularized determinants det_{n0}(1 - zA) of finite
// matrices. Three evaluation routes are provided and checked against each
// other in the tests:
//   * Euler product over eigenvalues (entire in z),
//   * Taylor coefficients from power traces (Newton recursion),
//   * exponentiated trace series (inside the disk |z| rho(A) < 1).

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "rmzeta/errors.hpp"
#include "rmzeta/linalg.hpp"

namespace rmzeta {

/// Regularization order n0 >= 1.
class RegDetOrder {
 public:
  explicit RegDetOrder(int n0) : n0_(n0) {
    if (n0 < 1) throw DomainError("RegDetOrder: n0 must be >= 1, got " + std::to_string(n0));
  }
  int value() const { return n0_; }
  friend bool operator==(RegDetOrder, RegDetOrder) = default;

 private:
  int n0_;
};

/// Schatten p-norm (sum of s_j^p)^(1/p), p >= 1.
inline double schatten_norm(const CMatrix& a, double p) {
  if (!(p >= 1.0)) throw DomainError("schatten_norm: p must be >= 1");
  double acc = 0.0;
  for (double s : singular_values(a)) acc += std::pow(s, p);
  return std::pow(acc, 1.0 / p);
}

/// Weierstrass factor f_{n0}(u) = (1 - u) exp(sum_{k<n0} u^k / k).
inline cplx weierstrass_factor(cplx u, RegDetOrder n0) {
  cplx exponent{0.0, 0.0};
  cplx uk{1.0, 0.0};
  for (int k = 1; k < n0.value(); ++k) {
    uk *= u;
    exponent += uk / static_cast<double>(k);
  }
  return (1.0 - u) * std::exp(exponent);
}

/// Euler product over a given eigenvalue list.
inline cplx regdet_from_spectrum(const std::vector<cplx>& lambdas, cplx z, RegDetOrder n0) {
  cplx prod{1.0, 0.0};
  for (auto l : lambdas) prod *= weierstrass_factor(z * l, n0);
  return prod;
}

/// det_{n0}(1 - zA) = prod_j f_{n0}(z lambda_j).
inline cplx regdet_eig(const CMatrix& a, cplx z, RegDetOrder n0) {
  require_square(a, "regdet_eig");
  if (a.rows() == 0) return {1.0, 0.0};
  return regdet_from_spectrum(eigenvalues(a).values, z, n0);
}

/// Taylor coefficients of z -> det_{n0}(1 - zA): coeffs[n] = (-1)^n c_n(A) / n!.
struct RegDetSeries {
  RegDetOrder order{1};
  std::vector<cplx> coeffs;

  cplx evaluate(cplx z) const {
    cplx acc{0.0, 0.0};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
  }
};

/// Coefficients up to degree N. b_k = trace A^k for k >= n0 and 0 below, and
/// e_n = c_n / n! obeys e_n = (1/n) sum_{k=1}^n (-1)^{k-1} b_k e_{n-k}.
inline RegDetSeries regdet_coeffs(const CMatrix& a, RegDetOrder n0, unsigned N) {
  require_square(a, "regdet_coeffs");
  if (static_cast<int>(N) < n0.value()) throw DomainError("regdet_coeffs: N must be >= n0");
  std::vector<cplx> b(N + 1, cplx{0.0, 0.0});
  if (a.rows() > 0) {
    const auto traces = power_traces(a, N);
    for (unsigned k = static_cast<unsigned>(n0.value()); k <= N; ++k) b[k] = traces[k - 1];
  }
  std::vector<cplx> e(N + 1, cplx{0.0, 0.0});
  e[0] = 1.0;
  for (unsigned n = 1; n <= N; ++n) {
    cplx acc{0.0, 0.0};
    for (unsigned k = 1; k <= n; ++k) {
      const double sign = (k % 2 == 1) ? 1.0 : -1.0;
      acc += sign * b[k] * e[n - k];
    }
    e[n] = acc / static_cast<double>(n);
  }
  RegDetSeries s{n0, std::vector<cplx>(N + 1)};
  for (unsigned n = 0; n <= N; ++n) s.coeffs[n] = (n % 2 == 0 ? 1.0 : -1.0) * e[n];
  return s;
}

/// exp(-sum_{n=n0}^{terms} z^n/n trace A^n); requires |z| rho(A) < 1.
inline cplx regdet_exptrace(const CMatrix& a, cplx z, RegDetOrder n0, unsigned terms) {
  require_square(a, "regdet_exptrace");
  if (a.rows() == 0 || z == cplx{0.0, 0.0}) return {1.0, 0.0};
  const double rho = spectral_radius(a);
  if (std::abs(z) * rho >= 1.0) {
    throw DivergenceError("regdet_exptrace: |z| * spectral radius >= 1");
  }
  cplx exponent{0.0, 0.0};
  CMatrix p = a;
  cplx zn = z;
  for (unsigned n = 1; n <= terms; ++n) {
    if (static_cast<int>(n) >= n0.value()) exponent += zn / static_cast<double>(n) * p.trace();
    if (n < terms) {
      p = p * a;
      zn *= z;
    }
  }
  return std::exp(-exponent);
}

/// Gamma_{n0} with |f_{n0}(u)| <= exp(Gamma |u|^{n0}). Gamma_1 = 1 is exact;
/// the other defaults are numerical suprema rounded up and can be overridden.
struct GammaTable {
  std::map<int, double> values{{1, 1.0}, {2, 0.5}, {3, 0.6}, {4, 0.65}};

  double at(RegDetOrder n0) const {
    auto it = values.find(n0.value());
    if (it == values.end()) {
      throw DomainError("GammaTable: no constant configured for n0 = " + std::to_string(n0.value()));
    }
    return it->second;
  }
};

struct BoundCheck {
  double lhs;
  double rhs;
  bool ok;
};

/// |det_{n0}(1 + A)| <= exp(Gamma_{n0} ||A^{n0}||_1).
inline BoundCheck regdet_bound_check(const CMatrix& a, RegDetOrder n0, const GammaTable& gamma = {}) {
  require_square(a, "regdet_bound_check");
  const double lhs = std::abs(regdet_eig(a, cplx{-1.0, 0.0}, n0));
  const double rhs = std::exp(gamma.at(n0) * schatten_norm(matrix_power(a, static_cast<unsigned>(n0.value())), 1.0));
  return {lhs, rhs, lhs <= rhs * (1.0 + 1e-12)};
}

/// det_{n0}(1 - z A (x) B) via prod_j det_{n0}(1 - z lambda_j(B) A).
inline cplx tensor_regdet(const CMatrix& a, const CMatrix& b, cplx z, RegDetOrder n0) {
  require_square(a, "tensor_regdet");
  require_square(b, "tensor_regdet");
  if (a.rows() == 0 || b.rows() == 0) return {1.0, 0.0};
  const auto mu = eigenvalues(a).values;
  cplx prod{1.0, 0.0};
  for (auto lb : eigenvalues(b).values) prod *= regdet_from_spectrum(mu, z * lb, n0);
  return prod;
}

/// Sum of the trace norms ||G_nu^{n0}||_1; finiteness certifies convergence of
/// prod_nu det_{n0}(1 - z G_nu).
inline double product_tail_bound(const std::vector<double>& norms) {
  double total = 0.0;
  for (double v : norms) {
    if (!(v >= 0.0)) throw DomainError("product_tail_bound: norms must be non-negative");
    total += v;
  }
  return total;
}

struct HadamardBound {
  double lhs;
  double rhs;
};

/// lhs = |trace(A_1 ... A_n)| (cyclic index sum), rhs = prod_k ||A_k||_F, n >= 2.
/// A single factor is excluded: |trace 1_k| = k exceeds ||1_k||_F.
inline HadamardBound cyclic_hadamard_bound(const std::vector<CMatrix>& factors) {
  if (factors.size() < 2) throw DomainError("cyclic_hadamard_bound: need at least two factors");
  const std::size_t n = factors.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& next = factors[(k + 1) % n];
    if (factors[k].cols() != next.rows()) {
      throw DimensionError("cyclic_hadamard_bound: inner dimensions of factors " + std::to_string(k) +
                           " and " + std::to_string((k + 1) % n) + " do not match");
    }
  }
  CMatrix prod = factors.front();
  for (std::size_t k = 1; k < n; ++k) prod = prod * factors[k];
  double rhs = 1.0;
  for (const auto& f : factors) rhs *= f.norm();
  return {std::abs(prod.trace()), rhs};
}

}  // namespace rmzeta
