#pragma once

// Distance functions d : N -> C written as d(k) = <B^{k-1} v | w>.
// Four families: finite range (nilpotent shift), polynomial times exponential
// (Pascal matrix), superexponential decay (weighted shift) and finite
// superpositions of exponentials.

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rmzeta/errors.hpp"
#include "rmzeta/linalg.hpp"

namespace rmzeta {

enum class DistanceKind { FiniteRange, PolyExponential, SuperExponential, Superposition };

inline const char* to_string(DistanceKind k) {
  switch (k) {
    case DistanceKind::FiniteRange: return "finite_range";
    case DistanceKind::PolyExponential: return "poly_exponential";
    case DistanceKind::SuperExponential: return "superexponential";
    case DistanceKind::Superposition: return "superposition";
  }
  return "?";
}

inline constexpr int kDefaultCheckHorizon = 12;
inline constexpr double kEncodingTolerance = 1e-10;

struct DistanceEncoding {
  CMatrix B;
  CVector v;
  CVector w;
  DistanceKind kind = DistanceKind::Superposition;
  double spectral_radius_bound = 0.0;
  double norm_bound = 0.0;
  int check_horizon = kDefaultCheckHorizon;

  Eigen::Index dim() const { return B.rows(); }

  /// <B^{k-1} v | w>, k >= 1.
  cplx value(int k) const {
    if (k < 1) throw DomainError("DistanceEncoding::value: k must be >= 1");
    return inner(matrix_power(B, static_cast<unsigned>(k - 1)) * v, w);
  }

  /// d(1), ..., d(K) by repeated multiplication.
  std::vector<cplx> values(int K) const {
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(std::max(K, 0)));
    CVector x = v;
    for (int k = 1; k <= K; ++k) {
      out.push_back(inner(x, w));
      if (k < K) x = B * x;
    }
    return out;
  }
};

struct FiniteRangeSpec {
  std::vector<cplx> d;
  cplx lambda{0.5, 0.0};

  friend bool operator==(const FiniteRangeSpec&, const FiniteRangeSpec&) = default;
};

struct PolyExponentialSpec {
  cplx lambda{0.5, 0.0};
  std::vector<cplx> c;  // d(k) = lambda^k sum_i c_i k^i

  friend bool operator==(const PolyExponentialSpec&, const PolyExponentialSpec&) = default;
};

struct SuperExponentialSpec {
  double gamma = 1.0;
  double delta = 2.0;
  std::vector<cplx> a{cplx{1.0, 0.0}};  // a(1), a(2), ...; a single entry means constant
  int m_enc = kDefaultCheckHorizon + 4;

  friend bool operator==(const SuperExponentialSpec&, const SuperExponentialSpec&) = default;
};

struct SuperpositionSpec {
  std::vector<std::pair<cplx, cplx>> terms;  // (c_i, lambda_i)
  double tail_bound = 0.0;                   // caller's bound on the omitted tail

  friend bool operator==(const SuperpositionSpec&, const SuperpositionSpec&) = default;
};

using DistanceSpec = std::variant<FiniteRangeSpec, PolyExponentialSpec, SuperExponentialSpec, SuperpositionSpec>;

namespace detail {

inline cplx superexp_a(const SuperExponentialSpec& s, int k) {
  if (s.a.empty()) throw DomainError("superexponential: empty coefficient table a");
  if (s.a.size() == 1) return s.a.front();
  if (static_cast<std::size_t>(k) > s.a.size()) {
    throw DomainError("superexponential: coefficient table a has " + std::to_string(s.a.size()) +
                      " entries, need a(" + std::to_string(k) + ")");
  }
  return s.a[static_cast<std::size_t>(k - 1)];
}

// log of g(k)/g(k+1) = gamma((k-1)^delta - k^delta)
inline double superexp_log_ratio(const SuperExponentialSpec& s, int k) {
  return s.gamma * (std::pow(k - 1.0, s.delta) - std::pow(static_cast<double>(k), s.delta));
}

}  // namespace detail

/// Direct evaluation of d(k) from the defining formula of each family.
inline cplx reference_value(const DistanceSpec& spec, int k) {
  if (k < 1) throw DomainError("reference_value: k must be >= 1");
  return std::visit(
      [k](const auto& s) -> cplx {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FiniteRangeSpec>) {
          return static_cast<std::size_t>(k) <= s.d.size() ? s.d[static_cast<std::size_t>(k - 1)] : cplx{0.0, 0.0};
        } else if constexpr (std::is_same_v<T, PolyExponentialSpec>) {
          cplx poly{0.0, 0.0};
          for (auto it = s.c.rbegin(); it != s.c.rend(); ++it) poly = poly * static_cast<double>(k) + *it;
          return std::pow(s.lambda, k) * poly;
        } else if constexpr (std::is_same_v<T, SuperExponentialSpec>) {
          return detail::superexp_a(s, k) * std::exp(-s.gamma * std::pow(static_cast<double>(k), s.delta));
        } else {
          cplx sum{0.0, 0.0};
          for (const auto& [c, l] : s.terms) sum += c * std::pow(l, k);
          return sum;
        }
      },
      spec);
}

inline std::vector<cplx> reference_values(const DistanceSpec& spec, int K) {
  std::vector<cplx> out;
  for (int k = 1; k <= K; ++k) out.push_back(reference_value(spec, k));
  return out;
}

/// max_{1<=k<=K} |<B^{k-1} v | w> - d_ref(k)|.
inline double verify_encoding(const DistanceEncoding& enc, const std::vector<cplx>& d_ref, int K) {
  if (K < 1) throw DomainError("verify_encoding: K must be >= 1");
  if (d_ref.size() < static_cast<std::size_t>(K)) throw DomainError("verify_encoding: reference table shorter than K");
  const auto got = enc.values(K);
  double err = 0.0;
  for (int k = 0; k < K; ++k) err = std::max(err, std::abs(got[static_cast<std::size_t>(k)] - d_ref[static_cast<std::size_t>(k)]));
  return err;
}

namespace detail {

inline void finish_encoding(DistanceEncoding& enc, const DistanceSpec& spec, double tolerance) {
  require_finite(enc.B, "distance encoding");
  require_finite(enc.v, "distance encoding");
  require_finite(enc.w, "distance encoding");
  if (spectral_radius(enc.B) >= 1.0) throw DomainError("distance encoding: spectral radius ≥ 1");
  const double err = verify_encoding(enc, reference_values(spec, enc.check_horizon), enc.check_horizon);
  if (!(err <= tolerance)) {
    throw NumericError("distance encoding: reproduction error " + std::to_string(err) + " on k <= " +
                       std::to_string(enc.check_horizon));
  }
}

inline void require_inside_unit_disk(cplx lambda, const char* what) {
  if (!(std::abs(lambda) < 1.0)) {
    throw DomainError(std::string(what) + ": spectral radius ≥ 1 (|lambda| = " + std::to_string(std::abs(lambda)) + ")");
  }
}

}  // namespace detail

/// B = lambda S (upper shift on C^rho0), v_k = lambda^{1-k} d(k), w = e_1.
inline DistanceEncoding encode_finite_range(const std::vector<cplx>& d, cplx lambda,
                                            int check_horizon = kDefaultCheckHorizon) {
  if (d.empty()) throw DomainError("encode_finite_range: need at least one value");
  if (lambda == cplx{0.0, 0.0}) throw DomainError("encode_finite_range: lambda must be nonzero");
  const auto n = static_cast<Eigen::Index>(d.size());
  DistanceEncoding enc;
  enc.kind = DistanceKind::FiniteRange;
  enc.check_horizon = check_horizon;
  enc.B = CMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) enc.B(k, k + 1) = lambda;
  enc.v.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) enc.v(k) = std::pow(lambda, -static_cast<int>(k)) * d[static_cast<std::size_t>(k)];
  enc.w = CVector::Zero(n);
  enc.w(0) = 1.0;
  enc.spectral_radius_bound = 0.0;
  enc.norm_bound = n > 1 ? std::abs(lambda) : 0.0;
  const double scale = std::max(1.0, enc.v.cwiseAbs().maxCoeff());
  detail::finish_encoding(enc, FiniteRangeSpec{d, lambda}, kEncodingTolerance * scale);
  return enc;
}

/// Lower triangular Pascal matrix P_{ij} = C(i, j), i, j = 0..n-1.
inline CMatrix pascal_matrix(Eigen::Index n) {
  CMatrix p = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    p(i, 0) = 1.0;
    for (Eigen::Index j = 1; j <= i; ++j) p(i, j) = p(i - 1, j - 1) + p(i - 1, j);
  }
  return p;
}

/// d(k) = lambda^k sum_{i=0}^p c_i k^i via B = lambda P, v = lambda (1,...,1), w = conj(c).
inline DistanceEncoding encode_poly_exponential(cplx lambda, const std::vector<cplx>& c,
                                                int check_horizon = kDefaultCheckHorizon) {
  if (c.empty()) throw DomainError("encode_poly_exponential: need at least one coefficient");
  detail::require_inside_unit_disk(lambda, "encode_poly_exponential");
  if (lambda == cplx{0.0, 0.0}) throw DomainError("encode_poly_exponential: lambda must be nonzero");
  const auto n = static_cast<Eigen::Index>(c.size());
  DistanceEncoding enc;
  enc.kind = DistanceKind::PolyExponential;
  enc.check_horizon = check_horizon;
  enc.B = lambda * pascal_matrix(n);
  enc.v = CVector::Constant(n, lambda);
  enc.w.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) enc.w(i) = std::conj(c[static_cast<std::size_t>(i)]);
  enc.spectral_radius_bound = std::abs(lambda);
  enc.norm_bound = operator_norm(enc.B);
  double scale = 0.0;
  for (int k = 1; k <= check_horizon; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) s += std::abs(c[i]) * std::pow(k, static_cast<double>(i));
    scale = std::max(scale, s * std::pow(std::abs(lambda), k));
  }
  detail::finish_encoding(enc, PolyExponentialSpec{lambda, c}, kEncodingTolerance * std::max(1.0, scale));
  return enc;
}

/// d(k) = a(k) exp(-gamma k^delta) via the weighted shift (S_g)_{k,k+1} = g(k)/g(k+1),
/// g(k) = exp(gamma (k-1)^delta), v_k = a(k) g(k)/g(k+1), w = e_1. Truncated to m_enc.
inline DistanceEncoding encode_superexponential(const SuperExponentialSpec& s,
                                                int check_horizon = kDefaultCheckHorizon) {
  if (!(s.gamma > 0.0)) throw DomainError("encode_superexponential: gamma must be > 0");
  if (!(s.delta > 1.0)) throw DomainError("encode_superexponential: delta must be > 1");
  if (s.m_enc < check_horizon) {
    throw DomainError("encode_superexponential: m_enc = " + std::to_string(s.m_enc) +
                      " is below the check horizon " + std::to_string(check_horizon));
  }
  const auto n = static_cast<Eigen::Index>(s.m_enc);
  DistanceEncoding enc;
  enc.kind = DistanceKind::SuperExponential;
  enc.check_horizon = check_horizon;
  enc.B = CMatrix::Zero(n, n);
  enc.v.resize(n);
  for (int k = 1; k <= s.m_enc; ++k) {
    const double ratio = std::exp(detail::superexp_log_ratio(s, k));
    if (!std::isfinite(ratio)) throw ResourceError("encode_superexponential: weight overflow at k = " + std::to_string(k));
    if (k < s.m_enc) enc.B(k - 1, k) = ratio;
    enc.v(k - 1) = detail::superexp_a(s, k) * ratio;
  }
  enc.w = CVector::Zero(n);
  enc.w(0) = 1.0;
  enc.spectral_radius_bound = 0.0;
  enc.norm_bound = std::exp(-s.gamma);
  detail::finish_encoding(enc, s, 1e-12 * std::max(1.0, enc.v.cwiseAbs().maxCoeff()));
  return enc;
}

/// d(k) = sum_i c_i lambda_i^k via B = diag(lambda_i), v = (c_i lambda_i), w = (1,...,1).
inline DistanceEncoding encode_superposition(const std::vector<std::pair<cplx, cplx>>& terms, double tail_bound = 0.0,
                                             int check_horizon = kDefaultCheckHorizon) {
  if (terms.empty()) throw DomainError("encode_superposition: need at least one term");
  if (!(tail_bound >= 0.0)) throw DomainError("encode_superposition: tail bound must be >= 0");
  const auto n = static_cast<Eigen::Index>(terms.size());
  DistanceEncoding enc;
  enc.kind = DistanceKind::Superposition;
  enc.check_horizon = check_horizon;
  enc.B = CMatrix::Zero(n, n);
  enc.v.resize(n);
  double radius = 0.0, scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [c, l] = terms[static_cast<std::size_t>(i)];
    detail::require_inside_unit_disk(l, "encode_superposition");
    enc.B(i, i) = l;
    enc.v(i) = c * l;
    radius = std::max(radius, std::abs(l));
    scale += std::abs(c * l);
  }
  enc.w = CVector::Ones(n);
  enc.spectral_radius_bound = radius;
  enc.norm_bound = radius;
  detail::finish_encoding(enc, SuperpositionSpec{terms, tail_bound}, kEncodingTolerance * std::max(1.0, scale));
  return enc;
}

inline DistanceEncoding encode(const DistanceSpec& spec, int check_horizon = kDefaultCheckHorizon) {
  return std::visit(
      [check_horizon](const auto& s) -> DistanceEncoding {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FiniteRangeSpec>) {
          return encode_finite_range(s.d, s.lambda, check_horizon);
        } else if constexpr (std::is_same_v<T, PolyExponentialSpec>) {
          return encode_poly_exponential(s.lambda, s.c, check_horizon);
        } else if constexpr (std::is_same_v<T, SuperExponentialSpec>) {
          return encode_superexponential(s, check_horizon);
        } else {
          return encode_superposition(s.terms, s.tail_bound, check_horizon);
        }
      },
      spec);
}

/// det(1 - B^n).
inline cplx shift_determinant(const DistanceEncoding& enc, unsigned n) {
  return lu_determinant(identity(enc.dim()) - matrix_power(enc.B, n));
}

}  // namespace rmzeta
