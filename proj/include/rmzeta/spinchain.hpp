#pragma once

// Finite-alphabet spin chains on a subshift of finite type with an Ising type
// interaction
//     A(xi) = beta q(xi_1) + beta sum_{i >= 2} r(xi_1, xi_i) d(i - 1),
//     r(x, y) = sum_i conj(s_i(x)) t_i(y),  d(k) = <B^{k-1} v | w>,
// the word data (q(n;x), a(n;x), b(n;x)) of the composed letter operators, and
// brute-force partition functions over periodic words.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rmzeta/detail/combinatorics.hpp"
#include "rmzeta/detail/parallel.hpp"
#include "rmzeta/distances.hpp"
#include "rmzeta/errors.hpp"
#include "rmzeta/fock.hpp"
#include "rmzeta/linalg.hpp"

namespace rmzeta {

inline constexpr std::uint64_t kDefaultWordBudget = 10'000'000;

struct SpinChainModel {
  std::vector<std::string> labels;
  std::vector<double> weights;               // nu_x > 0
  std::vector<std::vector<int>> transition;  // transition[x][y] = 1 iff y may follow x
  std::vector<cplx> q;                       // potential per letter
  std::vector<std::vector<cplx>> s;          // s[i][x], i < M
  std::vector<std::vector<cplx>> t;          // t[i][x], i < M
  DistanceEncoding enc;
  cplx beta{1.0, 0.0};

  std::size_t letters() const { return weights.size(); }
  std::size_t rank() const { return s.size(); }
  Eigen::Index fock_dim() const { return static_cast<Eigen::Index>(rank()) * enc.dim(); }
  bool allowed(std::size_t x, std::size_t y) const { return transition[x][y] != 0; }

  /// r(x, y) = sum_i conj(s_i(x)) t_i(y).
  cplx r(std::size_t x, std::size_t y) const {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < rank(); ++i) acc += std::conj(s[i][x]) * t[i][y];
    return acc;
  }

  /// B_M: block diagonal with M copies of enc.B.
  CMatrix block_shift() const { return block_diagonal(enc.B, rank()); }
};

using Word = std::vector<std::size_t>;

/// Periodic word x_1 ... x_n; admissible when every cyclic transition is allowed.
struct PeriodicWord {
  Word word;

  std::size_t size() const { return word.size(); }

  bool admissible(const SpinChainModel& m) const {
    const std::size_t n = word.size();
    for (std::size_t j = 0; j < n; ++j) {
      if (!m.allowed(word[j], word[(j + 1) % n])) return false;
    }
    return true;
  }

  PeriodicWord rotated(std::size_t k) const {
    PeriodicWord out{word};
    std::rotate(out.word.begin(), out.word.begin() + static_cast<std::ptrdiff_t>(k % word.size()), out.word.end());
    return out;
  }
};

struct LetterVectors {
  CVector a;
  CVector b;
  cplx q;
};

/// a_x = (conj(beta)/pi) (s_1(x) w, ..., s_M(x) w), b_x = (t_1(x) v, ..., t_M(x) v),
/// q_x = beta q(x). With these, pi <B_M^{j-1} b_y | a_x> = beta r(x, y) d(j).
inline LetterVectors letter_vectors(const SpinChainModel& m, std::size_t x) {
  if (x >= m.letters()) throw DomainError("letter_vectors: letter index out of range");
  const Eigen::Index e = m.enc.dim();
  LetterVectors out{CVector(m.fock_dim()), CVector(m.fock_dim()), m.beta * m.q[x]};
  const cplx scale = std::conj(m.beta) / kPi;
  for (std::size_t i = 0; i < m.rank(); ++i) {
    const auto off = static_cast<Eigen::Index>(i) * e;
    out.a.segment(off, e) = scale * m.s[i][x] * m.enc.w;
    out.b.segment(off, e) = m.t[i][x] * m.enc.v;
  }
  return out;
}

inline GaussianCompositionOp letter_operator(const SpinChainModel& m, std::size_t x) {
  const auto lv = letter_vectors(m, x);
  return {std::exp(lv.q), lv.a, lv.b, m.block_shift()};
}

/// Smallest n with ||B^n|| < 1 (searched up to `limit`).
inline unsigned min_trace_power(const DistanceEncoding& enc, unsigned limit = 256) {
  CMatrix p = enc.B;
  for (unsigned n = 1; n <= limit; ++n) {
    if (operator_norm(p) < 1.0) return n;
    p = p * enc.B;
  }
  throw DomainError("min_trace_power: ||B^n|| >= 1 for all n <= " + std::to_string(limit));
}

/// Structural checks plus the stacking self-test
/// pi <B_M^{j-1} b_y | a_x> = beta r(x, y) d(j), j = 1..6.
inline void validate_model(const SpinChainModel& m) {
  const std::size_t F = m.letters();
  if (F == 0) throw DomainError("model: alphabet is empty");
  if (!m.labels.empty() && m.labels.size() != F) throw DimensionError("model: labels and weights differ in length");
  for (double w : m.weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("model: letter weights must be finite and > 0");
  }
  if (m.transition.size() != F) throw DimensionError("model: transition matrix must be |F| x |F|");
  for (const auto& row : m.transition) {
    if (row.size() != F) throw DimensionError("model: transition matrix must be |F| x |F|");
    for (int e : row) {
      if (e != 0 && e != 1) throw DomainError("model: transition entries must be 0 or 1");
    }
  }
  if (m.q.size() != F) throw DimensionError("model: potential q needs one value per letter");
  if (m.s.empty() || m.s.size() != m.t.size()) throw DimensionError("model: s and t need the same rank M >= 1");
  for (std::size_t i = 0; i < m.rank(); ++i) {
    if (m.s[i].size() != F || m.t[i].size() != F) throw DimensionError("model: s_i and t_i need one value per letter");
  }
  require_square(m.enc.B, "model encoding");
  if (m.enc.dim() == 0 || m.enc.v.size() != m.enc.dim() || m.enc.w.size() != m.enc.dim()) {
    throw DimensionError("model: encoding B, v, w dimensions disagree");
  }
  if (!std::isfinite(m.beta.real()) || !std::isfinite(m.beta.imag())) throw DomainError("model: beta must be finite");
  if (spectral_radius(m.enc.B) >= 1.0) throw DomainError("model: encoding spectral radius ≥ 1");

  const CMatrix bm = m.block_shift();
  const auto d = m.enc.values(6);
  for (std::size_t y = 0; y < F; ++y) {
    CVector by = letter_vectors(m, y).b;
    for (int j = 1; j <= 6; ++j) {
      for (std::size_t x = 0; x < F; ++x) {
        const cplx lhs = kPi * inner(by, letter_vectors(m, x).a);
        const cplx rhs = m.beta * m.r(x, y) * d[static_cast<std::size_t>(j - 1)];
        if (std::abs(lhs - rhs) > 1e-10 * std::max(1.0, std::abs(rhs))) {
          throw NumericError("model: interaction self-test failed at j = " + std::to_string(j));
        }
      }
      by = bm * by;
    }
  }
}

struct WordData {
  cplx q;
  CVector a;
  CVector b;
};

/// q(n;x) = sum_k q_{x_k} + pi sum_k sum_{j=1}^{n-k} <B^{j-1} b_{x_{j+k}} | a_{x_k}>,
/// a(n;x) = sum_k (B^{n-k})^* a_{x_k},  b(n;x) = sum_{j=0}^{n-1} B^j b_{x_{j+1}}.
inline WordData word_data(const SpinChainModel& m, const PeriodicWord& w) {
  const std::size_t n = w.size();
  if (n == 0) throw DomainError("word_data: empty word");
  const CMatrix bm = m.block_shift();
  std::vector<LetterVectors> lv;
  lv.reserve(n);
  for (auto x : w.word) lv.push_back(letter_vectors(m, x));

  WordData out{cplx{0.0, 0.0}, lv[0].a, CVector::Zero(m.fock_dim())};
  for (std::size_t k = 1; k < n; ++k) out.a = bm.adjoint() * out.a + lv[k].a;

  // suffix[k] = sum_{j=1}^{n-k} B^{j-1} b_{x_{k+j}} (1-based k), built from the back
  CVector suffix = CVector::Zero(m.fock_dim());
  for (std::size_t k = n; k-- > 0;) {
    out.q += lv[k].q + kPi * inner(suffix, lv[k].a);
    suffix = bm * suffix + lv[k].b;
  }
  out.b = suffix;
  return out;
}

/// M_{x_n} o ... o M_{x_1} = e^{q(n;x)} K_{a(n;x), b(n;x), B_M^n}.
inline GaussianCompositionOp word_operator(const SpinChainModel& m, const PeriodicWord& w) {
  const auto wd = word_data(m, w);
  return {std::exp(wd.q), wd.a, wd.b, matrix_power(m.block_shift(), static_cast<unsigned>(w.size()))};
}

/// Hilbert-Schmidt norm squared of the word operator:
/// exp(2 Re q + pi ||a||^2 + pi ||(1 - B^n B^n*)^{-1/2}(B^n a + b)||^2) / det(1 - B^n B^n*).
inline double c_bound(const SpinChainModel& m, const PeriodicWord& w) {
  const auto n = static_cast<unsigned>(w.size());
  const CMatrix bn_enc = matrix_power(m.enc.B, n);
  if (operator_norm(bn_enc) >= 1.0) throw DomainError("c_bound: requires ||B^n|| < 1");
  const auto wd = word_data(m, w);
  const CMatrix bn = block_diagonal(bn_enc, m.rank());
  const CMatrix gram = identity(bn.rows()) - bn * bn.adjoint();
  const CVector x = bn * wd.a + wd.b;
  const double quad = inner(gram.partialPivLu().solve(x), x).real();
  const double det = std::pow(lu_determinant(identity(m.enc.dim()) - bn_enc * bn_enc.adjoint()).real(),
                              static_cast<double>(m.rank()));
  return std::exp(2.0 * wd.q.real() + kPi * wd.a.squaredNorm() + kPi * quad) / det;
}

namespace detail {

// coeff[rho - 1] multiplies beta r(x_k, x_{k+rho}) in the periodic Birkhoff sum.
struct PeriodicKernel {
  std::vector<cplx> coeff;
};

// Full series: coeff_rho = sum_{l >= 0} d(rho + l n) = <B^{rho-1} (1 - B^n)^{-1} v | w>.
inline PeriodicKernel closed_kernel(const DistanceEncoding& enc, std::size_t n) {
  const CMatrix res = resolvent_at_one(matrix_power(enc.B, static_cast<unsigned>(n)));
  PeriodicKernel k;
  CVector x = res * enc.v;
  for (std::size_t rho = 1; rho <= n; ++rho) {
    k.coeff.push_back(inner(x, enc.w));
    x = enc.B * x;
  }
  return k;
}

// Series cut at d(J - 1): coeff_rho = sum_{rho + l n <= J - 1} d(rho + l n).
inline PeriodicKernel series_kernel(const std::vector<cplx>& d, std::size_t n) {
  PeriodicKernel k;
  k.coeff.assign(n, cplx{0.0, 0.0});
  for (std::size_t i = 1; i <= d.size(); ++i) k.coeff[(i - 1) % n] += d[i - 1];
  return k;
}

struct InteractionTables {
  std::vector<cplx> q;                // beta q(x)
  std::vector<std::vector<cplx>> r;   // beta r(x, y)
};

inline InteractionTables interaction_tables(const SpinChainModel& m) {
  InteractionTables t;
  const std::size_t F = m.letters();
  t.r.assign(F, std::vector<cplx>(F));
  for (std::size_t x = 0; x < F; ++x) {
    t.q.push_back(m.beta * m.q[x]);
    for (std::size_t y = 0; y < F; ++y) t.r[x][y] = m.beta * m.r(x, y);
  }
  return t;
}

inline cplx birkhoff_sum(const InteractionTables& tab, const PeriodicKernel& ker, const Word& w) {
  const std::size_t n = w.size();
  cplx total{0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    total += tab.q[w[k]];
    for (std::size_t rho = 1; rho <= n; ++rho) total += tab.r[w[k]][w[(k + rho) % n]] * ker.coeff[rho - 1];
  }
  return total;
}

inline void check_budget(std::size_t letters, std::size_t n, std::uint64_t budget, const char* what) {
  const auto count = saturating_pow(letters, static_cast<unsigned>(n));
  if (count > budget) {
    throw ResourceError(std::string(what) + ": " + std::to_string(letters) + "^" + std::to_string(n) +
                        " words exceed the budget of " + std::to_string(budget));
  }
}

// Calls fn(word) for every cyclically admissible word of length n starting with
// `first`, in lexicographic order.
inline void for_each_admissible_word(const SpinChainModel& m, std::size_t n, std::size_t first,
                                     const std::function<void(const Word&)>& fn) {
  const std::size_t F = m.letters();
  Word w(n, 0);
  w[0] = first;
  // depth-first in lexicographic order with pruning on forbidden transitions
  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    if (pos == n) {
      if (m.allowed(w[n - 1], w[0])) fn(w);
      return;
    }
    for (std::size_t y = 0; y < F; ++y) {
      if (!m.allowed(w[pos - 1], y)) continue;
      w[pos] = y;
      rec(pos + 1);
    }
  };
  rec(1);
}

// sum over letters `first` of partial(first), reduced in letter order.
template <typename Partial>
cplx sum_by_first_letter(const SpinChainModel& m, unsigned threads, Partial&& partial) {
  const auto parts = parallel_map(m.letters(), threads, partial);
  cplx total{0.0, 0.0};
  for (auto p : parts) total += p;
  return total;
}

}  // namespace detail

/// Birkhoff sum of A over one period of the periodic configuration, in closed form
/// (every term of the infinite interaction series included).
inline cplx periodic_interaction_sum(const SpinChainModel& m, const PeriodicWord& w) {
  if (w.size() == 0) throw DomainError("periodic_interaction_sum: empty word");
  return detail::birkhoff_sum(detail::interaction_tables(m), detail::closed_kernel(m.enc, w.size()), w.word);
}

/// Same Birkhoff sum with A(xi) cut at i = J: each of the n rotations contributes
/// beta q(x_k) + beta sum_{i=2}^{J} r(x_k, x_{k+i-1}) d(i-1).
inline cplx interaction_series_sum(const SpinChainModel& m, const PeriodicWord& w, int J) {
  if (J < 2) throw DomainError("interaction_series_sum: J must be >= 2");
  const std::size_t n = w.size();
  if (n == 0) throw DomainError("interaction_series_sum: empty word");
  const auto d = m.enc.values(J - 1);
  cplx total{0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    cplx a = m.q[w.word[k]];
    for (int i = 2; i <= J; ++i) a += m.r(w.word[k], w.word[(k + static_cast<std::size_t>(i) - 1) % n]) * d[static_cast<std::size_t>(i - 2)];
    total += m.beta * a;
  }
  return total;
}

struct PartitionMethod {
  enum class Kind { Closed, Series };
  Kind kind = Kind::Closed;
  int J = 300;

  static PartitionMethod closed() { return {}; }
  static PartitionMethod series(int J) { return {Kind::Series, J}; }
};

struct EnumerationOptions {
  std::uint64_t budget = kDefaultWordBudget;
  unsigned threads = 1;
};

/// Z_n = sum over cyclically admissible words of prod nu_{x_i} exp(Birkhoff sum).
inline cplx partition_bruteforce(const SpinChainModel& m, std::size_t n, PartitionMethod method = {},
                                 const EnumerationOptions& opt = {}) {
  if (n == 0) throw DomainError("partition_bruteforce: n must be >= 1");
  detail::check_budget(m.letters(), n, opt.budget, "partition_bruteforce");
  const auto tab = detail::interaction_tables(m);
  detail::PeriodicKernel ker;
  if (method.kind == PartitionMethod::Kind::Closed) {
    ker = detail::closed_kernel(m.enc, n);
  } else {
    if (method.J < 2) throw DomainError("partition_bruteforce: series J must be >= 2");
    ker = detail::series_kernel(m.enc.values(method.J - 1), n);
  }
  return detail::sum_by_first_letter(m, opt.threads, [&](std::size_t first) {
    cplx acc{0.0, 0.0};
    detail::for_each_admissible_word(m, n, first, [&](const Word& w) {
      double weight = 1.0;
      for (auto x : w) weight *= m.weights[x];
      acc += weight * std::exp(detail::birkhoff_sum(tab, ker, w));
    });
    return acc;
  });
}

/// Bound on |closed - series(J)| for one word: n max|beta r| sum_{k >= J} |d(k)|,
/// with the tail taken from the encoding up to `horizon` plus a geometric remainder.
inline double series_tail_bound(const SpinChainModel& m, std::size_t n, int J, int horizon = 4000) {
  const auto tab = detail::interaction_tables(m);
  double rmax = 0.0;
  for (const auto& row : tab.r)
    for (auto v : row) rmax = std::max(rmax, std::abs(v));
  const auto d = m.enc.values(std::max(horizon, J + 1));
  double tail = 0.0;
  for (std::size_t k = static_cast<std::size_t>(J); k <= d.size(); ++k) tail += std::abs(d[k - 1]);
  // remainder past the horizon: with p = min_trace_power and c = max_{r<p} ||B^r||,
  // |d(k)| <= c ||B^p||^{floor((k-1)/p)} |v| |w|
  const unsigned p = min_trace_power(m.enc);
  double c = 1.0;
  CMatrix br = identity(m.enc.dim());
  for (unsigned r = 1; r < p; ++r) {
    br = br * m.enc.B;
    c = std::max(c, operator_norm(br));
  }
  const double q = operator_norm(matrix_power(m.enc.B, p));
  const double first = std::floor(static_cast<double>(d.size()) / p);
  tail += c * m.enc.v.norm() * m.enc.w.norm() * p * std::pow(q, first) / (1.0 - q);
  return static_cast<double>(n) * rmax * tail;
}

}  // namespace rmzeta
