#pragma once

// Ruelle-Mayer transfer operator of a spin chain on L^2(F) (x) Fock(C^{M m}),
//     (M f)(x, z) = sum_sigma A(sigma, x) nu_sigma e^{beta q(sigma)} e^{pi <z|a_sigma>}
//                   f(sigma, b_sigma + B_M z),
// truncated to total degree D, and the traces of its powers computed either
// from the truncated matrix or exactly as a sum over periodic words.

#include <cmath>
#include <complex>
#include <variant>
#include <vector>

#include "rmzeta/errors.hpp"
#include "rmzeta/fock.hpp"
#include "rmzeta/linalg.hpp"
#include "rmzeta/spinchain.hpp"

namespace rmzeta {

struct TransferOperator {
  FockBasis basis;
  std::size_t letters;
  CMatrix matrix;  // block (l, k) of size basis.size()

  Eigen::Index block_size() const { return static_cast<Eigen::Index>(basis.size()); }
  auto block(std::size_t l, std::size_t k) const {
    const auto n = block_size();
    return matrix.block(static_cast<Eigen::Index>(l) * n, static_cast<Eigen::Index>(k) * n, n, n);
  }
};

/// block(l, k) = A(k, l) nu_k op_matrix(M_k).
inline TransferOperator build_operator(const SpinChainModel& m, std::size_t degree,
                                       std::size_t cap = kDefaultBasisCap) {
  FockBasis basis(static_cast<std::size_t>(m.fock_dim()), degree, cap);
  const std::size_t F = m.letters();
  const auto n = static_cast<Eigen::Index>(basis.size());
  CMatrix mat = CMatrix::Zero(n * static_cast<Eigen::Index>(F), n * static_cast<Eigen::Index>(F));
  for (std::size_t k = 0; k < F; ++k) {
    const CMatrix op = op_matrix(letter_operator(m, k), basis);
    for (std::size_t l = 0; l < F; ++l) {
      if (!m.allowed(k, l)) continue;
      mat.block(static_cast<Eigen::Index>(l) * n, static_cast<Eigen::Index>(k) * n, n, n) = m.weights[k] * op;
    }
  }
  return {std::move(basis), F, std::move(mat)};
}

/// trace of the n-th power of the truncated matrix.
inline cplx trace_power_matrix(const TransferOperator& T, unsigned n) {
  if (n == 0) throw DomainError("trace_power_matrix: n must be >= 1");
  return matrix_power(T.matrix, n).trace();
}

/// traces of powers 1..n of the truncated matrix.
inline std::vector<cplx> trace_powers_matrix(const TransferOperator& T, unsigned n) {
  return power_traces(T.matrix, n);
}

namespace detail {

inline cplx int_pow(cplx base, std::size_t e) {
  cplx out{1.0, 0.0};
  for (std::size_t i = 0; i < e; ++i) out *= base;
  return out;
}

inline void require_trace_power(const SpinChainModel& m, std::size_t n, const char* what) {
  if (n == 0) throw DomainError(std::string(what) + ": n must be >= 1");
  const unsigned nmin = min_trace_power(m.enc);
  if (n < nmin) {
    throw DomainError(std::string(what) + ": n = " + std::to_string(n) + " is below n_min = " + std::to_string(nmin) +
                      " (smallest n with ||B^n|| < 1)");
  }
}

}  // namespace detail

/// trace M^n = sum over cyclically admissible words of prod nu_{x_i} trace(M_{x_n} o ... o M_{x_1}),
/// each word trace in closed form exp(q(n;x) + pi <(1 - B^n)^{-1} b(n;x) | a(n;x)>) / det(1 - B^n).
inline cplx trace_power_words(const SpinChainModel& m, std::size_t n, const EnumerationOptions& opt = {}) {
  detail::require_trace_power(m, n, "trace_power_words");
  detail::check_budget(m.letters(), n, opt.budget, "trace_power_words");
  const CMatrix bn_enc = matrix_power(m.enc.B, static_cast<unsigned>(n));
  const CMatrix res_enc = resolvent_at_one(bn_enc);
  const CMatrix res = block_diagonal(res_enc, m.rank());
  const cplx det = detail::int_pow(lu_determinant(identity(m.enc.dim()) - bn_enc), m.rank());
  const auto total = detail::sum_by_first_letter(m, opt.threads, [&](std::size_t first) {
    cplx acc{0.0, 0.0};
    detail::for_each_admissible_word(m, n, first, [&](const Word& w) {
      double weight = 1.0;
      for (auto x : w) weight *= m.weights[x];
      const auto wd = word_data(m, PeriodicWord{w});
      acc += weight * std::exp(wd.q + kPi * inner(res * wd.b, wd.a));
    });
    return acc;
  });
  return total / det;
}

struct WordsRoute {};
struct MatrixRoute {
  std::size_t degree = 25;
};
using TraceRoute = std::variant<WordsRoute, MatrixRoute>;

/// det(1 - B^n)^M, computed on the encoding dimension.
inline cplx trace_formula_factor(const SpinChainModel& m, std::size_t n) {
  return detail::int_pow(shift_determinant(m.enc, static_cast<unsigned>(n)), m.rank());
}

/// Z_n = det(1 - B^n)^M trace M^n from a prebuilt operator.
inline cplx dynamical_Zn(const SpinChainModel& m, const TransferOperator& T, std::size_t n) {
  detail::require_trace_power(m, n, "dynamical_Zn");
  return trace_formula_factor(m, n) * trace_power_matrix(T, static_cast<unsigned>(n));
}

inline cplx dynamical_Zn(const SpinChainModel& m, std::size_t n, const TraceRoute& route = WordsRoute{},
                         const EnumerationOptions& opt = {}) {
  if (const auto* mr = std::get_if<MatrixRoute>(&route)) return dynamical_Zn(m, build_operator(m, mr->degree), n);
  return trace_formula_factor(m, n) * trace_power_words(m, n, opt);
}

/// G[l, k] = A(k, l) nu_k; trace G^n = Z_n(0).
inline CMatrix noninteracting_operator(const SpinChainModel& m) {
  const std::size_t F = m.letters();
  CMatrix g = CMatrix::Zero(static_cast<Eigen::Index>(F), static_cast<Eigen::Index>(F));
  for (std::size_t k = 0; k < F; ++k)
    for (std::size_t l = 0; l < F; ++l)
      if (m.allowed(k, l)) g(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) = m.weights[k];
  return g;
}

/// sum over cyclically admissible words of prod nu ||M_{x_n} o ... o M_{x_1}||_1,
/// an upper bound for |trace M^n|.
inline double word_trace_norm_sum(const SpinChainModel& m, std::size_t n, const EnumerationOptions& opt = {}) {
  detail::require_trace_power(m, n, "word_trace_norm_sum");
  detail::check_budget(m.letters(), n, opt.budget, "word_trace_norm_sum");
  const auto parts = detail::parallel_map(m.letters(), opt.threads, [&](std::size_t first) {
    double acc = 0.0;
    detail::for_each_admissible_word(m, n, first, [&](const Word& w) {
      double weight = 1.0;
      for (auto x : w) weight *= m.weights[x];
      acc += weight * exact_trace_norm(word_operator(m, PeriodicWord{w}));
    });
    return acc;
  });
  double total = 0.0;
  for (double p : parts) total += p;
  return total;
}

}  // namespace rmzeta
