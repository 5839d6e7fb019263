#pragma once

#include <algorithm>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include "rmzeta/linalg.hpp"

namespace rmzeta::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240917ULL);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline cplx random_cplx(double scale = 1.0) { return {uniform(-scale, scale), uniform(-scale, scale)}; }

inline CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = random_cplx(scale);
  return m;
}

inline CVector random_vector(Eigen::Index n, double scale = 1.0) {
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = random_cplx(scale);
  return v;
}

// Random matrix rescaled to the given operator norm.
inline CMatrix random_contraction(Eigen::Index n, double norm) {
  CMatrix m = random_matrix(n, n);
  return m * (norm / operator_norm(m));
}

// Leibniz expansion; only for tiny matrices.
inline cplx leibniz_det(const CMatrix& a) {
  const auto n = static_cast<int>(a.rows());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  cplx total{0.0, 0.0};
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    cplx term = (inversions % 2 == 0) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) term *= a(i, perm[i]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace rmzeta::testing
