#pragma once

// Ready-made spin chains used by the tests, the self-test and the sample configs.

#include <string>
#include <vector>

#include "rmzeta/distances.hpp"
#include "rmzeta/spinchain.hpp"

namespace rmzeta::models {

/// Two-letter chain F = {+1, -1}, nu = 1, full shift, r(x, y) = x y, q = 0.
inline SpinChainModel ising(const DistanceEncoding& enc, cplx beta) {
  SpinChainModel m;
  m.labels = {"+1", "-1"};
  m.weights = {1.0, 1.0};
  m.transition = {{1, 1}, {1, 1}};
  m.q = {0.0, 0.0};
  m.s = {{1.0, -1.0}};
  m.t = {{1.0, -1.0}};
  m.enc = enc;
  m.beta = beta;
  validate_model(m);
  return m;
}

/// N-state Potts chain: r(x, y) = delta_{xy} through rank M = N, s_i(x) = t_i(x) = delta_{ix}.
inline SpinChainModel potts(std::size_t N, const std::vector<std::vector<int>>& transition, const DistanceEncoding& enc,
                            cplx beta) {
  SpinChainModel m;
  for (std::size_t x = 0; x < N; ++x) m.labels.push_back(std::to_string(x + 1));
  m.weights.assign(N, 1.0);
  m.transition = transition;
  m.q.assign(N, 0.0);
  m.s.assign(N, std::vector<cplx>(N, 0.0));
  for (std::size_t i = 0; i < N; ++i) m.s[i][i] = 1.0;
  m.t = m.s;
  m.enc = enc;
  m.beta = beta;
  validate_model(m);
  return m;
}

/// No interaction: s = 0, q = 0, arbitrary weights and transitions.
inline SpinChainModel noninteracting(const std::vector<double>& weights, const std::vector<std::vector<int>>& transition,
                                     const DistanceEncoding& enc) {
  SpinChainModel m;
  for (std::size_t x = 0; x < weights.size(); ++x) m.labels.push_back(std::to_string(x));
  m.weights = weights;
  m.transition = transition;
  m.q.assign(weights.size(), 0.0);
  m.s = {std::vector<cplx>(weights.size(), 0.0)};
  m.t = {std::vector<cplx>(weights.size(), 1.0)};
  m.enc = enc;
  m.beta = 1.0;
  validate_model(m);
  return m;
}

/// Scalar encoding d(k) = lambda^k.
inline DistanceEncoding geometric(cplx lambda) { return encode_superposition({{1.0, lambda}}); }

}  // namespace rmzeta::models
