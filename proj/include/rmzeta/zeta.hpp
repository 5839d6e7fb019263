#pragma once

// Dynamical zeta function zeta(z) = exp(sum_n z^n Z_n / n): the truncated power
// series, the continuation
//     zeta(z) = exp(sum_{n<n0} z^n Z_n / n) prod_nu det_{n0}(1 - z G_nu)^{(-1)^{nu+1}},
// with G_nu = G (x) wedge^nu Lambda when Z_n = det(1 - Lambda^n) trace G^n, the
// equivalent product over eigenvalue monomials of Lambda, and zeros/poles.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rmzeta/detail/parallel.hpp"
#include "rmzeta/errors.hpp"
#include "rmzeta/linalg.hpp"
#include "rmzeta/regdet.hpp"

namespace rmzeta {

inline constexpr std::size_t kDefaultFactorCap = 4096;

/// exp(sum_{n=1}^N z^n Z_n / n) with Z = (Z_1, ..., Z_N).
inline cplx zeta_direct(const std::vector<cplx>& Z, cplx z) {
  cplx acc{0.0, 0.0};
  cplx zn{1.0, 0.0};
  for (std::size_t n = 1; n <= Z.size(); ++n) {
    zn *= z;
    acc += zn * Z[n - 1] / static_cast<double>(n);
  }
  return std::exp(acc);
}

/// |z| max_n |Z_n|^{1/n}; the direct series is only meaningful well below 1.
inline double zeta_direct_radius_ratio(const std::vector<cplx>& Z, cplx z) {
  double growth = 0.0;
  for (std::size_t n = 1; n <= Z.size(); ++n) growth = std::max(growth, std::pow(std::abs(Z[n - 1]), 1.0 / static_cast<double>(n)));
  return std::abs(z) * growth;
}

struct ZetaFactor {
  CMatrix G;
  int parity;                 // +1: numerator, -1: denominator
  std::vector<cplx> spectrum; // eigenvalues of G, cached
};

struct ZetaContinuation {
  RegDetOrder n0{1};
  std::vector<cplx> prefactor_Z;  // Z_1 .. Z_{n0-1}
  std::vector<ZetaFactor> factors;
  std::string source;
  double schatten_sum = 0.0;      // sum_nu ||G_nu^{n0}||_1

  double max_factor_eigenvalue() const {
    double r = 0.0;
    for (const auto& f : factors)
      for (auto l : f.spectrum) r = std::max(r, std::abs(l));
    return r;
  }
};

namespace detail {

inline ZetaFactor make_factor(CMatrix g, int parity) {
  ZetaFactor f{std::move(g), parity, {}};
  if (f.G.rows() > 0) f.spectrum = eigenvalues(f.G).values;
  return f;
}

inline void finish_continuation(ZetaContinuation& c, const std::vector<cplx>& early_Z) {
  const auto need = static_cast<std::size_t>(c.n0.value() - 1);
  if (early_Z.size() < need) {
    throw DomainError("zeta continuation: need Z_1..Z_" + std::to_string(need) + " for n0 = " +
                      std::to_string(c.n0.value()));
  }
  c.prefactor_Z.assign(early_Z.begin(), early_Z.begin() + static_cast<std::ptrdiff_t>(need));
  std::vector<double> norms;
  for (const auto& f : c.factors) {
    if (f.G.rows() == 0) continue;
    norms.push_back(schatten_norm(matrix_power(f.G, static_cast<unsigned>(c.n0.value())), 1.0));
  }
  c.schatten_sum = product_tail_bound(norms);
}

}  // namespace detail

/// Factors G_nu = G (x) wedge^nu Lambda, nu = 0..dim Lambda, with exponents (-1)^{nu+1}.
/// An empty (0 x 0) Lambda gives the single factor G.
inline ZetaContinuation build_continuation_pair(const CMatrix& G, const CMatrix& Lambda, RegDetOrder n0,
                                                const std::vector<cplx>& early_Z = {},
                                                std::size_t factor_cap = kDefaultFactorCap) {
  require_square(G, "build_continuation_pair");
  require_square(Lambda, "build_continuation_pair");
  ZetaContinuation c;
  c.n0 = n0;
  c.source = "pair: G " + std::to_string(G.rows()) + "x" + std::to_string(G.rows()) + ", Lambda " +
             std::to_string(Lambda.rows()) + "x" + std::to_string(Lambda.rows());
  const auto d = static_cast<std::size_t>(Lambda.rows());
  for (std::size_t nu = 0; nu <= d; ++nu) {
    const std::size_t size = static_cast<std::size_t>(G.rows()) * detail::binomial(d, nu);
    if (size > factor_cap) {
      throw ResourceError("build_continuation_pair: factor nu = " + std::to_string(nu) + " has size " +
                          std::to_string(size) + " above the cap " + std::to_string(factor_cap));
    }
  }
  for (std::size_t nu = 0; nu <= d; ++nu) {
    CMatrix g = d == 0 ? G : kron(G, exterior_power(Lambda, nu));
    c.factors.push_back(detail::make_factor(std::move(g), nu % 2 == 0 ? -1 : +1));
  }
  detail::finish_continuation(c, early_Z);
  return c;
}

/// General form: explicit list of (G_nu, parity).
inline ZetaContinuation build_continuation(const std::vector<std::pair<CMatrix, int>>& factors, RegDetOrder n0,
                                           const std::vector<cplx>& early_Z = {}) {
  ZetaContinuation c;
  c.n0 = n0;
  c.source = "explicit factors";
  for (const auto& [g, parity] : factors) {
    require_square(g, "build_continuation");
    if (parity != 1 && parity != -1) throw DomainError("build_continuation: parity must be +1 or -1");
    c.factors.push_back(detail::make_factor(g, parity));
  }
  detail::finish_continuation(c, early_Z);
  return c;
}

struct Pole {
  std::size_t factor;
};

using ZetaValue = std::variant<cplx, Pole>;

inline constexpr double kPoleTolerance = 1e-12;

inline ZetaValue zeta_eval(const ZetaContinuation& c, cplx z) {
  cplx prefix{0.0, 0.0};
  cplx zn{1.0, 0.0};
  for (std::size_t n = 1; n <= c.prefactor_Z.size(); ++n) {
    zn *= z;
    prefix += zn * c.prefactor_Z[n - 1] / static_cast<double>(n);
  }
  cplx num{1.0, 0.0}, den{1.0, 0.0};
  for (std::size_t i = 0; i < c.factors.size(); ++i) {
    const auto& f = c.factors[i];
    const cplx v = regdet_from_spectrum(f.spectrum, z, c.n0);
    if (f.parity > 0) {
      num *= v;
    } else {
      if (std::abs(v) <= kPoleTolerance) return Pole{i};
      den *= v;
    }
  }
  return std::exp(prefix) * num / den;
}

inline bool is_pole(const ZetaValue& v) { return std::holds_alternative<Pole>(v); }

inline std::vector<ZetaValue> zeta_eval_many(const ZetaContinuation& c, const std::vector<cplx>& zs, unsigned threads = 1) {
  return detail::parallel_map(zs.size(), threads, [&](std::size_t i) { return zeta_eval(c, zs[i]); });
}

inline constexpr std::size_t kMaxSpectralDim = 20;

/// prod over alpha in {0,1}^d of det_{n0}(1 - z lambda^alpha G)^{(-1)^{|alpha|+1}},
/// lambda the eigenvalues of Lambda, times the early-Z prefactor.
inline cplx zeta_spectral_eval(const CMatrix& G, const CMatrix& Lambda, cplx z, RegDetOrder n0,
                               const std::vector<cplx>& early_Z = {}) {
  require_square(G, "zeta_spectral_eval");
  require_square(Lambda, "zeta_spectral_eval");
  const auto d = static_cast<std::size_t>(Lambda.rows());
  if (d > kMaxSpectralDim) {
    throw ResourceError("zeta_spectral_eval: dim Lambda = " + std::to_string(d) + " exceeds " +
                        std::to_string(kMaxSpectralDim));
  }
  const auto need = static_cast<std::size_t>(n0.value() - 1);
  if (early_Z.size() < need) throw DomainError("zeta_spectral_eval: missing early partition values");
  const std::vector<cplx> lam = d == 0 ? std::vector<cplx>{} : eigenvalues(Lambda).values;
  const std::vector<cplx> mu = G.rows() == 0 ? std::vector<cplx>{} : eigenvalues(G).values;
  cplx result{1.0, 0.0};
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
    cplx la{1.0, 0.0};
    int bits = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (mask & (std::uint64_t{1} << i)) {
        la *= lam[i];
        ++bits;
      }
    }
    const cplx v = regdet_from_spectrum(mu, z * la, n0);
    result = bits % 2 == 0 ? result / v : result * v;
  }
  cplx prefix{0.0, 0.0};
  cplx zn{1.0, 0.0};
  for (std::size_t n = 1; n <= need; ++n) {
    zn *= z;
    prefix += zn * early_Z[n - 1] / static_cast<double>(n);
  }
  return std::exp(prefix) * result;
}

struct ZeroPole {
  cplx z;
  int order;  // > 0 zero, < 0 pole
};

inline constexpr double kMergeTolerance = 1e-8;

/// Points 1/lambda, |1/lambda| <= rmax, over the nonzero eigenvalues of every factor,
/// with signed order sum(parity); points within 1e-8 are merged and net-zero entries dropped.
inline std::vector<ZeroPole> locate_zeros_poles(const ZetaContinuation& c, double rmax) {
  if (!(rmax > 0.0)) throw DomainError("locate_zeros_poles: rmax must be > 0");
  std::vector<ZeroPole> pts;
  for (const auto& f : c.factors) {
    for (auto l : f.spectrum) {
      if (std::abs(l) * rmax < 1.0) continue;
      const cplx z = 1.0 / l;
      auto it = std::find_if(pts.begin(), pts.end(), [&](const ZeroPole& p) { return std::abs(p.z - z) <= kMergeTolerance; });
      if (it == pts.end()) {
        pts.push_back({z, f.parity});
      } else {
        it->order += f.parity;
      }
    }
  }
  std::erase_if(pts, [](const ZeroPole& p) { return p.order == 0; });
  std::sort(pts.begin(), pts.end(), [](const ZeroPole& a, const ZeroPole& b) { return detail::spectrum_before(b.z, a.z); });
  return pts;
}

/// Factor eigenvalue lambda whose reciprocal lies closest to z.
inline std::optional<cplx> nearest_factor_eigenvalue(const ZetaContinuation& c, cplx z) {
  std::optional<cplx> best;
  double dist = 0.0;
  for (const auto& f : c.factors) {
    for (auto l : f.spectrum) {
      if (l == cplx{0.0, 0.0}) continue;
      const double dd = std::abs(1.0 - z * l) / std::abs(l);
      if (!best || dd < dist) {
        best = l;
        dist = dd;
      }
    }
  }
  return best;
}

}  // namespace rmzeta
