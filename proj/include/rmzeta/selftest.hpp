#pragma once

// Desk-scale check suite shared by the selftest command and the acceptance
// binary. Every check compares a measured error against a threshold; the
// `inject` option perturbs one constant inside the named check so that the
// harness can demonstrate a failure.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rmzeta/config.hpp"
#include "rmzeta/distances.hpp"
#include "rmzeta/fock.hpp"
#include "rmzeta/linalg.hpp"
#include "rmzeta/models.hpp"
#include "rmzeta/regdet.hpp"
#include "rmzeta/spinchain.hpp"
#include "rmzeta/transfer.hpp"
#include "rmzeta/zeta.hpp"

namespace rmzeta {

struct CheckResult {
  std::string id;
  std::string title;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
  double seconds = 0.0;
};

struct SelftestOptions {
  std::string inject;  // id of the check to perturb
  unsigned threads = 1;
};

struct CheckContext {
  bool injected = false;
  unsigned threads = 1;
  std::mt19937_64 rng{20240917};

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  cplx random_cplx(double scale) { return {uniform(-scale, scale), uniform(-scale, scale)}; }
  CMatrix random_matrix(Eigen::Index r, Eigen::Index c, double scale) {
    CMatrix m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = random_cplx(scale);
    return m;
  }
  CVector random_vector(Eigen::Index n, double scale) { return random_matrix(n, 1, scale); }
  CMatrix random_contraction(Eigen::Index n, double norm) {
    const CMatrix m = random_matrix(n, n, 1.0);
    return m * (norm / operator_norm(m));
  }
  GaussianCompositionOp random_op(Eigen::Index m, double norm, double vec) {
    return {std::polar(1.0, uniform(0.0, 2.0 * kPi)), random_vector(m, vec), random_vector(m, vec),
            random_contraction(m, norm)};
  }
  // perturbation applied to one constant of the check when injected
  double eps(double size) const { return injected ? size : 0.0; }
};

struct Check {
  std::string id;
  std::string title;
  std::function<CheckResult(CheckContext&)> run;
};

namespace detail {

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

inline CheckResult verdict(double measured, double threshold, std::string detail = {}) {
  CheckResult r;
  r.measured = measured;
  r.threshold = threshold;
  r.pass = std::isfinite(measured) && measured <= threshold;
  r.detail = std::move(detail);
  return r;
}

inline double rel_err(cplx a, cplx b) {
  const double d = std::abs(a - b);
  return d == 0.0 ? 0.0 : d / std::abs(b);
}

inline double op_param_distance(const GaussianCompositionOp& x, const GaussianCompositionOp& y) {
  return std::abs(x.gamma - y.gamma) + (x.a - y.a).cwiseAbs().maxCoeff() + (x.b - y.b).cwiseAbs().maxCoeff() +
         (x.A - y.A).cwiseAbs().maxCoeff();
}

// (K f)(z) = gamma e^{pi <z|a>} f(A z + b)
inline std::function<cplx(const CVector&)> apply_op(const GaussianCompositionOp& op, std::function<cplx(const CVector&)> f) {
  return [op, f](const CVector& z) { return op.gamma * std::exp(kPi * inner(z, op.a)) * f(op.A * z + op.b); };
}

inline SpinChainModel acceptance_ising() { return models::ising(models::geometric(0.4), 0.7); }

inline SpinChainModel acceptance_potts() {
  return models::potts(2, {{1, 1}, {1, 0}}, models::geometric(0.4), 0.7);
}

// Trace-formula and matrix-route errors for n = 1..6.
inline CheckResult trace_formula_check(const SpinChainModel& m, CheckContext& ctx, const char* name) {
  double words = 0.0, matrix = 0.0;
  const auto T = build_operator(m, 25);
  const auto traces = trace_powers_matrix(T, 6);
  for (std::size_t n = 1; n <= 6; ++n) {
    const cplx bf = partition_bruteforce(m, n, {}, {kDefaultWordBudget, ctx.threads});
    const cplx zw = trace_formula_factor(m, n) * trace_power_words(m, n, {kDefaultWordBudget, ctx.threads}) *
                    (1.0 + ctx.eps(1e-8));
    const cplx zm = trace_formula_factor(m, n) * traces[n - 1];
    words = std::max(words, rel_err(zw, bf));
    matrix = std::max(matrix, std::abs(zm - zw));
  }
  auto r = verdict(std::max(words / 1e-10, matrix / 1e-6), 1.0,
                   std::string(name) + ": words vs brute force rel " + sci(words) + " (<= 1e-10), matrix D=25 abs " +
                       sci(matrix) + " (<= 1e-6)");
  return r;
}

}  // namespace detail

/// The thirteen acceptance criteria.
inline std::vector<Check> acceptance_checks() {
  using detail::sci;
  using detail::verdict;
  std::vector<Check> out;

  out.push_back({"C1", "Pascal determinant identity", [](CheckContext& ctx) {
                   double err = 0.0;
                   for (int p = 0; p <= 4; ++p)
                     for (double l : {0.3, 0.5, 0.9}) {
                       const auto enc = encode_poly_exponential(l, std::vector<cplx>(static_cast<std::size_t>(p + 1), 1.0));
                       for (unsigned n = 1; n <= 6; ++n) {
                         const double rhs = std::pow(1.0 - std::pow(l + ctx.eps(1e-6), n), p + 1);
                         err = std::max(err, std::abs(shift_determinant(enc, n) - rhs));
                       }
                     }
                   return verdict(err, 1e-10, "max |det(1 - B^n) - (1 - lambda^n)^(p+1)| = " + sci(err));
                 }});

  out.push_back({"C2", "Non-interacting trace formula", [](CheckContext& ctx) {
                   double err = 0.0;
                   for (int rep = 0; rep < 10; ++rep) {
                     const std::size_t F = 2 + static_cast<std::size_t>(rep % 3);
                     std::vector<double> w;
                     std::vector<std::vector<int>> a(F, std::vector<int>(F));
                     for (std::size_t x = 0; x < F; ++x) w.push_back(ctx.uniform(0.2, 1.5));
                     for (auto& row : a)
                       for (auto& e : row) e = ctx.uniform(0.0, 1.0) < 0.6 ? 1 : 0;
                     const auto m = models::noninteracting(w, a, models::geometric(0.5));
                     const auto traces = power_traces(noninteracting_operator(m) * (1.0 + ctx.eps(1e-9)), 8);
                     for (std::size_t n = 1; n <= 8; ++n) {
                       const cplx z = partition_bruteforce(m, n, {}, {kDefaultWordBudget, ctx.threads});
                       err = std::max(err, detail::rel_err(z, traces[n - 1]));
                     }
                   }
                   return verdict(err, 1e-12, "max relative |Z_n(0) - trace G^n| = " + sci(err));
                 }});

  out.push_back({"C3", "Fock trace convergence", [](CheckContext& ctx) {
                   GaussianCompositionOp op = GaussianCompositionOp::identity_op(1);
                   op.A(0, 0) = 0.5;
                   op.a(0) = op.b(0) = 0.3;
                   const CMatrix mat = op_matrix(op, fock_basis(1, 40));
                   auto closed_op = op;
                   closed_op.A(0, 0) += ctx.eps(1e-6);
                   const double tr = detail::rel_err(mat.trace(), exact_trace(closed_op));
                   const double hs = std::abs(mat.squaredNorm() - exact_hs_norm_sq(closed_op)) / exact_hs_norm_sq(closed_op);
                   return verdict(std::max(tr / 1e-8, hs / 1e-6), 1.0,
                                  "trace rel err " + sci(tr) + " (<= 1e-8), HS rel err " + sci(hs) + " (<= 1e-6) at D = 40");
                 }});

  out.push_back({"C4", "Composition and adjoint algebra", [](CheckContext& ctx) {
                   double param = 0.0, matrix = 0.0;
                   const auto b1 = fock_basis(1, 30), b2 = fock_basis(2, 30);
                   for (int rep = 0; rep < 100; ++rep) {
                     const Eigen::Index m = 1 + rep % 2;
                     const auto p = ctx.random_op(m, 0.5, 0.3), q = ctx.random_op(m, 0.5, 0.3);
                     const auto pq = compose(p, q);
                     param = std::max(param, detail::op_param_distance(adjoint(adjoint(p)), p));
                     param = std::max(param, detail::op_param_distance(adjoint(pq), compose(adjoint(q), adjoint(p))));
                     // composition law on a kernel function, evaluated pointwise
                     const CVector w = ctx.random_vector(m, 0.5);
                     auto kw = [w](const CVector& z) { return std::exp(kPi * inner(z, w)); };
                     const auto lhs = detail::apply_op(pq, kw);
                     const auto rhs = detail::apply_op(p, detail::apply_op(q, kw));
                     for (int k = 0; k < 3; ++k) {
                       const CVector z = ctx.random_vector(m, 1.0);
                       param = std::max(param, detail::rel_err(lhs(z) * (1.0 + ctx.eps(1e-9)), rhs(z)));
                     }
                     const auto& basis = m == 1 ? b1 : b2;
                     const CMatrix mp = op_matrix(p, basis), mq = op_matrix(q, basis);
                     matrix = std::max(matrix, (op_matrix(pq, basis) - mp * mq).norm());
                     matrix = std::max(matrix, (op_matrix(adjoint(p), basis) - mp.adjoint()).norm());
                   }
                   return verdict(std::max(param / 1e-12, matrix / 1e-7), 1.0,
                                  "parameter identities " + sci(param) + " (<= 1e-12), matrix homomorphism " + sci(matrix) +
                                      " (<= 1e-7) at D = 30");
                 }});

  out.push_back({"C5", "Polar decomposition", [](CheckContext& ctx) {
                   double closed = 0.0, matrix = 0.0;
                   const auto basis = fock_basis(1, 30);
                   for (int rep = 0; rep < 20; ++rep) {
                     const Eigen::Index m = 1 + rep % 2;
                     const auto op = ctx.random_op(m, 0.5, 0.3);
                     const auto k = polar_abs(op);
                     closed = std::max(closed, detail::rel_err(exact_trace(k) * (1.0 + ctx.eps(1e-9)), exact_trace_norm(op)));
                     if (m == 1) {
                       const CMatrix km = op_matrix(k, basis);
                       const CMatrix om = op_matrix(op, basis);
                       matrix = std::max(matrix, (km * km - om.adjoint() * om).cwiseAbs().maxCoeff());
                     }
                   }
                   return verdict(std::max(closed / 1e-12, matrix / 1e-7), 1.0,
                                  "trace |K| vs trace norm " + sci(closed) + " (<= 1e-12), K^2 vs K*K " + sci(matrix) +
                                      " (<= 1e-7) at D = 30");
                 }});

  out.push_back({"C6", "Dynamical trace formula", [](CheckContext& ctx) {
                   const auto a = detail::trace_formula_check(detail::acceptance_ising(), ctx, "Ising");
                   const auto b = detail::trace_formula_check(detail::acceptance_potts(), ctx, "Potts");
                   return verdict(std::max(a.measured, b.measured), 1.0, a.detail + "; " + b.detail);
                 }});

  out.push_back({"C7", "Zeta consistency", [](CheckContext& ctx) {
                   const auto m = detail::acceptance_ising();
                   std::vector<cplx> Z;
                   for (std::size_t n = 1; n <= 12; ++n) Z.push_back(partition_bruteforce(m, n, {}, {kDefaultWordBudget, ctx.threads}));
                   const auto T = build_operator(m, 40);
                   const auto c = build_continuation_pair(T.matrix, m.block_shift(), RegDetOrder(1));
                   const double R = 1.0 / c.max_factor_eigenvalue();
                   double err = 0.0;
                   for (int i = 1; i <= 5; ++i)
                     for (int k = 0; k < 10; ++k) {
                       const cplx z = std::polar(0.1 * i * R, 2.0 * kPi * k / 10.0);
                       const auto v = zeta_eval(c, z);
                       if (is_pole(v)) return verdict(INFINITY, 1e-8, "continuation reports a pole inside the disk");
                       err = std::max(err, std::abs(zeta_direct(Z, z) * (1.0 + ctx.eps(1e-6)) - std::get<cplx>(v)));
                     }
                   return verdict(err, 1e-8, "max |zeta_direct(N = 12) - zeta_eval| over 50 points, |z| <= 0.5 R = " + sci(0.5 * R) +
                                                 ": " + sci(err));
                 }});

  out.push_back({"C8", "Pole localization", [](CheckContext& ctx) {
                   const auto m = models::noninteracting({1.0, 1.0}, {{1, 1}, {1, 1}}, models::geometric(0.5));
                   const auto c = build_continuation_pair(noninteracting_operator(m) * (1.0 + ctx.eps(1e-6)), CMatrix(0, 0), RegDetOrder(1));
                   const auto zp = locate_zeros_poles(c, 2.0);
                   if (zp.size() != 1 || zp[0].order != -1) return verdict(INFINITY, 1e-8, "expected exactly one simple pole");
                   const double err = std::abs(zp[0].z - 0.5);
                   return verdict(err, 1e-8, "one pole of order 1 at " + sci(zp[0].z.real()) + " + " + sci(zp[0].z.imag()) +
                                                 "i, |z - 0.5| = " + sci(err));
                 }});

  out.push_back({"C9", "Spectral route equivalence", [](CheckContext& ctx) {
                   const CMatrix G = ctx.random_matrix(2, 2, 1.0);
                   const CMatrix L = ctx.random_matrix(3, 3, 0.6);
                   const auto c = build_continuation_pair(G, L, RegDetOrder(1));
                   double err = 0.0;
                   int points = 0;
                   while (points < 20) {
                     const cplx z = ctx.random_cplx(0.8);
                     const auto v = zeta_eval(c, z);
                     if (is_pole(v)) continue;
                     const cplx ref = std::get<cplx>(v);
                     const cplx s = zeta_spectral_eval(G, L, z * (1.0 + ctx.eps(1e-6)), RegDetOrder(1));
                     err = std::max(err, std::abs(s - ref) / std::max(1.0, std::abs(ref)));
                     ++points;
                   }
                   return verdict(err, 1e-9, "max |spectral - pair| over 20 points = " + sci(err));
                 }});

  out.push_back({"C10", "Superexponential encoding", [](CheckContext& ctx) {
                   const auto enc = encode_superexponential(SuperExponentialSpec{});
                   double rep = 0.0;
                   for (int k = 1; k <= 8; ++k) {
                     rep = std::max(rep, std::abs(enc.value(k) - std::exp(-(1.0 + ctx.eps(1e-6)) * k * k)));
                   }
                   const double norm = std::abs(operator_norm(enc.B) - std::exp(-1.0));
                   double det = 0.0;
                   for (unsigned n = 1; n <= 16; ++n) det = std::max(det, std::abs(shift_determinant(enc, n) - 1.0));
                   return verdict(std::max({rep / 1e-12, norm / 1e-12, det == 0.0 ? 0.0 : INFINITY}), 1.0,
                                  "reproduction " + sci(rep) + " (<= 1e-12), | ||B|| - 1/e | = " + sci(norm) +
                                      ", max |det(1 - B^n) - 1| = " + sci(det) + " (exactly 0)");
                 }});

  out.push_back({"C11", "Cyclic Hadamard bound", [](CheckContext& ctx) {
                   double worst = -INFINITY;
                   for (int rep = 0; rep < 200; ++rep) {
                     const int n = 2 + rep % 4;
                     std::vector<Eigen::Index> dims(static_cast<std::size_t>(n));
                     for (auto& d : dims) d = 1 + static_cast<Eigen::Index>(ctx.uniform(0.0, 4.0));
                     std::vector<CMatrix> f;
                     for (int k = 0; k < n; ++k) f.push_back(ctx.random_matrix(dims[k], dims[(k + 1) % n], 2.0));
                     const auto hb = cyclic_hadamard_bound(f);
                     worst = std::max(worst, (hb.lhs - hb.rhs * (1.0 - ctx.eps(0.9))) / hb.rhs);
                   }
                   return verdict(worst, 1e-12, "max (lhs - rhs) / rhs over 200 chains = " + sci(worst));
                 }});

  out.push_back({"C12", "Gaussian integral identity", [](CheckContext& ctx) {
                   GaussianCompositionOp op = GaussianCompositionOp::identity_op(1);
                   op.A(0, 0) = 0.5 + ctx.eps(1e-4);
                   op.a(0) = op.b(0) = 0.3;
                   const auto r = gaussian_integral_check(op);
                   op.A(0, 0) = 0.5;
                   const double err = std::abs(exact_trace(op) - r.quad);
                   return verdict(err, 1e-5, "|quadrature - closed form| = " + sci(err));
                 }});

  out.push_back({"C13", "Regularized determinant bound", [](CheckContext& ctx) {
                   GammaTable gamma;
                   gamma.values[1] = 1.0 - ctx.eps(0.99);
                   double worst = -INFINITY;
                   for (int rep = 0; rep < 100; ++rep) {
                     const auto b = regdet_bound_check(ctx.random_matrix(4, 4, 1.5), RegDetOrder(1), gamma);
                     worst = std::max(worst, std::log(b.lhs) - std::log(b.rhs));
                   }
                   return verdict(worst, 1e-12, "max log |det(1 + A)| - ||A||_1 over 100 matrices = " + sci(worst));
                 }});

  return out;
}

/// Module invariants beyond the acceptance list.
inline std::vector<Check> invariant_checks() {
  using detail::sci;
  using detail::verdict;
  std::vector<Check> out;

  out.push_back({"linalg.det", "LU determinant vs eigenvalue product", [](CheckContext& ctx) {
                   double err = 0.0;
                   for (int rep = 0; rep < 20; ++rep) {
                     const CMatrix a = ctx.random_matrix(5, 5, 1.0);
                     cplx prod{1.0, 0.0};
                     for (auto l : eigenvalues(a).values) prod *= l;
                     err = std::max(err, detail::rel_err(lu_determinant(a) * (1.0 + ctx.eps(1e-6)), prod));
                   }
                   return verdict(err, 1e-10, "max relative error " + sci(err));
                 }});

  out.push_back({"regdet.routes", "Eigenvalue and exp-trace routes agree", [](CheckContext& ctx) {
                   const CMatrix a = ctx.random_matrix(4, 4, 0.5);
                   const double r = 0.5 / spectral_radius(a);
                   double err = 0.0;
                   for (int n0 = 1; n0 <= 3; ++n0)
                     for (int k = 0; k < 8; ++k) {
                       const cplx z = std::polar(r, 2.0 * kPi * k / 8.0);
                       const cplx e = regdet_eig(a, z, RegDetOrder(n0));
                       const cplx s = regdet_exptrace(a, z * (1.0 + ctx.eps(1e-6)), RegDetOrder(n0), 200);
                       err = std::max(err, std::abs(e - s));
                     }
                   return verdict(err, 1e-12, "max difference " + sci(err));
                 }});

  out.push_back({"distances.dispatch", "Every distance family reproduces its formula", [](CheckContext& ctx) {
                   const std::vector<DistanceSpec> specs{
                       FiniteRangeSpec{{1.0, -0.5, 0.25}, 0.6}, PolyExponentialSpec{cplx(0.2, 0.5), {1.0, 0.0, -0.3}},
                       SuperExponentialSpec{}, SuperpositionSpec{{{1.0, 0.4}, {0.5, -0.2}}, 0.0}};
                   double err = 0.0;
                   for (const auto& s : specs) {
                     auto ref = reference_values(s, 12);
                     ref[0] += ctx.eps(1e-6);
                     err = std::max(err, verify_encoding(encode(s), ref, 12));
                   }
                   return verdict(err, 1e-10, "max reproduction error " + sci(err));
                 }});

  out.push_back({"spinchain.series", "Series-cut and closed periodic sums agree", [](CheckContext& ctx) {
                   const auto m = detail::acceptance_potts();
                   double err = 0.0;
                   for (std::size_t n = 1; n <= 6; ++n) {
                     const cplx a = partition_bruteforce(m, n, {}, {kDefaultWordBudget, ctx.threads});
                     const cplx b = partition_bruteforce(m, n, PartitionMethod::series(300), {kDefaultWordBudget, ctx.threads});
                     err = std::max(err, detail::rel_err(a * (1.0 + ctx.eps(1e-6)), b));
                   }
                   return verdict(err, 1e-12, "max relative difference at J = 300: " + sci(err));
                 }});

  out.push_back({"transfer.convergence", "Matrix route converges in the degree", [](CheckContext& ctx) {
                   const auto m = detail::acceptance_potts();
                   const cplx exact = trace_power_words(m, 2) * (1.0 + ctx.eps(1e-3));
                   double prev = INFINITY;
                   bool monotone = true;
                   for (std::size_t D : {4, 8, 12, 16}) {
                     const double e = std::abs(trace_power_matrix(build_operator(m, D), 2) - exact);
                     monotone = monotone && e < prev;
                     prev = e;
                   }
                   return verdict(monotone ? prev : INFINITY, 1e-4, std::string(monotone ? "monotone" : "not monotone") +
                                                                     ", error at D = 16: " + sci(prev));
                 }});

  out.push_back({"transfer.bound", "Word trace-norm sum bounds the trace", [](CheckContext& ctx) {
                   const auto m = detail::acceptance_potts();
                   double worst = -INFINITY;
                   for (std::size_t n = 1; n <= 6; ++n) {
                     const double t = std::abs(trace_power_words(m, n));
                     const double b = word_trace_norm_sum(m, n) * (1.0 - ctx.eps(0.99));
                     worst = std::max(worst, (t - b) / b);
                   }
                   return verdict(worst, 1e-12, "max (|trace| - bound) / bound = " + sci(worst));
                 }});

  out.push_back({"zeta.orders", "Local scaling at zeros and poles matches the order", [](CheckContext& ctx) {
                   const CMatrix G = ctx.random_matrix(3, 3, 1.0);
                   const auto c = build_continuation_pair(G, ctx.random_matrix(2, 2, 0.5), RegDetOrder(1));
                   const auto zp = locate_zeros_poles(c, 3.0 / c.max_factor_eigenvalue());
                   double worst = zp.empty() ? INFINITY : 0.0;
                   for (const auto& p : zp)
                     for (int dir = 0; dir < 4; ++dir) {
                       const cplx u = std::polar(1.0, kPi / 2 * dir + 0.3);
                       const auto f1 = zeta_eval(c, p.z + 1e-3 * u), f2 = zeta_eval(c, p.z + 1e-4 * u);
                       if (is_pole(f1) || is_pole(f2)) return verdict(INFINITY, 0.1, "pole signal next to a located point");
                       const double slope = std::log10(std::abs(std::get<cplx>(f1)) / std::abs(std::get<cplx>(f2)));
                       worst = std::max(worst, std::abs(slope - p.order - ctx.eps(1.0)));
                     }
                   return verdict(worst, 0.1, std::to_string(zp.size()) + " points, max |slope - order| = " + sci(worst));
                 }});

  out.push_back({"cli.roundtrip", "Config dump and reload give the same model", [](CheckContext& ctx) {
                   ModelConfig c;
                   c.labels = {"a", "b"};
                   c.weights = {0.5, 1.25};
                   c.transition = {{1, 1}, {1, 0}};
                   c.q = {cplx(0.1, -0.2), 0.3};
                   c.s = {{1.0, cplx(0.0, 0.5)}};
                   c.t = {{-1.0, 2.0}};
                   c.beta = cplx(0.7, 1e-3);
                   c.distance = PolyExponentialSpec{cplx(0.3, 0.1), {1.0, cplx(0.5, 0.25)}};
                   c.numerics.degree = 17;
                   auto back = parse_config(dump_config(c));
                   back.beta += ctx.eps(1e-12);
                   return verdict(back == c ? 0.0 : 1.0, 0.0, back == c ? "identical" : "fields differ after reload");
                 }});

  return out;
}

/// Companion numbers for C7: the same comparison with the direct series
/// extended to 60 terms (Z_13.. from the truncated operator), and the size of
/// the omitted tail sum_{n > 12} z^n Z_n / n at |z| = 0.5 R.
inline std::string zeta_consistency_supplement(unsigned threads = 1) {
  const auto m = detail::acceptance_ising();
  const auto T = build_operator(m, 40);
  const auto traces = trace_powers_matrix(T, 60);
  std::vector<cplx> Z;
  for (std::size_t n = 1; n <= 60; ++n) {
    Z.push_back(n <= 12 ? partition_bruteforce(m, n, {}, {kDefaultWordBudget, threads})
                        : trace_formula_factor(m, n) * traces[n - 1]);
  }
  const auto c = build_continuation_pair(T.matrix, m.block_shift(), RegDetOrder(1));
  const double R = 1.0 / c.max_factor_eigenvalue();
  double err60 = 0.0, tail = 0.0;
  for (int i = 1; i <= 5; ++i)
    for (int k = 0; k < 10; ++k) {
      const cplx z = std::polar(0.1 * i * R, 2.0 * kPi * k / 10.0);
      err60 = std::max(err60, std::abs(zeta_direct(Z, z) - std::get<cplx>(zeta_eval(c, z))));
      cplx t{0.0, 0.0};
      for (std::size_t n = 13; n <= 60; ++n) t += std::pow(z, static_cast<int>(n)) * Z[n - 1] / static_cast<double>(n);
      tail = std::max(tail, std::abs(t));
    }
  return "N = 60: max |direct - continuation| = " + detail::sci(err60) + "; omitted log-series tail for N = 12: " +
         detail::sci(tail);
}

inline std::vector<Check> all_checks() {
  auto out = acceptance_checks();
  for (auto& c : invariant_checks()) out.push_back(std::move(c));
  return out;
}

inline CheckResult run_check(const Check& check, const SelftestOptions& opt) {
  CheckContext ctx;
  ctx.injected = opt.inject == check.id;
  ctx.threads = opt.threads;
  const auto start = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = check.run(ctx);
  } catch (const std::exception& e) {
    r = detail::verdict(INFINITY, 0.0, std::string("error: ") + e.what());
  }
  r.id = check.id;
  r.title = check.title;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Runs the checks in order, reporting each result as it completes.
inline std::vector<CheckResult> run_checks(const std::vector<Check>& checks, const SelftestOptions& opt,
                                           const std::function<void(const CheckResult&)>& on_result = {}) {
  std::vector<CheckResult> out;
  for (const auto& c : checks) {
    out.push_back(run_check(c, opt));
    if (on_result) on_result(out.back());
  }
  return out;
}

inline std::string format_result(const CheckResult& r) {
  char head[160];
  std::snprintf(head, sizeof head, "%s %-20s %-50s %7.2fs  ", r.pass ? "PASS" : "FAIL", r.id.c_str(), r.title.c_str(), r.seconds);
  return head + r.detail;
}

}  // namespace rmzeta
