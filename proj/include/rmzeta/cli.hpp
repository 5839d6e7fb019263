#pragma once

// Command implementations behind the rmzeta executable. Each command writes
// CSV (header row, LF line endings, 17 significant digits) to a stream;
// summary lines start with '#'.

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rmzeta/config.hpp"
#include "rmzeta/distances.hpp"
#include "rmzeta/errors.hpp"
#include "rmzeta/selftest.hpp"
#include "rmzeta/spinchain.hpp"
#include "rmzeta/transfer.hpp"
#include "rmzeta/zeta.hpp"

namespace rmzeta::cli {

/// Command-line overrides of the config numerics.
struct Overrides {
  std::optional<std::size_t> n_max;
  std::optional<std::size_t> degree;
  std::optional<int> series_J;
  std::optional<unsigned> threads;
};

inline void apply(ModelConfig& c, const Overrides& o) {
  if (o.n_max) c.numerics.n_max = *o.n_max;
  if (o.degree) c.numerics.degree = *o.degree;
  if (o.series_J) c.numerics.series_J = *o.series_J;
  if (o.threads) c.numerics.threads = *o.threads;
  if (c.numerics.n_max < 1) throw ConfigError("n_max must be >= 1");
  if (c.numerics.series_J < 2) throw ConfigError("series_J must be >= 2");
  if (c.numerics.threads < 1) throw ConfigError("threads must be >= 1");
}

inline std::string num(double x) {
  if (x == 0.0) x = 0.0;  // no "-0" in the output
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Csv {
 public:
  explicit Csv(std::ostream& os) : os_(os) {}

  void comment(const std::string& line) { os_ << "# " << line << '\n'; }

  Csv& field(const std::string& s) {
    row_.push_back(s);
    return *this;
  }
  Csv& field(double x) { return field(num(x)); }
  Csv& field(cplx z) { return field(z.real()).field(z.imag()); }
  Csv& blank(std::size_t n = 1) {
    for (std::size_t i = 0; i < n; ++i) row_.emplace_back();
    return *this;
  }
  void end() {
    for (std::size_t i = 0; i < row_.size(); ++i) os_ << (i ? "," : "") << row_[i];
    os_ << '\n';
    row_.clear();
  }
  void header(const std::vector<std::string>& cols) {
    for (const auto& c : cols) field(c);
    end();
  }

 private:
  std::ostream& os_;
  std::vector<std::string> row_;
};

/// det(1 - B^n) from the defining formula of each distance family.
inline cplx det_identity(const DistanceSpec& spec, unsigned n) {
  return std::visit(
      [n](const auto& s) -> cplx {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PolyExponentialSpec>) {
          return std::pow(1.0 - std::pow(s.lambda, static_cast<int>(n)), static_cast<int>(s.c.size()));
        } else if constexpr (std::is_same_v<T, SuperpositionSpec>) {
          cplx prod{1.0, 0.0};
          for (const auto& [c, l] : s.terms) prod *= 1.0 - std::pow(l, static_cast<int>(n));
          return prod;
        } else {
          return {1.0, 0.0};  // nilpotent shift encodings
        }
      },
      spec);
}

/// d(k) against <B^{k-1} v | w>, and det(1 - B^n) against its closed form, for
/// k, n = 1..check_horizon.
inline void cmd_encode(const ModelConfig& c, std::ostream& os) {
  const auto enc = config_encoding(c);
  const int K = c.numerics.check_horizon;
  const auto ref = reference_values(c.distance, K);
  const auto vals = enc.values(K);
  Csv csv(os);
  csv.comment(std::string("kind: ") + to_string(enc.kind));
  csv.comment("encoding dimension: " + std::to_string(enc.dim()));
  csv.comment("norm_B: " + num(operator_norm(enc.B)));
  csv.comment("spectral_radius_B: " + num(spectral_radius(enc.B)));
  csv.comment("max_abs_err: " + num(verify_encoding(enc, ref, K)));
  csv.header({"k", "d_re", "d_im", "encoded_re", "encoded_im", "abs_err", "det_re", "det_im", "det_identity_re",
              "det_identity_im"});
  for (int k = 1; k <= K; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    const auto n = static_cast<unsigned>(k);
    csv.field(std::to_string(k)).field(ref[i]).field(vals[i]).field(std::abs(vals[i] - ref[i]));
    csv.field(shift_determinant(enc, n)).field(det_identity(c.distance, n)).end();
  }
}

/// Brute-force and trace-formula partition values for n = 1..n_max. Rows that
/// hit the word budget or lie below n_min are written with empty cells and a
/// status flag.
inline void cmd_partition(const ModelConfig& c, std::ostream& os) {
  const auto m = config_model(c);
  const auto& num_cfg = c.numerics;
  const EnumerationOptions opt{num_cfg.word_budget, num_cfg.threads};
  const unsigned nmin = min_trace_power(m.enc);
  Csv csv(os);
  csv.comment("letters: " + std::to_string(m.letters()) + ", rank: " + std::to_string(m.rank()) +
              ", encoding dimension: " + std::to_string(m.enc.dim()));
  csv.comment("degree: " + std::to_string(num_cfg.degree) + ", series_J: " + std::to_string(num_cfg.series_J) +
              ", n_min: " + std::to_string(nmin));

  std::vector<cplx> traces;
  std::string matrix_status;
  try {
    const auto T = build_operator(m, num_cfg.degree, num_cfg.basis_cap);
    csv.comment("transfer matrix size: " + std::to_string(T.matrix.rows()));
    traces = trace_powers_matrix(T, static_cast<unsigned>(num_cfg.n_max));
  } catch (const ResourceError& e) {
    matrix_status = "basis_cap";
    csv.comment(std::string("matrix route skipped: ") + e.what());
  }

  csv.header({"n", "Z_bruteforce_closed_re", "Z_bruteforce_closed_im", "Z_bruteforce_series_re",
              "Z_bruteforce_series_im", "Z_traceformula_words_re", "Z_traceformula_words_im",
              "Z_traceformula_matrix_re", "Z_traceformula_matrix_im", "abs_err_words", "abs_err_matrix", "status"});
  for (std::size_t n = 1; n <= num_cfg.n_max; ++n) {
    std::vector<std::string> flags;
    std::optional<cplx> closed, series, words, matrix;
    try {
      closed = partition_bruteforce(m, n, PartitionMethod::closed(), opt);
      series = partition_bruteforce(m, n, PartitionMethod::series(num_cfg.series_J), opt);
    } catch (const ResourceError&) {
      flags.push_back("budget");
    }
    if (n < nmin) {
      flags.push_back("below_n_min");
    } else {
      if (closed) words = trace_formula_factor(m, n) * trace_power_words(m, n, opt);
      if (!traces.empty()) matrix = trace_formula_factor(m, n) * traces[n - 1];
    }
    if (!matrix_status.empty()) flags.push_back(matrix_status);

    csv.field(std::to_string(n));
    for (const auto& v : {closed, series, words, matrix}) {
      if (v) {
        csv.field(*v);
      } else {
        csv.blank(2);
      }
    }
    for (const auto& v : {words, matrix}) {
      if (v && closed) {
        csv.field(std::abs(*v - *closed));
      } else {
        csv.blank();
      }
    }
    std::string status;
    for (const auto& f : flags) status += (status.empty() ? "" : ";") + f;
    csv.field(status.empty() ? "ok" : status).end();
  }
}

/// "re0,re1,im0,im1,steps": steps points per axis; an axis with equal ends
/// contributes a single point. Row-major in the imaginary part.
inline std::vector<cplx> parse_grid(const std::string& text) {
  std::vector<double> v;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find(',', pos);
    const std::string tok = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    char* end = nullptr;
    const double x = std::strtod(tok.c_str(), &end);
    if (tok.empty() || *end != '\0') throw ConfigError("--grid: cannot parse '" + tok + "' as a number");
    v.push_back(x);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (v.size() != 5) throw ConfigError("--grid: expected re0,re1,im0,im1,steps");
  const double steps = v[4];
  if (steps < 1 || steps != std::floor(steps)) throw ConfigError("--grid: steps must be a positive integer");
  auto axis = [&](double a, double b) {
    std::vector<double> out;
    if (a == b || steps == 1) {
      out.push_back(a);
      return out;
    }
    const auto s = static_cast<int>(steps);
    for (int i = 0; i < s; ++i) out.push_back(i == s - 1 ? b : a + (b - a) * i / (s - 1));
    return out;
  };
  std::vector<cplx> zs;
  for (double im : axis(v[2], v[3]))
    for (double re : axis(v[0], v[1])) zs.emplace_back(re, im);
  return zs;
}

/// One complex literal: "a", "bi", "a+bi", "a-bi" (also "i", "-i").
inline cplx parse_complex(std::string s) {
  std::erase(s, ' ');
  const auto fail = [&]() -> cplx { throw ConfigError("--points: cannot parse '" + s + "' as a complex number"); };
  auto real_of = [&](const std::string& t) {
    char* end = nullptr;
    const double x = std::strtod(t.c_str(), &end);
    if (t.empty() || *end != '\0') fail();
    return x;
  };
  if (s.empty()) fail();
  if (s.back() != 'i') return {real_of(s), 0.0};
  std::string body = s.substr(0, s.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re = split == std::string::npos ? "" : body.substr(0, split);
  std::string im = split == std::string::npos ? body : body.substr(split);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return {re.empty() ? 0.0 : real_of(re), real_of(im)};
}

inline std::vector<cplx> parse_points(const std::string& text) {
  std::vector<cplx> zs;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find(';', pos);
    const std::string tok = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (!tok.empty()) zs.push_back(parse_complex(tok));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (zs.empty()) throw ConfigError("--points: no points given");
  return zs;
}

/// Continuation of the model's zeta function from the truncated transfer
/// matrix G and Lambda = B_M; Z_1..Z_{n0-1} come from brute force.
inline ZetaContinuation model_continuation(const ModelConfig& c, const SpinChainModel& m) {
  const auto& nc = c.numerics;
  const RegDetOrder n0(nc.n0);
  std::vector<cplx> early;
  for (int n = 1; n < nc.n0; ++n) {
    early.push_back(partition_bruteforce(m, static_cast<std::size_t>(n), {}, {nc.word_budget, nc.threads}));
  }
  const auto T = build_operator(m, nc.degree, nc.basis_cap);
  return build_continuation_pair(T.matrix, m.block_shift(), n0, early, nc.factor_cap);
}

inline void cmd_zeta(const ModelConfig& c, const std::vector<cplx>& zs, std::ostream& os) {
  const auto m = config_model(c);
  const auto cont = model_continuation(c, m);
  const auto values = zeta_eval_many(cont, zs, c.numerics.threads);
  Csv csv(os);
  csv.comment("continuation: " + cont.source + ", n0 = " + std::to_string(cont.n0.value()) + ", degree = " +
              std::to_string(c.numerics.degree));
  const double lmax = cont.max_factor_eigenvalue();
  if (lmax > 0.0) csv.comment("R = 1 / max factor eigenvalue modulus: " + num(1.0 / lmax));
  csv.header({"re_z", "im_z", "re_zeta", "im_zeta", "pole_flag", "nearest_eig_re", "nearest_eig_im"});
  double rmax = 0.0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    rmax = std::max(rmax, std::abs(zs[i]));
    csv.field(zs[i]);
    if (is_pole(values[i])) {
      csv.blank(2).field("1");
    } else {
      csv.field(std::get<cplx>(values[i])).field("0");
    }
    if (const auto e = nearest_factor_eigenvalue(cont, zs[i])) {
      csv.field(*e);
    } else {
      csv.blank(2);
    }
    csv.end();
  }
  if (rmax > 0.0) {
    // slack so that a pole flagged on the boundary is also listed
    const auto zp = locate_zeros_poles(cont, rmax * (1.0 + 1e-9));
    csv.comment("zeros and poles with |z| <= " + num(rmax) + ": " + std::to_string(zp.size()));
    csv.comment("kind,re_z,im_z,order");
    for (const auto& p : zp) {
      csv.comment(std::string(p.order > 0 ? "zero," : "pole,") + num(p.z.real()) + "," + num(p.z.imag()) + "," +
                  std::to_string(std::abs(p.order)));
    }
  }
}

/// Runs every check; returns the number of failures.
inline int cmd_selftest(std::ostream& os, const SelftestOptions& opt) {
  int failed = 0;
  std::size_t count = 0;
  run_checks(all_checks(), opt, [&](const CheckResult& r) {
    os << format_result(r) << '\n' << std::flush;
    failed += r.pass ? 0 : 1;
    ++count;
  });
  os << (failed == 0 ? "selftest passed" : "selftest failed") << ": " << failed << " of " << count << " checks failed\n";
  return failed;
}

}  // namespace rmzeta::cli
