#pragma once

// JSON model descriptions. Schema (every complex value is either a number or a
// two-element array [re, im]):
//
//   {
//     "alphabet":   [{"label": "+1", "weight": 1.0}, ...],
//     "transition": [[1, 1], [1, 1]],          // row x, column y: y may follow x
//     "q":          [0.0, 0.0],
//     "rank":       1,                          // optional, checked against s and t
//     "s":          [[1.0, -1.0]],              // s[i][x], i < rank
//     "t":          [[1.0, -1.0]],
//     "beta":       0.7,
//     "distance":   {"kind": "superposition", "terms": [{"c": 1.0, "lambda": 0.4}]},
//     "numerics":   {"degree": 25, "series_J": 300, ...}
//   }
//
// Distance kinds and their fields:
//   finite_range      d: [..], lambda
//   poly_exponential  lambda, c: [..]
//   superexponential  gamma, delta, a: [..] (one entry = constant), m_enc
//   superposition     terms: [{c, lambda}, ..], tail_bound
//
// A file holding only "distance" (and optionally "numerics") describes an
// encoding without a chain; it is enough for the encode command.

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rmzeta/distances.hpp"
#include "rmzeta/errors.hpp"
#include "rmzeta/fock.hpp"
#include "rmzeta/spinchain.hpp"
#include "rmzeta/zeta.hpp"

namespace rmzeta {

struct Numerics {
  std::size_t degree = 25;
  int series_J = 300;
  int n0 = 1;
  std::uint64_t word_budget = kDefaultWordBudget;
  std::size_t basis_cap = kDefaultBasisCap;
  std::size_t factor_cap = kDefaultFactorCap;
  unsigned threads = 1;
  int check_horizon = kDefaultCheckHorizon;
  std::size_t n_max = 6;

  friend bool operator==(const Numerics&, const Numerics&) = default;
};

struct ModelConfig {
  std::vector<std::string> labels;
  std::vector<double> weights;
  std::vector<std::vector<int>> transition;
  std::vector<cplx> q;
  std::vector<std::vector<cplx>> s;
  std::vector<std::vector<cplx>> t;
  cplx beta{1.0, 0.0};
  DistanceSpec distance;
  Numerics numerics;

  bool has_chain() const { return !weights.empty(); }

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

namespace detail {

using nlohmann::json;

inline std::string field_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

inline std::string index_path(const std::string& parent, std::size_t i) { return parent + "[" + std::to_string(i) + "]"; }

[[noreturn]] inline void config_fail(const std::string& path, const std::string& what) {
  throw ConfigError("config: " + (path.empty() ? std::string("top level") : path) + ": " + what);
}

inline void reject_unknown(const json& obj, const std::string& path, std::set<std::string> allowed) {
  if (!obj.is_object()) config_fail(path, "expected an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) config_fail(field_path(path, item.key()), "unknown field");
  }
}

inline const json& require_field(const json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) config_fail(field_path(path, key), "missing");
  return *it;
}

inline double read_double(const json& j, const std::string& path) {
  if (!j.is_number()) config_fail(path, "expected a number");
  return j.get<double>();
}

inline cplx read_cplx(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  config_fail(path, "expected a number or [re, im]");
}

template <typename Int>
Int read_int(const json& j, const std::string& path, long long lo) {
  if (!j.is_number_integer()) config_fail(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < lo) config_fail(path, "must be >= " + std::to_string(lo));
  return static_cast<Int>(v);
}

inline const json& read_array(const json& j, const std::string& path) {
  if (!j.is_array()) config_fail(path, "expected an array");
  return j;
}

inline std::vector<cplx> read_cplx_list(const json& j, const std::string& path) {
  std::vector<cplx> out;
  const auto& arr = read_array(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(read_cplx(arr[i], index_path(path, i)));
  return out;
}

inline json write_cplx(cplx z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

inline json write_cplx_list(const std::vector<cplx>& v) {
  json out = json::array();
  for (auto z : v) out.push_back(write_cplx(z));
  return out;
}

inline DistanceSpec read_distance(const json& j, const std::string& path) {
  if (!j.is_object()) config_fail(path, "expected an object");
  const auto& kind_j = require_field(j, "kind", path);
  if (!kind_j.is_string()) config_fail(field_path(path, "kind"), "expected a string");
  const auto kind = kind_j.get<std::string>();
  if (kind == "finite_range") {
    reject_unknown(j, path, {"kind", "d", "lambda"});
    FiniteRangeSpec s;
    s.d = read_cplx_list(require_field(j, "d", path), field_path(path, "d"));
    if (j.contains("lambda")) s.lambda = read_cplx(j["lambda"], field_path(path, "lambda"));
    return s;
  }
  if (kind == "poly_exponential") {
    reject_unknown(j, path, {"kind", "lambda", "c"});
    PolyExponentialSpec s;
    s.lambda = read_cplx(require_field(j, "lambda", path), field_path(path, "lambda"));
    s.c = read_cplx_list(require_field(j, "c", path), field_path(path, "c"));
    return s;
  }
  if (kind == "superexponential") {
    reject_unknown(j, path, {"kind", "gamma", "delta", "a", "m_enc"});
    SuperExponentialSpec s;
    if (j.contains("gamma")) s.gamma = read_double(j["gamma"], field_path(path, "gamma"));
    if (j.contains("delta")) s.delta = read_double(j["delta"], field_path(path, "delta"));
    if (j.contains("a")) s.a = read_cplx_list(j["a"], field_path(path, "a"));
    if (j.contains("m_enc")) s.m_enc = read_int<int>(j["m_enc"], field_path(path, "m_enc"), 1);
    return s;
  }
  if (kind == "superposition") {
    reject_unknown(j, path, {"kind", "terms", "tail_bound"});
    SuperpositionSpec s;
    const std::string tpath = field_path(path, "terms");
    const auto& terms = read_array(require_field(j, "terms", path), tpath);
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string ipath = index_path(tpath, i);
      reject_unknown(terms[i], ipath, {"c", "lambda"});
      s.terms.emplace_back(read_cplx(require_field(terms[i], "c", ipath), field_path(ipath, "c")),
                           read_cplx(require_field(terms[i], "lambda", ipath), field_path(ipath, "lambda")));
    }
    if (j.contains("tail_bound")) s.tail_bound = read_double(j["tail_bound"], field_path(path, "tail_bound"));
    return s;
  }
  config_fail(field_path(path, "kind"),
              "unknown distance kind '" + kind + "' (finite_range, poly_exponential, superexponential, superposition)");
}

inline json write_distance(const DistanceSpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FiniteRangeSpec>) {
          return {{"kind", "finite_range"}, {"d", write_cplx_list(s.d)}, {"lambda", write_cplx(s.lambda)}};
        } else if constexpr (std::is_same_v<T, PolyExponentialSpec>) {
          return {{"kind", "poly_exponential"}, {"lambda", write_cplx(s.lambda)}, {"c", write_cplx_list(s.c)}};
        } else if constexpr (std::is_same_v<T, SuperExponentialSpec>) {
          return {{"kind", "superexponential"}, {"gamma", s.gamma}, {"delta", s.delta},
                  {"a", write_cplx_list(s.a)}, {"m_enc", s.m_enc}};
        } else {
          json terms = json::array();
          for (const auto& [c, l] : s.terms) terms.push_back({{"c", write_cplx(c)}, {"lambda", write_cplx(l)}});
          return {{"kind", "superposition"}, {"terms", terms}, {"tail_bound", s.tail_bound}};
        }
      },
      spec);
}

inline Numerics read_numerics(const json& j, const std::string& path) {
  reject_unknown(j, path, {"degree", "series_J", "n0", "word_budget", "basis_cap", "factor_cap", "threads",
                           "check_horizon", "n_max"});
  Numerics n;
  auto get = [&](const char* key, auto& out, long long lo) {
    if (j.contains(key)) out = read_int<std::decay_t<decltype(out)>>(j[key], field_path(path, key), lo);
  };
  get("degree", n.degree, 0);
  get("series_J", n.series_J, 2);
  get("n0", n.n0, 1);
  get("word_budget", n.word_budget, 1);
  get("basis_cap", n.basis_cap, 1);
  get("factor_cap", n.factor_cap, 1);
  get("threads", n.threads, 1);
  get("check_horizon", n.check_horizon, 1);
  get("n_max", n.n_max, 1);
  return n;
}

inline json write_numerics(const Numerics& n) {
  return {{"degree", n.degree},         {"series_J", n.series_J},     {"n0", n.n0},
          {"word_budget", n.word_budget}, {"basis_cap", n.basis_cap}, {"factor_cap", n.factor_cap},
          {"threads", n.threads},       {"check_horizon", n.check_horizon}, {"n_max", n.n_max}};
}

inline std::vector<std::vector<cplx>> read_table(const json& j, const std::string& path, std::size_t F) {
  std::vector<std::vector<cplx>> out;
  const auto& rows = read_array(j, path);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.push_back(read_cplx_list(rows[i], index_path(path, i)));
    if (out.back().size() != F) config_fail(index_path(path, i), "needs one value per letter (" + std::to_string(F) + ")");
  }
  return out;
}

}  // namespace detail

/// Parses a configuration document. Syntax errors carry the parser's line and
/// column; schema errors name the offending field path.
inline ModelConfig parse_config(const std::string& text, const std::string& source = "<string>") {
  using detail::config_fail;
  using detail::field_path;
  using detail::index_path;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + source + ": " + e.what());
  }
  detail::reject_unknown(j, "", {"alphabet", "transition", "q", "rank", "s", "t", "beta", "distance", "numerics"});
  ModelConfig c;
  c.distance = detail::read_distance(detail::require_field(j, "distance", ""), "distance");
  if (j.contains("numerics")) c.numerics = detail::read_numerics(j["numerics"], "numerics");
  if (!j.contains("alphabet")) {
    for (const char* key : {"transition", "q", "rank", "s", "t", "beta"}) {
      if (j.contains(key)) config_fail(key, "given without an alphabet");
    }
    return c;
  }

  const auto& alphabet = detail::read_array(j["alphabet"], "alphabet");
  if (alphabet.empty()) config_fail("alphabet", "must not be empty");
  for (std::size_t x = 0; x < alphabet.size(); ++x) {
    const std::string path = index_path("alphabet", x);
    detail::reject_unknown(alphabet[x], path, {"label", "weight"});
    const auto& label = detail::require_field(alphabet[x], "label", path);
    if (!label.is_string()) config_fail(field_path(path, "label"), "expected a string");
    c.labels.push_back(label.get<std::string>());
    c.weights.push_back(alphabet[x].contains("weight") ? detail::read_double(alphabet[x]["weight"], field_path(path, "weight")) : 1.0);
  }
  const std::size_t F = c.weights.size();

  if (j.contains("transition")) {
    const auto& rows = detail::read_array(j["transition"], "transition");
    if (rows.size() != F) config_fail("transition", "needs " + std::to_string(F) + " rows");
    for (std::size_t x = 0; x < F; ++x) {
      const std::string path = index_path("transition", x);
      const auto& row = detail::read_array(rows[x], path);
      if (row.size() != F) config_fail(path, "needs " + std::to_string(F) + " entries");
      std::vector<int> r;
      for (std::size_t y = 0; y < F; ++y) {
        const int e = detail::read_int<int>(row[y], index_path(path, y), 0);
        if (e > 1) config_fail(index_path(path, y), "must be 0 or 1");
        r.push_back(e);
      }
      c.transition.push_back(std::move(r));
    }
  } else {
    c.transition.assign(F, std::vector<int>(F, 1));
  }

  if (j.contains("q")) {
    c.q = detail::read_cplx_list(j["q"], "q");
    if (c.q.size() != F) config_fail("q", "needs one value per letter (" + std::to_string(F) + ")");
  } else {
    c.q.assign(F, 0.0);
  }
  c.s = detail::read_table(detail::require_field(j, "s", ""), "s", F);
  c.t = detail::read_table(detail::require_field(j, "t", ""), "t", F);
  if (c.s.empty()) config_fail("s", "needs at least one row");
  if (c.s.size() != c.t.size()) config_fail("t", "needs as many rows as s");
  if (j.contains("rank") && detail::read_int<std::size_t>(j["rank"], "rank", 1) != c.s.size()) {
    config_fail("rank", "does not match the number of rows of s and t");
  }
  if (j.contains("beta")) c.beta = detail::read_cplx(j["beta"], "beta");
  return c;
}

inline ModelConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config " + path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

inline std::string dump_config(const ModelConfig& c) {
  nlohmann::json j;
  j["distance"] = detail::write_distance(c.distance);
  j["numerics"] = detail::write_numerics(c.numerics);
  if (c.has_chain()) {
    nlohmann::json alphabet = nlohmann::json::array();
    for (std::size_t x = 0; x < c.weights.size(); ++x) {
      alphabet.push_back({{"label", x < c.labels.size() ? c.labels[x] : std::to_string(x)}, {"weight", c.weights[x]}});
    }
    j["alphabet"] = alphabet;
    j["transition"] = c.transition;
    j["q"] = detail::write_cplx_list(c.q);
    j["rank"] = c.s.size();
    nlohmann::json s = nlohmann::json::array(), t = nlohmann::json::array();
    for (const auto& row : c.s) s.push_back(detail::write_cplx_list(row));
    for (const auto& row : c.t) t.push_back(detail::write_cplx_list(row));
    j["s"] = s;
    j["t"] = t;
    j["beta"] = detail::write_cplx(c.beta);
  }
  return j.dump(2) + "\n";
}

inline DistanceEncoding config_encoding(const ModelConfig& c) { return encode(c.distance, c.numerics.check_horizon); }

/// Builds and validates the spin chain.
inline SpinChainModel config_model(const ModelConfig& c) {
  if (!c.has_chain()) throw ConfigError("config: no alphabet given; this command needs a full spin chain");
  SpinChainModel m;
  m.labels = c.labels;
  m.weights = c.weights;
  m.transition = c.transition;
  m.q = c.q;
  m.s = c.s;
  m.t = c.t;
  m.enc = config_encoding(c);
  m.beta = c.beta;
  validate_model(m);
  return m;
}

}  // namespace rmzeta
