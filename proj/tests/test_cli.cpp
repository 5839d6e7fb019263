#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "rmzeta/cli.hpp"

using namespace rmzeta;
using namespace rmzeta::cli;

namespace {

std::string sample(const std::string& name) { return std::string(RMZETA_SOURCE_DIR) + "/configs/" + name; }

struct Table {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(',', pos);
    out.push_back(line.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    if (next == std::string::npos) return out;
    pos = next + 1;
  }
}

Table parse(const std::string& text) {
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(text.back(), '\n');
  Table t;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      t.comments.push_back(line.substr(2));
    } else if (t.header.empty()) {
      t.header = split(line);
    } else {
      t.rows.push_back(split(line));
      EXPECT_EQ(t.rows.back().size(), t.header.size()) << line;
    }
  }
  return t;
}

std::size_t column(const Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.header.size(); ++i)
    if (t.header[i] == name) return i;
  ADD_FAILURE() << "no column " << name;
  return 0;
}

double value(const Table& t, std::size_t row, const std::string& name) { return std::stod(t.rows[row][column(t, name)]); }

template <typename F>
std::string capture(F&& f) {
  std::ostringstream os;
  f(os);
  return os.str();
}

}  // namespace

TEST(Cli, NumberFormat) {
  EXPECT_EQ(num(0.1), "0.10000000000000001");
  EXPECT_EQ(num(2.0), "2");
  EXPECT_EQ(num(-0.0), "0");
  EXPECT_EQ(std::stod(num(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Cli, Grid) {
  const auto zs = parse_grid("0,0.9,0,0,10");
  ASSERT_EQ(zs.size(), 10u);
  EXPECT_EQ(zs[0], cplx(0.0, 0.0));
  EXPECT_NEAR(zs[5].real(), 0.5, 1e-15);
  EXPECT_EQ(zs[9], cplx(0.9, 0.0));

  const auto sq = parse_grid("-1,1,-2,2,3");
  ASSERT_EQ(sq.size(), 9u);
  EXPECT_EQ(sq[0], cplx(-1.0, -2.0));
  EXPECT_EQ(sq[1], cplx(0.0, -2.0));
  EXPECT_EQ(sq[3], cplx(-1.0, 0.0));
  EXPECT_EQ(parse_grid("0.2,0.2,0.1,0.1,7"), (std::vector<cplx>{cplx(0.2, 0.1)}));

  EXPECT_THROW(parse_grid("0,1,0,1"), ConfigError);
  EXPECT_THROW(parse_grid("0,1,0,1,2.5"), ConfigError);
  EXPECT_THROW(parse_grid("0,x,0,1,3"), ConfigError);
  EXPECT_THROW(parse_grid("0,1,0,1,0"), ConfigError);
}

TEST(Cli, ComplexLiterals) {
  EXPECT_EQ(parse_complex("0.5"), cplx(0.5, 0.0));
  EXPECT_EQ(parse_complex("0.2i"), cplx(0.0, 0.2));
  EXPECT_EQ(parse_complex("0.1+0.2i"), cplx(0.1, 0.2));
  EXPECT_EQ(parse_complex("-0.1-0.2i"), cplx(-0.1, -0.2));
  EXPECT_EQ(parse_complex("1e-3+2e-1i"), cplx(1e-3, 0.2));
  EXPECT_EQ(parse_complex("i"), cplx(0.0, 1.0));
  EXPECT_EQ(parse_complex("-i"), cplx(0.0, -1.0));
  EXPECT_EQ(parse_complex("2-i"), cplx(2.0, -1.0));
  EXPECT_EQ(parse_complex(" 1 + 2i "), cplx(1.0, 2.0));
  EXPECT_THROW(parse_complex("1+2j"), ConfigError);
  EXPECT_THROW(parse_complex("abc"), ConfigError);
  EXPECT_THROW(parse_complex(""), ConfigError);

  EXPECT_EQ(parse_points("0.1;0.2+0.1i;"), (std::vector<cplx>{0.1, cplx(0.2, 0.1)}));
  EXPECT_THROW(parse_points(";"), ConfigError);
}

TEST(Cli, Overrides) {
  auto c = load_config(sample("ising.json"));
  apply(c, {3, 12, 50, 2});
  EXPECT_EQ(c.numerics.n_max, 3u);
  EXPECT_EQ(c.numerics.degree, 12u);
  EXPECT_EQ(c.numerics.series_J, 50);
  EXPECT_EQ(c.numerics.threads, 2u);
  EXPECT_THROW(apply(c, {0, {}, {}, {}}), ConfigError);
  EXPECT_THROW(apply(c, {{}, {}, 1, {}}), ConfigError);
}

TEST(Cli, EncodePolyExponential) {
  const auto c = load_config(sample("polyexp.json"));
  const auto t = parse(capture([&](std::ostream& os) { cmd_encode(c, os); }));
  ASSERT_EQ(t.rows.size(), 12u);
  EXPECT_EQ(t.header.front(), "k");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    EXPECT_LE(value(t, r, "abs_err"), 1e-12 * std::max(1.0, std::abs(value(t, r, "d_re"))));
    EXPECT_NEAR(value(t, r, "det_re"), value(t, r, "det_identity_re"), 1e-12);
    EXPECT_NEAR(value(t, r, "det_im"), value(t, r, "det_identity_im"), 1e-12);
  }
  EXPECT_EQ(t.comments[0], "kind: poly_exponential");
}

TEST(Cli, EncodeSuperExponentialNorm) {
  const auto c = load_config(sample("superexp.json"));
  const auto t = parse(capture([&](std::ostream& os) { cmd_encode(c, os); }));
  bool seen = false;
  for (const auto& line : t.comments) {
    if (line.rfind("norm_B: ", 0) == 0) {
      EXPECT_NEAR(std::stod(line.substr(8)), std::exp(-1.0), 1e-12);
      seen = true;
    }
  }
  EXPECT_TRUE(seen);
}

TEST(Cli, EncodeRejectsUnstableLambda) {
  const auto c = load_config(sample("polyexp_bad.json"));
  std::ostringstream os;
  try {
    cmd_encode(c, os);
    FAIL() << "expected a DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("spectral radius ≥ 1"), std::string::npos);
  }
}

TEST(Cli, PartitionFullShift) {
  const auto c = load_config(sample("fullshift2.json"));
  const auto t = parse(capture([&](std::ostream& os) { cmd_partition(c, os); }));
  ASSERT_EQ(t.rows.size(), c.numerics.n_max);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double expected = std::pow(2.0, static_cast<double>(r + 1));
    EXPECT_NEAR(value(t, r, "Z_bruteforce_closed_re"), expected, 1e-12 * expected);
    EXPECT_NEAR(value(t, r, "Z_bruteforce_series_re"), expected, 1e-12 * expected);
    EXPECT_NEAR(value(t, r, "Z_traceformula_words_re"), expected, 1e-12 * expected);
    EXPECT_EQ(t.rows[r].back(), "ok");
  }
}

TEST(Cli, PartitionIsingAgrees) {
  auto c = load_config(sample("ising.json"));
  apply(c, {5, 20, {}, {}});
  const auto t = parse(capture([&](std::ostream& os) { cmd_partition(c, os); }));
  ASSERT_EQ(t.rows.size(), 5u);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double z = std::abs(value(t, r, "Z_bruteforce_closed_re"));
    EXPECT_LE(value(t, r, "abs_err_words"), 1e-10 * z);
    EXPECT_LE(value(t, r, "abs_err_matrix"), 1e-5);
    EXPECT_EQ(t.rows[r].back(), "ok");
  }
}

TEST(Cli, PartitionFlagsBudgetAndThreshold) {
  auto c = load_config(sample("ising.json"));
  c.numerics.word_budget = 20;
  c.numerics.n_max = 6;
  c.numerics.degree = 4;
  auto t = parse(capture([&](std::ostream& os) { cmd_partition(c, os); }));
  ASSERT_EQ(t.rows.size(), 6u);
  EXPECT_EQ(t.rows[0].back(), "ok");
  EXPECT_EQ(t.rows[5].back(), "budget");
  EXPECT_TRUE(t.rows[5][column(t, "Z_bruteforce_closed_re")].empty());
  EXPECT_FALSE(t.rows[5][column(t, "Z_traceformula_matrix_re")].empty());

  c = load_config(sample("ising.json"));
  c.distance = PolyExponentialSpec{0.5, {1.0, 1.0, 1.0}};
  c.numerics.n_max = 4;
  c.numerics.degree = 4;
  const auto nmin = min_trace_power(config_encoding(c));
  ASSERT_GT(nmin, 1u);
  t = parse(capture([&](std::ostream& os) { cmd_partition(c, os); }));
  EXPECT_EQ(t.rows[0].back(), "below_n_min");
  EXPECT_TRUE(t.rows[0][column(t, "Z_traceformula_words_re")].empty());
  EXPECT_FALSE(t.rows[0][column(t, "Z_bruteforce_closed_re")].empty());
}

TEST(Cli, PartitionBasisCap) {
  auto c = load_config(sample("potts2.json"));
  c.numerics.basis_cap = 10;
  c.numerics.n_max = 2;
  const auto t = parse(capture([&](std::ostream& os) { cmd_partition(c, os); }));
  EXPECT_EQ(t.rows[0].back(), "basis_cap");
  EXPECT_FALSE(t.rows[0][column(t, "abs_err_words")].empty());
}

TEST(Cli, ZetaFullShiftPole) {
  const auto c = load_config(sample("fullshift2.json"));
  const auto zs = parse_grid("0,0.9,0,0,10");
  const auto text = capture([&](std::ostream& os) { cmd_zeta(c, zs, os); });
  const auto t = parse(text);
  ASSERT_EQ(t.rows.size(), 10u);
  EXPECT_NEAR(value(t, 0, "re_zeta"), 1.0, 1e-14);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (r == 5) {
      EXPECT_EQ(t.rows[r][column(t, "pole_flag")], "1");
      EXPECT_TRUE(t.rows[r][column(t, "re_zeta")].empty());
    } else {
      const double z = zs[r].real();
      EXPECT_EQ(t.rows[r][column(t, "pole_flag")], "0");
      EXPECT_NEAR(value(t, r, "re_zeta"), 1.0 / (1.0 - 2.0 * z), 1e-9 * std::abs(1.0 / (1.0 - 2.0 * z)));
    }
  }
  std::size_t poles = 0;
  for (const auto& line : t.comments) {
    if (line.rfind("pole,", 0) != 0) continue;
    const auto f = split(line);
    ASSERT_EQ(f.size(), 4u);
    EXPECT_NEAR(std::stod(f[1]), 0.5, 1e-12);
    EXPECT_NEAR(std::stod(f[2]), 0.0, 1e-12);
    EXPECT_EQ(f[3], "1");
    ++poles;
  }
  EXPECT_EQ(poles, 1u) << text;
}

TEST(Cli, ZetaIsDeterministicAcrossThreads) {
  auto c = load_config(sample("ising.json"));
  c.numerics.degree = 12;
  const auto zs = parse_points("0.1;0.2+0.1i;-0.3i");
  const auto a = capture([&](std::ostream& os) { cmd_zeta(c, zs, os); });
  const auto b = capture([&](std::ostream& os) { cmd_zeta(c, zs, os); });
  c.numerics.threads = 3;
  const auto d = capture([&](std::ostream& os) { cmd_zeta(c, zs, os); });
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, d);
}

TEST(Cli, ChainCommandsNeedAnAlphabet) {
  const auto c = load_config(sample("polyexp.json"));
  std::ostringstream os;
  EXPECT_THROW(cmd_partition(c, os), ConfigError);
  EXPECT_THROW(cmd_zeta(c, {0.1}, os), ConfigError);
}
