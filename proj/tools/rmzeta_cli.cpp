// rmzeta: encode | partition | zeta | selftest

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rmzeta/cli.hpp"

namespace {

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary | std::ios::trunc);
  if (!file) throw rmzeta::ConfigError("cannot open output file " + path);
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transfer operators, trace formulas and dynamical zeta functions of long-range spin chains"};
  app.require_subcommand(1);

  std::string config_path, out_path, grid, points, inject;
  std::size_t n_max = 0, degree = 0;
  int series_J = 0;
  unsigned threads = 0;

  app.add_option("--config", config_path, "model description (JSON)");
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  auto* encode = app.add_subcommand("encode", "tabulate a distance encoding");
  auto* partition = app.add_subcommand("partition", "partition values by brute force and by the trace formula");
  partition->add_option("--n-max", n_max, "largest period n")->check(CLI::PositiveNumber);
  partition->add_option("--degree", degree, "truncation degree of the transfer matrix");
  partition->add_option("--series-J", series_J, "interaction series cut for the series column")->check(CLI::Range(2, 1 << 30));
  auto* zeta = app.add_subcommand("zeta", "evaluate the continued zeta function");
  auto* grid_opt = zeta->add_option("--grid", grid, "re0,re1,im0,im1,steps");
  zeta->add_option("--points", points, "a+bi;c+di;...")->excludes(grid_opt);
  zeta->add_option("--degree", degree, "truncation degree of the transfer matrix");
  auto* selftest = app.add_subcommand("selftest", "run the check suite");
  selftest->add_option("--inject", inject, "perturb the named check")->group("");
  for (auto* sub : {encode, partition, zeta, selftest}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help exits 0; usage errors share the exit code of other errors
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    std::ofstream file;
    if (selftest->parsed()) {
      rmzeta::SelftestOptions opt;
      opt.inject = inject;
      if (threads) opt.threads = threads;
      return rmzeta::cli::cmd_selftest(open_output(out_path, file), opt) == 0 ? 0 : 1;
    }
    if (config_path.empty()) throw rmzeta::ConfigError("--config is required for this command");
    auto config = rmzeta::load_config(config_path);
    rmzeta::cli::Overrides o;
    if (n_max) o.n_max = n_max;
    if (partition->count("--degree") || zeta->count("--degree")) o.degree = degree;
    if (series_J) o.series_J = series_J;
    if (threads) o.threads = threads;
    rmzeta::cli::apply(config, o);
    auto& os = open_output(out_path, file);
    if (encode->parsed()) {
      rmzeta::cli::cmd_encode(config, os);
    } else if (partition->parsed()) {
      rmzeta::cli::cmd_partition(config, os);
    } else {
      if (grid.empty() && points.empty()) throw rmzeta::ConfigError("zeta: give --grid or --points");
      const auto zs = grid.empty() ? rmzeta::cli::parse_points(points) : rmzeta::cli::parse_grid(grid);
      rmzeta::cli::cmd_zeta(config, zs, os);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "rmzeta: " << e.what() << '\n';
    return 2;
  }
}
