#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "mfg/errors.hpp"
#include "mfg/experiment.hpp"

namespace {

void summarize(const mfg::RunResult& r) {
  const auto& c = r.config;
  std::cout << to_string(c.problem) << " " << to_string(c.method) << ": "
            << r.history.iterations() << " iterations, loss " << r.history.entries.front().total
            << " -> " << r.history.entries.back().total << "\n";
  std::cout << r.report.to_json().dump(2) << "\n";
}

int run_cmd(const std::string& path, const std::string& out) {
  mfg::ExperimentConfig c = mfg::load_config(path);
  if (!out.empty()) c.output_dir = out;
  mfg::RunResult r = mfg::solve_experiment(c);
  mfg::write_artifacts(r, c.output_dir);
  summarize(r);
  return 0;
}

int compare_cmd(const std::string& a, const std::string& b, const std::string& out) {
  mfg::RunResult ra = mfg::solve_experiment(mfg::load_config(a));
  mfg::RunResult rb = mfg::solve_experiment(mfg::load_config(b));
  std::string text = mfg::compare_runs(ra, rb).to_json().dump(2);
  if (out.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream os(out);
    os << text << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-process and Fourier-feature solvers for mean field games"};
  app.require_subcommand(1);

  std::string config, out;
  auto* run = app.add_subcommand("run", "solve one experiment from a JSON config");
  run->add_option("config", config, "config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "output directory (overrides output_dir)");

  std::string cfg_a, cfg_b, cmp_out;
  auto* cmp = app.add_subcommand("compare", "run two configs and report their distance");
  cmp->add_option("config_gp", cfg_a)->required()->check(CLI::ExistingFile);
  cmp->add_option("config_ff", cfg_b)->required()->check(CLI::ExistingFile);
  cmp->add_option("--out", cmp_out, "write the JSON report here instead of stdout");

  std::string problem = "mfg1d", method = "both", bench_out;
  std::vector<int> Ms{256, 512, 1024, 2048};
  int repeats = 5;
  mfg::BenchOptions opt;
  auto* bench = app.add_subcommand("bench-precompute", "time the precompute factorizations");
  bench->add_option("--problem", problem)->check(CLI::IsMember({"mfg1d", "nonlocal2d"}));
  bench->add_option("--method", method)->check(CLI::IsMember({"gp", "ff", "both"}));
  bench->add_option("--M", Ms, "ascending list of collocation counts")->delimiter(',');
  bench->add_option("--repeats", repeats)->check(CLI::PositiveNumber);
  bench->add_option("--N", opt.N);
  bench->add_option("--sigma", opt.sigma);
  bench->add_option("--eta", opt.eta);
  bench->add_option("--mu", opt.mu);
  bench->add_option("--nu", opt.nu);
  bench->add_option("--seed", opt.seed);
  bench->add_option("--out", bench_out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return run_cmd(config, out);
    if (*cmp) return compare_cmd(cfg_a, cfg_b, cmp_out);
    if (*bench) {
      mfg::ProblemKind p = mfg::parse_problem(problem);
      std::vector<mfg::BenchRow> rows;
      for (const char* m : {"gp", "ff"}) {
        if (method != "both" && method != m) continue;
        auto r = mfg::bench_precompute(p, mfg::parse_method(m), Ms, repeats, opt);
        rows.insert(rows.end(), r.begin(), r.end());
      }
      if (bench_out.empty()) {
        mfg::write_bench_csv(rows, std::cout);
      } else {
        std::ofstream os(bench_out);
        mfg::write_bench_csv(rows, os);
      }
      return 0;
    }
  } catch (const mfg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const mfg::NotPositiveDefinite& e) {
    std::cerr << "numerical failure: " << e.what() << " (increase eta or mu)\n";
    return 3;
  } catch (const mfg::NonFiniteObjective& e) {
    std::cerr << "numerical failure: " << e.what() << " (try a smaller alpha)\n";
    return 3;
  } catch (const mfg::SingularNormalEquations& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
