#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mfg/features.hpp"
#include "mfg/linsys.hpp"
#include "mfg/optimizer.hpp"
#include "mfg/problems.hpp"
#include "mfg/solution.hpp"

namespace mfg {

enum class Method { GP, FF };

std::string_view to_string(Method m);
Method parse_method(std::string_view s);
ProblemKind parse_problem(std::string_view s);

enum class PointLayout { Grid, Random };

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::Stationary1D;
  Method method = Method::GP;

  // collocation
  int M = 256;  // torus problems
  PointLayout points = PointLayout::Grid;
  int n_interior = 1200, n_initial = 200, n_terminal = 200;  // planning
  std::uint64_t seed = 0;

  // problem data
  double nu = 1.0;
  double interaction = 0.01;
  int nonlocal_modes = kDefaultNonlocalModes;

  // GP
  double sigma = 0.6;
  std::array<double, 2> lengthscales{0.4472135954999579, 0.7071067811865476};  // (space, time)
  double eta = 1e-6;
  NuggetScheme nugget = NuggetScheme::MeanDiagonal;

  // FF
  int N = 10;
  IndexSet index_set = IndexSet::Paper;
  int n_features = 200;
  double varsigma = 0.2;
  std::uint64_t feature_seed = 0;  // m draws from feature_seed + 1 unless shared
  bool shared_features = false;
  FrequencyUnits frequency_units = FrequencyUnits::Angular;
  double mu = 1e-6;

  // Gauss-Newton
  double gamma = 1.0;
  double beta = 1.0;
  double alpha = 1.0;
  int max_iters = 10;
  InitMode init = InitMode::ZerosUnitDensity;
  double init_scale = 0.0;
  std::uint64_t init_seed = 0;
  InnerSolve inner = InnerSolve::Dual;
  std::optional<double> rel_tol;

  // evaluation
  std::vector<int> eval_grid{1000};
  int heldout = 2000;
  std::uint64_t heldout_seed = 7;

  std::string output_dir = "out";

  bool operator==(const ExperimentConfig&) const = default;

  void validate() const;
  SolverConfig solver() const;
};

// Strict: unknown keys and keys that do not apply to the problem/method throw ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& c);

ProblemSpec problem_spec(const ExperimentConfig& c);
CollocationSet collocation(const ExperimentConfig& c);
std::vector<Point> eval_grid(const ExperimentConfig& c);

struct Timing {
  double assembly_seconds = 0.0;
  double qr_seconds = 0.0;
  double cholesky_seconds = 0.0;
  double solve_seconds = 0.0;
  double report_seconds = 0.0;
};

struct RunResult {
  ExperimentConfig config;
  SolverState state;
  LossHistory history;
  std::shared_ptr<const Field> u, m;
  double lambda = 0.0;
  double residual_initial = 0.0;
  std::vector<Point> grid;
  Eigen::VectorXd u_grid, m_grid;
  ErrorReport report;
  Timing timing;
};

// sample, assemble, factor, optimize, reconstruct, report; nothing is written
RunResult solve_experiment(const ExperimentConfig& c);

// loss_history.csv, solution_grid.csv, error_report.json, timing.csv under dir
void write_artifacts(const RunResult& r, const std::string& dir);

struct CompareReport {
  double linf_u = 0.0;
  double linf_m = 0.0;
  double hbar_gp = 0.0;
  double hbar_ff = 0.0;
  double hbar_diff = 0.0;

  nlohmann::json to_json() const;
};

// Throws GridMismatch when the two runs do not share a problem and evaluation grid.
CompareReport compare_runs(const RunResult& a, const RunResult& b);

struct BenchOptions {
  int N = 10;
  double sigma = 0.6;
  double eta = 1e-6;
  double mu = 1e-6;
  double nu = 1.0;
  int nonlocal_modes = kDefaultNonlocalModes;
  std::uint64_t seed = 0;
};

struct BenchRow {
  Method method;
  int M;
  double qr_seconds;
  double cholesky_seconds;
};

// Median over repeats of the precompute factorizations for u and m together.
std::vector<BenchRow> bench_precompute(ProblemKind problem, Method method,
                                       const std::vector<int>& Ms, int repeats,
                                       const BenchOptions& opt = {});
void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& os);

// Mean seconds per call of fn, looping until at least min_seconds elapse.
double time_call(const std::function<void()>& fn, double min_seconds = 1e-3);

}  // namespace mfg
