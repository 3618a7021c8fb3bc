#include "mfg/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "mfg/errors.hpp"
#include "parallel.hpp"

namespace mfg {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool torus(ProblemKind p) { return p != ProblemKind::Planning; }

std::set<std::string> allowed_keys(ProblemKind p, Method m) {
  std::set<std::string> k{"problem", "method",     "seed",     "gamma",     "beta",
                          "alpha",   "max_iters",  "init",     "init_scale", "init_seed",
                          "inner",   "rel_tol",    "eval_grid", "heldout",  "heldout_seed",
                          "output_dir"};
  if (torus(p)) k.insert({"M", "points"});
  if (p == ProblemKind::Nonlocal2D) k.insert("nu");
  if (p == ProblemKind::Planning) k.insert({"n_interior", "n_initial", "n_terminal", "interaction"});
  if (m == Method::GP) {
    k.insert({"eta", "nugget"});
    k.insert(torus(p) ? "sigma" : "lengthscales");
    if (p == ProblemKind::Nonlocal2D) k.insert("nonlocal_modes");
  } else {
    k.insert("mu");
    if (torus(p)) k.insert("N");
    if (p == ProblemKind::Nonlocal2D) k.insert("index_set");
    if (p == ProblemKind::Planning) k.insert({"n_features", "varsigma", "feature_seed", "shared_features",
                                          "frequency_units"});
  }
  return k;
}

std::vector<std::string> required_keys(ProblemKind p, Method m) {
  std::vector<std::string> k{"gamma", "beta", "alpha", "max_iters"};
  if (torus(p)) k.push_back("M");
  if (p == ProblemKind::Nonlocal2D) k.push_back("nu");
  if (m == Method::GP) {
    k.push_back("eta");
    k.push_back(torus(p) ? "sigma" : "lengthscales");
  } else {
    k.push_back("mu");
    k.push_back(torus(p) ? "N" : "n_features");
  }
  return k;
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(key, "has the wrong type");
  }
}

template <class E, class F>
void read_enum(const json& j, const char* key, E& out, F&& parse) {
  std::string s;
  read(j, key, s);
  if (!j.contains(key)) return;
  try {
    out = parse(s);
  } catch (const Error&) {
    throw ConfigError(key, "unknown value '" + s + "'");
  }
}

InitMode parse_init(std::string_view s) {
  if (s == "zeros") return InitMode::ZerosUnitDensity;
  if (s == "gaussian") return InitMode::Gaussian;
  throw Error("bad init");
}

InnerSolve parse_inner(std::string_view s) {
  if (s == "dual") return InnerSolve::Dual;
  if (s == "primal") return InnerSolve::Primal;
  throw Error("bad inner");
}

PointLayout parse_points(std::string_view s) {
  if (s == "grid") return PointLayout::Grid;
  if (s == "random") return PointLayout::Random;
  throw Error("bad points");
}

std::string grid_name(const ExperimentConfig& c) {
  std::ostringstream os;
  if (c.problem == ProblemKind::Stationary1D) os << "uniform " << c.eval_grid[0];
  else if (c.problem == ProblemKind::Nonlocal2D) os << "lattice " << c.eval_grid[0] << "x" << c.eval_grid[0];
  else os << "spacetime " << c.eval_grid[0] << "x" << c.eval_grid[1];
  return os.str();
}

bool perfect_square(int M) {
  int g = static_cast<int>(std::lround(std::sqrt(double(M))));
  return g * g == M;
}

}  // namespace

std::string_view to_string(Method m) { return m == Method::GP ? "gp" : "ff"; }

Method parse_method(std::string_view s) {
  if (s == "gp") return Method::GP;
  if (s == "ff") return Method::FF;
  throw ConfigError("method", "unknown value '" + std::string(s) + "'");
}

ProblemKind parse_problem(std::string_view s) {
  if (s == "mfg1d") return ProblemKind::Stationary1D;
  if (s == "nonlocal2d") return ProblemKind::Nonlocal2D;
  if (s == "planning") return ProblemKind::Planning;
  throw ConfigError("problem", "unknown value '" + std::string(s) + "'");
}

SolverConfig ExperimentConfig::solver() const {
  SolverConfig s;
  s.gamma = gamma;
  s.beta = beta;
  s.alpha = alpha;
  s.max_iters = max_iters;
  s.seed = init_seed;
  s.init_mode = init;
  s.init_scale = init_scale;
  s.inner = inner;
  s.rel_tol = rel_tol;
  return s;
}

void ExperimentConfig::validate() const {
  auto need = [](bool ok, const char* field, const std::string& what) {
    if (!ok) throw ConfigError(field, what);
  };
  if (torus(problem)) {
    need(M >= 1, "M", "must be positive");
    if (problem == ProblemKind::Nonlocal2D && points == PointLayout::Grid)
      need(perfect_square(M), "M", "must be a perfect square for a 2D grid");
    need(eval_grid.size() == 1 && eval_grid[0] >= 1, "eval_grid", "expects one positive size");
  } else {
    need(n_interior >= 1, "n_interior", "must be positive");
    need(n_initial >= 1, "n_initial", "must be positive");
    need(n_terminal >= 1, "n_terminal", "must be positive");
    need(interaction >= 0.0, "interaction", "must be >= 0");
    need(eval_grid.size() == 2 && eval_grid[0] >= 2 && eval_grid[1] >= 2, "eval_grid",
         "expects [nt, nx] with both >= 2");
  }
  if (problem == ProblemKind::Nonlocal2D) {
    need(nu > 0.0, "nu", "must be positive");
    need(nonlocal_modes >= 16 && nonlocal_modes % 2 == 0, "nonlocal_modes",
         "must be even and at least 16");
  }
  if (method == Method::GP) {
    need(eta > 0.0, "eta", "must be positive");
    if (torus(problem)) need(sigma > 0.0, "sigma", "must be positive");
    else need(lengthscales[0] > 0.0 && lengthscales[1] > 0.0, "lengthscales", "must be positive");
  } else {
    need(mu > 0.0, "mu", "must be positive");
    if (torus(problem)) need(N >= 1, "N", "must be positive");
    else {
      need(n_features >= 2 && n_features % 2 == 0, "n_features", "must be even and at least 2");
      need(varsigma > 0.0, "varsigma", "must be positive");
    }
  }
  need(heldout >= 1, "heldout", "must be positive");
  need(!output_dir.empty(), "output_dir", "must not be empty");
  solver().validate();
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "must be a JSON object");
  for (const char* k : {"problem", "method"})
    if (!j.contains(k)) throw ConfigError(k, "is required");
  ExperimentConfig c;
  std::string p, m;
  read(j, "problem", p);
  read(j, "method", m);
  c.problem = parse_problem(p);
  c.method = parse_method(m);
  if (c.problem == ProblemKind::Nonlocal2D) {
    c.eval_grid = {100};
    c.index_set = IndexSet::Full;
  }
  if (c.problem == ProblemKind::Planning) c.eval_grid = {64, 512};

  auto allowed = allowed_keys(c.problem, c.method);
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError(k, "is not a recognized key for this problem/method");
  for (const auto& k : required_keys(c.problem, c.method))
    if (!j.contains(k)) throw ConfigError(k, "is required");

  read(j, "M", c.M);
  read_enum(j, "points", c.points, parse_points);
  read(j, "n_interior", c.n_interior);
  read(j, "n_initial", c.n_initial);
  read(j, "n_terminal", c.n_terminal);
  read(j, "seed", c.seed);
  read(j, "nu", c.nu);
  read(j, "interaction", c.interaction);
  read(j, "nonlocal_modes", c.nonlocal_modes);
  read(j, "sigma", c.sigma);
  read(j, "lengthscales", c.lengthscales);
  read(j, "eta", c.eta);
  read_enum(j, "nugget", c.nugget, parse_nugget_scheme);
  read(j, "N", c.N);
  read_enum(j, "index_set", c.index_set, parse_index_set);
  read(j, "n_features", c.n_features);
  read(j, "varsigma", c.varsigma);
  read(j, "feature_seed", c.feature_seed);
  read(j, "shared_features", c.shared_features);
  read_enum(j, "frequency_units", c.frequency_units, parse_frequency_units);
  read(j, "mu", c.mu);
  read(j, "gamma", c.gamma);
  read(j, "beta", c.beta);
  read(j, "alpha", c.alpha);
  read(j, "max_iters", c.max_iters);
  read_enum(j, "init", c.init, parse_init);
  read(j, "init_scale", c.init_scale);
  read(j, "init_seed", c.init_seed);
  read_enum(j, "inner", c.inner, parse_inner);
  if (j.contains("rel_tol") && !j.at("rel_tol").is_null()) {
    double t = 0.0;
    read(j, "rel_tol", t);
    c.rel_tol = t;
  }
  read(j, "eval_grid", c.eval_grid);
  read(j, "heldout", c.heldout);
  read(j, "heldout_seed", c.heldout_seed);
  read(j, "output_dir", c.output_dir);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["problem"] = std::string(to_string(c.problem));
  j["method"] = std::string(to_string(c.method));
  if (torus(c.problem)) {
    j["M"] = c.M;
    j["points"] = c.points == PointLayout::Grid ? "grid" : "random";
  } else {
    j["n_interior"] = c.n_interior;
    j["n_initial"] = c.n_initial;
    j["n_terminal"] = c.n_terminal;
    j["interaction"] = c.interaction;
  }
  j["seed"] = c.seed;
  if (c.problem == ProblemKind::Nonlocal2D) j["nu"] = c.nu;
  if (c.method == Method::GP) {
    j["eta"] = c.eta;
    j["nugget"] = std::string(to_string(c.nugget));
    if (torus(c.problem)) j["sigma"] = c.sigma;
    else j["lengthscales"] = c.lengthscales;
    if (c.problem == ProblemKind::Nonlocal2D) j["nonlocal_modes"] = c.nonlocal_modes;
  } else {
    j["mu"] = c.mu;
    if (torus(c.problem)) j["N"] = c.N;
    if (c.problem == ProblemKind::Nonlocal2D) j["index_set"] = std::string(to_string(c.index_set));
    if (!torus(c.problem)) {
      j["n_features"] = c.n_features;
      j["varsigma"] = c.varsigma;
      j["feature_seed"] = c.feature_seed;
      j["shared_features"] = c.shared_features;
      j["frequency_units"] = std::string(to_string(c.frequency_units));
    }
  }
  j["gamma"] = c.gamma;
  j["beta"] = c.beta;
  j["alpha"] = c.alpha;
  j["max_iters"] = c.max_iters;
  j["init"] = std::string(to_string(c.init));
  j["init_scale"] = c.init_scale;
  j["init_seed"] = c.init_seed;
  j["inner"] = std::string(to_string(c.inner));
  if (c.rel_tol) j["rel_tol"] = *c.rel_tol;
  j["eval_grid"] = c.eval_grid;
  j["heldout"] = c.heldout;
  j["heldout_seed"] = c.heldout_seed;
  j["output_dir"] = c.output_dir;
  return j;
}

ProblemSpec problem_spec(const ExperimentConfig& c) {
  switch (c.problem) {
    case ProblemKind::Stationary1D:
      return make_1d_stationary(TrigSum::sin(1.0), TrigSum::cos(2.0));
    case ProblemKind::Nonlocal2D:
      return make_nonlocal_2d(c.nu);
    case ProblemKind::Planning:
      return make_planning(c.interaction);
  }
  throw ConfigError("problem", "unknown");
}

CollocationSet collocation(const ExperimentConfig& c) {
  if (c.problem == ProblemKind::Planning)
    return sample_planning(c.seed, c.n_interior, c.n_initial, c.n_terminal);
  Domain d = c.problem == ProblemKind::Stationary1D ? Domain::Torus1D : Domain::Torus2D;
  return c.points == PointLayout::Grid ? sample_uniform_grid(d, c.M)
                                       : sample_uniform_random(d, c.M, c.seed);
}

std::vector<Point> eval_grid(const ExperimentConfig& c) {
  switch (c.problem) {
    case ProblemKind::Stationary1D:
      return torus_grid(Domain::Torus1D, c.eval_grid.at(0));
    case ProblemKind::Nonlocal2D:
      return torus_grid(Domain::Torus2D, c.eval_grid.at(0));
    case ProblemKind::Planning:
      return spacetime_grid(c.eval_grid.at(0), c.eval_grid.at(1));
  }
  return {};
}

RunResult solve_experiment(const ExperimentConfig& c) {
  c.validate();
  RunResult r;
  r.config = c;
  const ProblemSpec spec = problem_spec(c);
  const CollocationSet pts = collocation(c);
  auto [uf, mf] = build_functionals(spec, pts);
  const SolverConfig sc = c.solver();

  std::optional<GramFactor> gu, gm;
  std::optional<FeatureFactor> fu, fm;
  KernelSpec kernel;
  FeatureBasis basis, basis_m;
  const Covariance *Pu = nullptr, *Pm = nullptr;

  if (c.method == Method::GP) {
    kernel = c.problem == ProblemKind::Stationary1D ? KernelSpec::periodic_1d(c.sigma)
             : c.problem == ProblemKind::Nonlocal2D
                 ? KernelSpec::periodic_2d(c.sigma)
                 : KernelSpec::anisotropic_se(c.lengthscales[0], c.lengthscales[1]);
    gu = factor_gram(kernel, uf, c.eta, c.nugget, c.nonlocal_modes);
    gm = factor_gram(kernel, mf, c.eta, c.nugget, c.nonlocal_modes);
    r.timing.assembly_seconds = gu->assembly_seconds + gm->assembly_seconds;
    r.timing.cholesky_seconds = gu->cholesky_seconds + gm->cholesky_seconds;
    Pu = &*gu;
    Pm = &*gm;
  } else {
    if (c.problem == ProblemKind::Stationary1D) {
      basis = basis_m = build_periodic_1d(c.N);
    } else if (c.problem == ProblemKind::Nonlocal2D) {
      basis = basis_m = build_periodic_2d(c.N, c.index_set);
    } else {
      RandomFeatureSampler rs{2, c.varsigma, c.feature_seed, c.frequency_units};
      basis = basis_m = sample_orthogonal_features(rs, c.n_features / 2, Domain::SpaceTime);
      if (!c.shared_features) {
        rs.seed = c.feature_seed + 1;
        basis_m = sample_orthogonal_features(rs, c.n_features / 2, Domain::SpaceTime);
      }
    }
    auto t0 = Clock::now();
    MatrixXd Au = assemble_feature_matrix(uf, basis);
    MatrixXd Am = assemble_feature_matrix(mf, basis_m);
    r.timing.assembly_seconds = since(t0);
    fu = qr_ridge_factor(std::move(Au), c.mu);
    fm = qr_ridge_factor(std::move(Am), c.mu);
    r.timing.qr_seconds = fu->qr_seconds + fm->qr_seconds;
    r.timing.cholesky_seconds = fu->cholesky_seconds + fm->cholesky_seconds;
    Pu = &*fu;
    Pm = &*fm;
  }

  MfgResiduals res(spec, uf, mf, pts);
  SolverState s0 = init_state(uf, mf, spec.has_ergodic_constant, sc);
  auto t0 = Clock::now();
  auto [s, hist] = gauss_newton_run(*Pu, *Pm, res, s0, sc);
  r.timing.solve_seconds = since(t0);

  t0 = Clock::now();
  auto fields = [&](const SolverState& st) -> std::pair<std::shared_ptr<const Field>, std::shared_ptr<const Field>> {
    if (c.method == Method::GP) {
      GpSolution g = gp_reconstruct(st, *Pu, *Pm, kernel, kernel, uf, mf, c.nonlocal_modes);
      return {std::make_shared<GpField>(std::move(g.u)), std::make_shared<GpField>(std::move(g.m))};
    }
    FfSolution f = ff_reconstruct(st, *fu, *fm, basis, basis_m);
    return {std::make_shared<FfField>(std::move(f.u)), std::make_shared<FfField>(std::move(f.m))};
  };
  std::tie(r.u, r.m) = fields(s);
  auto [u0, m0] = fields(s0);
  r.lambda = s.lambda;

  const Domain dom = spec.domain;
  const std::vector<Point> held = heldout_points(dom, c.heldout, c.heldout_seed);
  r.residual_initial = pde_residual_norm(*u0, *m0, s0.lambda, spec, held);

  ErrorReport& rep = r.report;
  rep.grid = grid_name(c);
  rep.residual_l2 = pde_residual_norm(*r.u, *r.m, s.lambda, spec, held);
  r.grid = eval_grid(c);
  r.u_grid = r.u->values(Op::Id, r.grid);
  r.m_grid = r.m->values(Op::Id, r.grid);

  if (c.problem == ProblemKind::Stationary1D) {
    ExplicitSolution ex = explicit_solution_1d(spec.V, spec.b, 16384);
    double eu = 0.0, em = 0.0;
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
      eu = std::max(eu, std::abs(r.u_grid(i) - ex.u(r.grid[i][0])));
      em = std::max(em, std::abs(r.m_grid(i) - ex.m(r.grid[i][0])));
    }
    rep.linf_u = eu;
    rep.linf_m = em;
    rep.err_hbar = std::abs(s.lambda - ex.hbar());
  }
  if (torus(c.problem)) {
    rep.mass_error = std::abs(r.m_grid.mean() - 1.0);
  } else {
    const int nt = c.eval_grid[0], nx = c.eval_grid[1];
    std::vector<double> xs(nx);
    for (int j = 0; j < nx; ++j) xs[j] = r.grid[j][1];
    const std::vector<double> ts{0.25, 0.5, 0.75};
    std::vector<double> mass = mass_trace(*r.m, ts, xs);
    rep.extra["mass_t025"] = mass[0];
    rep.extra["mass_t050"] = mass[1];
    rep.extra["mass_t075"] = mass[2];
    for (double v : mass) rep.mass_error = std::max(rep.mass_error, std::abs(v - 1.0));
    double b0 = 0.0, b1 = 0.0;
    const Eigen::Index last = static_cast<Eigen::Index>(nt - 1) * nx;
    for (int j = 0; j < nx; ++j) {
      b0 = std::max(b0, std::abs(r.m_grid(j) - spec.initial(xs[j])));
      b1 = std::max(b1, std::abs(r.m_grid(last + j) - spec.terminal(xs[j])));
    }
    rep.extra["boundary_linf_t0"] = b0;
    rep.extra["boundary_linf_t1"] = b1;
  }
  if (spec.has_ergodic_constant) rep.extra["lambda"] = s.lambda;
  rep.extra["residual_initial"] = r.residual_initial;
  rep.extra["loss_initial"] = hist.entries.front().total;
  rep.extra["loss_final"] = hist.entries.back().total;
  rep.extra["iterations"] = static_cast<double>(hist.iterations());
  r.timing.report_seconds = since(t0);

  r.state = std::move(s);
  r.history = std::move(hist);
  return r;
}

void write_artifacts(const RunResult& r, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream os(fs::path(dir) / name);
    if (!os) throw Error("cannot write " + (fs::path(dir) / name).string());
    return os;
  };
  {
    auto os = open("loss_history.csv");
    r.history.write_csv(os);
  }
  {
    auto os = open("solution_grid.csv");
    const Domain d = r.u->domain();
    os << (d == Domain::Torus1D ? "x" : d == Domain::Torus2D ? "x,y" : "t,x") << ",u,m\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
      os << r.grid[i][0];
      if (d != Domain::Torus1D) os << ',' << r.grid[i][1];
      os << ',' << r.u_grid(i) << ',' << r.m_grid(i) << '\n';
    }
  }
  {
    auto os = open("error_report.json");
    os << r.report.to_json().dump(2) << '\n';
  }
  {
    auto os = open("config.json");
    os << to_json(r.config).dump(2) << '\n';
  }
  {
    auto os = open("timing.csv");
    const auto& t = r.timing;
    const int M = r.config.problem == ProblemKind::Planning ? r.config.n_interior : r.config.M;
    os << "method,M,assembly_seconds,qr_seconds,cholesky_seconds,solve_seconds,report_seconds\n";
    os << std::setprecision(9) << to_string(r.config.method) << ',' << M << ','
       << t.assembly_seconds << ',' << t.qr_seconds << ',' << t.cholesky_seconds << ','
       << t.solve_seconds << ',' << t.report_seconds << '\n';
  }
}

json CompareReport::to_json() const {
  json j;
  j["linf_u"] = linf_u;
  j["linf_m"] = linf_m;
  j["hbar_gp"] = hbar_gp;
  j["hbar_ff"] = hbar_ff;
  j["hbar_diff"] = hbar_diff;
  return j;
}

CompareReport compare_runs(const RunResult& a, const RunResult& b) {
  if (a.config.problem != b.config.problem)
    throw GridMismatch("runs target different problems");
  if (a.grid != b.grid) throw GridMismatch("runs use different evaluation grids");
  CompareReport c;
  c.linf_u = (a.u_grid - b.u_grid).cwiseAbs().maxCoeff();
  c.linf_m = (a.m_grid - b.m_grid).cwiseAbs().maxCoeff();
  c.hbar_gp = a.lambda;
  c.hbar_ff = b.lambda;
  c.hbar_diff = std::abs(a.lambda - b.lambda);
  return c;
}

double time_call(const std::function<void()>& fn, double min_seconds) {
  long n = 1;
  for (;;) {
    auto t0 = Clock::now();
    for (long i = 0; i < n; ++i) fn();
    double dt = since(t0);
    if (dt >= min_seconds) return dt / double(n);
    n *= 2;
  }
}

std::vector<BenchRow> bench_precompute(ProblemKind problem, Method method,
                                       const std::vector<int>& Ms, int repeats,
                                       const BenchOptions& opt) {
  if (problem == ProblemKind::Planning)
    throw ConfigError("problem", "bench-precompute covers mfg1d and nonlocal2d");
  if (repeats < 1) throw ConfigError("repeats", "must be positive");
  if (!std::is_sorted(Ms.begin(), Ms.end())) throw ConfigError("M", "list must be ascending");
  detail::set_worker_cap(1);
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  std::vector<BenchRow> rows;
  for (int M : Ms) {
    ExperimentConfig c;
    c.problem = problem;
    c.M = M;
    c.nu = opt.nu;
    c.seed = opt.seed;
    c.points = problem == ProblemKind::Nonlocal2D && !perfect_square(M) ? PointLayout::Random
                                                                        : PointLayout::Grid;
    const ProblemSpec spec = problem_spec(c);
    auto [uf, mf] = build_functionals(spec, collocation(c));
    std::vector<double> qr, ch;
    if (method == Method::GP) {
      KernelSpec k = problem == ProblemKind::Stationary1D ? KernelSpec::periodic_1d(opt.sigma)
                                                          : KernelSpec::periodic_2d(opt.sigma);
      MatrixXd Gu = assemble_gram(k, uf, opt.nonlocal_modes);
      Gu.diagonal() += build_nugget(Gu, uf, opt.eta).scaled();
      MatrixXd Gm = assemble_gram(k, mf, opt.nonlocal_modes);
      Gm.diagonal() += build_nugget(Gm, mf, opt.eta).scaled();
      for (int rep = 0; rep < repeats; ++rep) {
        qr.push_back(0.0);
        ch.push_back(time_call([&] {
          Eigen::LLT<MatrixXd> a(Gu), b(Gm);
          if (a.info() != Eigen::Success) throw NotPositiveDefinite(0);
          if (b.info() != Eigen::Success) throw NotPositiveDefinite(0);
        }));
      }
    } else {
      FeatureBasis basis = problem == ProblemKind::Stationary1D
                               ? build_periodic_1d(opt.N)
                               : build_periodic_2d(opt.N, IndexSet::Full);
      MatrixXd Au = assemble_feature_matrix(uf, basis), Am = assemble_feature_matrix(mf, basis);
      FeatureFactor fu = qr_ridge_factor(Au, opt.mu), fm = qr_ridge_factor(Am, opt.mu);
      auto small = [&](const FeatureFactor& f) {
        MatrixXd S = f.tall() ? MatrixXd(f.R1() * f.R1().transpose()) : MatrixXd(f.A() * f.A().transpose());
        S.diagonal().array() += opt.mu;
        return S;
      };
      MatrixXd Su = small(fu), Sm = small(fm);
      for (int rep = 0; rep < repeats; ++rep) {
        qr.push_back(time_call([&] {
          Eigen::HouseholderQR<MatrixXd> a(Au), b(Am);
        }));
        ch.push_back(time_call([&] {
          Eigen::LLT<MatrixXd> a(Su), b(Sm);
        }));
      }
    }
    rows.push_back({method, M, median(qr), median(ch)});
  }
  detail::set_worker_cap(0);
  return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& os) {
  os << "method,M,qr_seconds,cholesky_seconds\n" << std::setprecision(9);
  for (const auto& r : rows)
    os << to_string(r.method) << ',' << r.M << ',' << r.qr_seconds << ',' << r.cholesky_seconds
       << '\n';
}

}  // namespace mfg
