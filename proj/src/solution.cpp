#include "mfg/solution.hpp"

#include <cmath>
#include <iomanip>

#include "mfg/errors.hpp"
#include "mfg/rng.hpp"
#include "parallel.hpp"

namespace mfg {

using Eigen::Index;
using Eigen::VectorXd;

GpField::GpField(KernelSpec k, FunctionalSet funcs, VectorXd coef, int nonlocal_modes)
    : kernel_(k), funcs_(std::move(funcs)), coef_(std::move(coef)), modes_(nonlocal_modes) {
  if (coef_.size() != funcs_.size()) throw LengthMismatch("one coefficient per functional");
}

VectorXd GpField::values(Op op, std::span<const Point> xs) const {
  const Index n = static_cast<Index>(xs.size());
  VectorXd out = VectorXd::Zero(n);
  for (const FunctionalBlock& b : funcs_.blocks) {
    if (b.count == 0) continue;
    VectorXd c = coef_.segment(b.offset, b.count);
    if (op == Op::J5 || b.op == Op::J5) {
      if (kernel_.family != KernelFamily::Periodic2D)
        throw UnsupportedOperator("J5 requires the periodic 2D kernel");
      std::vector<Point> ys(b.count);
      for (Index j = 0; j < b.count; ++j) ys[j] = funcs_.entries[b.offset + j].x;
      out += spectral_apply(*spectral_table(kernel_, modes_), domain(), op, b.op, xs, ys, c);
      continue;
    }
    detail::parallel_for(n, [&](std::ptrdiff_t i) {
      double s = 0.0;
      for (Index j = 0; j < b.count; ++j)
        s += eval_with_ops(kernel_, op, b.op, xs[i], funcs_.entries[b.offset + j].x) * c(j);
      out(i) += s;
    });
  }
  return out;
}

FfField::FfField(FeatureBasis basis, VectorXd coef) : basis_(std::move(basis)), coef_(std::move(coef)) {
  if (coef_.size() != basis_.count()) throw LengthMismatch("one coefficient per feature");
}

VectorXd FfField::values(Op op, std::span<const Point> xs) const {
  VectorXd out(static_cast<Index>(xs.size()));
  detail::parallel_for(out.size(), [&](std::ptrdiff_t i) {
    out(i) = eval_feature_op(basis_, op, xs[i]).dot(coef_);
  });
  return out;
}

GpSolution gp_reconstruct(const SolverState& s, const Covariance& Pu, const Covariance& Pm,
                          const KernelSpec& ku, const KernelSpec& km, const FunctionalSet& ufuncs,
                          const FunctionalSet& mfuncs, int nonlocal_modes) {
  GpSolution out;
  out.u = GpField(ku, ufuncs, Pu.solve(s.z), nonlocal_modes);
  out.m = GpField(km, mfuncs, Pm.solve(s.rho), nonlocal_modes);
  out.lambda = s.lambda;
  return out;
}

FfSolution ff_reconstruct(const SolverState& s, const FeatureFactor& fu, const FeatureFactor& fm,
                          const FeatureBasis& bu, const FeatureBasis& bm) {
  FfSolution out;
  out.u = FfField(bu, fu.coefficients(s.z));
  out.m = FfField(bm, fm.coefficients(s.rho));
  out.lambda = s.lambda;
  return out;
}

double linf_error(const Field& f, const ScalarFn& reference, std::span<const Point> grid) {
  if (grid.empty()) throw EmptyGrid("error grid is empty");
  VectorXd v = f.values(Op::Id, grid);
  double e = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    e = std::max(e, std::abs(v(static_cast<Index>(i)) - reference(grid[i])));
  return e;
}

double linf_error(const Field& f, const Field& reference, std::span<const Point> grid) {
  if (grid.empty()) throw EmptyGrid("error grid is empty");
  return (f.values(Op::Id, grid) - reference.values(Op::Id, grid)).cwiseAbs().maxCoeff();
}

ResidualNorms pde_residual_norms(const Field& u, const Field& m, double lambda,
                                 const ProblemSpec& spec, std::span<const Point> pts) {
  if (pts.empty()) throw EmptyGrid("no residual points");
  std::vector<VectorXd> uv, mv;
  for (Op op : spec.u_interior_ops) uv.push_back(u.values(op, pts));
  for (Op op : spec.m_interior_ops) mv.push_back(m.values(op, pts));
  ResidualNorms n;
  std::array<double, 2> ss{};
  std::array<double, kMaxOps> a{}, b{};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t k = 0; k < uv.size(); ++k) a[k] = uv[k](i);
    for (std::size_t k = 0; k < mv.size(); ++k) b[k] = mv[k](i);
    auto r = interior_residual(spec, pts[i], std::span(a.data(), uv.size()),
                               std::span(b.data(), mv.size()), lambda);
    for (std::size_t c = 0; c < r.size() && c < 2; ++c) ss[c] += r[c] * r[c];
  }
  const double np = static_cast<double>(pts.size());
  n.combined = std::sqrt((ss[0] + ss[1]) / np);
  n.component = {std::sqrt(ss[0] / np), std::sqrt(ss[1] / np)};
  return n;
}

double pde_residual_norm(const Field& u, const Field& m, double lambda, const ProblemSpec& spec,
                         std::span<const Point> pts) {
  return pde_residual_norms(u, m, lambda, spec, pts).combined;
}

std::vector<double> mass_trace(const Field& m, std::span<const double> ts,
                               std::span<const double> xs) {
  if (xs.size() < 2) throw EmptyGrid("mass_trace needs at least two x nodes");
  std::vector<double> out;
  std::vector<Point> pts(xs.size());
  for (double t : ts) {
    for (std::size_t i = 0; i < xs.size(); ++i) pts[i] = {t, xs[i]};
    VectorXd v = m.values(Op::Id, pts);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
      s += 0.5 * (v(i) + v(i + 1)) * (xs[i + 1] - xs[i]);
    out.push_back(s);
  }
  return out;
}

std::vector<Point> torus_grid(Domain d, int n) {
  if (n < 1) throw BadCount("grid size must be positive");
  std::vector<Point> g;
  if (d == Domain::Torus1D) {
    for (int i = 0; i < n; ++i) g.push_back({double(i) / n, 0.0});
  } else if (d == Domain::Torus2D) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g.push_back({double(i) / n, double(j) / n});
  } else {
    throw BadCount("torus_grid needs a torus domain");
  }
  return g;
}

std::vector<Point> spacetime_grid(int nt, int nx) {
  if (nt < 2 || nx < 2) throw BadCount("space-time grid needs at least 2 nodes per axis");
  std::vector<Point> g;
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < nx; ++j) g.push_back({double(i) / (nt - 1), -2.0 + 4.0 * j / (nx - 1)});
  return g;
}

std::vector<Point> heldout_points(Domain d, int n, std::uint64_t seed) {
  if (n < 1) throw BadCount("held-out count must be positive");
  CounterRng rng(seed);
  std::vector<Point> p;
  for (int i = 0; i < n; ++i) {
    double a = rng.uniform(), b = rng.uniform();
    if (d == Domain::Torus1D) p.push_back({a, 0.0});
    else if (d == Domain::Torus2D) p.push_back({a, b});
    else p.push_back({a, -2.0 + 4.0 * b});
  }
  return p;
}

nlohmann::json ErrorReport::to_json() const {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); };
  nlohmann::json j;
  j["linf_u"] = opt(linf_u);
  j["linf_m"] = opt(linf_m);
  j["err_hbar"] = opt(err_hbar);
  for (const auto& [k, v] : extra) j[k] = v;
  j["residual_l2"] = residual_l2;
  j["mass_error"] = mass_error;
  j["grid"] = grid;
  return j;
}

void write_solution_csv(const Field& u, const Field& m, std::span<const Point> grid,
                        std::ostream& os) {
  const Domain d = u.domain();
  VectorXd uv = u.values(Op::Id, grid), mv = m.values(Op::Id, grid);
  os << (d == Domain::Torus1D ? "x" : d == Domain::Torus2D ? "x,y" : "t,x") << ",u,m\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    os << grid[i][0];
    if (d != Domain::Torus1D) os << ',' << grid[i][1];
    os << ',' << uv(i) << ',' << mv(i) << '\n';
  }
}

}  // namespace mfg
