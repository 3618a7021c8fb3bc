#include "mfg/collocation.hpp"

#include <cmath>
#include <iomanip>

#include "mfg/errors.hpp"
#include "mfg/rng.hpp"

namespace mfg {

CollocationSet sample_uniform_grid(Domain d, int M) {
  if (M < 1) throw BadCount("M must be positive");
  CollocationSet s;
  s.domain = d;
  if (d == Domain::Torus1D) {
    for (int i = 0; i < M; ++i) s.interior.push_back({double(i) / M, 0.0});
  } else if (d == Domain::Torus2D) {
    int g = static_cast<int>(std::lround(std::sqrt(double(M))));
    if (g * g != M) throw BadCount("M = " + std::to_string(M) + " is not a perfect square");
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) s.interior.push_back({double(i) / g, double(j) / g});
  } else {
    throw BadCount("grid sampling is defined on the torus only");
  }
  return s;
}

CollocationSet sample_uniform_random(Domain d, int M, std::uint64_t seed) {
  if (M < 1) throw BadCount("M must be positive");
  if (d == Domain::SpaceTime) throw BadCount("use sample_planning for the space-time box");
  CollocationSet s;
  s.domain = d;
  s.seed = seed;
  CounterRng rng(seed);
  for (int i = 0; i < M; ++i) {
    double a = rng.uniform();
    double b = d == Domain::Torus2D ? rng.uniform() : 0.0;
    s.interior.push_back({a, b});
  }
  return s;
}

CollocationSet sample_planning(std::uint64_t seed, int n_interior, int n_initial,
                               int n_terminal) {
  if (n_interior < 1 || n_initial < 1 || n_terminal < 1)
    throw BadCount("planning counts must be positive");
  CollocationSet s;
  s.domain = Domain::SpaceTime;
  s.seed = seed;
  CounterRng root(seed);
  CounterRng ri = root.split(0), r0 = root.split(1), r1 = root.split(2);
  for (int i = 0; i < n_interior; ++i) {
    double t = ri.uniform();
    double x = ri.uniform(-2.0, 2.0);
    s.interior.push_back({t, x});
  }
  for (int i = 0; i < n_initial; ++i) s.boundary.push_back({0.0, r0.uniform(-2.0, 2.0)});
  for (int i = 0; i < n_terminal; ++i) s.boundary.push_back({1.0, r1.uniform(-2.0, 2.0)});
  return s;
}

const FunctionalBlock& FunctionalSet::block(Op op, bool boundary) const {
  for (const FunctionalBlock& b : blocks)
    if (b.op == op && b.boundary == boundary) return b;
  throw UnsupportedOperator("no " + std::string(boundary ? "boundary " : "") + "block for " +
                            std::string(to_string(op)));
}

bool FunctionalSet::has_block(Op op, bool boundary) const {
  for (const FunctionalBlock& b : blocks)
    if (b.op == op && b.boundary == boundary) return true;
  return false;
}

FunctionalSet make_functionals(Domain d, const std::vector<Op>& boundary_ops,
                               const std::vector<Op>& interior_ops, const CollocationSet& pts) {
  FunctionalSet f;
  f.domain = d;
  auto add = [&](Op op, bool bnd, const std::vector<Point>& ps) {
    FunctionalBlock b{op, bnd, f.size(), static_cast<Eigen::Index>(ps.size())};
    for (std::size_t i = 0; i < ps.size(); ++i) f.entries.push_back({op, ps[i], bnd, i});
    f.blocks.push_back(b);
  };
  for (Op op : boundary_ops) add(op, true, pts.boundary);
  for (Op op : interior_ops) add(op, false, pts.interior);
  return f;
}

std::pair<FunctionalSet, FunctionalSet> build_functionals(const ProblemSpec& spec,
                                                          const CollocationSet& pts) {
  if (spec.domain != pts.domain)
    throw DimensionMismatch("collocation points live on a different domain");
  return {make_functionals(spec.domain, spec.u_boundary_ops, spec.u_interior_ops, pts),
          make_functionals(spec.domain, spec.m_boundary_ops, spec.m_interior_ops, pts)};
}

void write_points_csv(const CollocationSet& pts, std::ostream& os) {
  const bool st = pts.domain == Domain::SpaceTime;
  const int d = dimension(pts.domain);
  os << "role," << (st ? "t,x" : d == 1 ? "x" : "x,y") << "\n";
  os << std::setprecision(17);
  auto row = [&](const char* role, const Point& p) {
    os << role << "," << p[0];
    if (d > 1) os << "," << p[1];
    os << "\n";
  };
  for (const Point& p : pts.interior) row("interior", p);
  for (const Point& p : pts.boundary) row(p[0] == 0.0 ? "initial" : "terminal", p);
}

}  // namespace mfg
