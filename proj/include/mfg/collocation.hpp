#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "mfg/operators.hpp"
#include "mfg/problems.hpp"

namespace mfg {

struct CollocationSet {
  Domain domain = Domain::Torus1D;
  std::vector<Point> interior;
  std::vector<Point> boundary;
  std::uint64_t seed = 0;

  std::size_t size() const { return interior.size() + boundary.size(); }
};

// 1D: i/M.  2D: sqrt(M) x sqrt(M) lattice.
CollocationSet sample_uniform_grid(Domain d, int M);
// iid uniform points on a torus
CollocationSet sample_uniform_random(Domain d, int M, std::uint64_t seed);
// interior iid in (0,1)x(-2,2); boundary iid on {0}x(-2,2) then {1}x(-2,2)
CollocationSet sample_planning(std::uint64_t seed, int n_interior = 1200, int n_initial = 200,
                               int n_terminal = 200);

struct Functional {
  Op op;
  Point x;
  bool boundary;
  std::size_t point;
};

struct FunctionalBlock {
  Op op;
  bool boundary;
  Eigen::Index offset;
  Eigen::Index count;
};

// Contiguous blocks, boundary blocks first, points varying fastest.
struct FunctionalSet {
  Domain domain = Domain::Torus1D;
  std::vector<Functional> entries;
  std::vector<FunctionalBlock> blocks;

  Eigen::Index size() const { return static_cast<Eigen::Index>(entries.size()); }
  const FunctionalBlock& block(Op op, bool boundary = false) const;
  bool has_block(Op op, bool boundary = false) const;
};

FunctionalSet make_functionals(Domain d, const std::vector<Op>& boundary_ops,
                               const std::vector<Op>& interior_ops, const CollocationSet& pts);

std::pair<FunctionalSet, FunctionalSet> build_functionals(const ProblemSpec& spec,
                                                          const CollocationSet& pts);

// columns: role, then one column per coordinate
void write_points_csv(const CollocationSet& pts, std::ostream& os);

}  // namespace mfg
