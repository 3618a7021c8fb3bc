#pragma once

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mfg/collocation.hpp"
#include "mfg/features.hpp"
#include "mfg/kernels.hpp"
#include "mfg/linsys.hpp"
#include "mfg/optimizer.hpp"
#include "mfg/problems.hpp"

namespace mfg {

// A reconstructed scalar field; values(op, xs) is (op f)(x) for every x.
class Field {
 public:
  virtual ~Field() = default;
  virtual Domain domain() const = 0;
  virtual Eigen::VectorXd values(Op op, std::span<const Point> xs) const = 0;
  double value(Op op, const Point& x) const { return values(op, std::span(&x, 1))(0); }
  double operator()(const Point& x) const { return value(Op::Id, x); }
};

// u(x) = sum_i [L_i acting on y] K(x, y) at y = x_i, times c_i
class GpField final : public Field {
 public:
  GpField() = default;
  GpField(KernelSpec k, FunctionalSet funcs, Eigen::VectorXd coef,
          int nonlocal_modes = kDefaultNonlocalModes);

  Domain domain() const override { return funcs_.domain; }
  Eigen::VectorXd values(Op op, std::span<const Point> xs) const override;

  const Eigen::VectorXd& coefficients() const { return coef_; }
  const FunctionalSet& functionals() const { return funcs_; }
  const KernelSpec& kernel() const { return kernel_; }

 private:
  KernelSpec kernel_;
  FunctionalSet funcs_;
  Eigen::VectorXd coef_;
  int modes_ = kDefaultNonlocalModes;
};

// u(x) = alpha^T zeta(x)
class FfField final : public Field {
 public:
  FfField() = default;
  FfField(FeatureBasis basis, Eigen::VectorXd coef);

  Domain domain() const override { return basis_.domain; }
  Eigen::VectorXd values(Op op, std::span<const Point> xs) const override;

  const Eigen::VectorXd& coefficients() const { return coef_; }
  const FeatureBasis& basis() const { return basis_; }

 private:
  FeatureBasis basis_;
  Eigen::VectorXd coef_;
};

struct GpSolution {
  GpField u, m;
  double lambda = 0.0;
};

struct FfSolution {
  FfField u, m;
  double lambda = 0.0;
};

GpSolution gp_reconstruct(const SolverState& s, const Covariance& Pu, const Covariance& Pm,
                          const KernelSpec& ku, const KernelSpec& km, const FunctionalSet& ufuncs,
                          const FunctionalSet& mfuncs, int nonlocal_modes = kDefaultNonlocalModes);

FfSolution ff_reconstruct(const SolverState& s, const FeatureFactor& fu, const FeatureFactor& fm,
                          const FeatureBasis& bu, const FeatureBasis& bm);

using ScalarFn = std::function<double(const Point&)>;

double linf_error(const Field& f, const ScalarFn& reference, std::span<const Point> grid);
double linf_error(const Field& f, const Field& reference, std::span<const Point> grid);

struct ResidualNorms {
  double combined = 0.0;                  // sqrt(mean over points of |r(x)|^2)
  std::array<double, 2> component{};     // RMS of each residual component
};

ResidualNorms pde_residual_norms(const Field& u, const Field& m, double lambda,
                                 const ProblemSpec& spec, std::span<const Point> pts);
double pde_residual_norm(const Field& u, const Field& m, double lambda, const ProblemSpec& spec,
                         std::span<const Point> pts);

// trapezoid of m(t, .) over the given x nodes, one entry per t
std::vector<double> mass_trace(const Field& m, std::span<const double> ts,
                               std::span<const double> xs);

// n uniform points on [0,1) (1D) or an n x n lattice (2D)
std::vector<Point> torus_grid(Domain d, int n);
// nt x nx nodes of [0,1] x [-2,2], endpoints included
std::vector<Point> spacetime_grid(int nt, int nx);
// seed-fixed uniform points on the domain
std::vector<Point> heldout_points(Domain d, int n, std::uint64_t seed);

// Reference errors are empty when the problem has no closed-form solution.
struct ErrorReport {
  std::optional<double> linf_u, linf_m, err_hbar;
  double residual_l2 = 0.0;
  double mass_error = 0.0;
  std::string grid;
  std::map<std::string, double> extra;

  nlohmann::json to_json() const;
};

// columns: coordinates then u, m
void write_solution_csv(const Field& u, const Field& m, std::span<const Point> grid,
                        std::ostream& os);

}  // namespace mfg
