#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "mfg/collocation.hpp"
#include "mfg/linsys.hpp"
#include "mfg/problems.hpp"

namespace mfg {

enum class InitMode { ZerosUnitDensity, Gaussian };
enum class InnerSolve { Dual, Primal };

std::string_view to_string(InitMode m);
std::string_view to_string(InnerSolve s);

struct SolverConfig {
  double gamma = 1.0;  // PDE residual weight
  double beta = 1.0;   // normalization weight
  double alpha = 1.0;  // relaxation, theta += alpha (theta_hat - theta)
  int max_iters = 10;
  std::uint64_t seed = 0;
  InitMode init_mode = InitMode::ZerosUnitDensity;
  double init_scale = 0.0;
  InnerSolve inner = InnerSolve::Dual;
  // stop once |L_k - L_{k-1}| <= rel_tol |L_{k-1}|; off when unset
  std::optional<double> rel_tol;
  // verify the primal normal equations of each inner solve
  bool check_normal_equations = false;
  double normal_equations_tol = 1e-8;

  void validate() const;
};

struct SolverState {
  Eigen::VectorXd z, rho;
  double lambda = 0.0;
  bool has_lambda = false;

  bool finite() const;
};

SolverState init_state(const FunctionalSet& ufuncs, const FunctionalSet& mfuncs, bool has_lambda,
                       const SolverConfig& cfg);

struct LossTerms {
  double total = 0.0;
  double quadratic = 0.0;
  double pde_penalty = 0.0;
  double norm_penalty = 0.0;
};

struct LossHistory {
  std::vector<LossTerms> entries;
  std::vector<double> normal_residuals;  // filled when checking is on

  std::size_t iterations() const { return entries.empty() ? 0 : entries.size() - 1; }
  void write_csv(std::ostream& os) const;
};

// Weighted residuals r and their Jacobian blocks at a state. Rows are
// sqrt(gamma)-scaled PDE rows first, then sqrt(beta)-scaled normalization rows.
struct Linearization {
  Eigen::VectorXd r;
  Eigen::Index pde_rows = 0;
  SparseRows Jz, Jrho;
  Eigen::VectorXd Jlambda;  // empty without an ergodic constant

  Eigen::Index rows() const { return r.size(); }
};

class ResidualMap {
 public:
  virtual ~ResidualMap() = default;
  virtual Linearization linearize(const SolverState& s, const SolverConfig& cfg,
                                  bool with_jacobian) const = 0;
};

// The MFG residuals at the collocation points, read off the functional values.
class MfgResiduals final : public ResidualMap {
 public:
  MfgResiduals(ProblemSpec spec, const FunctionalSet& ufuncs, const FunctionalSet& mfuncs,
               const CollocationSet& pts);

  Linearization linearize(const SolverState& s, const SolverConfig& cfg,
                          bool with_jacobian) const override;

  // unweighted interior residual components at interior point i
  std::vector<double> interior_at(const SolverState& s, std::size_t i) const;

  const ProblemSpec& spec() const { return spec_; }

 private:
  void gather(const SolverState& s, std::size_t i, bool boundary, std::array<double, kMaxOps>& u,
              std::array<double, kMaxOps>& m) const;

  ProblemSpec spec_;
  CollocationSet pts_;
  Eigen::Index nu_ = 0, nm_ = 0;
  std::vector<Eigen::Index> u_int_, m_int_, u_bnd_, m_bnd_;  // block offsets per op
  Eigen::Index u_id_ = -1, m_id_ = -1;                       // interior Id offsets
};

LossTerms objective(const SolverState& s, const Covariance& Pu, const Covariance& Pm,
                    const ResidualMap& res, const SolverConfig& cfg);

// Minimizer of the model with every residual replaced by its linearization at s.
SolverState inner_solve(const SolverState& s, const Covariance& Pu, const Covariance& Pm,
                        const Linearization& lin, const SolverConfig& cfg,
                        double* normal_residual = nullptr);

std::pair<SolverState, LossHistory> gauss_newton_run(const Covariance& Pu, const Covariance& Pm,
                                                     const ResidualMap& res, SolverState init,
                                                     const SolverConfig& cfg);

}  // namespace mfg
