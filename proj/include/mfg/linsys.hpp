#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <string_view>
#include <vector>

#include "mfg/collocation.hpp"
#include "mfg/features.hpp"
#include "mfg/kernels.hpp"

namespace mfg {

using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Symmetric positive definite P, seen through the products the solver needs.
class Covariance {
 public:
  virtual ~Covariance() = default;
  virtual Eigen::Index size() const = 0;
  // P v
  virtual Eigen::VectorXd apply(const Eigen::VectorXd& v) const = 0;
  // P^{-1} v
  virtual Eigen::VectorXd solve(const Eigen::VectorXd& v) const = 0;
  // C P C^T
  virtual Eigen::MatrixXd sandwich(const SparseRows& C) const = 0;
  // dense P^{-1}
  virtual Eigen::MatrixXd inverse() const = 0;

  double quadratic_form(const Eigen::VectorXd& v) const;
};

// ---- GP side

Eigen::MatrixXd assemble_gram(const KernelSpec& k, const FunctionalSet& funcs,
                              int nonlocal_modes = kDefaultNonlocalModes);
// rows x cols matrix of kernel_entry(row op on x, col op on y)
Eigen::MatrixXd assemble_cross(const KernelSpec& k, const FunctionalSet& rows,
                               const FunctionalSet& cols,
                               int nonlocal_modes = kDefaultNonlocalModes);

enum class NuggetScheme { MeanDiagonal, Identity };

std::string_view to_string(NuggetScheme s);
NuggetScheme parse_nugget_scheme(std::string_view s);

// R = blockdiag(r_b I); the regularized matrix is gram + eta R.
struct Nugget {
  double eta = 0.0;
  std::vector<double> multipliers;  // one per functional block
  Eigen::VectorXd r;                // diagonal of R

  Eigen::VectorXd scaled() const { return eta * r; }
};

Nugget build_nugget(const Eigen::MatrixXd& gram, const FunctionalSet& funcs, double eta,
                    NuggetScheme scheme = NuggetScheme::MeanDiagonal);

class GramFactor final : public Covariance {
 public:
  GramFactor() = default;

  Eigen::Index size() const override { return matrix_.rows(); }
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const override;
  Eigen::VectorXd solve(const Eigen::VectorXd& v) const override;
  Eigen::MatrixXd sandwich(const SparseRows& C) const override;
  Eigen::MatrixXd inverse() const override;

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  Eigen::MatrixXd lower() const { return llt_.matrixL(); }

  double eta = 0.0;
  std::vector<double> multipliers;
  double assembly_seconds = 0.0;
  double cholesky_seconds = 0.0;

 private:
  friend GramFactor cholesky_factor(Eigen::MatrixXd matrix);
  Eigen::MatrixXd matrix_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

// Throws NotPositiveDefinite with the first failing pivot.
GramFactor cholesky_factor(Eigen::MatrixXd matrix);

// gram + eta R, factored; records assembly and factorization times.
GramFactor factor_gram(const KernelSpec& k, const FunctionalSet& funcs, double eta,
                       NuggetScheme scheme = NuggetScheme::MeanDiagonal,
                       int nonlocal_modes = kDefaultNonlocalModes);

Eigen::VectorXd solve_gram(const GramFactor& f, const Eigen::VectorXd& v);
double quadratic_form(const GramFactor& f, const Eigen::VectorXd& v);

// ---- FF side

Eigen::MatrixXd assemble_feature_matrix(const FunctionalSet& funcs, const FeatureBasis& basis);

// P = A A^T + mu I, inverted through a thin QR of A when A is tall.
class FeatureFactor final : public Covariance {
 public:
  FeatureFactor() = default;

  Eigen::Index size() const override { return A_.rows(); }
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const override;
  Eigen::VectorXd solve(const Eigen::VectorXd& v) const override;
  Eigen::MatrixXd sandwich(const SparseRows& C) const override;
  Eigen::MatrixXd inverse() const override;

  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::MatrixXd& Q1() const { return Q1_; }
  const Eigen::MatrixXd& R1() const { return R1_; }
  bool tall() const { return tall_; }
  double mu() const { return mu_; }
  // coefficients A^T P^{-1} z of the minimum-norm representation
  Eigen::VectorXd coefficients(const Eigen::VectorXd& z) const;

  double qr_seconds = 0.0;
  double cholesky_seconds = 0.0;

 private:
  friend FeatureFactor qr_ridge_factor(Eigen::MatrixXd A, double mu);
  Eigen::MatrixXd A_, Q1_, R1_;
  Eigen::LLT<Eigen::MatrixXd> small_;  // R1 R1^T + mu I, or A A^T + mu I when wide
  double mu_ = 1.0;
  bool tall_ = true;
};

FeatureFactor qr_ridge_factor(Eigen::MatrixXd A, double mu);
Eigen::VectorXd apply_qr_inverse(const FeatureFactor& f, const Eigen::VectorXd& v);

}  // namespace mfg
