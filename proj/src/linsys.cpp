#include "mfg/linsys.hpp"

#include <chrono>
#include <cmath>

#include "mfg/errors.hpp"
#include "parallel.hpp"

namespace mfg {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_length(Index expected, Index got, const char* what) {
  if (expected != got)
    throw LengthMismatch(std::string(what) + ": expected length " + std::to_string(expected) +
                         ", got " + std::to_string(got));
}

std::vector<Point> block_points(const FunctionalSet& f, const FunctionalBlock& b) {
  std::vector<Point> p(b.count);
  for (Index i = 0; i < b.count; ++i) p[i] = f.entries[b.offset + i].x;
  return p;
}

// Fills out(rb, cb) for one block pair. When upper is set only j >= i is written
// (rows and columns are the same block).
void fill_block(const KernelSpec& k, const FunctionalSet& rows, const FunctionalBlock& rb,
                const FunctionalSet& cols, const FunctionalBlock& cb, int nonlocal_modes,
                bool upper, MatrixXd& out) {
  if (rb.op == Op::J5 || cb.op == Op::J5) {
    if (k.family != KernelFamily::Periodic2D)
      throw UnsupportedOperator("J5 requires the periodic 2D kernel");
    auto table = spectral_table(k, nonlocal_modes);
    auto xs = block_points(rows, rb), ys = block_points(cols, cb);
    out.block(rb.offset, cb.offset, rb.count, cb.count) =
        spectral_block(*table, rows.domain, rb.op, cb.op, xs, ys);
    return;
  }
  detail::parallel_for(rb.count, [&](std::ptrdiff_t i) {
    const Point& x = rows.entries[rb.offset + i].x;
    for (Index j = upper ? i : 0; j < cb.count; ++j)
      out(rb.offset + i, cb.offset + j) =
          eval_with_ops(k, rb.op, cb.op, x, cols.entries[cb.offset + j].x);
  });
}

}  // namespace

double Covariance::quadratic_form(const VectorXd& v) const {
  check_length(size(), v.size(), "quadratic_form");
  return v.dot(solve(v));
}

MatrixXd assemble_gram(const KernelSpec& k, const FunctionalSet& funcs, int nonlocal_modes) {
  k.validate();
  if (k.domain() != funcs.domain)
    throw DimensionMismatch("kernel and functionals live on different domains");
  const Index n = funcs.size();
  MatrixXd G(n, n);
  const auto& bl = funcs.blocks;
  for (std::size_t a = 0; a < bl.size(); ++a)
    for (std::size_t b = a; b < bl.size(); ++b)
      fill_block(k, funcs, bl[a], funcs, bl[b], nonlocal_modes, a == b, G);
  G.triangularView<Eigen::StrictlyLower>() = G.transpose();
  return G;
}

MatrixXd assemble_cross(const KernelSpec& k, const FunctionalSet& rows, const FunctionalSet& cols,
                        int nonlocal_modes) {
  k.validate();
  if (rows.domain != cols.domain || k.domain() != rows.domain)
    throw DimensionMismatch("kernel and functionals live on different domains");
  MatrixXd G(rows.size(), cols.size());
  for (const auto& rb : rows.blocks)
    for (const auto& cb : cols.blocks) fill_block(k, rows, rb, cols, cb, nonlocal_modes, false, G);
  return G;
}

std::string_view to_string(NuggetScheme s) {
  return s == NuggetScheme::MeanDiagonal ? "mean_diagonal" : "identity";
}

NuggetScheme parse_nugget_scheme(std::string_view s) {
  if (s == "mean_diagonal") return NuggetScheme::MeanDiagonal;
  if (s == "identity") return NuggetScheme::Identity;
  throw ConfigError("nugget", "unknown scheme '" + std::string(s) + "'");
}

Nugget build_nugget(const MatrixXd& gram, const FunctionalSet& funcs, double eta,
                    NuggetScheme scheme) {
  check_length(funcs.size(), gram.rows(), "build_nugget");
  Nugget nug;
  nug.eta = eta;
  nug.r = VectorXd::Ones(gram.rows());
  for (const auto& b : funcs.blocks) {
    double m = 1.0;
    if (scheme == NuggetScheme::MeanDiagonal && b.count > 0) {
      m = gram.diagonal().segment(b.offset, b.count).mean();
      if (!(m > 0.0)) m = 1.0;
    }
    nug.multipliers.push_back(m);
    nug.r.segment(b.offset, b.count).setConstant(m);
  }
  return nug;
}

// ---- GramFactor

VectorXd GramFactor::apply(const VectorXd& v) const {
  check_length(size(), v.size(), "apply");
  return matrix_.selfadjointView<Eigen::Lower>() * v;
}

VectorXd GramFactor::solve(const VectorXd& v) const {
  check_length(size(), v.size(), "solve_gram");
  return llt_.solve(v);
}

MatrixXd GramFactor::sandwich(const SparseRows& C) const {
  check_length(size(), C.cols(), "sandwich");
  MatrixXd CP = C * matrix_;
  MatrixXd S = CP * C.transpose();
  return 0.5 * (S + S.transpose());
}

MatrixXd GramFactor::inverse() const { return llt_.solve(MatrixXd::Identity(size(), size())); }

GramFactor cholesky_factor(MatrixXd matrix) {
  if (matrix.rows() != matrix.cols()) throw DimensionMismatch("cholesky_factor needs a square matrix");
  GramFactor f;
  auto t0 = std::chrono::steady_clock::now();
  f.llt_.compute(matrix);
  f.cholesky_seconds = seconds_since(t0);
  if (f.llt_.info() != Eigen::Success) {
    // locate the first failing pivot with an unblocked pass
    MatrixXd L = matrix;
    const Index n = L.rows();
    for (Index j = 0; j < n; ++j) {
      double d = L(j, j) - L.row(j).head(j).squaredNorm();
      if (!(d > 0.0)) throw NotPositiveDefinite(j);
      d = std::sqrt(d);
      L(j, j) = d;
      for (Index i = j + 1; i < n; ++i)
        L(i, j) = (L(i, j) - L.row(i).head(j).dot(L.row(j).head(j))) / d;
    }
    throw NotPositiveDefinite(n - 1);
  }
  f.matrix_ = std::move(matrix);
  return f;
}

GramFactor factor_gram(const KernelSpec& k, const FunctionalSet& funcs, double eta,
                       NuggetScheme scheme, int nonlocal_modes) {
  auto t0 = std::chrono::steady_clock::now();
  MatrixXd G = assemble_gram(k, funcs, nonlocal_modes);
  Nugget nug = build_nugget(G, funcs, eta, scheme);
  G.diagonal() += nug.scaled();
  double assembly = seconds_since(t0);
  GramFactor f = cholesky_factor(std::move(G));
  f.eta = eta;
  f.multipliers = nug.multipliers;
  f.assembly_seconds = assembly;
  return f;
}

VectorXd solve_gram(const GramFactor& f, const VectorXd& v) { return f.solve(v); }

double quadratic_form(const GramFactor& f, const VectorXd& v) { return f.quadratic_form(v); }

// ---- FF side

MatrixXd assemble_feature_matrix(const FunctionalSet& funcs, const FeatureBasis& basis) {
  if (funcs.domain != basis.domain)
    throw DimensionMismatch("features and functionals live on different domains");
  MatrixXd A(funcs.size(), basis.count());
  detail::parallel_for(funcs.size(), [&](std::ptrdiff_t i) {
    const Functional& f = funcs.entries[i];
    A.row(i) = eval_feature_op(basis, f.op, f.x).transpose();
  });
  return A;
}

FeatureFactor qr_ridge_factor(MatrixXd A, double mu) {
  if (!(mu > 0.0)) throw ConfigError("mu", "ridge must be positive");
  FeatureFactor f;
  f.mu_ = mu;
  const Index n = A.rows(), p = A.cols();
  f.tall_ = n >= p;
  if (f.tall_) {
    auto t0 = std::chrono::steady_clock::now();
    Eigen::HouseholderQR<MatrixXd> qr(A);
    f.Q1_ = qr.householderQ() * MatrixXd::Identity(n, p);
    f.R1_ = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
    f.qr_seconds = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    MatrixXd S = f.R1_ * f.R1_.transpose();
    S.diagonal().array() += mu;
    f.small_.compute(S);
    f.cholesky_seconds = seconds_since(t0);
  } else {
    auto t0 = std::chrono::steady_clock::now();
    MatrixXd S = A * A.transpose();
    S.diagonal().array() += mu;
    f.small_.compute(S);
    f.cholesky_seconds = seconds_since(t0);
  }
  if (f.small_.info() != Eigen::Success) throw NotPositiveDefinite(0);
  f.A_ = std::move(A);
  return f;
}

VectorXd FeatureFactor::apply(const VectorXd& v) const {
  check_length(size(), v.size(), "apply");
  return A_ * (A_.transpose() * v) + mu_ * v;
}

VectorXd FeatureFactor::solve(const VectorXd& v) const {
  check_length(size(), v.size(), "apply_qr_inverse");
  if (!tall_) return small_.solve(v);
  VectorXd q = Q1_.transpose() * v;
  return Q1_ * small_.solve(q) + (v - Q1_ * q) / mu_;
}

MatrixXd FeatureFactor::sandwich(const SparseRows& C) const {
  check_length(size(), C.cols(), "sandwich");
  MatrixXd CA = C * A_;
  MatrixXd S = CA * CA.transpose();
  S += mu_ * MatrixXd(C * SparseRows(C.transpose()));
  return 0.5 * (S + S.transpose());
}

MatrixXd FeatureFactor::inverse() const {
  const Index n = size();
  if (!tall_) return small_.solve(MatrixXd::Identity(n, n));
  MatrixXd out = Q1_ * small_.solve(Q1_.transpose());
  out -= (Q1_ * Q1_.transpose()) / mu_;
  out.diagonal().array() += 1.0 / mu_;
  return out;
}

// A^T (A A^T + mu I)^{-1} z equals the ridge solution argmin |R1 a - Q1^T z|^2 + mu |a|^2.
// Going through solve() would leave A^T (I - Q1 Q1^T) z / mu, which is zero only up to
// eps |A| |z| / mu.
VectorXd FeatureFactor::coefficients(const VectorXd& z) const {
  check_length(size(), z.size(), "coefficients");
  if (!tall_) return A_.transpose() * small_.solve(z);
  const Index p = R1_.cols();
  MatrixXd B(2 * p, p);
  B.topRows(p) = R1_;
  B.bottomRows(p) = std::sqrt(mu_) * MatrixXd::Identity(p, p);
  VectorXd rhs = VectorXd::Zero(2 * p);
  rhs.head(p) = Q1_.transpose() * z;
  return B.householderQr().solve(rhs);
}

VectorXd apply_qr_inverse(const FeatureFactor& f, const VectorXd& v) { return f.solve(v); }

}  // namespace mfg
