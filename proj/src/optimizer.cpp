#include "mfg/optimizer.hpp"

#include <cmath>
#include <iomanip>

#include "mfg/errors.hpp"
#include "mfg/rng.hpp"

namespace mfg {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string_view to_string(InitMode m) {
  return m == InitMode::ZerosUnitDensity ? "zeros" : "gaussian";
}

std::string_view to_string(InnerSolve s) { return s == InnerSolve::Dual ? "dual" : "primal"; }

void SolverConfig::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma", "must be >= 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("beta", "must be >= 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha", "must lie in (0, 1]");
  if (max_iters < 1) throw ConfigError("max_iters", "must be >= 1");
  if (!(init_scale >= 0.0)) throw ConfigError("init_scale", "must be >= 0");
  if (rel_tol && !(*rel_tol >= 0.0)) throw ConfigError("rel_tol", "must be >= 0");
}

bool SolverState::finite() const {
  return z.allFinite() && rho.allFinite() && std::isfinite(lambda);
}

SolverState init_state(const FunctionalSet& ufuncs, const FunctionalSet& mfuncs, bool has_lambda,
                       const SolverConfig& cfg) {
  SolverState s;
  s.has_lambda = has_lambda;
  s.z = VectorXd::Zero(ufuncs.size());
  s.rho = VectorXd::Zero(mfuncs.size());
  if (cfg.init_mode == InitMode::Gaussian) {
    CounterRng rng(cfg.seed);
    for (Index i = 0; i < s.z.size(); ++i) s.z(i) = cfg.init_scale * rng.normal();
    for (Index i = 0; i < s.rho.size(); ++i) s.rho(i) = cfg.init_scale * rng.normal();
    if (has_lambda) s.lambda = cfg.init_scale * rng.normal();
  }
  for (const auto& b : mfuncs.blocks)
    if (b.op == Op::Id) s.rho.segment(b.offset, b.count).array() += 1.0;
  return s;
}

void LossHistory::write_csv(std::ostream& os) const {
  os << "iteration,total,quadratic,pde_penalty,norm_penalty\n" << std::setprecision(17);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const LossTerms& e = entries[k];
    os << k << ',' << e.total << ',' << e.quadratic << ',' << e.pde_penalty << ','
       << e.norm_penalty << '\n';
  }
}

// ---- MFG residuals

MfgResiduals::MfgResiduals(ProblemSpec spec, const FunctionalSet& ufuncs,
                           const FunctionalSet& mfuncs, const CollocationSet& pts)
    : spec_(std::move(spec)), pts_(pts), nu_(ufuncs.size()), nm_(mfuncs.size()) {
  if (spec_.domain != pts.domain || ufuncs.domain != pts.domain || mfuncs.domain != pts.domain)
    throw DimensionMismatch("residual pieces live on different domains");
  auto offsets = [](const FunctionalSet& f, const std::vector<Op>& ops, bool bnd,
                    std::size_t npts) {
    std::vector<Index> o;
    for (Op op : ops) {
      const FunctionalBlock& b = f.block(op, bnd);
      if (static_cast<std::size_t>(b.count) != npts)
        throw LengthMismatch("functional block does not match the point count");
      o.push_back(b.offset);
    }
    return o;
  };
  u_int_ = offsets(ufuncs, spec_.u_interior_ops, false, pts.interior.size());
  m_int_ = offsets(mfuncs, spec_.m_interior_ops, false, pts.interior.size());
  u_bnd_ = offsets(ufuncs, spec_.u_boundary_ops, true, pts.boundary.size());
  m_bnd_ = offsets(mfuncs, spec_.m_boundary_ops, true, pts.boundary.size());
  if (ufuncs.has_block(Op::Id)) u_id_ = ufuncs.block(Op::Id).offset;
  if (mfuncs.has_block(Op::Id)) m_id_ = mfuncs.block(Op::Id).offset;
  if (spec_.normalize_u && u_id_ < 0) throw UnsupportedOperator("normalizing u needs an Id block");
  if (spec_.normalize_m && m_id_ < 0) throw UnsupportedOperator("normalizing m needs an Id block");
}

void MfgResiduals::gather(const SolverState& s, std::size_t i, bool boundary,
                          std::array<double, kMaxOps>& u, std::array<double, kMaxOps>& m) const {
  const auto& uo = boundary ? u_bnd_ : u_int_;
  const auto& mo = boundary ? m_bnd_ : m_int_;
  for (std::size_t k = 0; k < uo.size(); ++k) u[k] = s.z(uo[k] + i);
  for (std::size_t k = 0; k < mo.size(); ++k) m[k] = s.rho(mo[k] + i);
}

std::vector<double> MfgResiduals::interior_at(const SolverState& s, std::size_t i) const {
  std::array<double, kMaxOps> u{}, m{};
  gather(s, i, false, u, m);
  return interior_residual(spec_, pts_.interior[i], std::span(u.data(), u_int_.size()),
                           std::span(m.data(), m_int_.size()), s.lambda);
}

Linearization MfgResiduals::linearize(const SolverState& s, const SolverConfig& cfg,
                                      bool with_jacobian) const {
  if (s.z.size() != nu_ || s.rho.size() != nm_) throw LengthMismatch("state does not match functionals");
  const double sg = std::sqrt(cfg.gamma), sb = std::sqrt(cfg.beta);
  const std::size_t ni = pts_.interior.size(), nb = pts_.boundary.size();
  const int ci = spec_.interior_components(), cb = spec_.boundary_components();
  const Index pde = static_cast<Index>(ni * ci + nb * cb);
  const Index rows = pde + (spec_.normalize_u ? 1 : 0) + (spec_.normalize_m ? 1 : 0);

  Linearization lin;
  lin.r.resize(rows);
  lin.pde_rows = pde;
  std::vector<Eigen::Triplet<double>> tz, tr;
  if (with_jacobian && spec_.has_ergodic_constant) lin.Jlambda = VectorXd::Zero(rows);

  auto emit = [&](Index row0, const ResidualJet& jet, std::size_t i, bool bnd) {
    const auto& uo = bnd ? u_bnd_ : u_int_;
    const auto& mo = bnd ? m_bnd_ : m_int_;
    for (int c = 0; c < jet.count; ++c) {
      lin.r(row0 + c) = sg * jet.value[c];
      if (!with_jacobian) continue;
      for (std::size_t k = 0; k < uo.size(); ++k)
        if (jet.du[c][k] != 0.0) tz.emplace_back(row0 + c, uo[k] + i, sg * jet.du[c][k]);
      for (std::size_t k = 0; k < mo.size(); ++k)
        if (jet.dm[c][k] != 0.0) tr.emplace_back(row0 + c, mo[k] + i, sg * jet.dm[c][k]);
      if (lin.Jlambda.size()) lin.Jlambda(row0 + c) = sg * jet.dlambda[c];
    }
  };

  std::array<double, kMaxOps> u{}, m{};
  Index row = 0;
  for (std::size_t i = 0; i < ni; ++i, row += ci) {
    gather(s, i, false, u, m);
    ResidualJet jet = interior_jet(spec_, pts_.interior[i], std::span(u.data(), u_int_.size()),
                                   std::span(m.data(), m_int_.size()), s.lambda);
    emit(row, jet, i, false);
  }
  for (std::size_t i = 0; i < nb; ++i, row += cb) {
    gather(s, i, true, u, m);
    ResidualJet jet = boundary_jet(spec_, pts_.boundary[i], std::span(u.data(), u_bnd_.size()),
                                   std::span(m.data(), m_bnd_.size()));
    emit(row, jet, i, true);
  }
  const double inv = 1.0 / static_cast<double>(ni);
  if (spec_.normalize_u) {
    lin.r(row) = sb * s.z.segment(u_id_, ni).mean();
    if (with_jacobian)
      for (std::size_t i = 0; i < ni; ++i) tz.emplace_back(row, u_id_ + i, sb * inv);
    ++row;
  }
  if (spec_.normalize_m) {
    lin.r(row) = sb * (s.rho.segment(m_id_, ni).mean() - 1.0);
    if (with_jacobian)
      for (std::size_t i = 0; i < ni; ++i) tr.emplace_back(row, m_id_ + i, sb * inv);
    ++row;
  }
  if (with_jacobian) {
    lin.Jz.resize(rows, nu_);
    lin.Jz.setFromTriplets(tz.begin(), tz.end());
    lin.Jrho.resize(rows, nm_);
    lin.Jrho.setFromTriplets(tr.begin(), tr.end());
  }
  return lin;
}

// ---- objective and Gauss-Newton

LossTerms objective(const SolverState& s, const Covariance& Pu, const Covariance& Pm,
                    const ResidualMap& res, const SolverConfig& cfg) {
  LossTerms t;
  if (s.z.size()) t.quadratic += Pu.quadratic_form(s.z);
  if (s.rho.size()) t.quadratic += Pm.quadratic_form(s.rho);
  if (s.has_lambda) t.quadratic += s.lambda * s.lambda;
  Linearization lin = res.linearize(s, cfg, false);
  t.pde_penalty = lin.r.head(lin.pde_rows).squaredNorm();
  t.norm_penalty = lin.r.tail(lin.rows() - lin.pde_rows).squaredNorm();
  t.total = t.quadratic + t.pde_penalty + t.norm_penalty;
  return t;
}

namespace {

VectorXd jacobian_times(const Linearization& lin, const SolverState& s) {
  VectorXd out = VectorXd::Zero(lin.rows());
  if (s.z.size()) out += lin.Jz * s.z;
  if (s.rho.size()) out += lin.Jrho * s.rho;
  if (lin.Jlambda.size()) out += lin.Jlambda * s.lambda;
  return out;
}

// P^{-1} theta + J^T (J theta - d), relative to |J^T d|
double normal_residual(const SolverState& th, const Covariance& Pu, const Covariance& Pm,
                       const Linearization& lin, const VectorXd& d) {
  VectorXd e = jacobian_times(lin, th) - d;
  VectorXd gz = (th.z.size() ? Pu.solve(th.z) : VectorXd());
  VectorXd gr = (th.rho.size() ? Pm.solve(th.rho) : VectorXd());
  double num = 0.0, den = 0.0;
  if (th.z.size()) {
    num += (gz + lin.Jz.transpose() * e).squaredNorm();
    den += VectorXd(lin.Jz.transpose() * d).squaredNorm();
  }
  if (th.rho.size()) {
    num += (gr + lin.Jrho.transpose() * e).squaredNorm();
    den += VectorXd(lin.Jrho.transpose() * d).squaredNorm();
  }
  if (lin.Jlambda.size()) {
    double g = th.lambda + lin.Jlambda.dot(e);
    num += g * g;
    den += std::pow(lin.Jlambda.dot(d), 2);
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

}  // namespace

SolverState inner_solve(const SolverState& s, const Covariance& Pu, const Covariance& Pm,
                        const Linearization& lin, const SolverConfig& cfg,
                        double* normal_res) {
  const Index R = lin.rows();
  const Index nu = s.z.size(), nm = s.rho.size();
  if (Pu.size() != nu || Pm.size() != nm) throw LengthMismatch("covariance does not match state");
  VectorXd d = jacobian_times(lin, s) - lin.r;

  SolverState th = s;
  if (cfg.inner == InnerSolve::Dual) {
    MatrixXd S = MatrixXd::Identity(R, R);
    if (nu) S += Pu.sandwich(lin.Jz);
    if (nm) S += Pm.sandwich(lin.Jrho);
    if (lin.Jlambda.size()) S += lin.Jlambda * lin.Jlambda.transpose();
    Eigen::LLT<MatrixXd> llt(S);
    if (llt.info() != Eigen::Success) throw SingularNormalEquations("residual-space system is singular");
    VectorXd w = llt.solve(d);
    if (nu) th.z = Pu.apply(lin.Jz.transpose() * w);
    if (nm) th.rho = Pm.apply(lin.Jrho.transpose() * w);
    if (lin.Jlambda.size()) th.lambda = lin.Jlambda.dot(w);
  } else {
    const Index nl = lin.Jlambda.size() ? 1 : 0;
    const Index n = nu + nm + nl;
    MatrixXd J(R, n);
    if (nu) J.leftCols(nu) = MatrixXd(lin.Jz);
    if (nm) J.middleCols(nu, nm) = MatrixXd(lin.Jrho);
    if (nl) J.col(n - 1) = lin.Jlambda;
    MatrixXd H = J.transpose() * J;
    if (nu) H.topLeftCorner(nu, nu) += Pu.inverse();
    if (nm) H.block(nu, nu, nm, nm) += Pm.inverse();
    if (nl) H(n - 1, n - 1) += 1.0;
    Eigen::LDLT<MatrixXd> ldlt(H);
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().array() > 0.0).all())
      throw SingularNormalEquations("normal equations are not positive definite");
    VectorXd x = ldlt.solve(J.transpose() * d);
    th.z = x.head(nu);
    th.rho = x.segment(nu, nm);
    if (nl) th.lambda = x(n - 1);
  }
  if (normal_res) *normal_res = normal_residual(th, Pu, Pm, lin, d);
  return th;
}

std::pair<SolverState, LossHistory> gauss_newton_run(const Covariance& Pu, const Covariance& Pm,
                                                     const ResidualMap& res, SolverState s,
                                                     const SolverConfig& cfg) {
  cfg.validate();
  LossHistory hist;
  LossTerms l0 = objective(s, Pu, Pm, res, cfg);
  if (!std::isfinite(l0.total)) throw NonFiniteObjective(0);
  hist.entries.push_back(l0);
  for (int k = 1; k <= cfg.max_iters; ++k) {
    Linearization lin = res.linearize(s, cfg, true);
    double nr = 0.0;
    SolverState th = inner_solve(s, Pu, Pm, lin, cfg, cfg.check_normal_equations ? &nr : nullptr);
    if (cfg.check_normal_equations) {
      hist.normal_residuals.push_back(nr);
      if (!(nr <= cfg.normal_equations_tol))
        throw SingularNormalEquations("inner solve residual " + std::to_string(nr) +
                                      " at iteration " + std::to_string(k));
    }
    s.z += cfg.alpha * (th.z - s.z);
    s.rho += cfg.alpha * (th.rho - s.rho);
    s.lambda += cfg.alpha * (th.lambda - s.lambda);
    if (!s.finite()) throw NonFiniteObjective(k);
    LossTerms lk = objective(s, Pu, Pm, res, cfg);
    if (!std::isfinite(lk.total)) throw NonFiniteObjective(k);
    double prev = hist.entries.back().total;
    hist.entries.push_back(lk);
    if (cfg.rel_tol && std::abs(lk.total - prev) <= *cfg.rel_tol * std::abs(prev)) break;
  }
  return {std::move(s), std::move(hist)};
}

}  // namespace mfg
