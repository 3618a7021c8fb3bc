#include "mfg/problems.hpp"

#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "mfg/errors.hpp"

namespace mfg {

using std::numbers::pi;

double TrigSum::value(double x) const {
  double s = 0.0;
  for (const TrigTerm& t : terms) {
    double a = pi * t.freq * x;
    s += t.amp * (t.cosine ? std::cos(a) : std::sin(a));
  }
  return s;
}

double TrigSum::derivative(double x) const {
  double s = 0.0;
  for (const TrigTerm& t : terms) {
    double w = pi * t.freq, a = w * x;
    s += t.amp * w * (t.cosine ? -std::sin(a) : std::cos(a));
  }
  return s;
}

double TrigSum::second_derivative(double x) const {
  double s = 0.0;
  for (const TrigTerm& t : terms) {
    double w = pi * t.freq, a = w * x;
    s -= t.amp * w * w * (t.cosine ? std::cos(a) : std::sin(a));
  }
  return s;
}

bool TrigSum::is_zero() const {
  for (const TrigTerm& t : terms)
    if (t.amp != 0.0 && (t.cosine || t.freq != 0.0)) return false;
  return true;
}

std::string_view to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::Stationary1D: return "mfg1d";
    case ProblemKind::Nonlocal2D: return "nonlocal2d";
    case ProblemKind::Planning: return "planning";
  }
  return "?";
}

double GaussianDensity::operator()(double x) const {
  double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * pi));
}

ProblemSpec make_1d_stationary(TrigSum V, TrigSum b) {
  ProblemSpec s;
  s.kind = ProblemKind::Stationary1D;
  s.domain = Domain::Torus1D;
  s.u_interior_ops = {Op::Id, Op::Dx, Op::Dxx};
  s.m_interior_ops = {Op::Id, Op::Dx};
  s.has_ergodic_constant = true;
  s.normalize_u = s.normalize_m = true;
  s.V = std::move(V);
  s.b = std::move(b);
  return s;
}

ProblemSpec make_nonlocal_2d(double nu) {
  ProblemSpec s;
  s.kind = ProblemKind::Nonlocal2D;
  s.domain = Domain::Torus2D;
  s.u_interior_ops = {Op::Id, Op::Dx, Op::Dy, Op::Laplacian};
  s.m_interior_ops = {Op::Id, Op::Dx, Op::Dy, Op::Laplacian, Op::J5};
  s.has_ergodic_constant = true;
  s.normalize_u = s.normalize_m = true;
  s.viscosity = nu;
  return s;
}

ProblemSpec make_planning(double interaction) {
  ProblemSpec s;
  s.kind = ProblemKind::Planning;
  s.domain = Domain::SpaceTime;
  s.u_interior_ops = {Op::Id, Op::Dt, Op::Dx, Op::Dxx};
  s.m_interior_ops = {Op::Id, Op::Dt, Op::Dx};
  s.m_boundary_ops = {Op::Id};
  s.interaction = interaction;
  return s;
}

namespace {

double potential_2d(const Point& x) {
  return std::sin(2 * pi * x[0]) + std::sin(2 * pi * x[1]) + std::cos(4 * pi * x[0]);
}

void check_arity(const std::vector<Op>& ops, std::span<const double> v, const char* what) {
  if (v.size() != ops.size())
    throw ArityMismatch(std::string(what) + ": expected " + std::to_string(ops.size()) +
                        " values, got " + std::to_string(v.size()));
}

}  // namespace

double hamiltonian(const ProblemSpec& spec, const Point& x, std::span<const double> p) {
  size_t want = spec.kind == ProblemKind::Nonlocal2D ? 2 : 1;
  if (p.size() != want) throw DimensionMismatch("gradient has wrong dimension");
  switch (spec.kind) {
    case ProblemKind::Stationary1D:
      return spec.V.value(x[0]) + 0.5 * p[0] * p[0] + spec.b.value(x[0]) * p[0];
    case ProblemKind::Nonlocal2D:
      return potential_2d(x) + p[0] * p[0] + p[1] * p[1];
    case ProblemKind::Planning:
      return 0.5 * p[0] * p[0];
  }
  return 0.0;
}

ResidualJet interior_jet(const ProblemSpec& spec, const Point& x,
                         std::span<const double> u, std::span<const double> m,
                         double lambda) {
  check_arity(spec.u_interior_ops, u, "u");
  check_arity(spec.m_interior_ops, m, "m");
  ResidualJet j;
  j.count = 2;
  switch (spec.kind) {
    case ProblemKind::Stationary1D: {
      double b = spec.b.value(x[0]), bx = spec.b.derivative(x[0]);
      double E = std::exp(hamiltonian(spec, x, u.subspan(1, 1)) - lambda);
      j.value[0] = E - m[0];
      j.du[0][1] = E * (u[1] + b);
      j.dm[0][0] = -1.0;
      j.dlambda[0] = -E;
      j.value[1] = m[1] * (u[1] + b) + m[0] * (u[2] + bx);
      j.du[1][1] = m[1];
      j.du[1][2] = m[0];
      j.dm[1][0] = u[2] + bx;
      j.dm[1][1] = u[1] + b;
      break;
    }
    case ProblemKind::Nonlocal2D: {
      double nu = spec.viscosity;
      j.value[0] = -nu * u[3] + potential_2d(x) + u[1] * u[1] + u[2] * u[2] - m[4] - lambda;
      j.du[0] = {0.0, 2 * u[1], 2 * u[2], -nu, 0.0};
      j.dm[0][4] = -1.0;
      j.dlambda[0] = -1.0;
      j.value[1] = -nu * m[3] - 2 * (m[1] * u[1] + m[2] * u[2] + m[0] * u[3]);
      j.du[1] = {0.0, -2 * m[1], -2 * m[2], -2 * m[0], 0.0};
      j.dm[1] = {-2 * u[3], -2 * u[1], -2 * u[2], -nu, 0.0};
      break;
    }
    case ProblemKind::Planning: {
      double k = spec.interaction;
      j.value[0] = -u[1] + 0.5 * u[2] * u[2] - k * m[0];
      j.du[0] = {0.0, -1.0, u[2], 0.0, 0.0};
      j.dm[0][0] = -k;
      j.value[1] = m[1] - m[2] * u[2] - m[0] * u[3];
      j.du[1] = {0.0, 0.0, -m[2], -m[0], 0.0};
      j.dm[1] = {-u[3], 1.0, -u[2], 0.0, 0.0};
      break;
    }
  }
  return j;
}

ResidualJet boundary_jet(const ProblemSpec& spec, const Point& x,
                         std::span<const double> u, std::span<const double> m) {
  ResidualJet j;
  if (spec.kind != ProblemKind::Planning) return j;
  check_arity(spec.u_boundary_ops, u, "u");
  check_arity(spec.m_boundary_ops, m, "m");
  const double tol = 1e-12;
  const GaussianDensity* rho;
  if (std::abs(x[0]) <= tol)
    rho = &spec.initial;
  else if (std::abs(x[0] - 1.0) <= tol)
    rho = &spec.terminal;
  else
    throw NotOnBoundary("t = " + std::to_string(x[0]) + " is neither 0 nor 1");
  j.count = 1;
  j.value[0] = m[0] - (*rho)(x[1]);
  j.dm[0][0] = 1.0;
  return j;
}

std::vector<double> interior_residual(const ProblemSpec& spec, const Point& x,
                                      std::span<const double> u,
                                      std::span<const double> m, double lambda) {
  ResidualJet j = interior_jet(spec, x, u, m, lambda);
  return {j.value.begin(), j.value.begin() + j.count};
}

std::vector<double> boundary_residual(const ProblemSpec& spec, const Point& x,
                                      std::span<const double> u,
                                      std::span<const double> m) {
  ResidualJet j = boundary_jet(spec, x, u, m);
  return {j.value.begin(), j.value.begin() + j.count};
}

ExplicitSolution explicit_solution_1d(const TrigSum& V, const TrigSum& b, int quad_nodes) {
  if (quad_nodes < 2) throw BadCount("quad_nodes must be at least 2");
  const int n = quad_nodes;
  std::vector<double> bs(n), gs(n);
  for (int j = 0; j < n; ++j) {
    double x = static_cast<double>(j) / n;
    bs[j] = b.value(x);
    double bb = bs[j];
    gs[j] = std::exp(V.value(x) - 0.5 * bb * bb);
  }
  auto bh = detail::rfft(bs);
  double mean = bh[0].real() / n;
  if (std::abs(mean) > 1e-8) throw NonZeroMeanDrift(mean);

  ExplicitSolution s;
  s.V_ = V;
  s.b_ = b;
  double cutoff = 0.0;
  for (int k = 1; k < (n + 1) / 2; ++k) cutoff = std::max(cutoff, std::abs(bh[k]));
  cutoff *= 1e-16;
  for (int k = 1; k < (n + 1) / 2; ++k) {
    if (std::abs(bh[k]) <= cutoff) continue;
    // u_k = -b_k / (2 pi i k)
    std::complex<double> c = -(bh[k] / static_cast<double>(n)) /
                             std::complex<double>(0.0, 2 * pi * k);
    s.modes_.push_back(k);
    s.re_.push_back(c.real());
    s.im_.push_back(c.imag());
  }
  double Z = 0.0;
  for (double g : gs) Z += g;
  s.Z_ = Z / n;
  s.hbar_ = std::log(s.Z_);
  return s;
}

double ExplicitSolution::u(double x) const {
  double s = 0.0;
  for (size_t i = 0; i < modes_.size(); ++i) {
    double a = 2 * pi * modes_[i] * x;
    s += 2 * (re_[i] * std::cos(a) - im_[i] * std::sin(a));
  }
  return s;
}

double ExplicitSolution::u_x(double x) const { return -b_.value(x); }
double ExplicitSolution::u_xx(double x) const { return -b_.derivative(x); }

double ExplicitSolution::m(double x) const {
  double b = b_.value(x);
  return std::exp(V_.value(x) - 0.5 * b * b) / Z_;
}

double ExplicitSolution::m_x(double x) const {
  double b = b_.value(x);
  return m(x) * (V_.derivative(x) - b * b_.derivative(x));
}

}  // namespace mfg
