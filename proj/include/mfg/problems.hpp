#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "mfg/operators.hpp"

namespace mfg {

// a*sin(pi*f*x) or a*cos(pi*f*x); f is in units of pi so sin(pi x) is {1, 1}.
struct TrigTerm {
  double amp = 1.0;
  double freq = 0.0;
  bool cosine = false;
};

struct TrigSum {
  std::vector<TrigTerm> terms;

  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  bool is_zero() const;

  static TrigSum sin(double freq, double amp = 1.0) { return {{{amp, freq, false}}}; }
  static TrigSum cos(double freq, double amp = 1.0) { return {{{amp, freq, true}}}; }
  static TrigSum zero() { return {}; }
};

enum class ProblemKind { Stationary1D, Nonlocal2D, Planning };

std::string_view to_string(ProblemKind k);

struct GaussianDensity {
  double mean = 0.0;
  double sd = 1.0;
  double operator()(double x) const;
};

struct ProblemSpec {
  ProblemKind kind = ProblemKind::Stationary1D;
  Domain domain = Domain::Torus1D;

  std::vector<Op> u_boundary_ops, u_interior_ops;
  std::vector<Op> m_boundary_ops, m_interior_ops;

  bool has_ergodic_constant = false;
  bool normalize_u = false;
  bool normalize_m = false;

  double viscosity = 0.0;
  double interaction = 0.0;

  // 1D data
  TrigSum V, b;
  // planning end-point densities
  GaussianDensity initial{0.5, 0.1}, terminal{-0.5, 0.1};

  int interior_components() const { return 2; }
  int boundary_components() const { return m_boundary_ops.empty() && u_boundary_ops.empty() ? 0 : 1; }
};

ProblemSpec make_1d_stationary(TrigSum V, TrigSum b);
ProblemSpec make_nonlocal_2d(double nu);
ProblemSpec make_planning(double interaction = 0.01);

inline constexpr int kMaxOps = 5;

// Residual values together with their partials in every input value.
struct ResidualJet {
  int count = 0;
  std::array<double, 2> value{};
  std::array<std::array<double, kMaxOps>, 2> du{};
  std::array<std::array<double, kMaxOps>, 2> dm{};
  std::array<double, 2> dlambda{};
};

double hamiltonian(const ProblemSpec& spec, const Point& x, std::span<const double> p);

ResidualJet interior_jet(const ProblemSpec& spec, const Point& x,
                         std::span<const double> u, std::span<const double> m,
                         double lambda);
ResidualJet boundary_jet(const ProblemSpec& spec, const Point& x,
                         std::span<const double> u, std::span<const double> m);

std::vector<double> interior_residual(const ProblemSpec& spec, const Point& x,
                                      std::span<const double> u,
                                      std::span<const double> m, double lambda);
std::vector<double> boundary_residual(const ProblemSpec& spec, const Point& x,
                                      std::span<const double> u,
                                      std::span<const double> m);

class ExplicitSolution {
 public:
  double u(double x) const;
  double u_x(double x) const;
  double u_xx(double x) const;
  double m(double x) const;
  double m_x(double x) const;
  double hbar() const { return hbar_; }
  double normalizer() const { return Z_; }

 private:
  friend ExplicitSolution explicit_solution_1d(const TrigSum&, const TrigSum&, int);

  TrigSum V_, b_;
  // Fourier coefficients (k, c_k) of u for k >= 1: u = sum 2 Re(c_k e^{2 pi i k x})
  std::vector<int> modes_;
  std::vector<double> re_, im_;
  double Z_ = 1.0;
  double hbar_ = 0.0;
};

ExplicitSolution explicit_solution_1d(const TrigSum& V, const TrigSum& b,
                                      int quad_nodes = 4096);

}  // namespace mfg
