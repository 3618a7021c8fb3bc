#pragma once

#include <array>
#include <complex>
#include <string>
#include <string_view>

namespace mfg {

// Torus1D: (x).  Torus2D: (x, y).  SpaceTime: (t, x) on [0,1]x[-2,2].
enum class Domain { Torus1D, Torus2D, SpaceTime };

using Point = std::array<double, 2>;

int dimension(Domain d);
std::string_view to_string(Domain d);

enum class Op { Id, Dx, Dy, Dt, Dxx, Laplacian, J5 };

std::string_view to_string(Op op);
Op parse_op(std::string_view name);

struct Monomial {
  double coef;
  std::array<int, 2> order;
};

// Constant-coefficient differential operator as a sum of partial derivatives
// along the coordinate axes of the domain.
struct Expansion {
  std::array<Monomial, 2> terms{};
  int size = 0;

  const Monomial* begin() const { return terms.data(); }
  const Monomial* end() const { return terms.data() + size; }
  int max_order() const;
};

// Throws UnsupportedOperator for J5 and for axes the domain lacks.
Expansion expand(Op op, Domain d);

// Fourier symbol: op applied to exp(i w.x) equals symbol * exp(i w.x).
// J5 = (1 - Laplacian)^-2 has symbol 1/(1+|w|^2)^2.
std::complex<double> symbol(Op op, Domain d, const std::array<double, 2>& w);

}  // namespace mfg
