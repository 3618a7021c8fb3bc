#include "mfg/operators.hpp"

#include <algorithm>

#include "mfg/errors.hpp"

namespace mfg {

int dimension(Domain d) { return d == Domain::Torus1D ? 1 : 2; }

std::string_view to_string(Domain d) {
  switch (d) {
    case Domain::Torus1D: return "torus1d";
    case Domain::Torus2D: return "torus2d";
    case Domain::SpaceTime: return "spacetime";
  }
  return "?";
}

std::string_view to_string(Op op) {
  switch (op) {
    case Op::Id: return "Id";
    case Op::Dx: return "Dx";
    case Op::Dy: return "Dy";
    case Op::Dt: return "Dt";
    case Op::Dxx: return "Dxx";
    case Op::Laplacian: return "Laplacian";
    case Op::J5: return "J5";
  }
  return "?";
}

Op parse_op(std::string_view name) {
  for (Op op : {Op::Id, Op::Dx, Op::Dy, Op::Dt, Op::Dxx, Op::Laplacian, Op::J5})
    if (to_string(op) == name) return op;
  throw UnsupportedOperator("unknown operator '" + std::string(name) + "'");
}

int Expansion::max_order() const {
  int m = 0;
  for (const Monomial& t : *this) m = std::max(m, t.order[0] + t.order[1]);
  return m;
}

namespace {

Expansion single(int a, int b) {
  Expansion e;
  e.terms[0] = {1.0, {a, b}};
  e.size = 1;
  return e;
}

[[noreturn]] void unsupported(Op op, Domain d) {
  throw UnsupportedOperator(std::string(to_string(op)) + " is not defined on " +
                            std::string(to_string(d)));
}

}  // namespace

Expansion expand(Op op, Domain d) {
  if (op == Op::J5) unsupported(op, d);
  if (op == Op::Id) return single(0, 0);
  switch (d) {
    case Domain::Torus1D:
      if (op == Op::Dx) return single(1, 0);
      if (op == Op::Dxx || op == Op::Laplacian) return single(2, 0);
      break;
    case Domain::Torus2D:
      if (op == Op::Dx) return single(1, 0);
      if (op == Op::Dy) return single(0, 1);
      if (op == Op::Dxx) return single(2, 0);
      if (op == Op::Laplacian) {
        Expansion e;
        e.terms[0] = {1.0, {2, 0}};
        e.terms[1] = {1.0, {0, 2}};
        e.size = 2;
        return e;
      }
      break;
    case Domain::SpaceTime:
      // spatial operators act on the second coordinate
      if (op == Op::Dt) return single(1, 0);
      if (op == Op::Dx) return single(0, 1);
      if (op == Op::Dxx || op == Op::Laplacian) return single(0, 2);
      break;
  }
  unsupported(op, d);
}

std::complex<double> symbol(Op op, Domain d, const std::array<double, 2>& w) {
  if (op == Op::J5) {
    double k2 = w[0] * w[0] + (dimension(d) > 1 ? w[1] * w[1] : 0.0);
    return 1.0 / ((1.0 + k2) * (1.0 + k2));
  }
  const std::complex<double> I(0.0, 1.0);
  std::complex<double> s = 0.0;
  for (const Monomial& t : expand(op, d)) {
    std::complex<double> p = t.coef;
    for (int a = 0; a < 2; ++a)
      for (int k = 0; k < t.order[a]; ++k) p *= I * w[a];
    s += p;
  }
  return s;
}

}  // namespace mfg
