#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "mfg/errors.hpp"
#include "mfg/kernels.hpp"

using namespace mfg;
using std::numbers::pi;

namespace {

const Op kClosed[] = {Op::Id, Op::Dx, Op::Dy, Op::Dt, Op::Dxx, Op::Laplacian};

bool supported(const KernelSpec& k, Op op) {
  switch (k.family) {
    case KernelFamily::Periodic1D: return op == Op::Id || op == Op::Dx || op == Op::Dxx;
    case KernelFamily::Periodic2D: return op != Op::Dt && op != Op::J5;
    case KernelFamily::AnisotropicSE: return op != Op::Dy && op != Op::J5 && op != Op::Laplacian;
  }
  return false;
}

Point random_point(const KernelSpec& k, std::mt19937_64& g) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  if (k.family == KernelFamily::AnisotropicSE) return {U(g), -2 + 4 * U(g)};
  if (k.family == KernelFamily::Periodic1D) return {U(g), 0.0};
  return {U(g), U(g)};
}

}  // namespace

TEST_CASE("closed form values") {
  auto k1 = KernelSpec::periodic_1d(0.6);
  CHECK(eval(k1, {0.3, 0}, {0.3, 0}) == 1.0);
  CHECK(eval(k1, {0.7, 0}, {0.2, 0}) == doctest::Approx(3.8686e-3).epsilon(1e-4));
  auto ks = KernelSpec::anisotropic_se(1 / std::sqrt(5.0), 1 / std::sqrt(2.0));
  CHECK(eval(ks, {0.4, 1.0}, {0.4, 0.0}) == doctest::Approx(std::exp(-5.0)));
  CHECK(eval(ks, {0.4, 1.0}, {0.4, 0.0}) == doctest::Approx(6.7379e-3).epsilon(1e-4));

  double a[2] = {0.1, 0.2}, b[1] = {0.3};
  CHECK_THROWS_AS(eval(KernelSpec::periodic_2d(0.5), a, b), DimensionMismatch);
  CHECK_THROWS_AS(KernelSpec::periodic_1d(0.0).validate(), ConfigError);
}

TEST_CASE("operator values at zero lag") {
  auto k = KernelSpec::periodic_1d(0.6);
  CHECK(eval_with_ops(k, Op::Dx, Op::Id, {0.4, 0}, {0.4, 0}) == doctest::Approx(0.0));
  CHECK(eval_with_ops(k, Op::Dx, Op::Dx, {0.4, 0}, {0.4, 0}) ==
        doctest::Approx(4 * pi * pi / 0.36));
  CHECK(eval_with_ops(k, Op::Dx, Op::Dx, {0.4, 0}, {0.4, 0}) == doctest::Approx(109.66).epsilon(1e-4));
  CHECK_THROWS_AS(eval_with_ops(KernelSpec::periodic_2d(0.5), Op::J5, Op::Id, {0, 0}, {0, 0}),
                  UnsupportedOperatorPair);
}

TEST_CASE("finite difference checks") {
  auto k1 = KernelSpec::periodic_1d(0.6);
  CHECK(finite_diff_check(k1, Op::Id, Op::Id, {0.2, 0}, {0.7, 0}, 1e-5) == 0.0);
  CHECK(finite_diff_check(k1, Op::Dx, Op::Id, {0.21, 0}, {0.64, 0}, 1e-5) < 1e-6);
  CHECK(finite_diff_check(k1, Op::Dxx, Op::Dxx, {0.3, 0}, {0.3, 0}, 1e-4) < 1e-5);
  auto k2 = KernelSpec::periodic_2d(0.2);
  CHECK(finite_diff_check(k2, Op::Laplacian, Op::Laplacian, {0.1, 0.2}, {0.13, 0.18}, 1e-4) < 1e-4);
}

TEST_CASE("symmetry of operator pairs") {
  std::mt19937_64 g(5);
  for (auto k : {KernelSpec::periodic_1d(0.6), KernelSpec::periodic_2d(0.3),
                 KernelSpec::anisotropic_se(0.45, 0.7)}) {
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      Point x = random_point(k, g), y = random_point(k, g);
      for (Op L : kClosed)
        for (Op R : kClosed) {
          if (!supported(k, L) || !supported(k, R)) continue;
          double a = eval_with_ops(k, L, R, x, y), b = eval_with_ops(k, R, L, y, x);
          worst = std::max(worst, std::abs(a - b) / (1 + std::abs(a)));
        }
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("nonlocal evaluation") {
  CHECK_THROWS_AS(eval_nonlocal(KernelSpec::periodic_2d(0.3), true, false, {0, 0}, {0, 0}, 15),
                  BadGrid);
  CHECK_THROWS_AS(eval_nonlocal(KernelSpec::periodic_2d(0.3), true, false, {0, 0}, {0, 0}, 8),
                  BadGrid);

  auto one = SpectralTable::from_profile([](double, double) { return 1.0; }, 16);
  CHECK(eval_nonlocal(one, true, false, {0.3, 0.1}, {0.7, 0.4}) == doctest::Approx(1.0));

  auto c = SpectralTable::from_profile([](double a, double) { return std::cos(2 * pi * a); }, 16);
  const double mult = 1.0 / std::pow(1 + 4 * pi * pi, 2);
  Point x{0.31, 0.2}, y{0.05, 0.9};
  CHECK(eval_nonlocal(c, true, false, x, y) ==
        doctest::Approx(std::cos(2 * pi * (x[0] - y[0])) * mult).epsilon(1e-12));

  // direct DFT of the sampled profile, multiplier applied on both sides
  auto k = KernelSpec::periodic_2d(0.2);
  const int n = 64;
  double direct = 0.0;
  for (int a1 = -n / 2 + 1; a1 < n / 2; ++a1)
    for (int a2 = -n / 2 + 1; a2 < n / 2; ++a2) {
      std::complex<double> s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          s += eval(k, {double(i) / n, double(j) / n}, {0.0, 0.0}) *
               std::polar(1.0, -2 * pi * (a1 * i + a2 * j) / n);
      double c_a = s.real() / (n * n);
      direct += c_a / std::pow(1 + 4 * pi * pi * (a1 * a1 + a2 * a2), 4);
    }
  double v = eval_nonlocal(k, true, true, {0.4, 0.4}, {0.4, 0.4}, n);
  CHECK(std::abs(v - direct) < 1e-8);

  double v2 = eval_nonlocal(k, true, false, {0.1, 0.7}, {0.6, 0.2}, 128);
  double v1 = eval_nonlocal(k, true, false, {0.1, 0.7}, {0.6, 0.2}, 64);
  CHECK(std::abs(v2 - v1) < 1e-8);
}

TEST_CASE("spectral block agrees with closed forms") {
  auto k = KernelSpec::periodic_2d(0.6);
  auto t = spectral_table(k, 64);
  std::vector<Point> xs{{0.1, 0.2}, {0.5, 0.9}, {0.33, 0.71}}, ys{{0.0, 0.0}, {0.8, 0.45}};
  for (Op L : {Op::Id, Op::Dx, Op::Laplacian})
    for (Op R : {Op::Id, Op::Dy, Op::Laplacian}) {
      Eigen::MatrixXd B = spectral_block(*t, Domain::Torus2D, L, R, xs, ys);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) {
          double ref = eval_with_ops(k, L, R, xs[i], ys[j]);
          double scale = std::sqrt(eval_with_ops(k, L, L, xs[i], xs[i]) *
                                   eval_with_ops(k, R, R, ys[j], ys[j]));
          CHECK(std::abs(B(i, j) - ref) < 1e-9 * scale);
        }
      Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(2, 0.3, -1.2);
      CHECK((spectral_apply(*t, Domain::Torus2D, L, R, xs, ys, c) - B * c).norm() <
            1e-10 * (1 + (B * c).norm()));
    }
}
