#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "mfg/errors.hpp"
#include "mfg/features.hpp"

using namespace mfg;
using std::numbers::pi;

TEST_CASE("periodic 1d basis") {
  auto b1 = build_periodic_1d(1);
  CHECK(b1.count() == 3);
  CHECK(build_periodic_1d(10).count() == 21);

  auto b = build_periodic_1d(10);
  Eigen::VectorXd v = eval_feature_op(b, Op::Id, {0.0, 0.0});
  CHECK(v(0) == 1.0);
  for (int i = 1; i <= 10; ++i) {
    CHECK(v(i) == doctest::Approx(0.0));
    CHECK(v(10 + i) == doctest::Approx(1.0));
  }

  double x = 0.37;
  Eigen::VectorXd d = eval_feature_op(b1, Op::Dx, {x, 0.0});
  CHECK(d(0) == 0.0);
  CHECK(d(1) == doctest::Approx(2 * pi * std::cos(2 * pi * x)));
  CHECK(d(2) == doctest::Approx(-2 * pi * std::sin(2 * pi * x)));
}

TEST_CASE("periodic 2d basis") {
  CHECK(build_periodic_2d(1).count() == 3);
  CHECK(build_periodic_2d(2).count() == 9);
  CHECK(build_periodic_2d(10).count() == 201);

  auto b = build_periodic_2d(3);
  Eigen::VectorXd j = eval_feature_op(b, Op::J5, {0.2, 0.6});
  Eigen::VectorXd id = eval_feature_op(b, Op::Id, {0.2, 0.6});
  CHECK(j(0) == id(0));
  CHECK_THROWS_AS(eval_feature_op(build_periodic_1d(2), Op::J5, {0.1, 0}), UnsupportedOperator);

  // J5 and the Laplacian commute feature by feature
  for (const auto& f : b.features) {
    auto a = symbol(Op::J5, Domain::Torus2D, f.omega) * symbol(Op::Laplacian, Domain::Torus2D, f.omega);
    auto c = symbol(Op::Laplacian, Domain::Torus2D, f.omega) * symbol(Op::J5, Domain::Torus2D, f.omega);
    CHECK(a == c);
  }
}

TEST_CASE("periodic bases are orthogonal") {
  for (auto b : {build_periodic_1d(6), build_periodic_2d(3)}) {
    const bool two = b.domain == Domain::Torus2D;
    const int n = two ? 100 : 10000;
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(b.count(), b.count());
    int total = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < (two ? n : 1); ++j) {
        Eigen::VectorXd v = eval_feature_op(b, Op::Id, {double(i) / n, double(j) / n});
        G += v * v.transpose();
        ++total;
      }
    G /= total;
    Eigen::MatrixXd expect = 0.5 * Eigen::MatrixXd::Identity(b.count(), b.count());
    expect(0, 0) = 1.0;
    CHECK((G - expect).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("orthogonal random features") {
  RandomFeatureSampler s{2, 0.2, 42};
  Eigen::MatrixXd W1 = sample_frequencies(s, 100), W2 = sample_frequencies(s, 100);
  CHECK(W1 == W2);
  CHECK(W1.rows() == 100);
  CHECK(sample_orthogonal_features(s, 100).count() == 200);

  CounterRng rng(9);
  for (int d : {2, 5}) {
    Eigen::MatrixXd Q = haar_orthogonal(d, rng);
    CHECK((Q * Q.transpose() - Eigen::MatrixXd::Identity(d, d)).norm() < 1e-12);
  }

  // E|w|^2 = d / varsigma^2
  RandomFeatureSampler big{2, 0.2, 7};
  Eigen::MatrixXd W = sample_frequencies(big, 10000);
  double mean = W.rowwise().squaredNorm().mean();
  CHECK(std::abs(mean - 50.0) < 0.05 * 50.0);

  // paired sin/cos share each frequency, scaled by sqrt(2/N)
  auto b = sample_orthogonal_features(s, 10);
  for (int i = 0; i < 10; ++i) {
    CHECK(b.features[i].omega == b.features[10 + i].omega);
    CHECK(b.features[i].scale == doctest::Approx(std::sqrt(2.0 / 20)));
  }
}

TEST_CASE("feature operators against finite differences") {
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double h = 1e-5;
  auto check_basis = [&](const FeatureBasis& b, Op op, int axis, int order) {
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      Point x{U(g), U(g)};
      Point xp = x, xm = x;
      xp[axis] += h;
      xm[axis] -= h;
      Eigen::VectorXd f0 = eval_feature_op(b, Op::Id, x), fp = eval_feature_op(b, Op::Id, xp),
                      fm = eval_feature_op(b, Op::Id, xm);
      Eigen::VectorXd fd = order == 1 ? Eigen::VectorXd((fp - fm) / (2 * h))
                                      : Eigen::VectorXd((fp - 2 * f0 + fm) / (h * h));
      Eigen::VectorXd ex = eval_feature_op(b, op, x);
      worst = std::max(worst, (fd - ex).cwiseAbs().maxCoeff() / ex.cwiseAbs().maxCoeff());
    }
    return worst;
  };
  auto b1 = build_periodic_1d(5);
  CHECK(check_basis(b1, Op::Dx, 0, 1) < 1e-6);
  CHECK(check_basis(b1, Op::Dxx, 0, 2) < 1e-4);
  auto rf = sample_orthogonal_features({2, 0.5, 3}, 20, Domain::SpaceTime);
  CHECK(check_basis(rf, Op::Dt, 0, 1) < 1e-6);
  CHECK(check_basis(rf, Op::Dx, 1, 1) < 1e-6);
  CHECK(check_basis(rf, Op::Dxx, 1, 2) < 1e-4);

  // 2D Laplacian as the sum of two second differences
  auto b2 = build_periodic_2d(3);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Point x{U(g), U(g)};
    Eigen::VectorXd lap = -4 * eval_feature_op(b2, Op::Id, x);
    for (int a = 0; a < 2; ++a) {
      Point p = x, m = x;
      p[a] += 1e-4;
      m[a] -= 1e-4;
      lap += eval_feature_op(b2, Op::Id, p) + eval_feature_op(b2, Op::Id, m);
    }
    lap /= 1e-8;
    Eigen::VectorXd ex = eval_feature_op(b2, Op::Laplacian, x);
    worst = std::max(worst, (lap - ex).cwiseAbs().maxCoeff() / ex.cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("features are bounded by their scale") {
  auto rf = sample_orthogonal_features({2, 0.2, 1}, 50);
  std::mt19937_64 g(2);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd v = eval_feature_op(rf, Op::Id, {U(g), U(g)});
    CHECK(v.cwiseAbs().maxCoeff() <= rf.max_scale());
  }
}
