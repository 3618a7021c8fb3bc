#include "mfg/features.hpp"

#include <cmath>
#include <numbers>

#include "mfg/errors.hpp"

namespace mfg {

using std::numbers::pi;

std::string_view to_string(IndexSet s) { return s == IndexSet::Paper ? "paper" : "full"; }

IndexSet parse_index_set(std::string_view s) {
  if (s == "paper") return IndexSet::Paper;
  if (s == "full") return IndexSet::Full;
  throw UnsupportedOperator("unknown index set '" + std::string(s) + "'");
}

double FeatureBasis::max_scale() const {
  double m = 0.0;
  for (const Feature& f : features) m = std::max(m, std::abs(f.scale));
  return m;
}

FeatureBasis build_periodic_1d(int N) {
  if (N < 1) throw BadCount("N must be positive");
  FeatureBasis b;
  b.kind = BasisKind::PeriodicSeries1D;
  b.domain = Domain::Torus1D;
  b.features.push_back({{0, 0}, Phase::Const, 1.0});
  for (Phase p : {Phase::Sin, Phase::Cos})
    for (int k = 1; k <= N; ++k) b.features.push_back({{2 * pi * k, 0}, p, 1.0});
  return b;
}

FeatureBasis build_periodic_2d(int N, IndexSet set) {
  if (N < 1) throw BadCount("N must be positive");
  std::vector<std::array<int, 2>> modes;
  if (set == IndexSet::Paper) {
    for (int i = 1; i <= N; ++i)
      for (int j = 1; j <= N; ++j) modes.push_back({i, j});
  } else {
    for (int i = 0; i <= N; ++i)
      for (int j = -N; j <= N; ++j)
        if (i > 0 || j > 0) modes.push_back({i, j});
  }
  FeatureBasis b;
  b.kind = BasisKind::PeriodicTensor2D;
  b.domain = Domain::Torus2D;
  b.features.push_back({{0, 0}, Phase::Const, 1.0});
  for (Phase p : {Phase::Sin, Phase::Cos})
    for (auto [i, j] : modes) b.features.push_back({{2 * pi * i, 2 * pi * j}, p, 1.0});
  return b;
}

std::string_view to_string(FrequencyUnits u) {
  return u == FrequencyUnits::Angular ? "angular" : "cycles";
}

FrequencyUnits parse_frequency_units(std::string_view s) {
  if (s == "angular") return FrequencyUnits::Angular;
  if (s == "cycles") return FrequencyUnits::Cycles;
  throw ConfigError("frequency_units", "unknown value '" + std::string(s) + "'");
}

Eigen::MatrixXd haar_orthogonal(int d, CounterRng& rng) {
  Eigen::MatrixXd G(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) G(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd Q = qr.householderQ();
  Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j)
    if (R(j, j) < 0) Q.col(j) = -Q.col(j);
  return Q;
}

Eigen::MatrixXd sample_frequencies(const RandomFeatureSampler& s, int n_pairs) {
  if (s.dimension < 1 || n_pairs < 1) throw BadCount("dimension and n_pairs must be positive");
  const int d = s.dimension;
  CounterRng rng(s.seed);
  Eigen::MatrixXd W(n_pairs, d);
  int row = 0;
  for (std::uint64_t block = 0; row < n_pairs; ++block) {
    CounterRng br = rng.split(block);
    Eigen::MatrixXd Q = haar_orthogonal(d, br);
    for (int i = 0; i < d && row < n_pairs; ++i, ++row)
      W.row(row) = br.chi(d) * Q.row(i) / s.varsigma;
  }
  return W;
}

FeatureBasis sample_orthogonal_features(const RandomFeatureSampler& s, int n_pairs,
                                        Domain domain) {
  if (mfg::dimension(domain) != s.dimension)
    throw DimensionMismatch("sampler dimension does not match domain");
  Eigen::MatrixXd W = sample_frequencies(s, n_pairs);
  FeatureBasis b;
  b.kind = BasisKind::RandomFourier;
  b.domain = domain;
  if (s.units == FrequencyUnits::Cycles) W *= 2 * pi;
  const double scale = std::sqrt(2.0 / (2.0 * n_pairs));
  for (Phase p : {Phase::Sin, Phase::Cos})
    for (int i = 0; i < n_pairs; ++i) {
      std::array<double, 2> w{W(i, 0), s.dimension > 1 ? W(i, 1) : 0.0};
      b.features.push_back({w, p, scale});
    }
  return b;
}

Eigen::VectorXd eval_feature_op(const FeatureBasis& basis, Op op, const Point& x) {
  if (op == Op::J5 && basis.kind != BasisKind::PeriodicTensor2D)
    throw UnsupportedOperator("J5 requires a periodic 2D basis");
  Eigen::VectorXd v(basis.count());
  const bool two = dimension(basis.domain) > 1;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const Feature& f = basis.features[j];
    std::complex<double> s = symbol(op, basis.domain, f.omega);
    if (f.phase == Phase::Const) {
      v(j) = f.scale * s.real();
      continue;
    }
    double th = f.omega[0] * x[0] + (two ? f.omega[1] * x[1] : 0.0);
    std::complex<double> e = s * std::complex<double>(std::cos(th), std::sin(th));
    v(j) = f.scale * (f.phase == Phase::Sin ? e.imag() : e.real());
  }
  return v;
}

}  // namespace mfg
