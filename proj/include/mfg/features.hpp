#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "mfg/operators.hpp"
#include "mfg/rng.hpp"

namespace mfg {

enum class BasisKind { PeriodicSeries1D, PeriodicTensor2D, RandomFourier };
enum class Phase { Const, Sin, Cos };

// Paper: sin/cos of 2 pi (i x1 + j x2) for i, j = 1..N.
// Full: every mode of the half plane with |i|, |j| <= N.
enum class IndexSet { Paper, Full };

std::string_view to_string(IndexSet s);
IndexSet parse_index_set(std::string_view s);

// scale * trig(omega . x), omega an angular frequency.
struct Feature {
  std::array<double, 2> omega{};
  Phase phase = Phase::Const;
  double scale = 1.0;
};

struct FeatureBasis {
  BasisKind kind = BasisKind::PeriodicSeries1D;
  Domain domain = Domain::Torus1D;
  std::vector<Feature> features;

  Eigen::Index count() const { return static_cast<Eigen::Index>(features.size()); }
  double max_scale() const;
};

FeatureBasis build_periodic_1d(int N);
FeatureBasis build_periodic_2d(int N, IndexSet set = IndexSet::Paper);

// Angular: features trig(w.x).  Cycles: trig(2 pi w.x), the same W read in
// cycles per unit length.
enum class FrequencyUnits { Angular, Cycles };

std::string_view to_string(FrequencyUnits u);
FrequencyUnits parse_frequency_units(std::string_view s);

struct RandomFeatureSampler {
  int dimension = 2;
  double varsigma = 1.0;
  std::uint64_t seed = 0;
  FrequencyUnits units = FrequencyUnits::Angular;
};

// Haar-distributed orthogonal matrix: QR of a Gaussian matrix, sign-fixed.
Eigen::MatrixXd haar_orthogonal(int d, CounterRng& rng);

// Rows of W = S Q / varsigma, stacking independent blocks when n_pairs > d.
Eigen::MatrixXd sample_frequencies(const RandomFeatureSampler& s, int n_pairs);

// Ordered [sin(w_1.x) .. sin(w_P.x), cos(w_1.x) .. cos(w_P.x)] * sqrt(2/N), N = 2P.
FeatureBasis sample_orthogonal_features(const RandomFeatureSampler& s, int n_pairs,
                                        Domain domain = Domain::SpaceTime);

Eigen::VectorXd eval_feature_op(const FeatureBasis& basis, Op op, const Point& x);

}  // namespace mfg
