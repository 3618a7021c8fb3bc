#pragma once

#include <cstdint>

namespace mfg {

// Counter-based generator: the n-th draw of a stream is a hash of (key, n), so
// streams are reproducible bit-for-bit on every platform and cheap to split.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  CounterRng split(std::uint64_t stream) const;

  std::uint64_t next_u64();
  // uniform on the open interval (0,1)
  double uniform();
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double normal();
  // chi distribution with k degrees of freedom
  double chi(int k);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace mfg
