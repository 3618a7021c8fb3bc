#include "mfg/rng.hpp"

#include <cmath>
#include <numbers>

namespace mfg {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

CounterRng CounterRng::split(std::uint64_t stream) const {
  return CounterRng(key_, stream + 1);
}

std::uint64_t CounterRng::next_u64() {
  return splitmix64(key_ + splitmix64(counter_++));
}

double CounterRng::uniform() {
  // 53 random bits, shifted by half an ulp so 0 is never returned
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform(), u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

double CounterRng::chi(int k) {
  double s = 0.0;
  for (int i = 0; i < k; ++i) {
    double g = normal();
    s += g * g;
  }
  return std::sqrt(s);
}

}  // namespace mfg
