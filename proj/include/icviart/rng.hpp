#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace icviart {

// splitmix64 finalizer; decorrelates seeds derived from a common base.
inline std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix_seed(base ^ (0x9e3779b97f4a7c15ull * (stream + 1)));
}

// mt19937_64 engine with hand-rolled draws. The standard pins the engine's
// sequence but not the distributions', so uniform/normal are done here to
// keep identical seeds reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // [0, 1)
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // [0, n)
  std::size_t below(std::size_t n) {
    return std::min(static_cast<std::size_t>(uniform01() * static_cast<double>(n)), n - 1);
  }

  // inclusive range
  long uniform_int(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::size_t>(hi - lo + 1))); }

  // Box-Muller, no state carried between calls
  double normal() {
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace icviart
