#include "mvmam/rng.hpp"

#include <cmath>

namespace mvmam {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

// uniform in (0, 1]: top 53 bits, shifted away from zero
double to_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

Vec NoiseSource::gaussians(std::uint64_t substream, std::uint64_t step, int n) const {
  std::uint64_t key = master_;
  (void)splitmix64(key);
  key ^= 0xD1B54A32D192ED03ULL * (substream + 1);
  (void)splitmix64(key);
  key ^= 0x8CB92BA72F3D8DD7ULL * (step + 1);
  (void)splitmix64(key);

  constexpr double two_pi = 6.283185307179586476925286766559;
  Vec out(n);
  int i = 0;
  while (i < n) {
    const double u1 = to_unit(splitmix64(key));
    const double u2 = to_unit(splitmix64(key));
    const double radius = std::sqrt(-2.0 * std::log(u1));
    out(i++) = radius * std::cos(two_pi * u2);
    if (i < n) out(i++) = radius * std::sin(two_pi * u2);
  }
  return out;
}

}  // namespace mvmam
