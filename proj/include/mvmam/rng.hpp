#pragma once

#include <cstdint>

#include "mvmam/types.hpp"

namespace mvmam {

/// splitmix64 output step.
std::uint64_t splitmix64(std::uint64_t& state);

/// Counter-based Gaussian source: the draw for (substream, step) depends only
/// on those indices and the master seed, never on evaluation order, so
/// particle count or scheduling cannot change any particle's noise.
/// Gaussians come from paired uniforms through the Box-Muller transform
/// (fixed choice; bit-stable for a given build).
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t master_seed) : master_(master_seed) {}

  /// n independent N(0,1) draws for this (substream, step) pair.
  Vec gaussians(std::uint64_t substream, std::uint64_t step, int n) const;

 private:
  std::uint64_t master_;
};

}  // namespace mvmam
