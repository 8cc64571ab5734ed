#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sgwe/field.hpp"
#include "sgwe/geometry.hpp"

namespace sgwe {

/// One step of the splitmix64 generator.
std::uint64_t splitmix64(std::uint64_t x);

/// Independent stream seed for item `index` of a run with `base` seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// Runs fn(0..count-1) on up to `workers` threads. Items must not share
/// mutable state; results are whatever fn writes into caller-owned slots, so
/// ordering never depends on scheduling. The first exception is rethrown.
void parallel_for(int count, int workers, const std::function<void(int)>& fn);

/// Smooth, effectively band-limited field: a sum of a few Gaussian bumps of
/// width 0.8 to 1.5 near the origin, each modulated by a low mode (|k| <= 2).
Field2 random_smooth_field(const Grid2& grid, Frame frame, Arity arity, std::uint64_t seed,
                           double amplitude = 1.0, double spread = 3.0);

/// Field with random Fourier coefficients on modes |m|, |n| <= max_mode,
/// decaying like (1 + |m| + |n|)^-2.
Field2 random_band_limited(const Grid2& grid, Frame frame, Arity arity, std::uint64_t seed,
                           int max_mode);

}  // namespace sgwe
