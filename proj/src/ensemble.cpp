#include "sgwe/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "sgwe/spectral.hpp"

namespace sgwe {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(splitmix64(base) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  const int threads = std::clamp(workers, 1, std::max(count, 1));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first;
  std::mutex m;
  auto body = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(m);
        if (!first) first = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

Field2 random_smooth_field(const Grid2& grid, Frame frame, Arity arity, std::uint64_t seed,
                           double amplitude, double spread) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> width(0.8, 1.5);
  std::uniform_int_distribution<int> bumps(2, 4), mode(-2, 2);
  Field2 f(grid, frame, arity);
  for (int c = 0; c < f.components(); ++c) {
    const int count = bumps(rng);
    for (int b = 0; b < count; ++b) {
      const double a = amplitude * unit(rng), w = width(rng);
      const double x0 = spread * unit(rng), y0 = spread * unit(rng);
      const double kx = mode(rng) * 0.5, ky = mode(rng) * 0.5, ph = 3.0 * unit(rng);
      for (int i = 0; i < grid.size(); ++i)
        for (int j = 0; j < grid.size(); ++j) {
          const double x = grid.coord(i) - x0, y = grid.coord(j) - y0;
          f.at(c, i, j) += a * std::exp(-(x * x + y * y) / (2.0 * w * w)) *
                           std::cos(kx * x + ky * y + ph);
        }
    }
  }
  return f;
}

Field2 random_band_limited(const Grid2& grid, Frame frame, Arity arity, std::uint64_t seed,
                           int max_mode) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const int n = grid.size();
  Spectrum2 s(grid, frame, arity);
  for (int c = 0; c < s.components(); ++c)
    for (int m = -max_mode; m <= max_mode; ++m)
      for (int k = 0; k <= max_mode; ++k) {
        if (k == 0 && m < 0) continue;
        const double decay = 1.0 / std::pow(1.0 + std::abs(m) + k, 2.0);
        const cplx z(normal(rng) * decay, (k == 0 && m == 0) ? 0.0 : normal(rng) * decay);
        // Hermitian symmetry keeps the field real.
        s.plane(c)[grid.index((m + n) % n, k)] = z;
        s.plane(c)[grid.index((n - m) % n, (n - k) % n)] = std::conj(z);
      }
  Field2 f = idft2(s);
  for (int c = 0; c < f.components(); ++c)
    for (auto& v : f.plane(c)) v = v.real();
  return f;
}

}  // namespace sgwe
