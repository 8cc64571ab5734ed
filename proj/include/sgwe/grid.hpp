#pragma once

#include <cstddef>

namespace sgwe {

/// Coordinate frame a field is sampled in.
enum class Frame { null, cartesian };

/// Number of real components carried per grid point.
enum class Arity { scalar = 1, vector2 = 2 };

enum class Axis { first, second };

const char* to_string(Frame f);
Frame frame_from_string(const char* s);

/// Uniform periodic grid on the torus [-L, L)^2 with N points per axis.
///
/// Sample points are x_i = -L + i*dx, i = 0..N-1, and the discrete
/// frequency of FFT index k is pi*m/L with m = k for k < N/2 and m = k - N
/// otherwise. The grid is symmetric, so -x_i is again a sample point
/// (index mirror(i)); -x_0 = L is identified with x_0 by periodicity.
class Grid2 {
 public:
  /// Smallest half-width for which the [-4,4] cutoffs clear the periodic wrap.
  static constexpr double kCutoffMargin = 8.0;

  Grid2(double half_width, int points);

  double half_width() const { return half_width_; }
  int size() const { return n_; }
  std::size_t cells() const { return static_cast<std::size_t>(n_) * n_; }
  double spacing() const { return 2.0 * half_width_ / n_; }
  double coord(int i) const { return -half_width_ + i * spacing(); }
  int mode(int k) const { return k < n_ / 2 ? k : k - n_; }
  double frequency(int k) const;
  int mirror(int i) const { return (n_ - i) % n_; }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * n_ + j;
  }

  /// Throws ConfigError unless half_width >= kCutoffMargin.
  void require_cutoff_margin() const;

  bool operator==(const Grid2& o) const {
    return n_ == o.n_ && half_width_ == o.half_width_;
  }

 private:
  double half_width_;
  int n_;
};

bool is_power_of_two(int n);

}  // namespace sgwe
