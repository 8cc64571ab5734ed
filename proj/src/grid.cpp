#include "sgwe/grid.hpp"

#include <cstring>
#include <numbers>
#include <string>

#include "sgwe/error.hpp"

namespace sgwe {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

const char* to_string(Frame f) {
  return f == Frame::null ? "null" : "cartesian";
}

Frame frame_from_string(const char* s) {
  if (std::strcmp(s, "null") == 0) return Frame::null;
  if (std::strcmp(s, "cartesian") == 0) return Frame::cartesian;
  throw ConfigError(std::string("unknown frame '") + s + "'");
}

Grid2::Grid2(double half_width, int points) : half_width_(half_width), n_(points) {
  if (!is_power_of_two(points) || points < 4)
    throw ConfigError("grid size must be a power of two >= 4, got " +
                      std::to_string(points));
  if (!(half_width > 0.0))
    throw ConfigError("grid half-width must be positive");
}

double Grid2::frequency(int k) const {
  return std::numbers::pi * mode(k) / half_width_;
}

void Grid2::require_cutoff_margin() const {
  if (half_width_ < kCutoffMargin)
    throw ConfigError("grid half-width " + std::to_string(half_width_) +
                      " is below the cutoff margin " +
                      std::to_string(kCutoffMargin));
}

}  // namespace sgwe
