#include "sgwe/cutoff.hpp"

#include "sgwe/lp_decomp.hpp"

namespace sgwe {

double CutoffPair::eta(double x) { return bump_profile(x / 2.0); }

Field2 cutoff_window(const Grid2& grid, Frame frame, double t) {
  return Field2::sample(grid, frame, [t](double a, double b) {
    return CutoffPair::eta_scaled(a, t) * CutoffPair::eta_scaled(b, t);
  });
}

Field2 localize(const Field2& f, double t) {
  Field2 out = f;
  out.multiply_pointwise(cutoff_window(f.grid(), f.frame(), t));
  return out;
}

}  // namespace sgwe
