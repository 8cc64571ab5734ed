#pragma once

#include <vector>

#include "sgwe/field.hpp"

namespace sgwe {

/// Smooth radial step: 1 on [-1,1], 0 outside [-2,2], C-infinity in between.
double bump_profile(double x);

/// Dyadic partition of unity phi_0 = psi, phi_j(x) = psi(x/2^j) - psi(x/2^(j-1)),
/// evaluated once on the discrete frequency axis of a grid.
///
/// The family stops at max_index(), the last shell whose support meets the
/// frequency axis; on that axis sum_j phi_j == 1 exactly.
class DyadicPartition {
 public:
  explicit DyadicPartition(const Grid2& grid);

  static double phi(int j, double x);

  const Grid2& grid() const { return grid_; }
  int max_index() const { return j_max_; }
  /// phi_j at the frequency of FFT index k; zero for j outside [0, max_index()].
  double value(int j, int k) const;

 private:
  Grid2 grid_;
  int j_max_;
  std::vector<std::vector<double>> table_;  // [j][k]
};

/// Numerical evidence for the three partition axioms on one grid.
struct PartitionAxioms {
  double max_sum_error = 0.0;          // max |sum_j phi_j - 1| over the axis
  double max_outside_support = 0.0;    // max |phi_j| outside its annulus
  std::vector<double> derivative_sup;  // sup |2^j phi_j'| per j (finite differences)
};

PartitionAxioms check_partition_axioms(const DyadicPartition& p);

enum class NormFamily { product_ab, product_ba, mixed, hyperbolic, besov_s22 };

const char* to_string(NormFamily f);

struct NormSpec {
  double s = 0.8;
  double delta = 0.8;
  NormFamily family = NormFamily::mixed;
};

/// Delta_{j,k} f; the zero field when j or k is negative.
Field2 lp_block(const Field2& f, int j, int k, const DyadicPartition& p);

/// H^s H^delta with weights <tau>^2s <xi>^2delta, or with the axes' roles
/// swapped when swapped == true (H^s in the second variable).
double product_norm(const Spectrum2& s, double s_exp, double delta, bool swapped = false);
double product_norm(const Field2& f, double s_exp, double delta, bool swapped = false);

/// sqrt(||f||^2_{H^s H^delta} + ||f||^2_{H^delta H^s}).
double mixed_norm(const Spectrum2& s, double s_exp, double delta);
double mixed_norm(const Field2& f, double s_exp, double delta);

/// Wave-adapted norm with weights <|tau|+|xi|>^2s <|tau|-|xi|>^2delta.
double hyperbolic_norm(const Spectrum2& s, double s_exp, double delta);
double hyperbolic_norm(const Field2& f, double s_exp, double delta);

/// (sum_{j,k} 2^{2(s1 j + s2 k)} ||Delta_{j,k} f||^2_{L^2})^{1/2}.
double besov_norm(const Spectrum2& s, double s1, double s2, const DyadicPartition& p);
double besov_norm(const Field2& f, double s1, double s2, const DyadicPartition& p);

/// Squared L^2 norms of every block, indexed [j][k].
std::vector<std::vector<double>> block_energies(const Spectrum2& s, const DyadicPartition& p);

/// Dispatches on spec.family; the Besov family needs a partition.
double norm(const Field2& f, const NormSpec& spec, const DyadicPartition* p = nullptr);

}  // namespace sgwe
