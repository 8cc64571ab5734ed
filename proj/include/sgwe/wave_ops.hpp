#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "sgwe/fbs.hpp"
#include "sgwe/field.hpp"
#include "sgwe/geometry.hpp"
#include "sgwe/lp_decomp.hpp"

namespace sgwe {

/// Position and velocity data (R^2-valued) on the 1-D grid x_i = -L + i*dx
/// shared with the first null axis.
struct InitialData {
  double half_width = 16.0;
  std::array<std::vector<double>, 2> u0;
  std::array<std::vector<double>, 2> u1;
  double s = 0.8;  // regularity label: u0 in H^s, u1 in H^{s-1}

  int size() const { return static_cast<int>(u0[0].size()); }
  double coord(int i) const { return -half_width + i * 2.0 * half_width / size(); }

  static InitialData sample(double half_width, int n,
                            const std::function<std::array<double, 2>(double)>& u0,
                            const std::function<std::array<double, 2>(double)>& u1);
  static InitialData zeros(double half_width, int n);
};

/// Cumulative integral of samples on a uniform mesh, out[0] = 0.
///
/// Trapezoid sums with the two leading Euler-Maclaurin endpoint terms,
/// -dx^2/12 [g'] + dx^4/720 [g'''], using finite-difference derivatives
/// accurate enough that the total error is O(dx^6) on smooth data.
std::vector<cplx> cumulative_integral(std::span<const cplx> g, double dx);

/// S(u0, u1)(alpha, beta) = (u0(alpha) + u0(-beta)) / 2 + (1/2) int_{-beta}^{alpha} u1.
Field2 homogeneous_solution(const InitialData& d, const Grid2& grid);

/// (1/4) int_{-beta}^{alpha} int_{-a}^{beta} f(a, b) db da by nested cumulative
/// quadrature with signed limits; O(N^2) via prefix sums along each axis.
Field2 dalembert_inverse_quadrature(const Field2& f);

/// The same operator built from the Littlewood-Paley split f = f00 + f0h + fh0 + fhh:
/// the low block by quadrature, the mixed blocks through an exact spectral
/// antiderivative in their high variable, and the doubly-high block through
/// division by (i tau)(i xi) plus the boundary corrections that enforce
/// F(alpha, -alpha) = 0 and (d_alpha + d_beta) F(alpha, -alpha) = 0.
/// Includes the factor 1/4, so it matches dalembert_inverse_quadrature.
Field2 dalembert_inverse_lp(const Field2& f, const DyadicPartition& p);

/// (1/4) sum over cells of sigma(u at the cell's lower-left corner) times the
/// mixed increment of the sheet, over the same signed triangle as the
/// quadrature route. Requires H1, H2 > 1/2 (Young regime).
Field2 stochastic_convolution(const Field2& u, const DiffusionCoeff& sigma, const FbsSample& noise);

/// 4 d_alpha d_beta F evaluated spectrally on eta_T chi_T F.
Field2 box_operator(const Field2& f, double window_t = 2.0);

struct InverseEstimateReport {
  std::vector<double> ratios;  // one per nonzero input
  double max_ratio = 0.0;
  int skipped = 0;
};

/// ||eta_T chi_T F||_{mixed H^{s,delta}} / ||f||_{mixed H^{s-1,delta-1}} with F
/// from the Littlewood-Paley route. Zero inputs are skipped.
InverseEstimateReport inverse_estimate_check(std::span<const Field2> fs, double s, double delta,
                                             double window_t, const DyadicPartition& p);

}  // namespace sgwe
