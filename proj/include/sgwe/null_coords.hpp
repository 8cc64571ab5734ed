#pragma once

#include <span>

#include "sgwe/field.hpp"

namespace sgwe {

/// Half-width of the (t,x) grid paired with a null grid of half-width L.
/// The null map dilates by sqrt(2), so a disc of radius L/sqrt(2) lands on
/// the disc of radius L.
double cartesian_half_width(double null_half_width);

/// u*(alpha, beta) = u((alpha+beta)/2, (alpha-beta)/2), resolved by spectral
/// evaluation of u at the rotated lattice. Throws DomainError if a sample of
/// u above 1e-12 * max|u| maps outside the null window.
Field2 to_null(const Field2& u, const Grid2& null_grid);
Field2 to_null(const Field2& u);

/// u(t, x) = u*(t+x, t-x); inverse of to_null with the mirrored window check.
Field2 from_null(const Field2& u_star, const Grid2& cartesian_grid);
Field2 from_null(const Field2& u_star);

/// ||u*||_{mixed H^{s,delta}} / ||u||_{H^{s,delta}} for one Cartesian field.
double isomorphism_ratio(const Field2& u, double s, double delta);

struct RatioRange {
  double low = 0.0;
  double high = 0.0;
};

/// min/max of the ratios; empty input is an error.
RatioRange aggregate(std::span<const double> ratios);

}  // namespace sgwe
