#include "sgwe/spectral.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "sgwe/error.hpp"

namespace sgwe {
namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

// FFTW planning is not thread-safe; execution with new-array execute is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

const PlanPair& plans_for(int n) {
  static std::map<int, PlanPair> cache;
  std::lock_guard lock(plan_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  auto* buf = fftw_alloc_complex(cells);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p{fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, flags),
             fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, flags)};
  fftw_free(buf);
  if (p.forward == nullptr || p.backward == nullptr)
    throw NumericalError("FFTW planning failed for N=" + std::to_string(n));
  return cache.emplace(n, p).first->second;
}

fftw_complex* as_fftw(Plane& p) { return reinterpret_cast<fftw_complex*>(p.data()); }

// Nyquist mode evaluated as a cosine keeps real band-limited data real off-grid.
cplx basis(const Grid2& g, int k, double x) {
  const double w = g.frequency(k);
  if (g.mode(k) == -g.size() / 2) return {std::cos(w * x), 0.0};
  return {std::cos(w * x), std::sin(w * x)};
}

using CMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

CMatrix basis_matrix(const Grid2& g, std::span<const double> xs) {
  CMatrix e(static_cast<Eigen::Index>(xs.size()), g.size());
  for (std::size_t p = 0; p < xs.size(); ++p)
    for (int k = 0; k < g.size(); ++k) e(static_cast<Eigen::Index>(p), k) = basis(g, k, xs[p]);
  return e;
}

// Sorted representatives of values merged within tol, and each value's slot.
std::pair<std::vector<double>, std::vector<int>> compress(const std::vector<double>& v,
                                                          double tol) {
  std::vector<double> sorted(v);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> reps;
  for (double x : sorted)
    if (reps.empty() || x - reps.back() > tol) reps.push_back(x);
  std::vector<int> slot(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto it = std::lower_bound(reps.begin(), reps.end(), v[i] - tol);
    slot[i] = static_cast<int>(it - reps.begin());
  }
  return {reps, slot};
}

}  // namespace

Plane forward_plane(const Plane& values, const Grid2& grid) {
  const int n = grid.size();
  if (values.size() != grid.cells()) throw ConfigError("plane/grid size mismatch");
  Plane out(values);
  fftw_execute_dft(plans_for(n).forward, as_fftw(out), as_fftw(out));
  // Grid starts at -L, which contributes the phase (-1)^(m+n).
  const double scale = 1.0 / static_cast<double>(grid.cells());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out[grid.index(i, j)] *= ((i + j) % 2 == 0 ? scale : -scale);
  return out;
}

Plane inverse_plane(const Plane& coeffs, const Grid2& grid) {
  const int n = grid.size();
  if (coeffs.size() != grid.cells()) throw ConfigError("plane/grid size mismatch");
  Plane out(coeffs);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if ((i + j) % 2 != 0) out[grid.index(i, j)] = -out[grid.index(i, j)];
  fftw_execute_dft(plans_for(n).backward, as_fftw(out), as_fftw(out));
  return out;
}

Spectrum2 dft2(const Field2& f) {
  Spectrum2 s(f.grid(), f.frame(), f.arity());
  for (int c = 0; c < f.components(); ++c) s.plane(c) = forward_plane(f.plane(c), f.grid());
  return s;
}

Field2 idft2(const Spectrum2& s) {
  Field2 f(s.grid(), s.frame(), s.arity());
  for (int c = 0; c < s.components(); ++c) f.plane(c) = inverse_plane(s.plane(c), s.grid());
  return f;
}

Field2 spectral_derivative(const Field2& f, Axis axis) {
  const Grid2& g = f.grid();
  const int n = g.size();
  Field2 out = f.zeros_like();
  for (int c = 0; c < f.components(); ++c) {
    Plane s = forward_plane(f.plane(c), g);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int k = axis == Axis::first ? i : j;
        const double w = g.mode(k) == -n / 2 ? 0.0 : g.frequency(k);
        s[g.index(i, j)] *= cplx(0.0, w);
      }
    out.plane(c) = inverse_plane(s, g);
  }
  return out;
}

std::vector<cplx> evaluate_tensor(const Spectrum2& s, int component,
                                  std::span<const double> firsts,
                                  std::span<const double> seconds) {
  const Grid2& g = s.grid();
  const int n = g.size();
  Eigen::Map<const CMatrix> c(s.plane(component).data(), n, n);
  const CMatrix ea = basis_matrix(g, firsts);
  const CMatrix eb = basis_matrix(g, seconds);
  const CMatrix r = ea * c * eb.transpose();
  return std::vector<cplx>(r.data(), r.data() + r.size());
}

std::vector<cplx> evaluate_points(const Spectrum2& s, int component,
                                  std::span<const std::pair<double, double>> points) {
  const Grid2& g = s.grid();
  const int n = g.size();
  std::vector<double> xs(points.size()), ys(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    xs[p] = points[p].first;
    ys[p] = points[p].second;
  }
  const double tol = 1e-12 * std::max(1.0, g.half_width());
  auto [xr, xslot] = compress(xs, tol);
  auto [yr, yslot] = compress(ys, tol);
  Eigen::Map<const CMatrix> c(s.plane(component).data(), n, n);
  const CMatrix ea = basis_matrix(g, xr);
  // Column q holds sum_n c[:, n] e_n(y_q).
  const CMatrix b = c * basis_matrix(g, yr).transpose();
  std::vector<cplx> out(points.size());
  for (std::size_t p = 0; p < points.size(); ++p)
    out[p] = ea.row(xslot[p]).transpose().cwiseProduct(b.col(yslot[p])).sum();
  return out;
}

std::vector<double> interpolate_periodic(std::span<const double> values, double half_width,
                                         std::span<const double> targets) {
  const int n = static_cast<int>(values.size());
  if (!is_power_of_two(n) || n < 4) throw ConfigError("1-D data length must be a power of two");
  const Grid2 g(half_width, n);
  std::vector<cplx> coeff(n);
  for (int k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (int i = 0; i < n; ++i) acc += values[i] * std::conj(basis(g, k, g.coord(i)));
    coeff[k] = acc / static_cast<double>(n);
  }
  // The Nyquist basis is a cosine whose grid values are +-1: conj is a no-op.
  std::vector<double> out(targets.size());
  for (std::size_t p = 0; p < targets.size(); ++p) {
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) acc += coeff[k] * basis(g, k, targets[p]);
    out[p] = acc.real();
  }
  return out;
}

}  // namespace sgwe
