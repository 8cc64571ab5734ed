#include "sgwe/wave_ops.hpp"

#include <algorithm>
#include <cmath>

#include "sgwe/cutoff.hpp"
#include "sgwe/error.hpp"
#include "sgwe/spectral.hpp"

namespace sgwe {

namespace {

// Row-major (N+1) x (N+1) working array over extended indices 0..N.
struct Ext {
  int m;
  std::vector<cplx> v;
  explicit Ext(int n) : m(n + 1), v(static_cast<std::size_t>(m) * m) {}
  cplx& operator()(int p, int q) { return v[static_cast<std::size_t>(p) * m + q]; }
  cplx operator()(int p, int q) const { return v[static_cast<std::size_t>(p) * m + q]; }
};

// Signed triangle integral of one plane, without the factor 1/4:
// T(p, q) = int_{-beta_q}^{alpha_p} int_{-a}^{beta_q} f(a, b) db da.
Plane triangle_integral(const Plane& f, const Grid2& g) {
  const int n = g.size();
  const double dx = g.spacing();
  auto wrap = [&](int i, int j) { return f[g.index(i % n, j % n)]; };

  // c(i, q) = int_{-L}^{beta_q} f(alpha_i, b) db along each extended row.
  Ext c(n);
  std::vector<cplx> row(n + 1);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) row[j] = wrap(i, j);
    const auto cum = cumulative_integral(row, dx);
    for (int j = 0; j <= n; ++j) c(i, j) = cum[j];
  }
  // Inner integral from -a to beta: c(i, q) - c(i, n - i).
  std::vector<cplx> diag(n + 1);
  for (int i = 0; i <= n; ++i) diag[i] = c(i, n - i);
  const auto e = cumulative_integral(diag, dx);

  Ext k(n);
  std::vector<cplx> col(n + 1);
  for (int q = 0; q <= n; ++q) {
    for (int i = 0; i <= n; ++i) col[i] = c(i, q);
    const auto cum = cumulative_integral(col, dx);
    for (int i = 0; i <= n; ++i) k(i, q) = cum[i];
  }

  Plane out(g.cells());
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      out[g.index(p, q)] = k(p, q) - k(n - q, q) - e[p] + e[n - q];
  return out;
}

// Multiplies a spectrum plane by w(tau, xi) and transforms back.
template <typename W>
Plane filtered(const Plane& coeffs, const Grid2& g, W w) {
  const int n = g.size();
  Plane s(coeffs);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s[g.index(i, j)] *= w(i, j);
  return inverse_plane(s, g);
}

}  // namespace

std::vector<cplx> cumulative_integral(std::span<const cplx> g, double dx) {
  const std::size_t m = g.size();
  std::vector<cplx> out(m, cplx(0.0));
  if (m < 6) {
    for (std::size_t k = 1; k < m; ++k) out[k] = out[k - 1] + 0.5 * dx * (g[k - 1] + g[k]);
    return out;
  }
  // d1: fourth-order first derivative, d3: second-order third derivative.
  std::vector<cplx> d1(m), d3(m);
  const double h1 = 12.0 * dx, h3 = 2.0 * dx * dx * dx;
  for (std::size_t k = 2; k + 2 < m; ++k) {
    d1[k] = (-g[k + 2] + 8.0 * g[k + 1] - 8.0 * g[k - 1] + g[k - 2]) / h1;
    d3[k] = (g[k + 2] - 2.0 * g[k + 1] + 2.0 * g[k - 1] - g[k - 2]) / h3;
  }
  auto ends = [&](auto at, std::size_t k0, std::size_t k1, double sign) {
    d1[k0] = sign * (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / h1;
    d1[k1] = sign * (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) / h1;
    d3[k0] = sign * (-5.0 * at(0) + 18.0 * at(1) - 24.0 * at(2) + 14.0 * at(3) - 3.0 * at(4)) / h3;
    d3[k1] = sign * (-3.0 * at(0) + 10.0 * at(1) - 12.0 * at(2) + 6.0 * at(3) - at(4)) / h3;
  };
  ends([&](std::size_t i) { return g[i]; }, 0, 1, 1.0);
  ends([&](std::size_t i) { return g[m - 1 - i]; }, m - 1, m - 2, -1.0);

  const double c2 = dx * dx / 12.0, c4 = std::pow(dx, 4) / 720.0;
  cplx trap = 0.0;
  for (std::size_t k = 1; k < m; ++k) {
    trap += 0.5 * dx * (g[k - 1] + g[k]);
    out[k] = trap - c2 * (d1[k] - d1[0]) + c4 * (d3[k] - d3[0]);
  }
  return out;
}

InitialData InitialData::sample(double half_width, int n,
                                const std::function<std::array<double, 2>(double)>& u0,
                                const std::function<std::array<double, 2>(double)>& u1) {
  InitialData d = zeros(half_width, n);
  for (int i = 0; i < n; ++i) {
    const double x = d.coord(i);
    const auto a = u0(x);
    const auto b = u1(x);
    for (int c = 0; c < 2; ++c) {
      d.u0[c][i] = a[c];
      d.u1[c][i] = b[c];
    }
  }
  return d;
}

InitialData InitialData::zeros(double half_width, int n) {
  if (n < 4 || !is_power_of_two(n)) throw ConfigError("initial data size must be a power of two >= 4");
  InitialData d;
  d.half_width = half_width;
  for (int c = 0; c < 2; ++c) {
    d.u0[c].assign(n, 0.0);
    d.u1[c].assign(n, 0.0);
  }
  return d;
}

Field2 homogeneous_solution(const InitialData& d, const Grid2& grid) {
  const int n = grid.size();
  if (d.size() != n || d.half_width != grid.half_width())
    throw ConfigError("initial data does not match the null grid");
  Field2 out(grid, Frame::null, Arity::vector2);
  for (int c = 0; c < 2; ++c) {
    std::vector<cplx> v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = d.u1[c][i % n];
    const auto cum = cumulative_integral(v, grid.spacing());
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        const double pos = 0.5 * (d.u0[c][p] + d.u0[c][grid.mirror(q)]);
        out.at(c, p, q) = pos + 0.5 * (cum[p] - cum[n - q]);
      }
  }
  return out;
}

Field2 dalembert_inverse_quadrature(const Field2& f) {
  Field2 out = f.zeros_like();
  for (int c = 0; c < f.components(); ++c) {
    out.plane(c) = triangle_integral(f.plane(c), f.grid());
    for (auto& v : out.plane(c)) v *= 0.25;
  }
  return out;
}

Field2 dalembert_inverse_lp(const Field2& f, const DyadicPartition& p) {
  const Grid2& g = f.grid();
  if (!(p.grid() == g)) throw ConfigError("partition grid does not match the field");
  const int n = g.size();
  const double dx = g.spacing();
  const int nyq = n / 2;

  // The spectral antiderivative is only taken where 1 - phi_0 is nonzero,
  // which must stay away from frequency zero.
  for (int k = 0; k < n; ++k)
    if (1.0 - p.value(0, k) > 0.0 && std::abs(g.frequency(k)) < 1.0)
      throw NumericalError("high-frequency block reaches below the shell floor at mode " +
                           std::to_string(g.mode(k)));

  auto low = [&](int k) { return p.value(0, k); };
  auto high = [&](int k) { return 1.0 - p.value(0, k); };
  // 1/(i w), with the Nyquist mode dropped since its antiderivative vanishes on the grid.
  auto inv = [&](int k) {
    return k == nyq || high(k) == 0.0 ? cplx(0.0) : cplx(0.0, -1.0 / g.frequency(k));
  };

  Field2 out = f.zeros_like();
  for (int c = 0; c < f.components(); ++c) {
    const Plane coeffs = forward_plane(f.plane(c), g);

    const Plane f00 = filtered(coeffs, g, [&](int i, int j) { return cplx(low(i) * low(j)); });
    const Plane h = triangle_integral(f00, g);

    const Plane a = filtered(coeffs, g, [&](int i, int j) { return low(i) * high(j) * inv(j); });
    const Plane b = filtered(coeffs, g, [&](int i, int j) { return high(i) * low(j) * inv(i); });
    const Plane w = filtered(coeffs, g, [&](int i, int j) { return high(i) * high(j) * inv(i) * inv(j); });
    const Plane wa = filtered(coeffs, g, [&](int i, int j) { return high(i) * high(j) * inv(j); });
    const Plane wb = filtered(coeffs, g, [&](int i, int j) { return high(i) * high(j) * inv(i); });
    auto at = [&](const Plane& v, int i, int j) { return v[g.index(i % n, j % n)]; };

    // Anti-diagonal traces gamma -> (gamma, -gamma) over extended indices.
    std::vector<cplx> wd(n + 1);
    for (int i = 0; i <= n; ++i) wd[i] = at(wa, i, n - i) + at(wb, i, n - i);
    const auto wcum = cumulative_integral(wd, dx);

    // I(p, q) = int_{-beta}^{alpha} [A(gamma, beta) - A(gamma, -gamma)] dgamma.
    Plane iblock(g.cells());
    std::vector<cplx> col(n + 1);
    for (int q = 0; q < n; ++q) {
      for (int i = 0; i <= n; ++i) col[i] = at(a, i, q) - at(a, i, n - i);
      const auto cum = cumulative_integral(col, dx);
      for (int pp = 0; pp < n; ++pp) iblock[g.index(pp, q)] = cum[pp] - cum[n - q];
    }
    // J(p, q) = int_{-alpha}^{beta} [B(alpha, gamma) - B(-gamma, gamma)] dgamma.
    Plane jblock(g.cells());
    for (int pp = 0; pp < n; ++pp) {
      for (int j = 0; j <= n; ++j) col[j] = at(b, pp, j) - at(b, n - j, j);
      const auto cum = cumulative_integral(col, dx);
      for (int q = 0; q < n; ++q) jblock[g.index(pp, q)] = cum[q] - cum[n - pp];
    }

    Plane& o = out.plane(c);
    for (int pp = 0; pp < n; ++pp)
      for (int q = 0; q < n; ++q) {
        const cplx gblock = at(w, pp, q) - 0.5 * at(w, pp, n - pp) - 0.5 * at(w, n - q, q) -
                            0.5 * (wcum[pp] - wcum[n - q]);
        const std::size_t idx = g.index(pp, q);
        o[idx] = 0.25 * (h[idx] + iblock[idx] + jblock[idx] + gblock);
      }
  }
  return out;
}

Field2 stochastic_convolution(const Field2& u, const DiffusionCoeff& sigma, const FbsSample& noise) {
  if (noise.hurst.h1 <= 0.5 || noise.hurst.h2 <= 0.5)
    throw RegimeError("stochastic convolution needs H1, H2 > 1/2 (Young regime)");
  if (u.arity() != Arity::vector2) throw ConfigError("stochastic convolution needs an R^2-valued field");
  const Grid2& g = u.grid();
  if (!(noise.grid() == g)) throw ConfigError("noise grid does not match the field grid");
  const int n = g.size();
  const double cell = g.spacing() * g.spacing();

  const Field2 s = sigma_apply(sigma, u);
  Field2 out = u.zeros_like();
  for (int c = 0; c < 2; ++c) {
    auto v = [&](int i, int j) {
      const std::size_t idx = g.index(i % n, j % n);
      return s.plane(c)[idx] * noise.derivative.plane(0)[idx].real() * cell;
    };
    // cb(i, q): sum of cells in row i with lower corner below beta_q.
    Ext cb(n);
    for (int i = 0; i < n; ++i) {
      cb(i, 0) = 0.0;
      for (int q = 1; q <= n; ++q) cb(i, q) = cb(i, q - 1) + v(i, q - 1);
    }
    std::vector<cplx> e(n + 1, cplx(0.0));
    for (int i = 0; i < n; ++i) e[i + 1] = e[i] + cb(i, n - i);
    Ext ka(n);
    for (int q = 0; q <= n; ++q) {
      ka(0, q) = 0.0;
      for (int i = 0; i < n; ++i) ka(i + 1, q) = ka(i, q) + cb(i, q);
    }
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        out.at(c, p, q) = 0.25 * (ka(p, q) - ka(n - q, q) - e[p] + e[n - q]);
  }
  return out;
}

Field2 box_operator(const Field2& f, double window_t) {
  const Field2 w = localize(f, window_t);
  Field2 d = spectral_derivative(spectral_derivative(w, Axis::first), Axis::second);
  d *= 4.0;
  return d;
}

InverseEstimateReport inverse_estimate_check(std::span<const Field2> fs, double s, double delta,
                                             double window_t, const DyadicPartition& p) {
  InverseEstimateReport r;
  for (const Field2& f : fs) {
    const double denom = mixed_norm(f, s - 1.0, delta - 1.0);
    if (denom == 0.0) {
      ++r.skipped;
      continue;
    }
    const Field2 big = localize(dalembert_inverse_lp(f, p), window_t);
    const double ratio = mixed_norm(big, s, delta) / denom;
    r.ratios.push_back(ratio);
    r.max_ratio = std::max(r.max_ratio, ratio);
  }
  return r;
}

}  // namespace sgwe
