#ifndef BUBBLEWAVE_EFFECTIVE_HPP
#define BUBBLEWAVE_EFFECTIVE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "bubblewave/errors.hpp"
#include "bubblewave/scene.hpp"

namespace bubblewave {

/// Uniform space-time lattice over the design region.  Spatial rank is 1-3;
/// samples are stored node-major (all times of a node contiguous) with the
/// x index fastest among nodes.
struct SpaceTimeGrid {
  int rank = 1;
  std::array<int, 3> dims = {1, 1, 1};
  std::array<double, 3> spacing = {1.0, 1.0, 1.0};
  std::array<double, 3> origin = {0.0, 0.0, 0.0};
  int nt = 0;
  double dt = 0.0;

  SpaceTimeGrid() = default;
  SpaceTimeGrid(int rank_, std::array<int, 3> dims_,
                std::array<double, 3> spacing_, std::array<double, 3> origin_,
                int nt_, double dt_)
      : rank(rank_), dims(dims_), spacing(spacing_), origin(origin_), nt(nt_),
        dt(dt_) {
    if (rank < 1 || rank > 3)
      throw NonPositiveParameter("grid rank must be 1, 2 or 3");
    for (int a = 0; a < 3; ++a) {
      if (a < rank) {
        if (dims[size_t(a)] < 5)
          throw NonPositiveParameter(
              "need at least 5 nodes per axis for centered stencils");
        if (!(spacing[size_t(a)] > 0.0))
          throw NonPositiveParameter("grid spacing must be > 0");
      } else {
        dims[size_t(a)] = 1;
      }
    }
    if (nt < 5) throw NonPositiveParameter("need at least 5 time samples");
    if (!(dt > 0.0)) throw NonPositiveParameter("time step must be > 0");
  }

  int node_count() const { return dims[0] * dims[1] * dims[2]; }
  long long sample_count() const { return (long long)node_count() * nt; }

  int node_index(int ix, int iy = 0, int iz = 0) const {
    return ix + dims[0] * (iy + dims[1] * iz);
  }
  long long index(int node, int it) const {
    return (long long)node * nt + it;
  }
  std::array<int, 3> node_coords(int node) const {
    return {node % dims[0], (node / dims[0]) % dims[1],
            node / (dims[0] * dims[1])};
  }
  double coordinate(int axis, int i) const {
    return origin[size_t(axis)] + i * spacing[size_t(axis)];
  }
};

using Field = std::vector<double>;

inline void require_field_shape(const SpaceTimeGrid& grid, const Field& f,
                                const std::string& name) {
  if ((long long)f.size() != grid.sample_count())
    throw GridMismatch(name + " has " + std::to_string(f.size()) +
                       " samples, grid expects " +
                       std::to_string(grid.sample_count()));
}

/// Regularization used by recover_b.
struct Smoothing {
  double width_cells = 1.0; // Gaussian sigma in grid cells; 0 disables
  double eps_mask = 1e-3;   // denominator threshold, relative to max
};

/// Forward/inverse data bundle for the dispersive effective model.
struct EffectiveDesign {
  SpaceTimeGrid grid;
  double d_coeff = 1.0;
  double c_coeff = 1.0;
  Field p0;
  Field y_field;
  Smoothing regularization;
};

/// Result of the b-recovery: samples, validity mask (1 = defined) and a
/// robust scalar summary over the unmasked entries.
struct BField {
  Field values;
  std::vector<std::uint8_t> mask;
  double b_hat = std::numeric_limits<double>::quiet_NaN();
  long long unmasked = 0;
};

/// Oscillator coefficient of the effective model computed from bubble
/// parameters (units s^2): the single-bubble value, which approaches the
/// inverse square of the resonance frequency as delta -> 0.
inline double dispersion_coefficient(const Medium& medium,
                                     const BubbleSpec& bubble) {
  const double ratio = bubble.rho_c() / bubble.k_c();
  const double alpha = 1.0 / bubble.rho_c() - 1.0 / medium.rho_m;
  const double area =
      bubble.delta * bubble.delta * a_surface(bubble.radius_ref);
  return 0.5 * medium.rho_m * alpha * ratio * area;
}

/// Per-node susceptibility solve of d Y'' + Y = P0(x, .), Y(0) = Y'(0) = 0.
/// Each step advances the exact solution for linearly interpolated forcing,
/// so the scheme stays accurate for arbitrarily stiff d (the rotation angle
/// dt/sqrt(d) is evaluated exactly rather than expanded).
inline Field solve_susceptibility(double d, const Field& p0,
                                  const SpaceTimeGrid& grid) {
  if (d <= 0.0) throw NonPositiveD("dispersion coefficient must be > 0");
  require_field_shape(grid, p0, "p0");
  const double omega = 1.0 / std::sqrt(d);
  const double h = grid.dt;
  const double cwh = std::cos(omega * h);
  const double swh = std::sin(omega * h);

  Field y(p0.size(), 0.0);
  const int nodes = grid.node_count();
  const int nt = grid.nt;
  for (int node = 0; node < nodes; ++node) {
    const long long base = grid.index(node, 0);
    double yn = 0.0, vn = 0.0;
    y[size_t(base)] = 0.0;
    for (int it = 0; it + 1 < nt; ++it) {
      const double pn = p0[size_t(base + it)];
      const double pn1 = p0[size_t(base + it + 1)];
      const double slope = (pn1 - pn) / h;
      const double a = yn - pn;
      const double b = (vn - slope) / omega;
      yn = a * cwh + b * swh + pn1;
      vn = -a * omega * swh + b * omega * cwh + slope;
      y[size_t(base + it + 1)] = yn;
    }
  }
  return y;
}

namespace detail {

/// Separable truncated-Gaussian smoothing along one stride direction; the
/// kernel is renormalized where it overhangs the boundary, which keeps the
/// output smooth in index space all the way to the edge.
inline void smooth_axis(Field& data, long long stride, int extent,
                        double sigma,
                        const std::vector<long long>& line_starts) {
  const int radius = int(std::ceil(3.0 * sigma));
  if (radius < 1) return;
  std::vector<double> w(size_t(radius) + 1);
  for (int j = 0; j <= radius; ++j)
    w[size_t(j)] = std::exp(-0.5 * (j / sigma) * (j / sigma));
  std::vector<double> line(size_t(extent), 0.0);
  for (long long start : line_starts) {
    for (int i = 0; i < extent; ++i)
      line[size_t(i)] = data[size_t(start + i * stride)];
    for (int i = 0; i < extent; ++i) {
      double acc = w[0] * line[size_t(i)], norm = w[0];
      for (int j = 1; j <= radius; ++j) {
        if (i - j >= 0) {
          acc += w[size_t(j)] * line[size_t(i - j)];
          norm += w[size_t(j)];
        }
        if (i + j < extent) {
          acc += w[size_t(j)] * line[size_t(i + j)];
          norm += w[size_t(j)];
        }
      }
      data[size_t(start + i * stride)] = acc / norm;
    }
  }
}

/// Enumerate starting offsets of all 1-D lines along `axis` (0..rank-1 for
/// space, 3 for time) in node-major layout.
inline std::vector<long long> line_starts(const SpaceTimeGrid& g, int axis) {
  std::vector<long long> starts;
  if (axis == 3) { // time lines: one per node
    starts.reserve(size_t(g.node_count()));
    for (int node = 0; node < g.node_count(); ++node)
      starts.push_back(g.index(node, 0));
    return starts;
  }
  for (int iz = 0; iz < g.dims[2]; ++iz)
    for (int iy = 0; iy < g.dims[1]; ++iy)
      for (int ix = 0; ix < g.dims[0]; ++ix) {
        std::array<int, 3> c = {ix, iy, iz};
        if (c[size_t(axis)] != 0) continue;
        for (int it = 0; it < g.nt; ++it)
          starts.push_back(g.index(g.node_index(ix, iy, iz), it));
      }
  return starts;
}

inline long long axis_stride(const SpaceTimeGrid& g, int axis) {
  if (axis == 3) return 1; // time is contiguous
  long long stride = g.nt;
  for (int a = 0; a < axis; ++a) stride *= g.dims[size_t(a)];
  return stride;
}

inline Field smoothed_copy(const SpaceTimeGrid& g, const Field& f,
                           double sigma) {
  Field out = f;
  if (sigma <= 0.0) return out;
  for (int axis = 0; axis < g.rank; ++axis)
    smooth_axis(out, axis_stride(g, axis), g.dims[size_t(axis)], sigma,
                line_starts(g, axis));
  smooth_axis(out, 1, g.nt, sigma, line_starts(g, 3));
  return out;
}

} // namespace detail

/// Recover the effective coefficient b(x,t) = -[(c^-1 d_tt - Lap) P0] / (d_tt Y)
/// by centered second differences on a Gaussian-presmoothed copy of P0,
/// masking nodes where the stencil does not fit or the denominator is below
/// eps_mask times its maximum.  The margin is one cell wider than the kernel
/// radius: samples whose kernel was renormalized against the boundary carry a
/// first-order bias that the second difference would amplify by 1/dt^2, so
/// the stencil of a kept sample must not touch them.
inline BField recover_b(const EffectiveDesign& design) {
  const SpaceTimeGrid& g = design.grid;
  require_field_shape(g, design.p0, "p0");
  require_field_shape(g, design.y_field, "y_field");
  if (!(design.c_coeff > 0.0))
    throw NonPositiveParameter("wave coefficient c must be > 0");

  const double sigma = design.regularization.width_cells;
  const Field p = detail::smoothed_copy(g, design.p0, sigma);
  const int radius = sigma > 0.0 ? int(std::ceil(3.0 * sigma)) : 0;
  const int margin = std::max(1, radius + 1);

  BField out;
  out.values.assign(design.p0.size(),
                    std::numeric_limits<double>::quiet_NaN());
  out.mask.assign(design.p0.size(), 0);

  const int nt = g.nt;
  const double inv_dt2 = 1.0 / (g.dt * g.dt);
  auto in_interior = [&](const std::array<int, 3>& c, int it) {
    for (int a = 0; a < g.rank; ++a)
      if (c[size_t(a)] < margin || c[size_t(a)] >= g.dims[size_t(a)] - margin)
        return false;
    return it >= margin && it < nt - margin;
  };

  // Pass 1: denominator magnitude over the geometric interior.
  double den_max = 0.0;
  for (int node = 0; node < g.node_count(); ++node) {
    const auto c = g.node_coords(node);
    const long long base = g.index(node, 0);
    for (int it = 1; it + 1 < nt; ++it) {
      if (!in_interior(c, it)) continue;
      const double d2y = (design.y_field[size_t(base + it + 1)] -
                          2.0 * design.y_field[size_t(base + it)] +
                          design.y_field[size_t(base + it - 1)]) *
                         inv_dt2;
      den_max = std::max(den_max, std::abs(d2y));
    }
  }
  if (den_max == 0.0) throw AllMasked("d_tt Y vanishes on the whole grid");
  const double threshold = design.regularization.eps_mask * den_max;

  std::vector<double> kept;
  for (int node = 0; node < g.node_count(); ++node) {
    const auto c = g.node_coords(node);
    const long long base = g.index(node, 0);
    for (int it = 1; it + 1 < nt; ++it) {
      if (!in_interior(c, it)) continue;
      const double d2y = (design.y_field[size_t(base + it + 1)] -
                          2.0 * design.y_field[size_t(base + it)] +
                          design.y_field[size_t(base + it - 1)]) *
                         inv_dt2;
      if (std::abs(d2y) < threshold) continue;

      const double d2p = (p[size_t(base + it + 1)] -
                          2.0 * p[size_t(base + it)] +
                          p[size_t(base + it - 1)]) *
                         inv_dt2;
      double lap = 0.0;
      for (int a = 0; a < g.rank; ++a) {
        const long long stride = detail::axis_stride(g, a);
        const double h = g.spacing[size_t(a)];
        lap += (p[size_t(base + it + stride)] - 2.0 * p[size_t(base + it)] +
                p[size_t(base + it - stride)]) /
               (h * h);
      }
      const double numerator = d2p / design.c_coeff - lap;
      const long long idx = base + it;
      out.values[size_t(idx)] = -numerator / d2y;
      out.mask[size_t(idx)] = 1;
      kept.push_back(out.values[size_t(idx)]);
    }
  }
  out.unmasked = (long long)kept.size();
  if (kept.empty())
    throw AllMasked("denominator below threshold everywhere");
  const size_t mid = kept.size() / 2;
  std::nth_element(kept.begin(), kept.begin() + mid, kept.end());
  if (kept.size() % 2 == 1) {
    out.b_hat = kept[mid];
  } else {
    const double hi = kept[mid];
    std::nth_element(kept.begin(), kept.begin() + (mid - 1),
                     kept.begin() + mid);
    out.b_hat = 0.5 * (kept[mid - 1] + hi);
  }
  return out;
}

/// Max and measure-weighted L2 norms of one residual component.
struct ResidualNorm {
  double max = 0.0;
  double l2 = 0.0;
};

/// Finite-difference residuals of the three model equations:
///   momentum:   d_t U + grad P
///   pressure:   c^-1 d_t P + div U + b d_t Y
///   oscillator: d d_tt Y + Y - P
struct ResidualNorms {
  ResidualNorm momentum;
  ResidualNorm pressure;
  ResidualNorm oscillator;
};

inline ResidualNorms
dispersive_residual(const Field& p, const std::vector<Field>& u,
                    const Field& y, const Field& b, double c_coeff,
                    double d_coeff, const SpaceTimeGrid& g) {
  require_field_shape(g, p, "p");
  require_field_shape(g, y, "y");
  require_field_shape(g, b, "b");
  if (int(u.size()) != g.rank)
    throw GridMismatch("velocity field must have one component per axis");
  for (int a = 0; a < g.rank; ++a)
    require_field_shape(g, u[size_t(a)], "u[" + std::to_string(a) + "]");
  if (!(c_coeff > 0.0))
    throw NonPositiveParameter("wave coefficient c must be > 0");

  double cell = g.dt;
  for (int a = 0; a < g.rank; ++a) cell *= g.spacing[size_t(a)];

  ResidualNorms norms;
  double sq_mom = 0.0, sq_prs = 0.0, sq_osc = 0.0;
  const int nt = g.nt;
  auto spatial_interior = [&](const std::array<int, 3>& c) {
    for (int a = 0; a < g.rank; ++a)
      if (c[size_t(a)] < 1 || c[size_t(a)] >= g.dims[size_t(a)] - 1)
        return false;
    return true;
  };

  for (int node = 0; node < g.node_count(); ++node) {
    const auto c = g.node_coords(node);
    const bool interior = spatial_interior(c);
    const long long base = g.index(node, 0);
    for (int it = 1; it + 1 < nt; ++it) {
      const long long idx = base + it;
      // oscillator residual needs only time interiority
      const double d2y =
          (y[size_t(idx + 1)] - 2.0 * y[size_t(idx)] + y[size_t(idx - 1)]) /
          (g.dt * g.dt);
      const double r_osc =
          d_coeff * d2y + y[size_t(idx)] - p[size_t(idx)];
      norms.oscillator.max = std::max(norms.oscillator.max, std::abs(r_osc));
      sq_osc += r_osc * r_osc;

      if (!interior) continue;
      double r_mom_sq = 0.0, r_mom_max = 0.0;
      double div_u = 0.0;
      for (int a = 0; a < g.rank; ++a) {
        const long long stride = detail::axis_stride(g, a);
        const double h2 = 2.0 * g.spacing[size_t(a)];
        const double dudt =
            (u[size_t(a)][size_t(idx + 1)] - u[size_t(a)][size_t(idx - 1)]) /
            (2.0 * g.dt);
        const double dpdx =
            (p[size_t(idx + stride)] - p[size_t(idx - stride)]) / h2;
        const double r = dudt + dpdx;
        r_mom_sq += r * r;
        r_mom_max = std::max(r_mom_max, std::abs(r));
        div_u +=
            (u[size_t(a)][size_t(idx + stride)] - u[size_t(a)][size_t(idx - stride)]) /
            h2;
      }
      norms.momentum.max = std::max(norms.momentum.max, r_mom_max);
      sq_mom += r_mom_sq;

      const double dpdt =
          (p[size_t(idx + 1)] - p[size_t(idx - 1)]) / (2.0 * g.dt);
      const double dydt =
          (y[size_t(idx + 1)] - y[size_t(idx - 1)]) / (2.0 * g.dt);
      const double r_prs = dpdt / c_coeff + div_u + b[size_t(idx)] * dydt;
      norms.pressure.max = std::max(norms.pressure.max, std::abs(r_prs));
      sq_prs += r_prs * r_prs;
    }
  }
  norms.momentum.l2 = std::sqrt(sq_mom * cell);
  norms.pressure.l2 = std::sqrt(sq_prs * cell);
  norms.oscillator.l2 = std::sqrt(sq_osc * cell);
  return norms;
}

} // namespace bubblewave

#endif // BUBBLEWAVE_EFFECTIVE_HPP
