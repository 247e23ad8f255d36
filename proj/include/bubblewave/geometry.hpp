#ifndef BUBBLEWAVE_GEOMETRY_HPP
#define BUBBLEWAVE_GEOMETRY_HPP

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "bubblewave/errors.hpp"

namespace bubblewave {

using Vec3 = Eigen::Vector3d;

namespace detail {

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
inline void gauss_legendre(int n, std::vector<double>& x,
                           std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

} // namespace detail

/// Fixed-order quadrature rule on the unit sphere: Gauss-Legendre in cos(θ)
/// crossed with a uniform grid in φ.  Exact for spherical harmonics of
/// degree <= declared order; weights sum to 4π exactly up to roundoff.
struct SphereQuadrature {
  int order = 0;
  std::vector<Vec3> nodes;
  std::vector<double> weights;

  static SphereQuadrature product_gauss(int order) {
    if (order < 1) throw NonPositiveParameter("quadrature order must be >= 1");
    SphereQuadrature q;
    q.order = order;
    const int ntheta = (order + 2) / 2; // exact through degree 2*ntheta - 1
    const int nphi = order + 1;         // exact for e^{imφ}, |m| <= order
    std::vector<double> xc, wc;
    detail::gauss_legendre(ntheta, xc, wc);
    const double dphi = 2.0 * std::numbers::pi / nphi;
    q.nodes.reserve(size_t(ntheta) * nphi);
    q.weights.reserve(size_t(ntheta) * nphi);
    for (int i = 0; i < ntheta; ++i) {
      const double ct = xc[i];
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      for (int j = 0; j < nphi; ++j) {
        const double phi = dphi * j;
        q.nodes.emplace_back(st * std::cos(phi), st * std::sin(phi), ct);
        q.weights.push_back(wc[i] * dphi);
      }
    }
    return q;
  }

  /// Surface integral over a sphere of given radius centered at `center`.
  template <class F>
  double integrate(const F& f, const Vec3& center = Vec3::Zero(),
                   double radius = 1.0) const {
    double sum = 0.0;
    const double jac = radius * radius;
    for (size_t k = 0; k < nodes.size(); ++k)
      sum += weights[k] * jac * f(center + radius * nodes[k], nodes[k]);
    return sum;
  }
};

/// Surface-interaction factor of the unit sphere,
///   A = (1/|S|) ∫∫_{S×S} (x-y)·ν_x / |x-y| dσ_x dσ_y.
/// The inner integral is rotation invariant, which collapses the double
/// integral to a single polar one with integrand sin(θ/2)·sin(θ); computed
/// here with Gauss-Legendre in θ (analytic integrand, machine accuracy).
/// The closed-form value is 8π/3.
inline double a_surface_unit_sphere() {
  std::vector<double> x, w;
  detail::gauss_legendre(48, x, w);
  double inner = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double theta = 0.5 * std::numbers::pi * (x[i] + 1.0);
    inner += 0.5 * std::numbers::pi * w[i] *
             std::sin(0.5 * theta) * std::sin(theta);
  }
  return 2.0 * std::numbers::pi * inner;
}

/// Same factor evaluated as a genuine double surface quadrature; used as a
/// cross-check of the reduced form above.  Converges only algebraically
/// (the integrand has a derivative kink along x = y), so expect three to
/// four digits at moderate orders rather than machine accuracy.
inline double a_surface_unit_sphere_quadrature(const SphereQuadrature& q) {
  const double area = 4.0 * std::numbers::pi;
  double sum = 0.0;
  for (size_t i = 0; i < q.nodes.size(); ++i) {
    const Vec3& x = q.nodes[i];
    double inner = 0.0;
    for (size_t j = 0; j < q.nodes.size(); ++j) {
      const Vec3 d = x - q.nodes[j];
      const double dist = d.norm();
      if (dist < 1e-14) continue; // integrand -> 0 as y -> x
      inner += q.weights[j] * d.dot(x) / dist;
    }
    sum += q.weights[i] * inner;
  }
  return sum / area;
}

/// Surface-interaction factor of a sphere of the given radius.  Scales as
/// radius^2: both surface measures gain radius^2 while the integrand stays
/// scale free, and the normalization removes one radius^2.
inline double a_surface(double radius) {
  if (radius <= 0.0) throw NonPositiveParameter("a_surface: radius <= 0");
  return radius * radius * a_surface_unit_sphere();
}

/// Volume of a bubble with reference radius `radius_ref` scaled by `delta`.
inline double bubble_volume(double radius_ref, double delta) {
  if (radius_ref <= 0.0 || delta <= 0.0)
    throw NonPositiveParameter("bubble_volume: radius_ref and delta must be > 0");
  const double a = delta * radius_ref;
  return 4.0 / 3.0 * std::numbers::pi * a * a * a;
}

/// Surface average of 1/|x-y| over a sphere (center, radius), evaluated by
/// quadrature with the polar axis aligned to x - center.  Valid on either
/// side of the surface; throws OnSurface within 1e-12·radius of it.
inline double averaged_kernel_quadrature(const Vec3& x, const Vec3& center,
                                         double radius, int n_nodes = 64) {
  if (radius <= 0.0) throw NonPositiveParameter("averaged_kernel: radius <= 0");
  const double rho = (x - center).norm();
  if (std::abs(rho - radius) <= 1e-12 * radius)
    throw OnSurface("averaged_kernel: point within 1e-12·radius of surface");
  if (rho < 1e-15) return 1.0 / radius; // integrand constant at the center
  std::vector<double> c, w;
  detail::gauss_legendre(n_nodes, c, w);
  double sum = 0.0;
  for (int i = 0; i < n_nodes; ++i)
    sum += w[i] / std::sqrt(rho * rho + radius * radius -
                            2.0 * rho * radius * c[i]);
  return 0.5 * sum;
}

/// Surface average of 1/|x-y| over a sphere (center, radius).  Outside the
/// sphere the mean value property gives 1/|x-center| exactly; inside, the
/// quadrature path is used (it reproduces the constant shell value 1/radius).
inline double averaged_kernel(const Vec3& x, const Vec3& center,
                              double radius) {
  if (radius <= 0.0) throw NonPositiveParameter("averaged_kernel: radius <= 0");
  const double rho = (x - center).norm();
  if (std::abs(rho - radius) <= 1e-12 * radius)
    throw OnSurface("averaged_kernel: point within 1e-12·radius of surface");
  if (rho > radius) return 1.0 / rho;
  return averaged_kernel_quadrature(x, center, radius);
}

} // namespace bubblewave

#endif // BUBBLEWAVE_GEOMETRY_HPP
