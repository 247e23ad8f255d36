#ifndef BUBBLEWAVE_INCIDENT_HPP
#define BUBBLEWAVE_INCIDENT_HPP

#include <Eigen/Dense>
#include <cmath>

#include "bubblewave/errors.hpp"
#include "bubblewave/geometry.hpp"
#include "bubblewave/scene.hpp"

namespace bubblewave {

/// How the per-bubble forcing is evaluated.
enum class ForcingModel {
  Monopole,          // volume * retarded second time derivative at the center
  SurfaceQuadrature, // flux of the incident gradient through the surface
};

/// Retarded spherical wave from a causal point source,
///   u(x, t) = λ(t - |x-x0|/c0) / |x-x0|.
class IncidentField {
public:
  IncidentField(const Medium& medium, const PointSource& source)
      : medium_(medium), source_(source), c0_(medium.sound_speed()) {
    if (!(c0_ > 0.0) || !std::isfinite(c0_))
      throw NonPositiveParameter("incident field requires a valid medium");
  }

  const Medium& medium() const { return medium_; }
  const PointSource& source() const { return source_; }
  double sound_speed() const { return c0_; }

  /// n-th time derivative of the incident wave at (x, t), n = 0..4.
  double operator()(const Vec3& x, double t, int deriv_order = 0) const {
    const double r = (x - source_.position).norm();
    if (r < 1e-12)
      throw AtSource("incident field evaluated within 1e-12 of the source");
    return source_.pulse.derivative(deriv_order, t - r / c0_) / r;
  }

  /// Outward normal derivative at a surface point y with unit normal nu.
  double normal_derivative(const Vec3& y, const Vec3& nu, double t) const {
    const Vec3 d = y - source_.position;
    const double r = d.norm();
    if (r < 1e-12)
      throw AtSource("incident gradient evaluated within 1e-12 of the source");
    const double s = t - r / c0_;
    const double radial = -source_.pulse.derivative(1, s) / (c0_ * r) -
                          source_.pulse.derivative(0, s) / (r * r);
    return d.dot(nu) / r * radial;
  }

private:
  Medium medium_;
  PointSource source_;
  double c0_;
};

/// Check the source sits strictly outside every bubble.
inline void validate_source_position(const ClusterModel& c,
                                     const PointSource& src) {
  for (int i = 0; i < c.size(); ++i) {
    const double dist = (src.position - c.bubbles[i].center).norm();
    if (dist <= c.bubbles[i].physical_radius())
      throw PointInsideBubble("source position lies inside or on bubble " +
                              std::to_string(i));
  }
}

/// Forcing of bubble i at time t.
///
/// The monopole model uses (rho_m/k_m) * |Omega_i| * u_tt(z_i, t); the
/// surface model integrates the normal derivative of the incident wave over
/// the bubble surface.  The two agree up to a remainder that vanishes two
/// orders faster than the forcing itself as delta -> 0.
inline double forcing_b(const IncidentField& f, const ClusterModel& c, int i,
                        double t, ForcingModel model = ForcingModel::Monopole,
                        const SphereQuadrature* quad = nullptr) {
  const auto& b = c.bubbles.at(size_t(i));
  if (model == ForcingModel::Monopole) {
    const double vol = bubble_volume(b.radius_ref, b.delta);
    return c.medium.rho_m / c.medium.k_m * vol * f(b.center, t, 2);
  }
  static const SphereQuadrature default_quad = SphereQuadrature::product_gauss(24);
  const SphereQuadrature& q = quad ? *quad : default_quad;
  const double a = b.physical_radius();
  return q.integrate(
      [&](const Vec3& y, const Vec3& nu) { return f.normal_derivative(y, nu, t); },
      b.center, a);
}

/// Assembled right-hand side r_i(t) = (rho_c/k_c) * c0^2 * B_i(t) of the
/// interaction system.
inline Eigen::VectorXd rhs_vector(const IncidentField& f, const ClusterModel& c,
                                  double t,
                                  ForcingModel model = ForcingModel::Monopole,
                                  const SphereQuadrature* quad = nullptr) {
  const double c0 = c.medium.sound_speed();
  Eigen::VectorXd r(c.size());
  for (int i = 0; i < c.size(); ++i) {
    const auto& b = c.bubbles[size_t(i)];
    r(i) = b.rho_c() / b.k_c() * c0 * c0 * forcing_b(f, c, i, t, model, quad);
  }
  return r;
}

} // namespace bubblewave

#endif // BUBBLEWAVE_INCIDENT_HPP
