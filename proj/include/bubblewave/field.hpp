#ifndef BUBBLEWAVE_FIELD_HPP
#define BUBBLEWAVE_FIELD_HPP

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "bubblewave/dynamics.hpp"
#include "bubblewave/errors.hpp"
#include "bubblewave/geometry.hpp"
#include "bubblewave/incident.hpp"
#include "bubblewave/scene.hpp"
#include "bubblewave/time_quadrature.hpp"

namespace bubblewave {

/// Which reconstruction prefactor to use.  Theorem is the default; Corollary
/// multiplies every bubble term by (rho_c/k_c) c0^2 and is kept switchable
/// for comparison.
enum class FieldVariant { Theorem, Corollary };

/// Observation points with a shared uniform time grid.
struct ObservationSet {
  std::vector<Vec3> points;
  std::vector<double> times;

  static ObservationSet uniform(std::vector<Vec3> pts, double T, double dt) {
    if (!(T > 0.0) || !(dt > 0.0))
      throw NonPositiveParameter("observation horizon and step must be > 0");
    ObservationSet obs;
    obs.points = std::move(pts);
    const int n = int(std::ceil(T / dt - 1e-9)) + 1;
    obs.times.resize(size_t(n));
    for (int k = 0; k < n; ++k) obs.times[size_t(k)] = k * dt;
    return obs;
  }

  double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

/// Throws unless every observation point is strictly outside every bubble.
inline void validate_observations(const ClusterModel& c,
                                  const ObservationSet& obs) {
  for (size_t p = 0; p < obs.points.size(); ++p)
    for (size_t i = 0; i < c.bubbles.size(); ++i) {
      const double dist = (obs.points[p] - c.bubbles[i].center).norm();
      if (dist <= c.bubbles[i].physical_radius())
        throw PointInsideBubble("observation point " + std::to_string(p) +
                                " is inside bubble " + std::to_string(i));
    }
}

/// Pressure series at one observation point.  u1/u2 are filled only by the
/// dominant-wave reconstructions; values then holds their sum.
struct TimeSeries {
  int point = 0;
  std::vector<double> values;
  std::vector<double> u1;
  std::vector<double> u2;
  FieldVariant variant = FieldVariant::Theorem;
  std::vector<std::string> warnings;
};

/// Scattered pressure from computed amplitudes:
///   u^s(x,t) = sum_i (alpha_i rho_m / 4pi) K(x, z_i, delta r_i) Y_i(t - |x-z_i|/c0)
/// with K the surface-averaged kernel (1/|x-z_i| for exterior points).
inline std::vector<TimeSeries>
scattered_field(const ClusterModel& c, const AmplitudeSolution& sol,
                const ObservationSet& obs,
                FieldVariant variant = FieldVariant::Theorem) {
  validate_observations(c, obs);
  const double c0 = c.medium.sound_speed();
  const int m = c.size();

  std::vector<double> prefactor(size_t(m), 0.0);
  for (int i = 0; i < m; ++i) {
    double coef = c.alpha[size_t(i)] * c.medium.rho_m / (4.0 * M_PI);
    if (variant == FieldVariant::Corollary)
      coef *= (c.bubbles[size_t(i)].rho_c() / c.bubbles[size_t(i)].k_c()) *
              c0 * c0;
    prefactor[size_t(i)] = coef;
  }

  std::vector<TimeSeries> out;
  out.reserve(obs.points.size());
  for (size_t p = 0; p < obs.points.size(); ++p) {
    TimeSeries ts;
    ts.point = int(p);
    ts.variant = variant;
    ts.values.assign(obs.times.size(), 0.0);
    bool truncated = false;
    for (int i = 0; i < m; ++i) {
      const auto& b = c.bubbles[size_t(i)];
      const double kern =
          averaged_kernel(obs.points[p], b.center, b.physical_radius());
      const double lag = (obs.points[p] - b.center).norm() / c0;
      for (size_t k = 0; k < obs.times.size(); ++k) {
        const double t_ret = obs.times[k] - lag;
        if (t_ret <= 0.0) continue;
        if (!sol.covers(t_ret)) truncated = true;
        ts.values[k] += prefactor[size_t(i)] * kern * sol.value(i, t_ret);
      }
    }
    if (truncated)
      ts.warnings.push_back(
          "retarded time beyond the computed horizon; tail clamped");
    out.push_back(std::move(ts));
  }
  return out;
}

namespace detail {

/// Shared dominant-wave evaluation for a symmetric cluster of identical
/// bubbles (2 or 4 centers).  The primary wave is the instantaneous response
///   U1 = (omega_M^2 rho_m Vol(B1) / (4 pi k_c_bar)) J^{-1} delta
///        * sum_j |x - z_j|^{-1} * u^in(z_1, t - |x - z_1|/c0)
/// and the secondary wave carries the J^{-3/2} sine-convolution kernel with
/// the opposite sign, so that U1 + U2 equals the full Duhamel response of the
/// symmetric mode up to higher-order terms.
inline void accumulate_dominant(const ClusterModel& c,
                                const std::vector<int>& members,
                                const IncidentField& f,
                                const ObservationSet& obs, double dt,
                                std::vector<TimeSeries>& series) {
  const auto& b0 = c.bubbles[size_t(members.front())];
  const double c0 = c.medium.sound_speed();
  const double omega = minnaert_frequency(c.medium, b0);
  const double area_ref = a_surface(b0.radius_ref);
  const double xi =
      (c.bubbles[size_t(members[0])].center - c.bubbles[size_t(members[1])].center)
          .norm();
  const double neighbors = double(members.size()) - 1.0;
  const double j_factor = 1.0 - neighbors * b0.delta / (area_ref * xi);
  if (j_factor <= 0.0)
    throw StrongCouplingRegime("coupling correction J = " +
                               std::to_string(j_factor) + " is not positive");
  const double coef = c.medium.rho_m * b0.reference_volume() * b0.delta /
                      (4.0 * M_PI * b0.k_c_bar);
  const double omega_j = omega / std::sqrt(j_factor);
  const Vec3 z1 = c.bubbles[size_t(members.front())].center;

  for (size_t p = 0; p < obs.points.size(); ++p) {
    auto& ts = series[p];
    double kern = 0.0;
    for (int j : members)
      kern += 1.0 / (obs.points[p] - c.bubbles[size_t(j)].center).norm();
    const double lag = (obs.points[p] - z1).norm() / c0;
    SineConvolution conv(omega_j, [&](double tau) { return f(z1, tau); }, dt);
    for (size_t k = 0; k < obs.times.size(); ++k) {
      const double t_ret = obs.times[k] - lag;
      if (t_ret <= 0.0) continue;
      const double u1 = coef * kern * omega * omega / j_factor * f(z1, t_ret);
      const double u2 = -coef * kern * omega * omega * omega /
                        (j_factor * std::sqrt(j_factor)) * conv.at(t_ret);
      ts.u1[k] += u1;
      ts.u2[k] += u2;
      ts.values[k] += u1 + u2;
    }
  }
}

inline std::vector<TimeSeries> empty_series(const ObservationSet& obs) {
  std::vector<TimeSeries> series(obs.points.size());
  for (size_t p = 0; p < obs.points.size(); ++p) {
    series[p].point = int(p);
    series[p].values.assign(obs.times.size(), 0.0);
    series[p].u1.assign(obs.times.size(), 0.0);
    series[p].u2.assign(obs.times.size(), 0.0);
  }
  return series;
}

} // namespace detail

/// Dominant primary/secondary wave decomposition for an identical-bubble
/// dimer.  dt is the quadrature step of the secondary-wave convolution.
inline std::vector<TimeSeries>
dimer_dominant_field(const ClusterModel& c, const IncidentField& f,
                     const ObservationSet& obs, double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0))
    throw NonPositiveParameter("horizon and step must be > 0");
  decompose_dimer(c); // shape/identity validation
  validate_source_position(c, f.source());
  validate_observations(c, obs);
  auto series = detail::empty_series(obs);
  detail::accumulate_dominant(c, {0, 1}, f, obs, dt, series);
  return series;
}

/// Dominant-wave decomposition for the regular tetrahedron: four kernel
/// terms and the stronger coupling correction J = 1 - 3 delta/(A xi).
inline std::vector<TimeSeries>
tetramer_dominant_field(const ClusterModel& c, const IncidentField& f,
                        const ObservationSet& obs, double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0))
    throw NonPositiveParameter("horizon and step must be > 0");
  decompose_tetramer(c);
  validate_source_position(c, f.source());
  validate_observations(c, obs);
  auto series = detail::empty_series(obs);
  detail::accumulate_dominant(c, {0, 1, 2, 3}, f, obs, dt, series);
  return series;
}

/// Superposition of per-pair dominant waves for a collection of
/// well-separated dimers.
inline std::vector<TimeSeries>
dimer_collection_field(const ClusterModel& c,
                       const std::vector<std::pair<int, int>>& pairing,
                       const IncidentField& f, const ObservationSet& obs,
                       double T, double dt,
                       double intra_inter_threshold = 0.1) {
  if (!(T > 0.0) || !(dt > 0.0))
    throw NonPositiveParameter("horizon and step must be > 0");
  detail::validate_pairing(c, pairing, intra_inter_threshold);
  validate_source_position(c, f.source());
  validate_observations(c, obs);
  auto series = detail::empty_series(obs);
  for (const auto& [a, b] : pairing) {
    const ClusterModel block = build_cluster(
        c.medium, {c.bubbles[size_t(a)], c.bubbles[size_t(b)]});
    decompose_dimer(block);
    detail::accumulate_dominant(block, {0, 1}, f, obs, dt, series);
  }
  return series;
}

} // namespace bubblewave

#endif // BUBBLEWAVE_FIELD_HPP
