#ifndef BUBBLEWAVE_SCENE_HPP
#define BUBBLEWAVE_SCENE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "bubblewave/errors.hpp"
#include "bubblewave/geometry.hpp"
#include "bubblewave/pulse.hpp"

namespace bubblewave {

/// Homogeneous acoustic background.
struct Medium {
  double rho_m = 0.0; // mass density (kg/m^3)
  double k_m = 0.0;   // bulk modulus (Pa)

  double sound_speed() const { return std::sqrt(k_m / rho_m); }
};

/// One spherical micro-bubble.  The physical radius is delta * radius_ref;
/// the contrast parameters scale as rho_c = rho_c_bar * delta^2 and
/// k_c = k_c_bar * delta^2 and are always recomputed from the bars.
struct BubbleSpec {
  Vec3 center = Vec3::Zero(); // (m)
  double delta = 0.0;         // size parameter, > 0
  double radius_ref = 1.0;    // reference-shape radius, > 0
  double rho_c_bar = 0.0;     // > 0
  double k_c_bar = 0.0;       // > 0

  double rho_c() const { return rho_c_bar * delta * delta; }
  double k_c() const { return k_c_bar * delta * delta; }
  double physical_radius() const { return delta * radius_ref; }
  double reference_volume() const {
    const double r = radius_ref;
    return 4.0 / 3.0 * std::numbers::pi * r * r * r;
  }
};

struct PointSource {
  Vec3 position = Vec3::Zero();
  Pulse pulse = Pulse::zero();
};

/// Scene with every derived coefficient of the point-interaction model.
/// Immutable after construction; share freely across threads.
struct ClusterModel {
  Medium medium;
  std::vector<BubbleSpec> bubbles;

  std::vector<double> alpha;          // 1/rho_c - 1/rho_m
  std::vector<double> beta;           // 1/k_c - 1/k_m
  std::vector<double> gamma;          // beta - alpha * rho_c/k_c
  std::vector<double> surface_factor; // A_{dOmega_i} = delta^2 * A(radius_ref)
  std::vector<double> inertia;        // d_i (s^2)
  Eigen::MatrixXd coupling;           // q_ij = b_j / |z_i - z_j|, zero diagonal
  Eigen::MatrixXd delays;             // tau_ij = |z_i - z_j| / c0

  int size() const { return int(bubbles.size()); }

  double min_center_distance() const {
    double dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < size(); ++i)
      for (int j = i + 1; j < size(); ++j)
        dmin = std::min(dmin, (bubbles[i].center - bubbles[j].center).norm());
    return dmin;
  }

  /// Positive off-diagonal delays only; +inf when there are none.
  double min_positive_delay() const {
    double tmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < size(); ++i)
      for (int j = 0; j < size(); ++j)
        if (i != j && delays(i, j) > 0.0) tmin = std::min(tmin, delays(i, j));
    return tmin;
  }
};

namespace detail {

inline void validate_bubble(const BubbleSpec& b) {
  if (b.delta <= 0.0 || b.radius_ref <= 0.0 || b.rho_c_bar <= 0.0 ||
      b.k_c_bar <= 0.0)
    throw NonPositiveParameter("bubble parameters must all be > 0");
}

} // namespace detail

/// Derive all interaction coefficients from the raw scene description.
inline ClusterModel build_cluster(const Medium& medium,
                                  const std::vector<BubbleSpec>& bubbles) {
  if (medium.rho_m <= 0.0 || medium.k_m <= 0.0)
    throw NonPositiveParameter("medium requires rho_m > 0 and k_m > 0");
  if (bubbles.empty()) throw NonPositiveParameter("at least one bubble required");
  for (const auto& b : bubbles) detail::validate_bubble(b);

  const int m = int(bubbles.size());
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if ((bubbles[i].center - bubbles[j].center).norm() == 0.0)
        throw DuplicateCenters("bubbles " + std::to_string(i) + " and " +
                               std::to_string(j) + " share a center");

  ClusterModel c;
  c.medium = medium;
  c.bubbles = bubbles;
  c.alpha.resize(m);
  c.beta.resize(m);
  c.gamma.resize(m);
  c.surface_factor.resize(m);
  c.inertia.resize(m);
  c.coupling = Eigen::MatrixXd::Zero(m, m);
  c.delays = Eigen::MatrixXd::Zero(m, m);

  const double c0 = medium.sound_speed();
  const double a_unit = a_surface_unit_sphere();
  std::vector<double> b_coeff(m);
  for (int i = 0; i < m; ++i) {
    const auto& b = bubbles[i];
    const double ratio = b.rho_c() / b.k_c(); // = rho_c_bar / k_c_bar
    c.alpha[i] = 1.0 / b.rho_c() - 1.0 / medium.rho_m;
    c.beta[i] = 1.0 / b.k_c() - 1.0 / medium.k_m;
    c.gamma[i] = c.beta[i] - c.alpha[i] * ratio;
    // Both surface measures in the interaction factor scale with the
    // physical radius delta*r while the normalization removes one of them,
    // hence the delta^2 against the reference-shape value.
    c.surface_factor[i] =
        b.delta * b.delta * (b.radius_ref * b.radius_ref * a_unit);
    c.inertia[i] =
        0.5 * medium.rho_m * c.alpha[i] * ratio * c.surface_factor[i];
    b_coeff[i] = 0.5 * medium.rho_m * c.alpha[i] *
                 (b.delta * b.delta * b.delta) * ratio;
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const double dist = (bubbles[i].center - bubbles[j].center).norm();
      c.coupling(i, j) = b_coeff[j] / dist;
      c.delays(i, j) = dist / c0;
    }
  return c;
}

/// Minnaert-type resonance frequency of a single bubble: the frequency at
/// which the single-bubble oscillator coefficient equals 1/omega^2 at
/// leading order in delta.
inline double minnaert_frequency(const Medium& medium, const BubbleSpec& b) {
  const double a_ref = b.radius_ref * b.radius_ref * a_surface_unit_sphere();
  return std::sqrt(2.0 * b.k_c_bar / (a_ref * medium.rho_m));
}

struct InversionConditionReport {
  bool satisfied = true;
  double value = 0.0;  // must stay below 1
  double margin = 1.0; // 1 - value
};

/// Well-posedness check for inverting the interaction system.  Uses the
/// sphere eigenvalue 1/3; vacuous for a single bubble.  delta and the
/// reference volume are taken as the worst case over the cluster.
inline InversionConditionReport
check_inversion_condition(const ClusterModel& c) {
  InversionConditionReport r;
  if (c.size() < 2) return r;
  double vol = 0.0, delta = 0.0;
  for (const auto& b : c.bubbles) {
    vol = std::max(vol, b.reference_volume());
    delta = std::max(delta, b.delta);
  }
  const double dmin = c.min_center_distance();
  const double lam = 1.0 / 3.0;
  const double ratio = delta / dmin;
  r.value = c.medium.rho_m / (4.0 * std::numbers::pi) * vol *
            std::pow(ratio, 6.0) / (lam * lam);
  r.satisfied = r.value < 1.0;
  r.margin = 1.0 - r.value;
  return r;
}

struct AprioriConditionReport {
  bool satisfied = true;
  double value = 0.0;
};

/// Stronger a-priori smallness condition on the full contrast sum.  The
/// per-bubble volume and delta enter inside the sum so that heterogeneous
/// clusters are handled; for identical bubbles this reduces to the single
/// prefactor form.
inline AprioriConditionReport check_apriori_condition(const ClusterModel& c) {
  AprioriConditionReport r;
  if (c.size() < 2) return r;
  const double lam = 1.0 / 3.0;
  double worst = 0.0;
  for (int i = 0; i < c.size(); ++i) {
    const double denom = std::abs(1.0 + c.alpha[i] * lam);
    double sum = 0.0;
    for (int j = 0; j < c.size(); ++j) {
      if (j == i) continue;
      const double dist = (c.bubbles[i].center - c.bubbles[j].center).norm();
      sum += c.bubbles[j].reference_volume() *
             std::pow(c.bubbles[j].delta, 6.0) * c.alpha[j] * c.alpha[j] /
             (denom * denom) / std::pow(dist, 6.0);
    }
    worst = std::max(worst, sum);
  }
  r.value = c.medium.rho_m / (4.0 * std::numbers::pi) * worst;
  r.satisfied = r.value < 1.0;
  return r;
}

} // namespace bubblewave

#endif // BUBBLEWAVE_SCENE_HPP
