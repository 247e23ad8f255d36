#ifndef BUBBLEWAVE_DYNAMICS_HPP
#define BUBBLEWAVE_DYNAMICS_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "bubblewave/errors.hpp"
#include "bubblewave/incident.hpp"
#include "bubblewave/scene.hpp"
#include "bubblewave/time_quadrature.hpp"

namespace bubblewave {

using RhsFunction = std::function<Eigen::VectorXd(double)>;

namespace detail {

inline int grid_points(double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0))
    throw NonPositiveParameter("time horizon and step must be > 0");
  return int(std::ceil(T / dt - 1e-9)) + 1;
}

/// Cubic Lagrange interpolation of uniform samples fetched through `sample`,
/// with the four-point stencil clamped to the available range.
template <class Fetch>
double lagrange_cubic(Fetch&& sample, int n_avail, double h, double t) {
  if (n_avail <= 1) return n_avail == 1 ? sample(0) : 0.0;
  if (n_avail < 4) { // linear fallback; not reached under solver preconditions
    const int k = std::clamp(int(std::floor(t / h)), 0, n_avail - 2);
    const double s = t / h - k;
    return (1.0 - s) * sample(k) + s * sample(k + 1);
  }
  const int k = int(std::floor(t / h));
  const int lo = std::clamp(k - 1, 0, n_avail - 4);
  const double s = t / h - lo;
  const double l0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
  const double l1 = s * (s - 2.0) * (s - 3.0) / 2.0;
  const double l2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
  const double l3 = s * (s - 1.0) * (s - 2.0) / 6.0;
  return l0 * sample(lo) + l1 * sample(lo + 1) + l2 * sample(lo + 2) +
         l3 * sample(lo + 3);
}

/// Cubic Hermite interpolation from samples of a function and its derivative.
template <class FetchY, class FetchV>
double hermite_cubic(FetchY&& y, FetchV&& v, int n_avail, double h, double t) {
  if (n_avail <= 1) return n_avail == 1 ? y(0) : 0.0;
  const int k = std::clamp(int(std::floor(t / h)), 0, n_avail - 2);
  const double s = t / h - k;
  const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
  const double h10 = s * (1.0 - s) * (1.0 - s);
  const double h01 = s * s * (3.0 - 2.0 * s);
  const double h11 = s * s * (s - 1.0);
  return h00 * y(k) + h10 * h * v(k) + h01 * y(k + 1) + h11 * h * v(k + 1);
}

} // namespace detail

/// Dense-output solution of the amplitude system on a uniform grid.
/// Stores Y, Y' and Y'' samples; Y'' is interpolated directly rather than
/// obtained by differentiating the Y interpolant.
struct AmplitudeSolution {
  double dt = 0.0;
  double duration = 0.0;
  std::vector<double> t;  // grid, t[n] = n*dt
  Eigen::MatrixXd y;      // M x N
  Eigen::MatrixXd y_dot;  // M x N
  Eigen::MatrixXd y_ddot; // M x N

  double residual_max = 0.0; // equation residual of the dense output
  double rhs_max = 0.0;      // max |rhs| seen; tolerance reference
  std::vector<std::string> warnings;

  int size() const { return int(y.rows()); }
  int steps() const { return int(y.cols()); }
  bool covers(double time) const { return time <= duration + 1e-12 * dt; }

  /// Y_i(time); zero for time < 0, clamped to the final sample beyond T.
  double value(int i, double time) const {
    if (time <= 0.0) return 0.0;
    if (time >= duration) return y(i, steps() - 1);
    return detail::hermite_cubic([&](int n) { return y(i, n); },
                                 [&](int n) { return y_dot(i, n); }, steps(),
                                 dt, time);
  }

  double velocity(int i, double time) const {
    if (time <= 0.0) return 0.0;
    if (time >= duration) return y_dot(i, steps() - 1);
    return detail::hermite_cubic([&](int n) { return y_dot(i, n); },
                                 [&](int n) { return y_ddot(i, n); }, steps(),
                                 dt, time);
  }

  double acceleration(int i, double time) const {
    if (time <= 0.0) return 0.0;
    if (time >= duration) return y_ddot(i, steps() - 1);
    return detail::lagrange_cubic([&](int n) { return y_ddot(i, n); }, steps(),
                                  dt, time);
  }
};

/// Zero-delay interaction matrix A = diag(d_i) - Q.
inline Eigen::MatrixXd zero_delay_matrix(const ClusterModel& c) {
  Eigen::MatrixXd a = -c.coupling;
  for (int i = 0; i < c.size(); ++i) a(i, i) = c.inertia[size_t(i)];
  return a;
}

/// Solve A·Y'' + Y = rhs(t), Y(0) = Y'(0) = 0, by first-order reduction and
/// fixed-step RK4.
inline AmplitudeSolution solve_dense_system(const Eigen::MatrixXd& a,
                                            const RhsFunction& rhs, double T,
                                            double dt) {
  const int m = int(a.rows());
  if (a.cols() != m) throw Error("system matrix must be square");
  const int n = detail::grid_points(T, dt);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible())
    throw SingularMatrix("zero-delay system matrix is not invertible");

  AmplitudeSolution sol;
  sol.dt = dt;
  sol.duration = (n - 1) * dt;
  sol.t.resize(n);
  for (int k = 0; k < n; ++k) sol.t[k] = k * dt;
  sol.y = Eigen::MatrixXd::Zero(m, n);
  sol.y_dot = Eigen::MatrixXd::Zero(m, n);
  sol.y_ddot = Eigen::MatrixXd::Zero(m, n);

  double rhs_max = 0.0;
  auto accel = [&](double time, const Eigen::VectorXd& yv) -> Eigen::VectorXd {
    Eigen::VectorXd r = rhs(time);
    rhs_max = std::max(rhs_max, r.lpNorm<Eigen::Infinity>());
    return lu.solve(r - yv);
  };

  sol.y_ddot.col(0) = accel(0.0, sol.y.col(0));
  for (int k = 0; k + 1 < n; ++k) {
    const double time = k * dt;
    const Eigen::VectorXd yk = sol.y.col(k), vk = sol.y_dot.col(k);
    const Eigen::VectorXd k1v = accel(time, yk);
    const Eigen::VectorXd k1y = vk;
    const Eigen::VectorXd k2v = accel(time + 0.5 * dt, yk + 0.5 * dt * k1y);
    const Eigen::VectorXd k2y = vk + 0.5 * dt * k1v;
    const Eigen::VectorXd k3v = accel(time + 0.5 * dt, yk + 0.5 * dt * k2y);
    const Eigen::VectorXd k3y = vk + 0.5 * dt * k2v;
    const Eigen::VectorXd k4v = accel(time + dt, yk + dt * k3y);
    const Eigen::VectorXd k4y = vk + dt * k3v;
    sol.y.col(k + 1) = yk + dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    sol.y_dot.col(k + 1) = vk + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    sol.y_ddot.col(k + 1) = accel((k + 1) * dt, sol.y.col(k + 1));
  }

  // Substitute the dense output back at interval midpoints (at the nodes the
  // stored acceleration satisfies the equation by construction).
  double resid = 0.0;
  for (int k = 0; k + 1 < n; ++k) {
    const double tm = (k + 0.5) * dt;
    Eigen::VectorXd ym(m), am(m);
    for (int i = 0; i < m; ++i) {
      ym(i) = sol.value(i, tm);
      am(i) = sol.acceleration(i, tm);
    }
    const Eigen::VectorXd res = a * am + ym - rhs(tm);
    resid = std::max(resid, res.lpNorm<Eigen::Infinity>());
  }
  sol.residual_max = resid;
  sol.rhs_max = rhs_max;
  return sol;
}

/// Method-of-steps solver for the delay-coupled amplitude system
///   d_i Y_i''(t) + Y_i(t) - Σ_{j≠i} q_ij Y_j''(t - τ_ij) = rhs_i(t),
/// zero history.  Delayed accelerations are read from the stored Y'' samples
/// via cubic interpolation; couplings with zero delay (artificially zeroed
/// delay matrices) are folded into the left-hand matrix so that the delay
/// and dense solvers coincide in that limit.
inline AmplitudeSolution solve_delay_system(const ClusterModel& c,
                                            const RhsFunction& rhs, double T,
                                            double dt) {
  const int m = c.size();
  for (int i = 0; i < m; ++i)
    if (c.inertia[size_t(i)] <= 0.0)
      throw NonPositiveStiffness("oscillator coefficient d_" +
                                 std::to_string(i) + " <= 0");
  const double tau_min = c.min_positive_delay();
  if (m > 1 && std::isfinite(tau_min) && dt >= 0.25 * tau_min)
    throw StepTooLarge("dt must be < min positive delay / 4");
  const int n = detail::grid_points(T, dt);

  Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(m, m);
  bool any_delayed = false;
  for (int i = 0; i < m; ++i) {
    lhs(i, i) = c.inertia[size_t(i)];
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      if (c.delays(i, j) == 0.0)
        lhs(i, j) -= c.coupling(i, j);
      else
        any_delayed = true;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(lhs);
  if (!lu.isInvertible())
    throw SingularMatrix("instantaneous coupling matrix is not invertible");

  AmplitudeSolution sol;
  sol.dt = dt;
  sol.duration = (n - 1) * dt;
  sol.t.resize(n);
  for (int k = 0; k < n; ++k) sol.t[k] = k * dt;
  sol.y = Eigen::MatrixXd::Zero(m, n);
  sol.y_dot = Eigen::MatrixXd::Zero(m, n);
  sol.y_ddot = Eigen::MatrixXd::Zero(m, n);

  int avail = 1; // stored acceleration samples usable as history
  auto delayed_accel = [&](int j, double time) -> double {
    if (time <= 0.0) return 0.0;
    return detail::lagrange_cubic([&](int k) { return sol.y_ddot(j, k); },
                                  avail, dt, time);
  };
  double rhs_max = 0.0;
  auto accel = [&](double time, const Eigen::VectorXd& yv) -> Eigen::VectorXd {
    Eigen::VectorXd r = rhs(time);
    rhs_max = std::max(rhs_max, r.lpNorm<Eigen::Infinity>());
    if (any_delayed) {
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          if (i == j || c.delays(i, j) == 0.0) continue;
          r(i) += c.coupling(i, j) * delayed_accel(j, time - c.delays(i, j));
        }
    }
    return lu.solve(r - yv);
  };

  sol.y_ddot.col(0) = accel(0.0, sol.y.col(0));
  for (int k = 0; k + 1 < n; ++k) {
    const double time = k * dt;
    avail = k + 1;
    const Eigen::VectorXd yk = sol.y.col(k), vk = sol.y_dot.col(k);
    const Eigen::VectorXd k1v = accel(time, yk);
    const Eigen::VectorXd k1y = vk;
    const Eigen::VectorXd k2v = accel(time + 0.5 * dt, yk + 0.5 * dt * k1y);
    const Eigen::VectorXd k2y = vk + 0.5 * dt * k1v;
    const Eigen::VectorXd k3v = accel(time + 0.5 * dt, yk + 0.5 * dt * k2y);
    const Eigen::VectorXd k3y = vk + 0.5 * dt * k2v;
    const Eigen::VectorXd k4v = accel(time + dt, yk + dt * k3y);
    const Eigen::VectorXd k4y = vk + dt * k3v;
    sol.y.col(k + 1) = yk + dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    sol.y_dot.col(k + 1) = vk + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    sol.y_ddot.col(k + 1) = accel((k + 1) * dt, sol.y.col(k + 1));
  }
  avail = n;

  double resid = 0.0;
  for (int k = 0; k + 1 < n; ++k) {
    const double tm = (k + 0.5) * dt;
    Eigen::VectorXd res = -rhs(tm);
    for (int i = 0; i < m; ++i) {
      res(i) += c.inertia[size_t(i)] * sol.acceleration(i, tm) +
                sol.value(i, tm);
      for (int j = 0; j < m; ++j) {
        if (i == j) continue;
        const double s = tm - c.delays(i, j);
        if (s > 0.0) res(i) -= c.coupling(i, j) * sol.acceleration(j, s);
      }
    }
    resid = std::max(resid, res.lpNorm<Eigen::Infinity>());
  }
  sol.residual_max = resid;
  sol.rhs_max = rhs_max;
  if (resid > 1e-6 * std::max(rhs_max, 1e-300))
    sol.warnings.push_back("dense-output residual exceeds 1e-6 * max|rhs|");
  return sol;
}

/// Convenience overload: forcing assembled from the incident field.
inline AmplitudeSolution
solve_delay_system(const ClusterModel& c, const IncidentField& f, double T,
                   double dt, ForcingModel model = ForcingModel::Monopole) {
  validate_source_position(c, f.source());
  auto inversion = check_inversion_condition(c);
  auto sol = solve_delay_system(
      c, [&](double t) { return rhs_vector(f, c, t, model); }, T, dt);
  if (!inversion.satisfied)
    sol.warnings.push_back("inversion condition violated (value = " +
                           std::to_string(inversion.value) + ")");
  return sol;
}

/// Eigenstructure of the zero-delay matrix for the symmetric special cases.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;    // s^2
  Eigen::MatrixXd modes;          // P, columns are eigenvectors
  Eigen::MatrixXd modes_inverse;  // P^{-1}

  Eigen::MatrixXd reconstruct() const {
    return modes * eigenvalues.asDiagonal() * modes_inverse;
  }
};

namespace detail {

inline void require_identical_bubbles(const ClusterModel& c) {
  const auto& b0 = c.bubbles.front();
  auto near_rel = [](double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max(std::abs(x), std::abs(y));
  };
  for (const auto& b : c.bubbles)
    if (!near_rel(b.delta, b0.delta) || !near_rel(b.radius_ref, b0.radius_ref) ||
        !near_rel(b.rho_c_bar, b0.rho_c_bar) || !near_rel(b.k_c_bar, b0.k_c_bar))
      throw NotIdentical("bubbles must share delta, radius and contrasts");
}

} // namespace detail

/// Two identical bubbles: eigenvalues d1 -/+ q12 with the symmetric mode
/// first.  The off-diagonal coupling enters with a minus sign in the system
/// matrix, so the symmetric mode (1,1) carries the smaller eigenvalue.
inline SpectralDecomposition decompose_dimer(const ClusterModel& c) {
  if (c.size() != 2) throw NotADimer("expected exactly 2 bubbles");
  detail::require_identical_bubbles(c);
  const double d = c.inertia[0];
  const double q = c.coupling(0, 1);
  SpectralDecomposition dec;
  dec.eigenvalues = Eigen::Vector2d(d - q, d + q);
  dec.modes = Eigen::Matrix2d{{1.0, -1.0}, {1.0, 1.0}};
  dec.modes_inverse = 0.5 * Eigen::Matrix2d{{1.0, 1.0}, {-1.0, 1.0}};
  return dec;
}

/// Four identical, pairwise equidistant bubbles (regular tetrahedron):
/// eigenvalues {d1 - 3 q12, d1 + q12 (x3)}.
inline SpectralDecomposition decompose_tetramer(const ClusterModel& c) {
  if (c.size() != 4) throw NotEquidistant("expected exactly 4 bubbles");
  detail::require_identical_bubbles(c);
  double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const double dist = (c.bubbles[i].center - c.bubbles[j].center).norm();
      dmin = std::min(dmin, dist);
      dmax = std::max(dmax, dist);
    }
  if (dmax - dmin > 1e-9 * dmax)
    throw NotEquidistant("centers are not pairwise equidistant");
  const double d = c.inertia[0];
  const double q = c.coupling(0, 1);
  SpectralDecomposition dec;
  dec.eigenvalues = Eigen::Vector4d(d - 3.0 * q, d + q, d + q, d + q);
  dec.modes = Eigen::Matrix4d{{1.0, -1.0, -1.0, -1.0},
                              {1.0, 0.0, 0.0, 1.0},
                              {1.0, 0.0, 1.0, 0.0},
                              {1.0, 1.0, 0.0, 0.0}};
  dec.modes_inverse = 0.25 * Eigen::Matrix4d{{1.0, 1.0, 1.0, 1.0},
                                             {-1.0, -1.0, -1.0, 3.0},
                                             {-1.0, -1.0, 3.0, -1.0},
                                             {-1.0, 3.0, -1.0, -1.0}};
  return dec;
}

/// Modal response Z(t) = λ^{-1/2} ∫_0^t sin(λ^{-1/2}(t-τ)) g(τ) dτ on a
/// uniform grid, i.e. the zero-initial-data solution of λ Z'' + Z = g.
struct ModeResponse {
  double dt = 0.0;
  std::vector<double> t;
  std::vector<double> z;
  std::vector<double> z_dot;
  std::vector<double> z_ddot;
};

namespace detail {

inline ModeResponse duhamel_from_samples(double lambda,
                                         const std::vector<double>& g,
                                         double dt) {
  if (lambda <= 0.0)
    throw NonPositiveEigenvalue("modal eigenvalue must be > 0");
  const int n = int(g.size());
  const double omega = 1.0 / std::sqrt(lambda);
  std::vector<double> cos_g(n), sin_g(n);
  for (int k = 0; k < n; ++k) {
    cos_g[k] = std::cos(omega * k * dt) * g[size_t(k)];
    sin_g[k] = std::sin(omega * k * dt) * g[size_t(k)];
  }
  const auto big_c = cumulative_simpson(cos_g, dt);
  const auto big_s = cumulative_simpson(sin_g, dt);
  ModeResponse r;
  r.dt = dt;
  r.t.resize(n);
  r.z.resize(n);
  r.z_dot.resize(n);
  r.z_ddot.resize(n);
  for (int k = 0; k < n; ++k) {
    const double wt = omega * k * dt;
    r.t[k] = k * dt;
    r.z[k] = omega * (std::sin(wt) * big_c[k] - std::cos(wt) * big_s[k]);
    r.z_dot[k] =
        omega * omega * (std::cos(wt) * big_c[k] + std::sin(wt) * big_s[k]);
    r.z_ddot[k] = (g[size_t(k)] - r.z[k]) / lambda;
  }
  return r;
}

} // namespace detail

inline ModeResponse duhamel_solve(double lambda,
                                  const std::function<double(double)>& g,
                                  double T, double dt) {
  const int n = detail::grid_points(T, dt);
  std::vector<double> samples(n);
  for (int k = 0; k < n; ++k) samples[size_t(k)] = g(k * dt);
  return detail::duhamel_from_samples(lambda, samples, dt);
}

namespace detail {

/// Shared assembly for the modal closed forms: transform the forcing with
/// P^{-1}, solve each mode by Duhamel quadrature, map back with P.
inline AmplitudeSolution
closed_form_modal(const ClusterModel& c, const SpectralDecomposition& dec,
                  const IncidentField& f, double T, double dt,
                  ForcingModel model) {
  validate_source_position(c, f.source());
  const int m = c.size();
  const int n = grid_points(T, dt);

  Eigen::MatrixXd rhs_samples(m, n);
  for (int k = 0; k < n; ++k)
    rhs_samples.col(k) = rhs_vector(f, c, k * dt, model);
  const Eigen::MatrixXd g = dec.modes_inverse * rhs_samples;

  AmplitudeSolution sol;
  sol.dt = dt;
  sol.duration = (n - 1) * dt;
  sol.t.resize(n);
  for (int k = 0; k < n; ++k) sol.t[k] = k * dt;
  sol.y = Eigen::MatrixXd::Zero(m, n);
  sol.y_dot = Eigen::MatrixXd::Zero(m, n);
  sol.y_ddot = Eigen::MatrixXd::Zero(m, n);

  for (int mode = 0; mode < m; ++mode) {
    std::vector<double> gk(size_t(n), 0.0);
    for (int k = 0; k < n; ++k) gk[size_t(k)] = g(mode, k);
    const ModeResponse zr =
        duhamel_from_samples(dec.eigenvalues(mode), gk, dt);
    for (int i = 0; i < m; ++i) {
      const double p = dec.modes(i, mode);
      if (p == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        sol.y(i, k) += p * zr.z[size_t(k)];
        sol.y_dot(i, k) += p * zr.z_dot[size_t(k)];
        sol.y_ddot(i, k) += p * zr.z_ddot[size_t(k)];
      }
    }
  }

  // Algebraic substitution check at the nodes.
  const Eigen::MatrixXd a = dec.reconstruct();
  double resid = 0.0, rhs_max = 0.0;
  for (int k = 0; k < n; ++k) {
    const Eigen::VectorXd res =
        a * sol.y_ddot.col(k) + sol.y.col(k) - rhs_samples.col(k);
    resid = std::max(resid, res.lpNorm<Eigen::Infinity>());
    rhs_max = std::max(rhs_max, rhs_samples.col(k).lpNorm<Eigen::Infinity>());
  }
  sol.residual_max = resid;
  sol.rhs_max = rhs_max;
  const auto inversion = check_inversion_condition(c);
  if (!inversion.satisfied)
    sol.warnings.push_back("inversion condition violated (value = " +
                           std::to_string(inversion.value) + ")");
  return sol;
}

} // namespace detail

/// Zero-delay closed form for an identical-bubble dimer.
inline AmplitudeSolution
closed_form_dimer(const ClusterModel& c, const IncidentField& f, double T,
                  double dt, ForcingModel model = ForcingModel::Monopole) {
  return detail::closed_form_modal(c, decompose_dimer(c), f, T, dt, model);
}

/// Zero-delay closed form for the regular-tetrahedron cluster.
inline AmplitudeSolution
closed_form_tetramer(const ClusterModel& c, const IncidentField& f, double T,
                     double dt, ForcingModel model = ForcingModel::Monopole) {
  return detail::closed_form_modal(c, decompose_tetramer(c), f, T, dt, model);
}

namespace detail {

inline void validate_pairing(const ClusterModel& c,
                             const std::vector<std::pair<int, int>>& pairing,
                             double intra_inter_threshold) {
  const int m = c.size();
  if (m % 2 != 0 || int(pairing.size()) * 2 != m)
    throw BadPairing("pairing must cover an even number of bubbles exactly");
  std::vector<bool> used(size_t(m), false);
  for (const auto& [a, b] : pairing) {
    if (a < 0 || b < 0 || a >= m || b >= m || a == b)
      throw BadPairing("pair indices out of range");
    if (used[size_t(a)] || used[size_t(b)])
      throw BadPairing("pairs overlap");
    used[size_t(a)] = used[size_t(b)] = true;
  }

  double intra_max = 0.0;
  for (const auto& [a, b] : pairing)
    intra_max = std::max(
        intra_max, (c.bubbles[size_t(a)].center - c.bubbles[size_t(b)].center).norm());
  double inter_min = std::numeric_limits<double>::infinity();
  for (size_t p = 0; p < pairing.size(); ++p)
    for (size_t r = p + 1; r < pairing.size(); ++r)
      for (int i : {pairing[p].first, pairing[p].second})
        for (int j : {pairing[r].first, pairing[r].second})
          inter_min = std::min(
              inter_min,
              (c.bubbles[size_t(i)].center - c.bubbles[size_t(j)].center).norm());
  if (pairing.size() > 1 && intra_max / inter_min >= intra_inter_threshold)
    throw BadPairing("intra/inter distance ratio too large for block solve");
}

} // namespace detail

/// Block-diagonal approximation for a collection of well-separated dimers:
/// each pair is solved independently by the dimer closed form, discarding
/// inter-pair couplings.
inline AmplitudeSolution
solve_dimer_collection(const ClusterModel& c,
                       const std::vector<std::pair<int, int>>& pairing,
                       const IncidentField& f, double T, double dt,
                       double intra_inter_threshold = 0.1,
                       ForcingModel model = ForcingModel::Monopole) {
  const int m = c.size();
  detail::validate_pairing(c, pairing, intra_inter_threshold);

  const int n = detail::grid_points(T, dt);
  AmplitudeSolution sol;
  sol.dt = dt;
  sol.duration = (n - 1) * dt;
  sol.t.resize(n);
  for (int k = 0; k < n; ++k) sol.t[k] = k * dt;
  sol.y = Eigen::MatrixXd::Zero(m, n);
  sol.y_dot = Eigen::MatrixXd::Zero(m, n);
  sol.y_ddot = Eigen::MatrixXd::Zero(m, n);

  for (const auto& [a, b] : pairing) {
    const ClusterModel block = build_cluster(
        c.medium, {c.bubbles[size_t(a)], c.bubbles[size_t(b)]});
    const AmplitudeSolution part = closed_form_dimer(block, f, T, dt, model);
    const int idx[2] = {a, b};
    for (int loc = 0; loc < 2; ++loc) {
      sol.y.row(idx[loc]) = part.y.row(loc);
      sol.y_dot.row(idx[loc]) = part.y_dot.row(loc);
      sol.y_ddot.row(idx[loc]) = part.y_ddot.row(loc);
    }
    sol.residual_max = std::max(sol.residual_max, part.residual_max);
    sol.rhs_max = std::max(sol.rhs_max, part.rhs_max);
    for (const auto& w : part.warnings)
      if (sol.warnings.empty() || sol.warnings.back() != w)
        sol.warnings.push_back(w);
  }
  return sol;
}

} // namespace bubblewave

#endif // BUBBLEWAVE_DYNAMICS_HPP
