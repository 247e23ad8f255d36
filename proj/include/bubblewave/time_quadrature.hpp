#ifndef BUBBLEWAVE_TIME_QUADRATURE_HPP
#define BUBBLEWAVE_TIME_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "bubblewave/errors.hpp"

namespace bubblewave {
namespace detail {

/// Cumulative integral of uniformly sampled values, prefix[n] = ∫ over the
/// first n intervals.  Composite Simpson on two interleaved chains (anchored
/// at index 0 and 1) keeps fourth-order accuracy at every index, not just
/// even ones; the first odd increment uses the quadratic through the first
/// three samples.
inline std::vector<double> cumulative_simpson(const std::vector<double>& f,
                                              double h) {
  const size_t n = f.size();
  std::vector<double> prefix(n, 0.0);
  if (n < 2) return prefix;
  if (n == 2) {
    prefix[1] = 0.5 * h * (f[0] + f[1]);
    return prefix;
  }
  prefix[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
  for (size_t k = 2; k < n; ++k)
    prefix[k] = prefix[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
  return prefix;
}

/// Running evaluation of V(T) = ∫_0^T sin(omega·(T − τ)) g(τ) dτ for a
/// nondecreasing sequence of query times.  The kernel is split through the
/// angle-addition identity so that only two running integrals of g against
/// cos(ωτ) and sin(ωτ) are maintained; each full step and the final partial
/// interval use single-interval Simpson with a midpoint evaluation of g.
class SineConvolution {
public:
  SineConvolution(double omega, std::function<double(double)> g, double step)
      : omega_(omega), g_(std::move(g)), h_(step) {
    if (!(step > 0.0)) throw NonPositiveParameter("SineConvolution: step <= 0");
    g_prev_ = g_(0.0);
  }

  /// Value at time T; successive calls must not decrease T.
  double at(double T) {
    if (T <= 0.0) return 0.0;
    while ((steps_ + 1) * h_ <= T) advance_full_step();
    const double t0 = steps_ * h_;
    double c = cos_int_, s = sin_int_;
    if (T > t0) {
      const double width = T - t0;
      const double tm = t0 + 0.5 * width;
      const double gm = g_(tm), g1 = g_(T);
      c += width / 6.0 *
           (std::cos(omega_ * t0) * g_prev_ + 4.0 * std::cos(omega_ * tm) * gm +
            std::cos(omega_ * T) * g1);
      s += width / 6.0 *
           (std::sin(omega_ * t0) * g_prev_ + 4.0 * std::sin(omega_ * tm) * gm +
            std::sin(omega_ * T) * g1);
    }
    return std::sin(omega_ * T) * c - std::cos(omega_ * T) * s;
  }

private:
  void advance_full_step() {
    const double t0 = steps_ * h_;
    const double t1 = t0 + h_;
    const double tm = t0 + 0.5 * h_;
    const double gm = g_(tm), g1 = g_(t1);
    cos_int_ += h_ / 6.0 *
                (std::cos(omega_ * t0) * g_prev_ +
                 4.0 * std::cos(omega_ * tm) * gm + std::cos(omega_ * t1) * g1);
    sin_int_ += h_ / 6.0 *
                (std::sin(omega_ * t0) * g_prev_ +
                 4.0 * std::sin(omega_ * tm) * gm + std::sin(omega_ * t1) * g1);
    g_prev_ = g1;
    ++steps_;
  }

  double omega_;
  std::function<double(double)> g_;
  double h_;
  long steps_ = 0;
  double cos_int_ = 0.0; // ∫ cos(ωτ) g(τ) dτ up to steps_*h
  double sin_int_ = 0.0; // ∫ sin(ωτ) g(τ) dτ up to steps_*h
  double g_prev_ = 0.0;
};

} // namespace detail
} // namespace bubblewave

#endif // BUBBLEWAVE_TIME_QUADRATURE_HPP
