#ifndef BUBBLEWAVE_PULSE_HPP
#define BUBBLEWAVE_PULSE_HPP

#include <cmath>
#include <numbers>
#include <vector>

#include "bubblewave/errors.hpp"

namespace bubblewave {

enum class PulseKind { CausalPolyExp, RaisedCosineBurst, Zero };

/// Source time signature λ(t).
///
/// All built-in signatures vanish identically for t <= 0 and are at least
/// C^9 across every junction, so that second time derivatives of retarded
/// evaluations stay smooth.  Derivatives up to order 4 are analytic, not
/// finite-differenced.
class Pulse {
public:
  /// λ(t) = amplitude · t^p e^{-a t} for t > 0, zero otherwise.  Requires
  /// p >= 10 (regularity) and a > 0 (decay).
  static Pulse causal_poly_exp(int p, double a, double amplitude = 1.0) {
    if (p < 10) throw InvalidPulse("causal_poly_exp requires p >= 10");
    if (a <= 0.0) throw InvalidPulse("causal_poly_exp requires a > 0");
    Pulse s;
    s.kind_ = PulseKind::CausalPolyExp;
    s.p_ = p;
    s.a_ = a;
    s.amplitude_ = amplitude;
    return s;
  }

  /// Windowed tone burst: sin(2π f (t-t0)) under a sin^10 half-period
  /// envelope supported on [t0, t0 + n_cycles/f].  The envelope vanishes to
  /// order 10 at both ends of the support, so the signature is C^9 on R.
  static Pulse raised_cosine_burst(double frequency, double n_cycles,
                                   double t0, double amplitude = 1.0) {
    if (frequency <= 0.0) throw InvalidPulse("burst requires frequency > 0");
    if (n_cycles <= 0.0) throw InvalidPulse("burst requires n_cycles > 0");
    if (t0 < 0.0) throw InvalidPulse("burst requires t0 >= 0 (causality)");
    Pulse s;
    s.kind_ = PulseKind::RaisedCosineBurst;
    s.frequency_ = frequency;
    s.n_cycles_ = n_cycles;
    s.t0_ = t0;
    s.amplitude_ = amplitude;
    s.duration_ = n_cycles / frequency;
    s.build_burst_table();
    return s;
  }

  static Pulse zero() { return Pulse{}; }

  double operator()(double t) const { return derivative(0, t); }

  /// n-th time derivative, n >= 0 (contract guarantees n <= 4).
  double derivative(int n, double t) const {
    if (n < 0) throw InvalidPulse("derivative order must be >= 0");
    switch (kind_) {
      case PulseKind::Zero:
        return 0.0;
      case PulseKind::CausalPolyExp:
        return poly_exp_derivative(n, t);
      case PulseKind::RaisedCosineBurst:
        return burst_derivative(n, t);
    }
    return 0.0;
  }

  PulseKind kind() const { return kind_; }
  double amplitude() const { return amplitude_; }
  int poly_order() const { return p_; }
  double decay_rate() const { return a_; }
  double frequency() const { return frequency_; }
  double n_cycles() const { return n_cycles_; }
  double start_time() const { return t0_; }

private:
  Pulse() = default;

  static double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * double(n - i) / double(i + 1);
    return r;
  }

  double poly_exp_derivative(int n, double t) const {
    if (t <= 0.0) return 0.0;
    // Leibniz rule on t^p · e^{-a t}.
    double sum = 0.0;
    const int kmax = std::min(n, p_);
    for (int k = 0; k <= kmax; ++k) {
      double falling = 1.0; // p(p-1)...(p-k+1)
      for (int j = 0; j < k; ++j) falling *= double(p_ - j);
      sum += binomial(n, k) * falling * std::pow(t, double(p_ - k)) *
             std::pow(-a_, double(n - k));
    }
    return amplitude_ * std::exp(-a_ * t) * sum;
  }

  // The product sin^10(w_e s)·sin(w_c s) expanded as a finite sum of sines,
  // which makes every derivative another finite sum of sines.
  void build_burst_table() {
    using std::numbers::pi;
    const double we = pi / duration_;
    const double wc = 2.0 * pi * frequency_;
    terms_.clear();
    const double norm = 1.0 / 1024.0; // 2^10
    terms_.push_back({wc, 252.0 * norm});
    const double c[5] = {210.0, 120.0, 45.0, 10.0, 1.0}; // C(10, 5-k)
    for (int k = 1; k <= 5; ++k) {
      const double coeff = ((k % 2) ? -1.0 : 1.0) * c[k - 1] * norm;
      terms_.push_back({wc + 2.0 * k * we, coeff});
      terms_.push_back({wc - 2.0 * k * we, coeff});
    }
  }

  double burst_derivative(int n, double t) const {
    const double s = t - t0_;
    if (s <= 0.0 || s >= duration_) return 0.0;
    const double phase = 0.5 * std::numbers::pi * double(n % 4);
    double sum = 0.0;
    for (const auto& term : terms_)
      sum += term.coeff * std::pow(term.mu, double(n)) *
             std::sin(term.mu * s + phase);
    return amplitude_ * sum;
  }

  struct SineTerm {
    double mu;
    double coeff;
  };

  PulseKind kind_ = PulseKind::Zero;
  double amplitude_ = 1.0;
  // causal_poly_exp
  int p_ = 0;
  double a_ = 0.0;
  // raised_cosine_burst
  double frequency_ = 0.0;
  double n_cycles_ = 0.0;
  double t0_ = 0.0;
  double duration_ = 0.0;
  std::vector<SineTerm> terms_;
};

} // namespace bubblewave

#endif // BUBBLEWAVE_PULSE_HPP
