#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace urcc {

/**
 * Real coefficient waveform h(t) = (a + b t) * trig(omega t), with trig one of
 * {1, cos, sin}. This closed family covers constants, cos/sin drives, linear
 * ramps, and ramp-modulated drives, and admits exact antiderivatives, exact
 * zero locations (so |h| and max(±h, 0) integrate piecewise exactly), and an
 * analytic sup bound tight enough for rejection sampling.
 */
class CoeffWaveform {
 public:
  enum class Trig { None, Cos, Sin };

  CoeffWaveform() : a_(0), b_(0), trig_(Trig::None), omega_(0) {}
  CoeffWaveform(double a, double b, Trig trig, double omega)
      : a_(a), b_(b), trig_(trig), omega_(omega) {
    if (trig != Trig::None && omega == 0.0)
      throw std::invalid_argument("CoeffWaveform: zero frequency with trig kind");
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(omega))
      throw std::invalid_argument("CoeffWaveform: non-finite parameter");
  }

  static CoeffWaveform constant(double amplitude) {
    return CoeffWaveform(amplitude, 0, Trig::None, 0);
  }
  static CoeffWaveform cosine(double amplitude, double omega) {
    return CoeffWaveform(amplitude, 0, Trig::Cos, omega);
  }
  static CoeffWaveform sine(double amplitude, double omega) {
    return CoeffWaveform(amplitude, 0, Trig::Sin, omega);
  }
  /// a + b t
  static CoeffWaveform linear_ramp(double offset, double slope) {
    return CoeffWaveform(offset, slope, Trig::None, 0);
  }
  /// (a + b t) * cos/sin(omega t)
  static CoeffWaveform ramp_product(double offset, double slope, Trig trig, double omega) {
    return CoeffWaveform(offset, slope, trig, omega);
  }

  double offset() const { return a_; }
  double slope() const { return b_; }
  Trig trig() const { return trig_; }
  double omega() const { return omega_; }

  double evaluate(double t) const {
    const double lin = a_ + b_ * t;
    switch (trig_) {
      case Trig::None: return lin;
      case Trig::Cos: return lin * std::cos(omega_ * t);
      case Trig::Sin: return lin * std::sin(omega_ * t);
    }
    return 0;
  }

  /// Signed antiderivative difference: ∫_x^y h(t) dt, closed form.
  double integrate_signed(double x, double y) const { return antiderivative(y) - antiderivative(x); }

  /// ∫_x^y |h(t)| dt, exact via piecewise integration between analytic zeros.
  double integrate_abs(double x, double y) const {
    double total = 0;
    for_each_sign_piece(x, y, [&](double u, double v, int sgn) {
      total += sgn * integrate_signed(u, v);
    });
    return total;
  }

  /// ∫_x^y max(sign * h(t), 0) dt, exact; sign is +1 or -1.
  double integrate_positive_part(double x, double y, int sign) const {
    double total = 0;
    for_each_sign_piece(x, y, [&](double u, double v, int sgn) {
      if (sgn == sign) total += sgn * integrate_signed(u, v);
    });
    return total;
  }

  /**
   * Analytic bound on sup |h| over [x, y]. The interval is cut at an eighth-of-
   * half-period grid (where |trig| is monotone) and at the linear zero; on each
   * piece the bound is (endpoint max of |linear|) * (endpoint max of |trig|).
   */
  double upper_bound(double x, double y) const {
    if (y < x) throw std::invalid_argument("CoeffWaveform::upper_bound: empty interval");
    if (trig_ == Trig::None) return std::max(std::abs(a_ + b_ * x), std::abs(a_ + b_ * y));
    const double step = M_PI / (8.0 * std::abs(omega_));
    if ((y - x) / step >= 65536.0) {
      // Too many oscillations to subdivide; |trig| <= 1 is still a valid bound.
      double lin = std::max(std::abs(a_ + b_ * x), std::abs(a_ + b_ * y));
      return lin;
    }
    std::vector<double> pts = grid_points(x, y, step);
    double best = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const double u = pts[i], v = pts[i + 1];
      const double lin = std::max(std::abs(a_ + b_ * u), std::abs(a_ + b_ * v));
      const double tg = std::max(std::abs(trig_value(u)), std::abs(trig_value(v)));
      best = std::max(best, lin * tg);
    }
    return best;
  }

  /// Zeros of h in [x, y], ascending; sign changes happen only at these points.
  std::vector<double> zeros(double x, double y) const {
    std::vector<double> zs;
    if (b_ != 0) {
      const double t0 = -a_ / b_;
      if (t0 > x && t0 < y) zs.push_back(t0);
    }
    if (trig_ != Trig::None) {
      const double w = omega_;
      // sin: k*pi/w ; cos: (k+1/2)*pi/w
      const double shift = trig_ == Trig::Cos ? 0.5 : 0.0;
      const double step = M_PI / std::abs(w);
      double k = std::ceil(x * std::abs(w) / M_PI - shift);
      for (double t = (k + shift) * step; t < y; k += 1.0, t = (k + shift) * step)
        if (t > x) zs.push_back(t);
    }
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
    return zs;
  }

 private:
  double antiderivative(double t) const {
    const double lin = a_ + b_ * t;
    switch (trig_) {
      case Trig::None:
        return a_ * t + 0.5 * b_ * t * t;
      case Trig::Cos:
        return lin * std::sin(omega_ * t) / omega_ + b_ * std::cos(omega_ * t) / (omega_ * omega_);
      case Trig::Sin:
        return -lin * std::cos(omega_ * t) / omega_ + b_ * std::sin(omega_ * t) / (omega_ * omega_);
    }
    return 0;
  }

  double trig_value(double t) const {
    switch (trig_) {
      case Trig::None: return 1;
      case Trig::Cos: return std::cos(omega_ * t);
      case Trig::Sin: return std::sin(omega_ * t);
    }
    return 0;
  }

  template <typename F>
  void for_each_sign_piece(double x, double y, F&& f) const {
    if (y < x) throw std::invalid_argument("CoeffWaveform: empty interval");
    if (y == x) return;
    std::vector<double> cuts = zeros(x, y);
    double prev = x;
    auto emit = [&](double u, double v) {
      if (v <= u) return;
      const double mid = 0.5 * (u + v);
      f(u, v, evaluate(mid) >= 0 ? 1 : -1);
    };
    for (double c : cuts) {
      emit(prev, c);
      prev = c;
    }
    emit(prev, y);
  }

  /// Aligned grid of multiples of `step`, clipped to [x, y], plus endpoints and
  /// the linear zero.
  std::vector<double> grid_points(double x, double y, double step) const {
    std::vector<double> pts{x, y};
    if (b_ != 0) {
      const double t0 = -a_ / b_;
      if (t0 > x && t0 < y) pts.push_back(t0);
    }
    if (step > 0 && (y - x) / step < 65536.0) {
      for (double k = std::ceil(x / step); k * step < y; k += 1.0)
        if (k * step > x) pts.push_back(k * step);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
  }

  double a_, b_;
  Trig trig_;
  double omega_;
};

}  // namespace urcc
