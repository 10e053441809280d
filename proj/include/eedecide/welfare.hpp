#pragma once

// Atkinson-family welfare transforms and egalitarian-equivalent (EE) aggregation.
//
// For inequality aversion gamma >= 0 the transform is
//   f(y) = y^(1-gamma) / (1-gamma)   (gamma != 1)
//   f(y) = ln y                      (gamma == 1)
// and the egalitarian equivalent of incomes y_1..y_n is f^-1(mean f(y_i)):
// gamma = 0 gives the arithmetic mean, 1 the geometric mean, 2 the harmonic mean.

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <string>

#include "eedecide/errors.hpp"

namespace eedecide {

class WelfareSpec {
 public:
  // gamma within this distance of 1 is evaluated on the logarithmic branch.
  static constexpr double kLogSnap = 1e-9;

  explicit WelfareSpec(double gamma = 0.0) : gamma_(gamma) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
      std::ostringstream msg;
      msg << "inequality aversion must be finite and >= 0, got " << gamma;
      throw ArgumentError(msg.str());
    }
    if (std::abs(gamma - 1.0) < kLogSnap) gamma_ = 1.0;
  }

  double gamma() const noexcept { return gamma_; }
  bool is_log() const noexcept { return gamma_ == 1.0; }
  bool is_linear() const noexcept { return gamma_ == 0.0; }
  // Zero incomes are admissible only when f(0) is finite.
  bool admits_zero() const noexcept { return gamma_ < 1.0; }

 private:
  double gamma_;
};

namespace detail {

inline void check_income(const WelfareSpec& spec, double y) {
  if (!std::isfinite(y) || y < 0.0 || (y == 0.0 && !spec.admits_zero())) {
    std::ostringstream msg;
    msg << "income " << y << " outside the domain of the welfare transform (gamma="
        << spec.gamma() << ")";
    throw DomainError(msg.str());
  }
}

// Numerically robust transform used for aggregation. EE is invariant to affine
// rescaling of f, so near gamma = 1 the shifted form expm1((1-g) ln y)/(1-g)
// replaces y^(1-g)/(1-g); it converges to ln y instead of cancelling.
class Kernel {
 public:
  explicit Kernel(const WelfareSpec& spec) : e_(1.0 - spec.gamma()) {
    if (spec.is_linear())
      kind_ = Kind::Linear;
    else if (spec.is_log())
      kind_ = Kind::Log;
    else if (std::abs(e_) < 0.1)
      kind_ = Kind::Shifted;
    else
      kind_ = Kind::Power;
  }

  double forward(double y) const {
    switch (kind_) {
      case Kind::Linear: return y;
      case Kind::Log: return std::log(y);
      case Kind::Shifted: return std::expm1(e_ * std::log(y)) / e_;
      case Kind::Power: break;
    }
    return std::pow(y, e_) / e_;
  }

  double inverse(double z) const {
    switch (kind_) {
      case Kind::Linear: return z;
      case Kind::Log: return std::exp(z);
      case Kind::Shifted: return std::exp(std::log1p(e_ * z) / e_);
      case Kind::Power: break;
    }
    return std::pow(e_ * z, 1.0 / e_);
  }

 private:
  enum class Kind { Linear, Log, Shifted, Power };
  Kind kind_;
  double e_;
};

// EE is homogeneous of degree one. Aggregation runs on values divided by a
// power of two near their maximum, which is exact and keeps pow() in range.
inline int scale_exponent(double max_value) { return max_value > 0.0 ? std::ilogb(max_value) : 0; }

}  // namespace detail

/// Atkinson transform f(y).
inline double f_eval(const WelfareSpec& spec, double y) {
  detail::check_income(spec, y);
  if (spec.is_log()) return std::log(y);
  const double e = 1.0 - spec.gamma();
  if (spec.is_linear()) return y;
  return std::pow(y, e) / e;
}

/// Inverse transform; z must lie in the range of f.
inline double f_inv(const WelfareSpec& spec, double z) {
  if (spec.is_log()) {
    if (std::isnan(z)) throw DomainError("f_inv: NaN argument");
    return std::exp(z);
  }
  const double e = 1.0 - spec.gamma();
  // Range of f: [0, inf) for gamma < 1, (-inf, 0) for gamma > 1.
  const bool in_range = std::isfinite(z) && (e > 0.0 ? z >= 0.0 : z < 0.0);
  if (!in_range) {
    std::ostringstream msg;
    msg << "f_inv: " << z << " outside the range of f (gamma=" << spec.gamma() << ")";
    throw DomainError(msg.str());
  }
  if (spec.is_linear()) return z;
  return std::pow(e * z, 1.0 / e);
}

/// Egalitarian equivalent f^-1(mean f(y_i)). The result is clamped into
/// [min y, max y], which it satisfies exactly in real arithmetic.
inline double ee(const WelfareSpec& spec, std::span<const double> incomes) {
  if (incomes.empty()) throw ArgumentError("ee: income vector is empty");
  for (double y : incomes) detail::check_income(spec, y);
  const auto [lo, hi] = std::minmax_element(incomes.begin(), incomes.end());
  if (*lo == *hi) return *lo;

  const detail::Kernel kernel(spec);
  const int k = detail::scale_exponent(*hi);
  double sum = 0.0;
  for (double y : incomes) sum += kernel.forward(std::ldexp(y, -k));
  const double value = std::ldexp(kernel.inverse(sum / static_cast<double>(incomes.size())), k);
  return std::clamp(value, *lo, *hi);
}

/// EE of the fractional rule assigning share delta to b:
/// f^-1(delta f(ee_b) + (1-delta) f(ee_a)).
inline double ee_mixture(const WelfareSpec& spec, double ee_a, double ee_b, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    std::ostringstream msg;
    msg << "ee_mixture: delta " << delta << " outside [0,1]";
    throw ArgumentError(msg.str());
  }
  detail::check_income(spec, ee_a);
  detail::check_income(spec, ee_b);
  if (delta == 0.0 || ee_a == ee_b) return ee_a;
  if (delta == 1.0) return ee_b;

  const detail::Kernel kernel(spec);
  const int k = detail::scale_exponent(std::max(ee_a, ee_b));
  const double z = delta * kernel.forward(std::ldexp(ee_b, -k)) +
                   (1.0 - delta) * kernel.forward(std::ldexp(ee_a, -k));
  return std::clamp(std::ldexp(kernel.inverse(z), k), std::min(ee_a, ee_b), std::max(ee_a, ee_b));
}

/// Egalitarian-equivalent treatment effect ee(y_b) - ee(y_a).
inline double eete(const WelfareSpec& spec, std::span<const double> y_a,
                   std::span<const double> y_b) {
  return ee(spec, y_b) - ee(spec, y_a);
}

}  // namespace eedecide
