#ifndef LAVRENTIEV_INTEGRAND_HPP
#define LAVRENTIEV_INTEGRAND_HPP

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "lavrentiev/geometry.hpp"

namespace lavrentiev {

/// Radial profile g(r) of a density frozen at one spatial point, so that
/// phi(x, xi) = g(|xi|).
struct RadialProfile {
  enum class Form {
    Power,        ///< r^p / p
    DoublePhase,  ///< r^p / p + weight r^q / q
    LogBorderline ///< log^-beta(e + r) r^2 + weight log^gamma(e + r) r^2
  };

  Form form = Form::Power;
  double p = 2.0;
  double q = 2.0;
  double weight = 0.0;
  double beta = 2.0;
  double gamma = 2.0;

  double value(double r) const;
  /// g'(r)
  double slope(double r) const;
  /// g''(r)
  double curvature(double r) const;
  /// g'(r) / r, continuously extended at r = 0 where finite.
  double secant(double r) const;
  /// True when g'' is unbounded at r = 0 (some exponent below 2).
  bool singular_at_zero() const;

  friend bool operator==(const RadialProfile&, const RadialProfile&) = default;
};

enum class IntegrandKind {
  PiecewiseExponent,
  ContinuousExponent,
  DoublePhase,
  BorderlineDoublePhase,
  MultiSaddleExponent,
};

std::string_view to_string(IntegrandKind kind);
IntegrandKind integrand_kind_from_string(std::string_view name);

struct IntegrandParams {
  double p_minus = 1.5;
  double p_plus = 3.0;
  double alpha = 0.0;
  double beta = 2.0;
  double gamma = 2.0;
};

/// Constants of the two-sided growth -c0 + c1 |xi|^p_lo <= phi <= c2 |xi|^p_hi + c0.
struct GrowthBounds {
  double p_lo, p_hi, c0, c1, c2;
};

struct HessianValue {
  std::array<double, 3> entries;  ///< (xx, xy, yy)
  bool clamped = false;
};

struct ConjugateValue {
  double value = 0.0;
  /// Radius of the maximiser; the maximiser itself is parallel to zeta.
  double radius = 0.0;
  int iterations = 0;
};

/// Radial Hessian clamp for profiles that are singular at the origin.
inline constexpr double kHessianMinRadius = 1e-10;

/// Non-autonomous radial density phi(x, xi) with its region layout.
///
/// - PiecewiseExponent: |xi|^p(x)/p(x), p = p_plus on |x1| < |x2|, p_minus else.
/// - ContinuousExponent: p(x) = p_+(x) on |x2| >= 2|x1|, p_-(x) on |x1| >= 2|x2|,
///   linear in the polar angle in between, p_(+/-)(x) = 2 +/- 1/(2 log(e + 1/|x|)^(1/10)).
/// - DoublePhase: |xi|^p_minus/p_minus + a(x)|xi|^p_plus/p_plus,
///   a(x) = |x2|^alpha on |x1| < |x2|, 0 else.
/// - BorderlineDoublePhase: log^-beta(e+|xi|)|xi|^2 + a(x) log^gamma(e+|xi|)|xi|^2
///   with the weight above at alpha = 0.
/// - MultiSaddleExponent: p_minus inside the three vertical cones centred at
///   x1 = 0, 2, 4 of (-1,5)x(-1,1), p_plus else.
class Integrand {
 public:
  static Integrand piecewise_exponent(double p_minus, double p_plus);
  /// Constant exponent, stored as a degenerate piecewise exponent.
  static Integrand power(double p);
  static Integrand continuous_exponent();
  static Integrand double_phase(double p_minus, double p_plus, double alpha);
  static Integrand borderline(double beta, double gamma);
  static Integrand multi_saddle(double p_minus, double p_plus);

  IntegrandKind kind() const { return kind_; }
  const IntegrandParams& params() const { return params_; }
  std::string describe() const;

  /// Domain on which the region layout is defined.
  Rectangle domain() const;

  /// The density frozen at x.
  RadialProfile profile(const Vec2& x) const;
  /// Same as profile(x) with the exponent field replaced by p; only for kinds
  /// with an exponent field.
  RadialProfile profile_with_exponent(const Vec2& x, double p) const;

  bool has_exponent_field() const;
  /// Exponent field p(x); empty for kinds without one.
  std::optional<double> exponent(const Vec2& x) const;
  /// Weight a(x) of the double-phase kinds, 0 otherwise.
  double phase_weight(const Vec2& x) const;

  /// Smallest exponent governing the lower growth; drives the error indicator.
  double lower_exponent() const { return growth().p_lo; }
  GrowthBounds growth() const;

  double eval(const Vec2& x, const Vec2& xi) const;
  Vec2 grad_xi(const Vec2& x, const Vec2& xi) const;
  HessianValue hess_xi(const Vec2& x, const Vec2& xi) const;
  /// sup_xi (zeta . xi - phi(x, xi)), computed on the radial profile.
  ConjugateValue conjugate(const Vec2& x, const Vec2& zeta) const;

 private:
  Integrand(IntegrandKind kind, IntegrandParams params);
  void validate() const;

  IntegrandKind kind_;
  IntegrandParams params_;
};

Vec2 radial_gradient(const RadialProfile& g, const Vec2& xi);
HessianValue radial_hessian(const RadialProfile& g, const Vec2& xi);
/// Legendre transform of a radial profile at |zeta| = s: monotone root find
/// of g'(r) = s, Newton with bisection fallback.
ConjugateValue radial_conjugate(const RadialProfile& g, double s, double rel_tol = 1e-10, int max_iterations = 200);

/// Exponent bounds p_(+/-)(x) of the continuous-exponent example.
double continuous_exponent_upper(const Vec2& x);
double continuous_exponent_lower(const Vec2& x);

}  // namespace lavrentiev

#endif  // LAVRENTIEV_INTEGRAND_HPP
