#include "lavrentiev/integrand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lavrentiev {

namespace {

constexpr double kE = std::numbers::e;

// Power r^k with the conventions 0^0 = 1 and 0^k = inf for k < 0.
double rpow(double r, double k) {
  if (r == 0.0) {
    if (k == 0.0) return 1.0;
    return k > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return std::pow(r, k);
}

bool upper_cone(const Vec2& x) { return std::abs(x.x) < std::abs(x.y); }

}  // namespace

double RadialProfile::value(double r) const {
  switch (form) {
    case Form::Power:
      return rpow(r, p) / p;
    case Form::DoublePhase:
      return rpow(r, p) / p + (weight == 0.0 ? 0.0 : weight * rpow(r, q) / q);
    case Form::LogBorderline: {
      const double l = std::log(kE + r);
      return r * r * (std::pow(l, -beta) + weight * std::pow(l, gamma));
    }
  }
  return 0.0;
}

double RadialProfile::slope(double r) const {
  switch (form) {
    case Form::Power:
      return rpow(r, p - 1.0);
    case Form::DoublePhase:
      return rpow(r, p - 1.0) + (weight == 0.0 ? 0.0 : weight * rpow(r, q - 1.0));
    case Form::LogBorderline: {
      const double l = std::log(kE + r);
      const double h = std::pow(l, -beta) + weight * std::pow(l, gamma);
      const double dh = (-beta * std::pow(l, -beta - 1.0) + weight * gamma * std::pow(l, gamma - 1.0)) / (kE + r);
      return 2.0 * r * h + r * r * dh;
    }
  }
  return 0.0;
}

double RadialProfile::curvature(double r) const {
  switch (form) {
    case Form::Power:
      return (p - 1.0) * rpow(r, p - 2.0);
    case Form::DoublePhase:
      return (p - 1.0) * rpow(r, p - 2.0) + (weight == 0.0 ? 0.0 : weight * (q - 1.0) * rpow(r, q - 2.0));
    case Form::LogBorderline: {
      const double l = std::log(kE + r);
      const double s = kE + r;
      const double h = std::pow(l, -beta) + weight * std::pow(l, gamma);
      const double d1 = -beta * std::pow(l, -beta - 1.0) + weight * gamma * std::pow(l, gamma - 1.0);
      const double d2 = beta * (beta + 1.0) * std::pow(l, -beta - 2.0) +
                        weight * gamma * (gamma - 1.0) * std::pow(l, gamma - 2.0);
      const double dh = d1 / s;
      const double ddh = (d2 - d1) / (s * s);
      return 2.0 * h + 4.0 * r * dh + r * r * ddh;
    }
  }
  return 0.0;
}

double RadialProfile::secant(double r) const {
  switch (form) {
    case Form::Power:
      return rpow(r, p - 2.0);
    case Form::DoublePhase:
      return rpow(r, p - 2.0) + (weight == 0.0 ? 0.0 : weight * rpow(r, q - 2.0));
    case Form::LogBorderline: {
      const double l = std::log(kE + r);
      const double h = std::pow(l, -beta) + weight * std::pow(l, gamma);
      const double dh = (-beta * std::pow(l, -beta - 1.0) + weight * gamma * std::pow(l, gamma - 1.0)) / (kE + r);
      return 2.0 * h + r * dh;
    }
  }
  return 0.0;
}

bool RadialProfile::singular_at_zero() const {
  switch (form) {
    case Form::Power:
      return p < 2.0;
    case Form::DoublePhase:
      return p < 2.0 || (weight != 0.0 && q < 2.0);
    case Form::LogBorderline:
      return false;
  }
  return false;
}

Vec2 radial_gradient(const RadialProfile& g, const Vec2& xi) {
  const double r = norm(xi);
  if (r == 0.0) return {0.0, 0.0};
  return (g.slope(r) / r) * xi;
}

HessianValue radial_hessian(const RadialProfile& g, const Vec2& xi) {
  const double r = norm(xi);
  HessianValue h;
  double radial = 0.0;
  double tangential = 0.0;
  Vec2 n{1.0, 0.0};
  if (r < kHessianMinRadius && g.singular_at_zero()) {
    h.clamped = true;
    radial = g.curvature(kHessianMinRadius);
    tangential = g.secant(kHessianMinRadius);
    if (r > 0.0) n = (1.0 / r) * xi;
    else tangential = radial;
  } else if (r == 0.0) {
    radial = tangential = g.curvature(0.0);
  } else {
    radial = g.curvature(r);
    tangential = g.secant(r);
    n = (1.0 / r) * xi;
  }
  const double d = radial - tangential;
  h.entries = {tangential + d * n.x * n.x, d * n.x * n.y, tangential + d * n.y * n.y};
  return h;
}

ConjugateValue radial_conjugate(const RadialProfile& g, double s, double rel_tol, int max_iterations) {
  ConjugateValue out;
  if (s <= 0.0) return out;
  double lo = 0.0;
  double hi = 1.0;
  while (g.slope(hi) < s) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw std::runtime_error("radial_conjugate: no finite maximiser");
  }
  double r = 0.5 * (lo + hi);
  for (int it = 0; it < max_iterations; ++it) {
    out.iterations = it + 1;
    const double f = g.slope(r) - s;
    if (f == 0.0) break;
    if (f < 0.0) lo = r;
    else hi = r;
    double next = r - f / g.curvature(r);
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    const bool done = std::abs(next - r) <= rel_tol * next;
    r = next;
    if (done || hi - lo <= std::numeric_limits<double>::epsilon() * hi) break;
  }
  out.radius = r;
  out.value = s * r - g.value(r);
  return out;
}

double continuous_exponent_upper(const Vec2& x) {
  const double rx = norm(x);
  if (rx == 0.0) return 2.0;
  return 2.0 + 0.5 / std::pow(std::log(kE + 1.0 / rx), 0.1);
}

double continuous_exponent_lower(const Vec2& x) {
  const double rx = norm(x);
  if (rx == 0.0) return 2.0;
  return 2.0 - 0.5 / std::pow(std::log(kE + 1.0 / rx), 0.1);
}

std::string_view to_string(IntegrandKind kind) {
  switch (kind) {
    case IntegrandKind::PiecewiseExponent:
      return "piecewise-exponent";
    case IntegrandKind::ContinuousExponent:
      return "continuous-exponent";
    case IntegrandKind::DoublePhase:
      return "double-phase";
    case IntegrandKind::BorderlineDoublePhase:
      return "borderline";
    case IntegrandKind::MultiSaddleExponent:
      return "multi-saddle";
  }
  return "unknown";
}

IntegrandKind integrand_kind_from_string(std::string_view name) {
  for (auto k : {IntegrandKind::PiecewiseExponent, IntegrandKind::ContinuousExponent, IntegrandKind::DoublePhase,
                 IntegrandKind::BorderlineDoublePhase, IntegrandKind::MultiSaddleExponent}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown integrand kind: " + std::string(name));
}

Integrand::Integrand(IntegrandKind kind, IntegrandParams params) : kind_(kind), params_(params) { validate(); }

void Integrand::validate() const {
  const auto& p = params_;
  if (kind_ != IntegrandKind::BorderlineDoublePhase && kind_ != IntegrandKind::ContinuousExponent) {
    if (!(p.p_minus > 1.0 && p.p_minus <= p.p_plus && std::isfinite(p.p_plus))) {
      throw std::invalid_argument("Integrand: need 1 < p_minus <= p_plus < inf");
    }
  }
  if (!(p.alpha >= 0.0)) throw std::invalid_argument("Integrand: need alpha >= 0");
  if (kind_ == IntegrandKind::BorderlineDoublePhase && !(p.beta > 1.0 && p.gamma > 1.0)) {
    throw std::invalid_argument("Integrand: need beta, gamma > 1");
  }
}

Integrand Integrand::piecewise_exponent(double p_minus, double p_plus) {
  return Integrand(IntegrandKind::PiecewiseExponent, {.p_minus = p_minus, .p_plus = p_plus});
}

Integrand Integrand::power(double p) { return piecewise_exponent(p, p); }

Integrand Integrand::continuous_exponent() {
  // Exponent bounds of the field: 2 -/+ 1/2 approached as |x| -> infinity.
  return Integrand(IntegrandKind::ContinuousExponent, {.p_minus = 1.5, .p_plus = 2.5});
}

Integrand Integrand::double_phase(double p_minus, double p_plus, double alpha) {
  return Integrand(IntegrandKind::DoublePhase, {.p_minus = p_minus, .p_plus = p_plus, .alpha = alpha});
}

Integrand Integrand::borderline(double beta, double gamma) {
  return Integrand(IntegrandKind::BorderlineDoublePhase, {.p_minus = 1.5, .p_plus = 3.0, .beta = beta, .gamma = gamma});
}

Integrand Integrand::multi_saddle(double p_minus, double p_plus) {
  return Integrand(IntegrandKind::MultiSaddleExponent, {.p_minus = p_minus, .p_plus = p_plus});
}

std::string Integrand::describe() const {
  std::ostringstream s;
  s << to_string(kind_);
  switch (kind_) {
    case IntegrandKind::PiecewiseExponent:
    case IntegrandKind::MultiSaddleExponent:
      s << "(p-=" << params_.p_minus << ", p+=" << params_.p_plus << ")";
      break;
    case IntegrandKind::ContinuousExponent:
      break;
    case IntegrandKind::DoublePhase:
      s << "(p-=" << params_.p_minus << ", p+=" << params_.p_plus << ", alpha=" << params_.alpha << ")";
      break;
    case IntegrandKind::BorderlineDoublePhase:
      s << "(beta=" << params_.beta << ", gamma=" << params_.gamma << ")";
      break;
  }
  return s.str();
}

Rectangle Integrand::domain() const {
  if (kind_ == IntegrandKind::MultiSaddleExponent) return {{-1.0, -1.0}, {5.0, 1.0}};
  return {{-1.0, -1.0}, {1.0, 1.0}};
}

bool Integrand::has_exponent_field() const {
  return kind_ == IntegrandKind::PiecewiseExponent || kind_ == IntegrandKind::ContinuousExponent ||
         kind_ == IntegrandKind::MultiSaddleExponent;
}

std::optional<double> Integrand::exponent(const Vec2& x) const {
  switch (kind_) {
    case IntegrandKind::PiecewiseExponent:
      return upper_cone(x) ? params_.p_plus : params_.p_minus;
    case IntegrandKind::ContinuousExponent: {
      const double lower = continuous_exponent_lower(x);
      const double upper = continuous_exponent_upper(x);
      static const double kAngleLo = std::atan(0.5);
      static const double kAngleHi = std::atan(2.0);
      const double angle = std::atan2(std::abs(x.y), std::abs(x.x));
      const double s = std::clamp((angle - kAngleLo) / (kAngleHi - kAngleLo), 0.0, 1.0);
      return lower + s * (upper - lower);
    }
    case IntegrandKind::MultiSaddleExponent: {
      const double ay = std::abs(x.y);
      const bool cone = (x.x < 1.0 && std::abs(x.x) < ay) || (x.x >= 1.0 && x.x < 3.0 && std::abs(x.x - 2.0) < ay) ||
                        (x.x >= 3.0 && std::abs(x.x - 4.0) < ay);
      return cone ? params_.p_minus : params_.p_plus;
    }
    default:
      return std::nullopt;
  }
}

double Integrand::phase_weight(const Vec2& x) const {
  if (kind_ == IntegrandKind::DoublePhase) return upper_cone(x) ? rpow(std::abs(x.y), params_.alpha) : 0.0;
  if (kind_ == IntegrandKind::BorderlineDoublePhase) return upper_cone(x) ? 1.0 : 0.0;
  return 0.0;
}

RadialProfile Integrand::profile(const Vec2& x) const {
  RadialProfile g;
  switch (kind_) {
    case IntegrandKind::PiecewiseExponent:
    case IntegrandKind::ContinuousExponent:
    case IntegrandKind::MultiSaddleExponent:
      g.form = RadialProfile::Form::Power;
      g.p = *exponent(x);
      break;
    case IntegrandKind::DoublePhase:
      g.form = RadialProfile::Form::DoublePhase;
      g.p = params_.p_minus;
      g.q = params_.p_plus;
      g.weight = phase_weight(x);
      break;
    case IntegrandKind::BorderlineDoublePhase:
      g.form = RadialProfile::Form::LogBorderline;
      g.beta = params_.beta;
      g.gamma = params_.gamma;
      g.weight = phase_weight(x);
      break;
  }
  return g;
}

RadialProfile Integrand::profile_with_exponent(const Vec2& x, double p) const {
  if (!has_exponent_field()) throw std::invalid_argument("exponent override on an integrand without exponent field");
  RadialProfile g = profile(x);
  g.p = p;
  return g;
}

GrowthBounds Integrand::growth() const {
  const double pm = params_.p_minus;
  const double pp = params_.p_plus;
  switch (kind_) {
    case IntegrandKind::PiecewiseExponent:
    case IntegrandKind::ContinuousExponent:
    case IntegrandKind::MultiSaddleExponent:
      return {pm, pp, 1.0 / pm, 1.0 / pp, 1.0 / pm};
    case IntegrandKind::DoublePhase:
      // a(x) <= 1 on the unit square.
      return {pm, pp, 1.0 / pm, 1.0 / pm, 1.0 / pm + 1.0 / pp};
    case IntegrandKind::BorderlineDoublePhase:
      return {1.5, 3.0, 10.0, 0.1, 2.0};
  }
  return {};
}

double Integrand::eval(const Vec2& x, const Vec2& xi) const { return profile(x).value(norm(xi)); }

Vec2 Integrand::grad_xi(const Vec2& x, const Vec2& xi) const { return radial_gradient(profile(x), xi); }

HessianValue Integrand::hess_xi(const Vec2& x, const Vec2& xi) const { return radial_hessian(profile(x), xi); }

ConjugateValue Integrand::conjugate(const Vec2& x, const Vec2& zeta) const {
  return radial_conjugate(profile(x), norm(zeta));
}

}  // namespace lavrentiev
