#include "fibersync/fiber_family.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fibersync {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

CirclePoint FiberFamily::invert(CirclePoint y, CirclePoint x_target) const {
  const double c = lift(y.value, 0.0);
  // pick the integer translate of the target inside [lift(0), lift(0) + 1)
  const double t = x_target.value + std::ceil(c - x_target.value);
  double lo = 0.0, hi = 1.0;
  double flo = c - t, fhi = lift(y.value, 1.0) - t;
  if (flo > 1e-9 || fhi < -1e-9) throw std::runtime_error("not a diffeomorphism");
  for (int i = 0; i < 60; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = lift(y.value, mid) - t;
    if (fm < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 5; ++i) {
    double d = deriv(y.value, x);
    if (d <= 0.0) break;
    double step = (lift(y.value, x) - t) / d;
    double xn = x - step;
    if (xn < lo || xn > hi) break;
    x = xn;
  }
  return CirclePoint(x);
}

DerivBounds FiberFamily::deriv_bounds(int grid_n) const {
  if (grid_n < 64) throw std::invalid_argument("grid_n must be >= 64");
  DerivBounds b;
  bool first = true;
  for (int iy = 0; iy < grid_n; ++iy) {
    double y = static_cast<double>(iy) / grid_n;
    for (int ix = 0; ix < grid_n; ++ix) {
      double d = deriv(y, static_cast<double>(ix) / grid_n);
      if (first || d < b.m_min) b.m_min = d;
      if (first || d > b.m_max) b.m_max = d;
      first = false;
    }
  }
  return b;
}

SineCoupled::SineCoupled(double amplitude) : a_(amplitude) {
  if (kTwoPi * std::fabs(amplitude) >= 1.0)
    throw std::invalid_argument("amplitude violates diffeomorphism bound 2*pi*|a| < 1");
}

double SineCoupled::lift(double y, double x) const {
  return x + a_ * std::sin(kTwoPi * x) + y;
}

double SineCoupled::deriv(double, double x) const {
  return 1.0 + a_ * kTwoPi * std::cos(kTwoPi * x);
}

nlohmann::json SineCoupled::to_json() const {
  return {{"variant", "sine_coupled"}, {"params", {{"amplitude", a_}}}};
}

nlohmann::json RigidRotation::to_json() const {
  return {{"variant", "rigid_rotation"}, {"params", nlohmann::json::object()}};
}

nlohmann::json LinearShear::to_json() const {
  return {{"variant", "linear_shear"}, {"params", {{"j", j_}}}};
}

NorthSouth::NorthSouth(double amplitude) : a_(amplitude) {
  if (kTwoPi * std::fabs(amplitude) >= 1.0)
    throw std::invalid_argument("amplitude violates diffeomorphism bound 2*pi*|a| < 1");
}

double NorthSouth::lift(double, double x) const {
  return x + a_ * std::sin(kTwoPi * x);
}

double NorthSouth::deriv(double, double x) const {
  return 1.0 + a_ * kTwoPi * std::cos(kTwoPi * x);
}

nlohmann::json NorthSouth::to_json() const {
  return {{"variant", "north_south"}, {"params", {{"amplitude", a_}}}};
}

FiberPtr fiber_from_json(const nlohmann::json& j) {
  const std::string variant = j.at("variant");
  const auto params = j.value("params", nlohmann::json::object());
  if (variant == "sine_coupled") return std::make_shared<SineCoupled>(params.at("amplitude").get<double>());
  if (variant == "rigid_rotation") return std::make_shared<RigidRotation>();
  if (variant == "linear_shear") return std::make_shared<LinearShear>(params.at("j").get<int>());
  if (variant == "north_south") return std::make_shared<NorthSouth>(params.at("amplitude").get<double>());
  throw std::invalid_argument("unknown fiber variant: " + variant);
}

}  // namespace fibersync
