#include "fibersync/base_map.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace fibersync {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double bisect_increasing(const std::function<double(double)>& f, double lo, double hi,
                         double target) {
  for (int i = 0; i < 80; ++i) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CirclePoint ExpandingBase::preimage_branch(CirclePoint y, int branch) const {
  const int d = degree();
  if (branch < 0 || branch >= d) throw std::invalid_argument("invalid branch");
  // lift maps [0,1] onto [lift(0), lift(0) + d]; pick the integer translate
  // of y inside window k
  const double c = lift(0.0);
  double target = y.value + std::ceil(c - y.value) + branch;
  if (target > c + d) target -= d;
  double u = bisect_increasing([this](double v) { return lift(v); }, 0.0, 1.0, target);
  for (int i = 0; i < 4; ++i) {
    double dv = deriv(u);
    if (dv <= 1.0) break;
    double un = u - (lift(u) - target) / dv;
    if (un < 0.0 || un > 1.0) break;
    u = un;
  }
  return CirclePoint(u);
}

std::vector<CirclePoint> ExpandingBase::preimages(CirclePoint y) const {
  std::vector<CirclePoint> out;
  out.reserve(degree());
  for (int k = 0; k < degree(); ++k) out.push_back(preimage_branch(y, k));
  std::sort(out.begin(), out.end(),
            [](CirclePoint a, CirclePoint b) { return a.value < b.value; });
  return out;
}

double ExpandingBase::min_expansion(int grid_n) const {
  if (grid_n < 256) throw std::invalid_argument("grid_n must be >= 256");
  double m = deriv(0.0);
  for (int i = 1; i < grid_n; ++i)
    m = std::min(m, deriv(static_cast<double>(i) / grid_n));
  return m;
}

std::vector<CirclePoint> ExpandingBase::periodic_points(int k) const {
  if (k < 1) throw std::invalid_argument("period must be >= 1");
  long long dk = 1;
  for (int i = 0; i < k; ++i) dk *= degree();
  // lift of g^k on [0, 1]: compose lifts, carrying integer parts via
  // lift(y + n) = lift(y) + n d
  auto lift_k = [this, k](double y) {
    double v = y;
    for (int i = 0; i < k; ++i) {
      double n = std::floor(v);
      v = lift(v - n) + n * degree();
    }
    return v;
  };
  // h(y) = g^k(y) - y rises strictly from h(0) to h(0) + d^k - 1; every
  // integer level strictly inside gives one fixed point, plus y = 0 itself
  // when h(0) is an integer.
  auto h = [&](double y) { return lift_k(y) - y; };
  const double h0 = h(0.0);
  std::vector<CirclePoint> out;
  out.reserve(static_cast<std::size_t>(dk - 1));
  const bool zero_fixed = std::fabs(h0 - std::round(h0)) < 1e-9;
  if (zero_fixed) out.emplace_back(0.0);
  double first_level = zero_fixed ? std::round(h0) + 1.0 : std::ceil(h0);
  for (long long j = 0; out.size() < static_cast<std::size_t>(dk - 1); ++j) {
    double target = first_level + static_cast<double>(j);
    if (target >= h0 + static_cast<double>(dk) - 1.0 - 1e-9) break;
    out.emplace_back(bisect_increasing(h, 0.0, 1.0, target));
  }
  return out;
}

LinearBase::LinearBase(int d) : d_(d) {
  if (d < 2) throw std::invalid_argument("linear base degree must be >= 2");
}

nlohmann::json LinearBase::to_json() const {
  return {{"variant", "linear"}, {"d", d_}};
}

PerturbedBase::PerturbedBase(int d, double b) : d_(d), b_(b) {
  if (d < 2) throw std::invalid_argument("perturbed base degree must be >= 2");
  if (d - kTwoPi * std::fabs(b) <= 1.0)
    throw std::invalid_argument("expansion bound violated: need d - 2*pi*|b| > 1");
}

double PerturbedBase::lift(double y) const { return d_ * y + b_ * std::sin(kTwoPi * y); }

double PerturbedBase::deriv(double y) const {
  return d_ + b_ * kTwoPi * std::cos(kTwoPi * y);
}

nlohmann::json PerturbedBase::to_json() const {
  return {{"variant", "perturbed"}, {"d", d_}, {"b", b_}};
}

BasePtr base_from_json(const nlohmann::json& j) {
  const std::string variant = j.at("variant");
  const int d = j.at("d").get<int>();
  if (variant == "linear") return std::make_shared<LinearBase>(d);
  if (variant == "perturbed") return std::make_shared<PerturbedBase>(d, j.at("b").get<double>());
  throw std::invalid_argument("unknown base variant: " + variant);
}

}  // namespace fibersync
