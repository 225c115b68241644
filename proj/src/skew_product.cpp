#include "fibersync/skew_product.hpp"

#include <stdexcept>

namespace fibersync {

TorusPoint step(const SkewSystem& F, CirclePoint y, CirclePoint x) {
  return TorusPoint{F.base->apply(y), F.fiber->eval(y, x)};
}

std::pair<CirclePoint, std::vector<CirclePoint>> fiber_compose(
    const SkewSystem& F, CirclePoint y, std::vector<CirclePoint> xs, int n) {
  if (n < 0) throw std::invalid_argument("iterate count must be >= 0");
  for (int t = 0; t < n; ++t) {
    for (CirclePoint& x : xs) x = F.fiber->eval(y, x);
    y = F.base->apply(y);
  }
  return {y, std::move(xs)};
}

std::pair<SolenoidSample, CirclePoint> inverse_step(const SkewSystem& F,
                                                    const SolenoidSample& s, CirclePoint x) {
  if (s.depth() < 1) throw std::runtime_error("backward history exhausted");
  SolenoidSample popped;
  popped.y0 = s.backward.front();
  popped.word.assign(s.word.begin() + 1, s.word.end());
  popped.backward.assign(s.backward.begin() + 1, s.backward.end());
  return {std::move(popped), F.fiber->invert(s.backward.front(), x)};
}

EmpiricalCircleMeasure pullback_push(const SkewSystem& F, const SolenoidSample& s,
                                     EmpiricalCircleMeasure init, int n) {
  if (n < 0 || n > s.depth()) throw std::invalid_argument("pullback depth exceeds history");
  // fiber maps are applied along y_{-n}, y_{-n+1}, ..., y_{-1}
  for (int t = n; t >= 1; --t) {
    const double y = s.backward[static_cast<std::size_t>(t) - 1].value;
    for (double& x : init.points) x = wrap(F.fiber->lift(y, x));
  }
  return init;
}

EmpiricalCircleMeasure forward_inverse_pullback(const SkewSystem& F, CirclePoint y0, int n,
                                               EmpiricalCircleMeasure init) {
  if (n < 0) throw std::invalid_argument("iterate count must be >= 0");
  std::vector<CirclePoint> orbit(static_cast<std::size_t>(n));
  CirclePoint y = y0;
  for (int t = 0; t < n; ++t) {
    orbit[static_cast<std::size_t>(t)] = y;  // y_t = g^t(y0)
    y = F.base->apply(y);
  }
  // cloud sits over y_n; apply (f_{y_{n-1}})^{-1}, ..., (f_{y_0})^{-1}
  for (int t = n - 1; t >= 0; --t) {
    const CirclePoint yt = orbit[static_cast<std::size_t>(t)];
    for (double& x : init.points)
      x = F.fiber->invert(yt, CirclePoint(x)).value;
  }
  return init;
}

}  // namespace fibersync
