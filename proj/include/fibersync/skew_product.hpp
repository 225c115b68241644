#pragma once

#include <utility>
#include <vector>

#include "fibersync/base_map.hpp"
#include "fibersync/fiber_family.hpp"
#include "fibersync/measures.hpp"
#include "fibersync/solenoid.hpp"
#include "json.hpp"

namespace fibersync {

// The skew product F(y, x) = (g(y), f_y(x)).
struct SkewSystem {
  BasePtr base;
  FiberPtr fiber;

  nlohmann::json to_json() const {
    return {{"base", base->to_json()}, {"fiber", fiber->to_json()}};
  }
};

struct TorusPoint {
  CirclePoint y;
  CirclePoint x;
};

TorusPoint step(const SkewSystem& F, CirclePoint y, CirclePoint x);

// Composed fiber maps along the base orbit, applied to a batch of points.
// Returns (g^n(y), f^n_y(xs)).
std::pair<CirclePoint, std::vector<CirclePoint>> fiber_compose(
    const SkewSystem& F, CirclePoint y, std::vector<CirclePoint> xs, int n);

// One inverse step along the recorded backward orbit: pops y_{-1} and
// applies (f_{y_{-1}})^{-1}.  Throws when the history is exhausted.
std::pair<SolenoidSample, CirclePoint> inverse_step(const SkewSystem& F,
                                                    const SolenoidSample& s, CirclePoint x);

// Pullback pushforward f^n_{y_{-n}} applied to init: transports the cloud
// from the fiber over y_{-n} forward to the fiber over y_0.
EmpiricalCircleMeasure pullback_push(const SkewSystem& F, const SolenoidSample& s,
                                     EmpiricalCircleMeasure init, int n);

// Seeds init in the fiber over g^n(y0) and applies fiber inverses back down
// to the fiber over y0.
EmpiricalCircleMeasure forward_inverse_pullback(const SkewSystem& F, CirclePoint y0, int n,
                                                EmpiricalCircleMeasure init);

}  // namespace fibersync
