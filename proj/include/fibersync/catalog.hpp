#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "fibersync/fiber_family.hpp"
#include "fibersync/rng.hpp"
#include "fibersync/skew_product.hpp"
#include "json.hpp"

namespace fibersync {

// Orientation-preserving circle homeomorphism built from monotone C1 cubic
// Hermite segments between knots (position, value, slope) on the lift.
class MonotoneCircleMap {
 public:
  // Knots cover one period: positions strictly increasing within [x0, x0+1),
  // lifted values strictly increasing, slopes positive.  The closing segment
  // wraps to (x0 + 1, v0 + 1).  Throws "parameters infeasible" when any
  // segment fails the monotonicity grid check.
  MonotoneCircleMap(std::vector<double> knot_x, std::vector<double> knot_v,
                    std::vector<double> knot_m);

  double lift(double x) const;
  double deriv(double x) const;
  double eval(double x) const { return wrap(lift(x)); }

 private:
  std::vector<double> xs_, vs_, ms_;  // closed with the wrapped knot
};

struct StepIFSParams {
  double p0 = 0.40, p1 = 0.60, p2 = 0.50;  // attractors
  double q0 = 0.05, q1 = 0.95, q2 = 0.55;  // repellers
  double slope = 0.8;                      // attractor multiplier, in (1/2, 1)
  double smoothing = 0.01;                 // digit-boundary blending width

  void validate() const;
  nlohmann::json to_json() const;
  static StepIFSParams from_json(const nlohmann::json& j);
};

// Step family over a degree-d base: the fiber map at y is h_{floor(d y) mod 4},
// with C0 blending of the lifts within `smoothing` of digit boundaries.
// h0, h1 are affine with slope s on [p0, p1] fixing p0 resp. p1; h2 fixes
// p2 with slope s and q2 with its repelling slope; h3 is the numerical
// inverse of h2.
class StepIFSFamily final : public FiberFamily {
 public:
  StepIFSFamily(StepIFSParams params, int base_degree);

  double lift(double y, double x) const override;
  double deriv(double y, double x) const override;
  std::string name() const override { return "step_ifs"; }
  nlohmann::json to_json() const override;

  const StepIFSParams& params() const { return params_; }
  int base_degree() const { return base_degree_; }

  // hk as a standalone circle map on the lift (k in 0..3; h3 = h2^{-1})
  double map_lift(int k, double x) const;
  double map_deriv(int k, double x) const;

 private:
  StepIFSParams params_;
  int base_degree_;
  std::array<std::shared_ptr<MonotoneCircleMap>, 3> maps_;  // h0, h1, h2
};

std::shared_ptr<const StepIFSFamily> build_step_ifs(const StepIFSParams& params,
                                                    int base_degree = 4);

struct MinimalityResult {
  bool minimal = false;
  std::vector<int> visit_histogram;  // per delta-bin visit counts
};

// Iterates a random word in {h0..h3} from x = 0; minimal iff every
// delta-bin is visited.
MinimalityResult ifs_minimality_test(const StepIFSParams& params, long word_length,
                                     double delta, std::uint64_t rng_seed);
MinimalityResult ifs_single_map_test(const StepIFSParams& params, int map_index,
                                     long word_length, double delta);

// Named systems: "flagship", "shear(i,j)", "rotation(d)", "northsouth(a,d)",
// "stepifs".  Throws with the catalog listing on unknown names.
SkewSystem make_named(const std::string& name);

std::vector<std::string> catalog_names();

// System from a JSON descriptor: either a catalog name string or an object
// { "base": {...}, "fiber": {...} }.
SkewSystem system_from_json(const nlohmann::json& j);

}  // namespace fibersync
