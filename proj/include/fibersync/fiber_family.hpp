#pragma once

#include <memory>
#include <string>

#include "fibersync/circle.hpp"
#include "json.hpp"

namespace fibersync {

// Grid min/max of the fiber derivative.  m is the contraction/expansion
// envelope max(m_max, 1/m_min) used by the partial-hyperbolicity check.
struct DerivBounds {
  double m_min = 1.0;
  double m_max = 1.0;

  double m() const { return m_max > 1.0 / m_min ? m_max : 1.0 / m_min; }
};

// A parametric family of orientation-preserving circle diffeomorphisms
// y -> f_y.  Implementations provide a degree-one lift and its derivative;
// evaluation, inversion and derivative bounds are generic.
class FiberFamily {
 public:
  virtual ~FiberFamily() = default;

  // Lifted map: lift(y, x + 1) = lift(y, x) + 1, strictly increasing in x.
  virtual double lift(double y, double x) const = 0;
  virtual double deriv(double y, double x) const = 0;
  virtual std::string name() const = 0;
  virtual nlohmann::json to_json() const = 0;

  CirclePoint eval(CirclePoint y, CirclePoint x) const {
    return CirclePoint(lift(y.value, x.value));
  }

  // Solves f_y(x) = x_target by bisection on the lift plus Newton polish;
  // accurate to 1e-12.  Throws "not a diffeomorphism" if the lift fails to
  // bracket the target.
  CirclePoint invert(CirclePoint y, CirclePoint x_target) const;

  // Grid scan of deriv over grid_n x grid_n points in (y, x).  A grid
  // approximation; callers treat the bounds as candidates.
  DerivBounds deriv_bounds(int grid_n) const;
};

using FiberPtr = std::shared_ptr<const FiberFamily>;

// f_y(x) = x + a sin(2 pi x) + y.  Requires 2 pi |a| < 1.
class SineCoupled final : public FiberFamily {
 public:
  explicit SineCoupled(double amplitude);
  double lift(double y, double x) const override;
  double deriv(double y, double x) const override;
  std::string name() const override { return "sine_coupled"; }
  nlohmann::json to_json() const override;
  double amplitude() const { return a_; }

 private:
  double a_;
};

// f_y(x) = x + y.
class RigidRotation final : public FiberFamily {
 public:
  double lift(double y, double x) const override { return x + y; }
  double deriv(double, double) const override { return 1.0; }
  std::string name() const override { return "rigid_rotation"; }
  nlohmann::json to_json() const override;
};

// f_y(x) = x + j y.
class LinearShear final : public FiberFamily {
 public:
  explicit LinearShear(int j) : j_(j) {}
  double lift(double y, double x) const override { return x + j_ * y; }
  double deriv(double, double) const override { return 1.0; }
  std::string name() const override { return "linear_shear"; }
  nlohmann::json to_json() const override;
  int shear() const { return j_; }

 private:
  int j_;
};

// f_y(x) = x + a sin(2 pi x), independent of y.  Requires 2 pi |a| < 1.
class NorthSouth final : public FiberFamily {
 public:
  explicit NorthSouth(double amplitude);
  double lift(double y, double x) const override;
  double deriv(double y, double x) const override;
  std::string name() const override { return "north_south"; }
  nlohmann::json to_json() const override;
  double amplitude() const { return a_; }

 private:
  double a_;
};

// Parses the JSON descriptor { "variant": ..., "params": {...} }.
// The "step_ifs" variant is handled by the catalog module.
FiberPtr fiber_from_json(const nlohmann::json& j);

}  // namespace fibersync
