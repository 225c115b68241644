#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fibersync/circle.hpp"
#include "json.hpp"

namespace fibersync {

// Expanding circle endomorphism g with degree-d preimage branch structure.
class ExpandingBase {
 public:
  virtual ~ExpandingBase() = default;

  // Degree-d lift: lift(y + 1) = lift(y) + d, strictly increasing.
  virtual double lift(double y) const = 0;
  virtual double deriv(double y) const = 0;
  virtual int degree() const = 0;
  virtual std::string name() const = 0;
  virtual nlohmann::json to_json() const = 0;

  CirclePoint apply(CirclePoint y) const { return CirclePoint(lift(y.value)); }

  // The d preimages of y, sorted ascending; branch k lies in the k-th
  // fundamental interval.  Each satisfies apply(p) = y to 1e-12.
  std::vector<CirclePoint> preimages(CirclePoint y) const;
  CirclePoint preimage_branch(CirclePoint y, int branch) const;

  // Grid minimum of g'; for Linear(d) exactly d.
  double min_expansion(int grid_n) const;

  // All fixed points of g^k, sorted ascending; |result| = d^k - 1.
  std::vector<CirclePoint> periodic_points(int k) const;
};

using BasePtr = std::shared_ptr<const ExpandingBase>;

// g(y) = d y.
class LinearBase final : public ExpandingBase {
 public:
  explicit LinearBase(int d);
  double lift(double y) const override { return d_ * y; }
  double deriv(double) const override { return d_; }
  int degree() const override { return d_; }
  std::string name() const override { return "linear"; }
  nlohmann::json to_json() const override;

 private:
  int d_;
};

// g(y) = d y + b sin(2 pi y).  Requires d - 2 pi |b| > 1.
class PerturbedBase final : public ExpandingBase {
 public:
  PerturbedBase(int d, double b);
  double lift(double y) const override;
  double deriv(double y) const override;
  int degree() const override { return d_; }
  std::string name() const override { return "perturbed"; }
  nlohmann::json to_json() const override;
  double perturbation() const { return b_; }

 private:
  int d_;
  double b_;
};

// Parses { "variant": "linear"|"perturbed", "d": int, "b": real }.
BasePtr base_from_json(const nlohmann::json& j);

}  // namespace fibersync
