#pragma once

#include <string>
#include <vector>

#include "fibersync/circle.hpp"

namespace fibersync {

// Weighted point cloud on T; the numerical stand-in for Lebesgue measure,
// disintegrations, and delta measures alike.
struct EmpiricalCircleMeasure {
  std::vector<double> points;   // each in [0, 1)
  std::vector<double> weights;  // positive, summing to 1

  std::size_t size() const { return points.size(); }
  void validate() const;  // throws when the invariants fail

  // CSV dump, one "point,weight" row per sample, with header.
  std::string to_csv() const;
};

// Equal-weight grid k/n, k = 0..n-1.
EmpiricalCircleMeasure uniform_measure(int n);

// Single atom.
EmpiricalCircleMeasure delta_measure(CirclePoint at);

// Shortest arc carrying mass >= 1 - eps.
CircleArc concentration(const EmpiricalCircleMeasure& m, double eps);

struct AtomEstimate {
  CirclePoint location;
  double dispersion = 0.0;  // 1 - resultant length, in [0, 1]
};

// Circular weighted mean; throws "no concentration" when the resultant
// vector has length < 1e-9.
AtomEstimate atom_estimate(const EmpiricalCircleMeasure& m);

// Fraction of the ceil(1/delta) equal bins containing positive mass.
double support_coverage(const EmpiricalCircleMeasure& m, double delta);

// Largest bin mass over the delta-binning; diffuseness proxy.
double max_atom_mass(const EmpiricalCircleMeasure& m, double delta);

// W1 between two equal-count clouds (weights must be uniform).
double wasserstein_circle(const EmpiricalCircleMeasure& a, const EmpiricalCircleMeasure& b);

}  // namespace fibersync
