#pragma once

#include <vector>

namespace fibersync {

// Canonical representative of x mod 1 in [0, 1).  The wrap boundary is
// resolved by mapping 1.0 back to 0.0.
double wrap(double x);

// A point on the circle T = R/Z, always stored in [0, 1).
struct CirclePoint {
  double value = 0.0;

  CirclePoint() = default;
  explicit CirclePoint(double x) : value(wrap(x)) {}
};

// Geodesic distance on T, in [0, 1/2].
double circle_dist(CirclePoint a, CirclePoint b);
double circle_dist(double a, double b);

// Positively oriented arc [start, start + length) on T.
struct CircleArc {
  CirclePoint start;
  double length = 0.0;

  bool contains(CirclePoint p) const { return wrap(p.value - start.value) < length; }
};

// Shortest arc whose closed left endpoint is a sample point and which
// contains at least ceil(mass * n) of the n points.  Throws on empty input.
CircleArc minimal_covering_arc(const std::vector<CirclePoint>& points, double mass);

// Weighted variant: shortest anchored arc carrying at least target_mass of
// the total weight.
CircleArc minimal_covering_arc_weighted(const std::vector<double>& points,
                                        const std::vector<double>& weights,
                                        double target_mass);

// W1 distance between two equal-count uniform-weight samples on T,
// computed over sorted samples and the optimal cyclic offset.
// Throws "resample required" when the counts differ.
double wasserstein_circle(std::vector<double> a, std::vector<double> b);

}  // namespace fibersync
