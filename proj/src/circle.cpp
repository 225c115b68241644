#include "fibersync/circle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fibersync {

double wrap(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f = 0.0;  // rounding can land exactly on 1.0
  if (f < 0.0) f = 0.0;
  return f;
}

double circle_dist(double a, double b) {
  double d = std::fabs(wrap(a) - wrap(b));
  return std::min(d, 1.0 - d);
}

double circle_dist(CirclePoint a, CirclePoint b) { return circle_dist(a.value, b.value); }

namespace {

// Two-pointer scan over sorted points with prefix weights; the optimal arc
// with a sample point as closed left endpoint is found in O(n).
CircleArc covering_scan(const std::vector<double>& sorted_pts,
                        const std::vector<double>& sorted_wts,
                        double target_mass) {
  const std::size_t n = sorted_pts.size();
  std::vector<double> prefix(2 * n + 1, 0.0);
  for (std::size_t i = 0; i < 2 * n; ++i)
    prefix[i + 1] = prefix[i] + sorted_wts[i % n];

  auto point_at = [&](std::size_t i) {
    return sorted_pts[i % n] + (i >= n ? 1.0 : 0.0);
  };

  const double eps = 1e-12;
  double best_len = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (j < i) j = i;
    while (j < i + n && prefix[j + 1] - prefix[i] < target_mass - eps) ++j;
    if (j >= i + n) break;  // whole circle needed; arc through all points
    double len = point_at(j) - point_at(i);
    if (len < best_len) {
      best_len = len;
      best_i = i;
    }
  }
  if (!std::isfinite(best_len)) {
    // target mass exceeds the total; cover everything
    best_i = 0;
    best_len = sorted_pts.empty() ? 0.0 : point_at(n - 1) - point_at(0);
  }
  return CircleArc{CirclePoint(sorted_pts[best_i % sorted_pts.size()]),
                   std::min(best_len, 1.0)};
}

}  // namespace

CircleArc minimal_covering_arc_weighted(const std::vector<double>& points,
                                        const std::vector<double>& weights,
                                        double target_mass) {
  if (points.empty()) throw std::invalid_argument("empty sample");
  if (points.size() != weights.size())
    throw std::invalid_argument("points/weights size mismatch");
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return wrap(points[a]) < wrap(points[b]); });
  std::vector<double> pts(points.size()), wts(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    pts[i] = wrap(points[order[i]]);
    wts[i] = weights[order[i]];
  }
  return covering_scan(pts, wts, target_mass);
}

CircleArc minimal_covering_arc(const std::vector<CirclePoint>& points, double mass) {
  if (points.empty()) throw std::invalid_argument("empty sample");
  const std::size_t n = points.size();
  const auto need = static_cast<std::size_t>(std::ceil(mass * static_cast<double>(n) - 1e-9));
  std::vector<double> pts(n), wts(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) pts[i] = points[i].value;
  return minimal_covering_arc_weighted(pts, wts, static_cast<double>(std::max<std::size_t>(need, 1)));
}

double wasserstein_circle(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("resample required");
  if (a.empty()) throw std::invalid_argument("empty sample");
  for (auto& x : a) x = wrap(x);
  for (auto& x : b) x = wrap(x);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t n = a.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) cost += circle_dist(a[i], b[(i + k) % n]);
    best = std::min(best, cost / static_cast<double>(n));
  }
  return best;
}

}  // namespace fibersync
