#include "fibersync/measures.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace fibersync {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void EmpiricalCircleMeasure::validate() const {
  if (points.empty() || points.size() != weights.size())
    throw std::invalid_argument("measure needs matching non-empty points/weights");
  double total = 0.0;
  for (double w : weights) {
    if (w <= 0.0) throw std::invalid_argument("weights must be positive");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw std::invalid_argument("weights must sum to 1");
}

std::string EmpiricalCircleMeasure::to_csv() const {
  std::string out = "point,weight\n";
  char buf[64];
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", points[i], weights[i]);
    out += buf;
  }
  return out;
}

EmpiricalCircleMeasure uniform_measure(int n) {
  if (n < 1) throw std::invalid_argument("uniform measure needs n >= 1");
  EmpiricalCircleMeasure m;
  m.points.reserve(n);
  m.weights.assign(n, 1.0 / n);
  for (int k = 0; k < n; ++k) m.points.push_back(static_cast<double>(k) / n);
  return m;
}

EmpiricalCircleMeasure delta_measure(CirclePoint at) {
  return EmpiricalCircleMeasure{{at.value}, {1.0}};
}

CircleArc concentration(const EmpiricalCircleMeasure& m, double eps) {
  if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("eps must be in (0,1)");
  return minimal_covering_arc_weighted(m.points, m.weights, 1.0 - eps);
}

AtomEstimate atom_estimate(const EmpiricalCircleMeasure& m) {
  double cx = 0.0, sx = 0.0;
  for (std::size_t i = 0; i < m.points.size(); ++i) {
    cx += m.weights[i] * std::cos(kTwoPi * m.points[i]);
    sx += m.weights[i] * std::sin(kTwoPi * m.points[i]);
  }
  double r = std::sqrt(cx * cx + sx * sx);
  if (r < 1e-9) throw std::runtime_error("no concentration");
  AtomEstimate est;
  est.location = CirclePoint(std::atan2(sx, cx) / kTwoPi);
  est.dispersion = 1.0 - r;
  return est;
}

namespace {
int bin_count(double delta) {
  if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("delta must be in (0,1)");
  return static_cast<int>(std::ceil(1.0 / delta - 1e-12));
}
}  // namespace

double support_coverage(const EmpiricalCircleMeasure& m, double delta) {
  const int bins = bin_count(delta);
  std::vector<char> hit(bins, 0);
  for (double p : m.points) {
    int b = static_cast<int>(wrap(p) * bins);
    if (b >= bins) b = bins - 1;
    hit[b] = 1;
  }
  int occupied = std::accumulate(hit.begin(), hit.end(), 0);
  return static_cast<double>(occupied) / bins;
}

double max_atom_mass(const EmpiricalCircleMeasure& m, double delta) {
  const int bins = bin_count(delta);
  std::vector<double> mass(bins, 0.0);
  for (std::size_t i = 0; i < m.points.size(); ++i) {
    int b = static_cast<int>(wrap(m.points[i]) * bins);
    if (b >= bins) b = bins - 1;
    mass[b] += m.weights[i];
  }
  double best = 0.0;
  for (double v : mass) best = std::max(best, v);
  return best;
}

double wasserstein_circle(const EmpiricalCircleMeasure& a, const EmpiricalCircleMeasure& b) {
  return wasserstein_circle(a.points, b.points);
}

}  // namespace fibersync
