#include <cmath>
#include <algorithm>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "fibersync/circle.hpp"
#include "fibersync/rng.hpp"

using namespace fibersync;

namespace {

// Independent oracle: try every anchored arc (left endpoint on a sample
// point), count contained points directly.  O(n^2).
double brute_covering_length(const std::vector<CirclePoint>& pts, double mass) {
  const std::size_t n = pts.size();
  const auto need = static_cast<std::size_t>(std::ceil(mass * static_cast<double>(n) - 1e-9));
  double best = 2.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> offsets;
    offsets.reserve(n);
    for (std::size_t j = 0; j < n; ++j) offsets.push_back(wrap(pts[j].value - pts[i].value));
    std::sort(offsets.begin(), offsets.end());
    if (need >= 1 && need <= n) best = std::min(best, offsets[need - 1]);
  }
  return best;
}

// Independent oracle: minimum transport cost over every permutation, n <= 6.
double brute_wasserstein(std::vector<double> a, std::vector<double> b) {
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = 2.0;
  do {
    double cost = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) cost += circle_dist(a[i], b[perm[i]]);
    best = std::min(best, cost / static_cast<double>(a.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("wrap produces canonical representatives") {
  CHECK(wrap(1.0) == 0.0);
  CHECK(wrap(-0.25) == doctest::Approx(0.75));
  CHECK(wrap(3.75) == doctest::Approx(0.75));
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    double x = (rng.next_double() - 0.5) * 20;
    CHECK(wrap(x) >= 0.0);
    CHECK(wrap(x) < 1.0);
    CHECK(wrap(x + 1.0) == doctest::Approx(wrap(x)).epsilon(1e-12));
  }
}

TEST_CASE("circle_dist basic values") {
  CHECK(circle_dist(CirclePoint(0.1), CirclePoint(0.9)) == doctest::Approx(0.2));
  CHECK(circle_dist(CirclePoint(0.37), CirclePoint(0.37)) == 0.0);
  CHECK(circle_dist(CirclePoint(0.0), CirclePoint(0.5)) == doctest::Approx(0.5));
}

TEST_CASE("circle_dist rotation invariance and triangle inequality") {
  Rng rng(22);
  for (int i = 0; i < 1000; ++i) {
    double a = rng.next_double(), b = rng.next_double(), c = rng.next_double();
    double t = rng.next_double();
    CHECK(circle_dist(a, b) == doctest::Approx(circle_dist(wrap(a + t), wrap(b + t))).epsilon(1e-12));
    CHECK(circle_dist(a, b) <= circle_dist(a, c) + circle_dist(c, b) + 1e-12);
  }
}

TEST_CASE("minimal_covering_arc spec examples") {
  std::vector<CirclePoint> cluster{CirclePoint(0.0), CirclePoint(0.01), CirclePoint(0.02),
                                   CirclePoint(0.99)};
  auto arc = minimal_covering_arc(cluster, 0.75);
  CHECK(arc.length == doctest::Approx(0.02).epsilon(1e-12));

  std::vector<CirclePoint> degenerate(7, CirclePoint(0.3));
  CHECK(minimal_covering_arc(degenerate, 0.5).length == doctest::Approx(0.0));

  std::vector<CirclePoint> grid;
  for (int k = 0; k < 10; ++k) grid.emplace_back(k / 10.0);
  CHECK(minimal_covering_arc(grid, 1.0).length == doctest::Approx(0.9));

  CHECK_THROWS(minimal_covering_arc({}, 0.5));
}

TEST_CASE("minimal_covering_arc antipodal pair needs half the circle") {
  std::vector<CirclePoint> pts{CirclePoint(0.2), CirclePoint(0.7)};
  CHECK(minimal_covering_arc(pts, 1.0).length == doctest::Approx(0.5));
}

TEST_CASE("minimal_covering_arc matches anchored brute force") {
  Rng rng(33);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 2 + rng.next_int(20);
    std::vector<CirclePoint> pts;
    for (int i = 0; i < n; ++i) pts.emplace_back(rng.next_double());
    double mass = 0.1 + 0.9 * rng.next_double();
    auto arc = minimal_covering_arc(pts, mass);
    CHECK(arc.length == doctest::Approx(brute_covering_length(pts, mass)).epsilon(1e-10));
    // returned arc really contains enough points
    int inside = 0;
    for (const auto& p : pts)
      if (wrap(p.value - arc.start.value) <= arc.length + 1e-12) ++inside;
    CHECK(inside >= static_cast<int>(std::ceil(mass * n - 1e-9)));
  }
}

TEST_CASE("wasserstein_circle spec examples") {
  std::vector<double> a{0.1, 0.4, 0.8};
  CHECK(wasserstein_circle(a, a) == doctest::Approx(0.0));
  CHECK(wasserstein_circle({0.0}, {0.5}) == doctest::Approx(0.5));
  CHECK(wasserstein_circle({0.0, 0.5}, {0.25, 0.75}) == doctest::Approx(0.25));
  CHECK_THROWS(wasserstein_circle({0.0}, {0.1, 0.2}));
}

TEST_CASE("wasserstein_circle matches permutation brute force for n <= 6") {
  Rng rng(44);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 1 + rng.next_int(6);
    std::vector<double> a, b;
    for (int i = 0; i < n; ++i) {
      a.push_back(rng.next_double());
      b.push_back(rng.next_double());
    }
    CHECK(wasserstein_circle(a, b) == doctest::Approx(brute_wasserstein(a, b)).epsilon(1e-12));
  }
}
