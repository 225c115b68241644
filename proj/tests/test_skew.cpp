#include <algorithm>
#include <vector>

#include "doctest.h"
#include "fibersync/catalog.hpp"
#include "fibersync/rng.hpp"
#include "fibersync/skew_product.hpp"

using namespace fibersync;

TEST_CASE("step spec examples") {
  auto flagship = make_named("flagship");
  auto p = step(flagship, CirclePoint(0.0), CirclePoint(0.0));
  CHECK(p.y.value == doctest::Approx(0.0));
  CHECK(p.x.value == doctest::Approx(0.0));

  auto q = step(flagship, CirclePoint(0.25), CirclePoint(0.0));
  CHECK(q.y.value == doctest::Approx(0.75));
  CHECK(q.x.value == doctest::Approx(0.25));

  auto shear = make_named("shear(3,2)");
  auto r = step(shear, CirclePoint(0.1), CirclePoint(0.2));
  CHECK(r.y.value == doctest::Approx(0.3));
  CHECK(r.x.value == doctest::Approx(0.4));
}

TEST_CASE("fiber_compose agrees with repeated step") {
  auto flagship = make_named("flagship");
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    CirclePoint y(rng.next_double()), x(rng.next_double());
    auto [y0, xs0] = fiber_compose(flagship, y, {x}, 0);
    CHECK(y0.value == y.value);
    CHECK(xs0[0].value == x.value);

    auto [y5, xs5] = fiber_compose(flagship, y, {x}, 5);
    CirclePoint yy = y, xx = x;
    for (int t = 0; t < 5; ++t) {
      auto p = step(flagship, yy, xx);
      yy = p.y;
      xx = p.x;
    }
    CHECK(circle_dist(y5, yy) < 1e-12);
    CHECK(circle_dist(xs5[0], xx) < 1e-12);
  }
}

TEST_CASE("inverse_step spec examples") {
  auto shear = make_named("shear(3,2)");
  LinearBase g3(3);
  auto s = backward_orbit(g3, g3.apply(CirclePoint(0.1)), {0});  // y_{-1} = 0.1
  REQUIRE(s.backward[0].value == doctest::Approx(0.1));
  auto [rest, x] = inverse_step(shear, s, CirclePoint(0.4));
  CHECK(x.value == doctest::Approx(0.2).epsilon(1e-10));
  CHECK(rest.depth() == 0);
  CHECK(rest.y0.value == doctest::Approx(0.1));

  auto rot = make_named("rotation(3)");
  auto s2 = backward_orbit(g3, g3.apply(CirclePoint(0.3)), {0});
  auto [rest2, x2] = inverse_step(rot, s2, CirclePoint(0.5));
  CHECK(x2.value == doctest::Approx(0.2).epsilon(1e-10));

  SolenoidSample empty;
  empty.y0 = CirclePoint(0.5);
  CHECK_THROWS_WITH(inverse_step(shear, empty, CirclePoint(0.1)), "backward history exhausted");
}

TEST_CASE("inverse_step then step is the identity") {
  auto flagship = make_named("flagship");
  LinearBase g3(3);
  Rng rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    auto s = sample_solenoid(g3, 3, 0, rng.next_u64());
    CirclePoint x(rng.next_double());
    auto [rest, xi] = inverse_step(flagship, s, x);
    auto p = step(flagship, rest.y0, xi);
    CHECK(circle_dist(p.y, s.y0) < 1e-10);
    CHECK(circle_dist(p.x, x) < 1e-10);
  }
}

TEST_CASE("pullback preserves mass and count; n = 0 is a no-op") {
  auto flagship = make_named("flagship");
  LinearBase g3(3);
  auto s = sample_solenoid(g3, 15, 0, 5u);
  auto init = uniform_measure(128);
  auto out = pullback_push(flagship, s, init, 15);
  CHECK(out.size() == init.size());
  out.validate();
  auto same = pullback_push(flagship, s, init, 0);
  CHECK(same.points == init.points);
  CHECK_THROWS(pullback_push(flagship, s, init, 16));
}

TEST_CASE("rotation pullback stays uniform") {
  auto rot = make_named("rotation(3)");
  LinearBase g3(3);
  auto s = sample_solenoid(g3, 25, 0, 6u);
  auto out = pullback_push(rot, s, uniform_measure(1000), 25);
  CHECK(concentration(out, 0.1).length == doctest::Approx(0.9).epsilon(0.0025));
  auto inv = forward_inverse_pullback(rot, CirclePoint(0.37), 25, uniform_measure(1000));
  CHECK(concentration(inv, 0.1).length == doctest::Approx(0.9).epsilon(0.0025));
}

TEST_CASE("flagship pullback concentrates at depth 40") {
  auto flagship = make_named("flagship");
  LinearBase g3(3);
  auto s = sample_solenoid(g3, 40, 0, 7u);
  auto cloud = pullback_push(flagship, s, uniform_measure(1000), 40);
  CHECK(concentration(cloud, 0.1).length < 1e-3);
}

TEST_CASE("flagship forward-inverse pullback concentrates elsewhere") {
  auto flagship = make_named("flagship");
  auto cloud = forward_inverse_pullback(flagship, CirclePoint(0.37), 40, uniform_measure(1000));
  CHECK(concentration(cloud, 0.1).length < 1e-2);
}

TEST_CASE("pullback concentration is monotone-ish in depth") {
  auto flagship = make_named("flagship");
  LinearBase g3(3);
  std::vector<double> medians;
  for (int depth : {10, 20, 40}) {
    std::vector<double> lens;
    for (int i = 0; i < 100; ++i) {
      auto s = sample_solenoid(g3, depth, 0, Rng::derive(31337u, static_cast<std::uint64_t>(i)));
      lens.push_back(concentration(pullback_push(flagship, s, uniform_measure(300), depth), 0.1).length);
    }
    std::sort(lens.begin(), lens.end());
    medians.push_back(lens[lens.size() / 2]);
  }
  CHECK(medians[1] <= medians[0] * 1.1);
  CHECK(medians[2] <= medians[1] * 1.1);
}

TEST_CASE("fiber_compose matches pullback along the recorded orbit") {
  auto flagship = make_named("flagship");
  LinearBase g3(3);
  auto s = sample_solenoid(g3, 12, 0, 8u);
  auto cloud = pullback_push(flagship, s, uniform_measure(16), 12);
  auto [ytop, xs] = fiber_compose(flagship, s.backward.back(),
                                  [] {
                                    std::vector<CirclePoint> v;
                                    for (int k = 0; k < 16; ++k) v.emplace_back(k / 16.0);
                                    return v;
                                  }(),
                                  12);
  CHECK(circle_dist(ytop, s.y0) < 1e-9);
  for (int k = 0; k < 16; ++k)
    CHECK(circle_dist(CirclePoint(cloud.points[static_cast<std::size_t>(k)]), xs[static_cast<std::size_t>(k)]) < 1e-9);
}
