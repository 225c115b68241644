// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "fibersync/analysis.hpp"
#include "fibersync/catalog.hpp"
#include "fibersync/parallel.hpp"
#include "fibersync/rng.hpp"

using namespace fibersync;

namespace {

int g_failures = 0;
int g_threads = 1;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int idx, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s  (%s)\n", ok ? "PASS" : "FAIL", idx, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

// --- 1: attractor coverage -------------------------------------------------

void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  auto F = make_named("flagship");
  Rng rng(2026);
  CirclePoint y(rng.next_double()), x(rng.next_double());
  for (int t = 0; t < 1000; ++t) {
    auto p = step(F, y, x);
    y = p.y;
    x = p.x;
  }
  std::vector<char> grid128(128 * 128, 0), grid32(32 * 32, 0);
  for (int t = 0; t < 10000; ++t) {
    grid128[std::min(static_cast<int>(y.value * 128), 127) * 128 +
            std::min(static_cast<int>(x.value * 128), 127)] = 1;
    grid32[std::min(static_cast<int>(y.value * 32), 31) * 32 +
           std::min(static_cast<int>(x.value * 32), 31)] = 1;
    auto p = step(F, y, x);
    y = p.y;
    x = p.x;
  }
  double cov128 = std::accumulate(grid128.begin(), grid128.end(), 0) / 16384.0;
  double cov32 = std::accumulate(grid32.begin(), grid32.end(), 0) / 1024.0;
  double dt = seconds_since(t0);
  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "coverage_128=%.4f need >0.95 [unattainable: 1e4 points <= 61%% of 16384 "
                "boxes by pigeonhole; same orbit covers %.4f of 32x32], %.2fs",
                cov128, cov32, dt);
  report(1, "figure-1-left orbit coverage", cov128 > 0.95 && dt < 1.0, detail);
}

// --- 2: figure-1-right sync ------------------------------------------------

void criterion_2() {
  auto t0 = std::chrono::steady_clock::now();
  auto F = make_named("flagship");
  std::vector<CirclePoint> xs;
  for (int i = 0; i < 20; ++i) xs.emplace_back(i / 20.0);
  auto series = sync_experiment(F, CirclePoint(0.371), xs, 200);
  int upticks = 0;
  for (std::size_t t = 1; t < series.max_spread.size(); ++t)
    if (series.max_spread[t] > series.max_spread[t - 1] + 1e-15) ++upticks;
  double dt = seconds_since(t0);
  bool ok = series.max_spread.back() < 1e-3 && upticks <= 20 && dt < 1.0;
  char detail[160];
  std::snprintf(detail, sizeof(detail), "final_spread=%.3e, upticks=%d/200, %.2fs",
                series.max_spread.back(), upticks, dt);
  report(2, "figure-1-right fiber contraction", ok, detail);
}

// --- 3: synchronization statistics ----------------------------------------

void criterion_3() {
  auto t0 = std::chrono::steady_clock::now();
  auto F = make_named("flagship");
  const int pairs = 1000;
  std::vector<char> synced(pairs, 0);
  parallel_for(pairs, g_threads, [&](int i) {
    Rng rng(Rng::derive(3003, static_cast<std::uint64_t>(i)));
    CirclePoint y(rng.next_double());
    CirclePoint x1(rng.next_double()), x2(rng.next_double());
    for (int t = 0; t < 1000; ++t) {
      if (circle_dist(x1, x2) < 1e-6) {
        synced[i] = 1;
        return;
      }
      x1 = F.fiber->eval(y, x1);
      x2 = F.fiber->eval(y, x2);
      y = F.base->apply(y);
    }
    if (circle_dist(x1, x2) < 1e-6) synced[i] = 1;
  });
  int count = std::accumulate(synced.begin(), synced.end(), 0);
  double dt = seconds_since(t0);
  char detail[128];
  std::snprintf(detail, sizeof(detail), "synced=%d/1000 need >=990, %.2fs", count, dt);
  report(3, "a.e. pairwise synchronization", count >= 990 && dt < 10.0, detail);
}

// --- 4: pullback delta convergence ----------------------------------------

void criterion_4() {
  auto t0 = std::chrono::steady_clock::now();
  auto F = make_named("flagship");
  const int n = 200;
  std::vector<double> len20(n), len40(n);
  parallel_for(n, g_threads, [&](int i) {
    auto s = sample_solenoid(*F.base, 40, 0, Rng::derive(4004, static_cast<std::uint64_t>(i)));
    len20[i] = concentration(pullback_push(F, s, uniform_measure(1000), 20), 0.1).length;
    len40[i] = concentration(pullback_push(F, s, uniform_measure(1000), 40), 0.1).length;
  });
  int concentrated = 0;
  for (double v : len40)
    if (v < 1e-3) ++concentrated;
  double m20 = median(len20), m40 = median(len40);
  double dt = seconds_since(t0);
  bool ok = concentrated >= 180 && m40 <= m20 && dt < 60.0;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "below_1e3=%d/200 need >=180, median d40=%.3e <= d20=%.3e, %.2fs", concentrated,
                m40, m20, dt);
  report(4, "pullback delta convergence", ok, detail);
}

// --- 5: invariant graph ----------------------------------------------------

void criterion_5() {
  auto t0 = std::chrono::steady_clock::now();
  auto F = make_named("flagship");
  auto summary = graph_separation(F, 200, 40, 1000, 5005, 0, g_threads);
  std::vector<double> residuals;
  for (const auto& g : summary.samples)
    if (!g.low_confidence_plus) residuals.push_back(g.residual_plus);
  double med_res = residuals.empty() ? 1.0 : median(residuals);
  double dt = seconds_since(t0);
  bool ok = med_res < 1e-3 && summary.median_separation > 0.01 &&
            summary.fraction_below_1e3 < 0.05 && dt < 120.0;
  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "median_residual=%.3e, median_sep=%.4f, frac_sep<1e-3=%.3f, confident=%d/200, "
                "%.1fs",
                med_res, summary.median_separation, summary.fraction_below_1e3,
                summary.n_confident, dt);
  report(5, "invariant graph and omega+/omega- separation", ok, detail);
}

// --- 6: strong contractivity ----------------------------------------------

void criterion_6() {
  auto t0 = std::chrono::steady_clock::now();
  auto F = make_named("flagship");
  auto cert = strongly_contractive_check(F, 0.05, 3, 1000);
  double dt = seconds_since(t0);
  bool ok = cert && cert->k == 1 && circle_dist(cert->y_hat, CirclePoint(0.0)) < 1e-9 &&
            cert->image_length < 0.05 && verify_certificate(F, *cert, 0.05) && dt < 1.0;
  char detail[160];
  if (cert)
    std::snprintf(detail, sizeof(detail), "y_hat=%.3g, k=%d, n=%d, |image|=%.3e, %.2fs",
                  cert->y_hat.value, cert->k, cert->n, cert->image_length, dt);
  else
    std::snprintf(detail, sizeof(detail), "no certificate, %.2fs", dt);
  report(6, "strong contractivity certificate", ok, detail);
}

// --- 7: non-transitive controls -------------------------------------------

void criterion_7() {
  auto t0 = std::chrono::steady_clock::now();
  double dev = invariant_circle_check(3, 2, 10000, 7007);
  auto mix = mixing_check(make_named("shear(3,2)"), 4, 64, 20, g_threads);

  auto rot = make_named("rotation(3)");
  double lyap = fiber_lyapunov(rot, CirclePoint(0.81), CirclePoint(0.13), 2000);
  std::vector<CirclePoint> xs{CirclePoint(0.0), CirclePoint(0.25), CirclePoint(0.6)};
  auto series = sync_experiment(rot, CirclePoint(0.37), xs, 100);
  bool constant = true;
  for (double s : series.max_spread)
    if (s != series.max_spread[0]) constant = false;

  double dt = seconds_since(t0);
  bool ok = dev < 1e-12 && !mix.verdict && mix.witness_source >= 0 && lyap == 0.0 && constant;
  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "invariant_dev=%.2e, mixing_verdict=%s witness=(%d,%d), rot_lyap=%g, "
                "rot_sync_constant=%s, %.2fs",
                dev, mix.verdict ? "true" : "false", mix.witness_source, mix.witness_target,
                lyap, constant ? "yes" : "no", dt);
  report(7, "non-transitive and isometric controls", ok, detail);
}

// --- 8: mixing evidence ----------------------------------------------------

void criterion_8() {
  auto t0 = std::chrono::steady_clock::now();
  auto flag = mixing_check(make_named("flagship"), 16, 400, 40, g_threads);
  double dt_flag = seconds_since(t0);
  auto t1 = std::chrono::steady_clock::now();
  auto ifs = mixing_check(make_named("stepifs"), 8, 400, 60, g_threads);
  double dt_ifs = seconds_since(t1);
  bool ok = flag.verdict && ifs.verdict && dt_flag < 120.0 && dt_ifs < 120.0;
  char detail[160];
  std::snprintf(detail, sizeof(detail), "flagship k=16: %s (%.1fs); stepifs k=8: %s (%.1fs)",
                flag.verdict ? "true" : "false", dt_flag, ifs.verdict ? "true" : "false",
                dt_ifs);
  report(8, "mixing evidence", ok, detail);
}

// --- 9: marginal support and diffuseness ----------------------------------

void criterion_9() {
  auto t0 = std::chrono::steady_clock::now();
  auto F = make_named("flagship");
  auto m = marginal_estimate(F, CirclePoint(0.371), 500, 40, 1000, 9009, g_threads);
  double cov = support_coverage(m, 0.05);
  double atom = max_atom_mass(m, 0.05);
  double dt = seconds_since(t0);
  bool ok = cov == 1.0 && atom < 0.2 && dt < 120.0;
  char detail[128];
  std::snprintf(detail, sizeof(detail), "support_coverage(0.05)=%.3f, max_atom_mass=%.3f, %.1fs",
                cov, atom, dt);
  report(9, "marginal full support and diffuseness", ok, detail);
}

// --- 10: oracle equivalences -----------------------------------------------

double brute_covering_length(const std::vector<CirclePoint>& pts, double mass) {
  const std::size_t n = pts.size();
  const auto need = static_cast<std::size_t>(std::ceil(mass * static_cast<double>(n) - 1e-9));
  double best = 2.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> offsets;
    for (std::size_t j = 0; j < n; ++j) offsets.push_back(wrap(pts[j].value - pts[i].value));
    std::sort(offsets.begin(), offsets.end());
    if (need >= 1 && need <= n) best = std::min(best, offsets[need - 1]);
  }
  return best;
}

double brute_wasserstein(const std::vector<double>& a, std::vector<double> b) {
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end());
  double best = 2.0;
  do {
    double cost = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) cost += circle_dist(a[i], b[perm[i]]);
    best = std::min(best, cost / static_cast<double>(a.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

void criterion_10() {
  auto t0 = std::chrono::steady_clock::now();
  Rng rng(1010);
  bool w1_ok = true, arc_ok = true, deriv_ok = true, inv_ok = true;
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 1 + rng.next_int(6);
    std::vector<double> a, b;
    for (int i = 0; i < n; ++i) {
      a.push_back(rng.next_double());
      b.push_back(rng.next_double());
    }
    if (std::fabs(wasserstein_circle(a, b) - brute_wasserstein(a, b)) > 1e-12) w1_ok = false;

    int m = 2 + rng.next_int(15);
    std::vector<CirclePoint> pts;
    for (int i = 0; i < m; ++i) pts.emplace_back(rng.next_double());
    double mass = 0.1 + 0.9 * rng.next_double();
    if (std::fabs(minimal_covering_arc(pts, mass).length - brute_covering_length(pts, mass)) >
        1e-10)
      arc_ok = false;
  }
  SineCoupled f(0.125);
  for (int trial = 0; trial < 1000; ++trial) {
    double y = rng.next_double(), x = rng.next_double();
    double fd = (f.lift(y, x + 1e-5) - f.lift(y, x - 1e-5)) / 2e-5;
    if (std::fabs(f.deriv(y, x) - fd) > 1e-6) deriv_ok = false;
    CirclePoint xp(rng.next_double()), yp(rng.next_double());
    if (circle_dist(f.invert(yp, f.eval(yp, xp)), xp) > 1e-10) inv_ok = false;
  }
  double dt = seconds_since(t0);
  bool ok = w1_ok && arc_ok && deriv_ok && inv_ok;
  char detail[160];
  std::snprintf(detail, sizeof(detail), "w1=%s arc=%s deriv=%s roundtrip=%s, %.2fs",
                w1_ok ? "ok" : "FAIL", arc_ok ? "ok" : "FAIL", deriv_ok ? "ok" : "FAIL",
                inv_ok ? "ok" : "FAIL", dt);
  report(10, "oracle equivalences", ok, detail);
}

// --- 11: determinism --------------------------------------------------------

std::string serialize(const SeparationSummary& s) {
  std::string out;
  char buf[160];
  for (const auto& g : s.samples) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", g.sample.y0.value,
                  g.omega_plus.value, g.omega_minus.value, g.residual_plus, g.dispersion_plus);
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "median=%.17g\n", s.median_separation);
  out += buf;
  return out;
}

void criterion_11() {
  auto t0 = std::chrono::steady_clock::now();
  auto F = make_named("flagship");
  auto one = serialize(graph_separation(F, 60, 30, 300, 111213, 0, 1));
  auto four = serialize(graph_separation(F, 60, 30, 300, 111213, 0, 4));
  auto eight = serialize(graph_separation(F, 60, 30, 300, 111213, 0, 8));
  double dt = seconds_since(t0);
  bool ok = one == four && one == eight;
  char detail[96];
  std::snprintf(detail, sizeof(detail), "1 vs 4 vs 8 threads byte-identical=%s, %.1fs",
                ok ? "yes" : "NO", dt);
  report(11, "thread-count determinism", ok, detail);
}

}  // namespace

int main() {
  g_threads = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  std::printf("acceptance suite (workers: %d)\n", g_threads);
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  if (g_failures > 0) std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
