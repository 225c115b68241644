#include "fibersync/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "fibersync/parallel.hpp"
#include "fibersync/rng.hpp"

namespace fibersync {

SyncSeries sync_experiment(const SkewSystem& F, CirclePoint y0,
                           const std::vector<CirclePoint>& xs, int n) {
  if (xs.size() < 2) throw std::invalid_argument("need at least two initial conditions");
  SyncSeries out;
  std::vector<CirclePoint> cur = xs;
  CirclePoint y = y0;
  auto record = [&] {
    std::vector<double> row(cur.size());
    double spread = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      row[i] = cur[i].value;
      for (std::size_t jj = 0; jj < i; ++jj)
        spread = std::max(spread, circle_dist(cur[i], cur[jj]));
    }
    out.traces.push_back(std::move(row));
    out.max_spread.push_back(spread);
  };
  record();
  for (int t = 0; t < n; ++t) {
    for (CirclePoint& x : cur) x = F.fiber->eval(y, x);
    y = F.base->apply(y);
    record();
  }
  return out;
}

double fiber_lyapunov(const SkewSystem& F, CirclePoint y0, CirclePoint x0, int n) {
  if (n < 1) throw std::invalid_argument("need n >= 1");
  double sum = 0.0;
  CirclePoint y = y0, x = x0;
  for (int t = 0; t < n; ++t) {
    sum += std::log(F.fiber->deriv(y.value, x.value));
    TorusPoint p = step(F, y, x);
    y = p.y;
    x = p.x;
  }
  return sum / n;
}

namespace {

// Periodic base orbit y_hat, g(y_hat), ..., g^{k-1}(y_hat).
std::vector<double> base_orbit(const SkewSystem& F, CirclePoint y_hat, int k) {
  std::vector<double> orbit(static_cast<std::size_t>(k));
  CirclePoint y = y_hat;
  for (int i = 0; i < k; ++i) {
    orbit[static_cast<std::size_t>(i)] = y.value;
    y = F.base->apply(y);
  }
  if (circle_dist(y, y_hat) > 1e-9)
    throw std::invalid_argument("y_hat is not g^k-periodic");
  return orbit;
}

// Lift of the composed fiber map f^k along the periodic orbit.
double composed_lift(const SkewSystem& F, const std::vector<double>& orbit, double x) {
  double v = x;
  for (double y : orbit) {
    double n = std::floor(v);
    v = F.fiber->lift(y, v - n) + n;  // degree-one lift
  }
  return v;
}

double composed_deriv(const SkewSystem& F, const std::vector<double>& orbit, double x) {
  double v = x, d = 1.0;
  for (double y : orbit) {
    double n = std::floor(v);
    d *= F.fiber->deriv(y, v - n);
    v = F.fiber->lift(y, v - n) + n;
  }
  return d;
}

}  // namespace

FixedPointReport fiber_fixed_points(const SkewSystem& F, CirclePoint y_hat, int k) {
  const auto orbit = base_orbit(F, y_hat, k);
  auto displacement = [&](double x) { return composed_lift(F, orbit, x) - x; };

  const int grid = 1 << 12;
  std::vector<double> e(grid + 1);
  double emin = 1e300, emax = -1e300, edev = 0.0;
  for (int i = 0; i <= grid; ++i) {
    e[static_cast<std::size_t>(i)] = displacement(static_cast<double>(i) / grid);
    emin = std::min(emin, e[static_cast<std::size_t>(i)]);
    emax = std::max(emax, e[static_cast<std::size_t>(i)]);
    edev = std::max(edev, std::fabs(e[static_cast<std::size_t>(i)] -
                                    std::round(e[static_cast<std::size_t>(i)])));
  }
  if (edev < 1e-9) throw std::runtime_error("degenerate: non-hyperbolic family");

  FixedPointReport report;
  for (double level = std::ceil(emin - 1e-12); level <= emax + 1e-12; level += 1.0) {
    for (int i = 0; i < grid; ++i) {
      double a = e[static_cast<std::size_t>(i)] - level;
      double b = e[static_cast<std::size_t>(i) + 1] - level;
      bool crossing = (a <= 0.0 && b > 0.0) || (a >= 0.0 && b < 0.0) ||
                      (std::fabs(a) < 1e-13 && i == 0);
      if (!crossing) continue;
      double lo = static_cast<double>(i) / grid, hi = static_cast<double>(i + 1) / grid;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = displacement(mid) - level;
        if ((fm < 0.0) == (a < 0.0))
          lo = mid;
        else
          hi = mid;
      }
      double root = 0.5 * (lo + hi);
      if (std::fabs(a) < 1e-13) root = static_cast<double>(i) / grid;
      // dedup roots coinciding mod 1
      bool dup = false;
      for (const auto& p : report.points)
        if (circle_dist(p.x_star, CirclePoint(root)) < 1e-7) dup = true;
      if (dup) continue;
      FiberFixedPoint fp;
      fp.x_star = CirclePoint(root);
      fp.multiplier = composed_deriv(F, orbit, root);
      if (fp.multiplier < 1.0 - 1e-8)
        fp.classification = Stability::attracting;
      else if (fp.multiplier > 1.0 + 1e-8)
        fp.classification = Stability::repelling;
      else
        fp.classification = Stability::neutral;
      report.points.push_back(fp);
    }
  }
  std::sort(report.points.begin(), report.points.end(),
            [](const FiberFixedPoint& a, const FiberFixedPoint& b) {
              return a.x_star.value < b.x_star.value;
            });
  return report;
}

std::optional<ContractivityCertificate> strongly_contractive_check(const SkewSystem& F,
                                                                   double eps, int k_max,
                                                                   int n_max) {
  if (eps <= 0.0 || eps >= 0.5) throw std::invalid_argument("eps must be in (0, 1/2)");
  for (int k = 1; k <= k_max; ++k) {
    for (const CirclePoint& y_hat : F.base->periodic_points(k)) {
      FixedPointReport report;
      try {
        report = fiber_fixed_points(F, y_hat, k);
      } catch (const std::runtime_error&) {
        continue;  // degenerate fiber composition at this periodic point
      }
      const FiberFixedPoint* attractor = nullptr;
      const FiberFixedPoint* repeller = nullptr;
      int n_attract = 0, n_repel = 0;
      for (const auto& p : report.points) {
        if (p.classification == Stability::attracting) {
          attractor = &p;
          ++n_attract;
        } else if (p.classification == Stability::repelling) {
          repeller = &p;
          ++n_repel;
        }
      }
      if (n_attract != 1 || n_repel != 1) continue;

      const auto orbit = base_orbit(F, y_hat, k);
      // V = complement of a 0.9 eps arc centered at the repeller, so that
      // |V| = 1 - 0.9 eps > 1 - eps strictly
      const double gap = 0.9 * eps;
      double a = repeller->x_star.value + 0.5 * gap;
      double b = a + (1.0 - gap);
      for (int n = 1; n <= n_max; ++n) {
        a = composed_lift(F, orbit, a);
        b = composed_lift(F, orbit, b);
        double len = b - a;
        if (len < eps) {
          ContractivityCertificate cert;
          cert.y_hat = y_hat;
          cert.k = k;
          cert.V = CircleArc{CirclePoint(repeller->x_star.value + 0.5 * gap), 1.0 - gap};
          cert.n = n;
          cert.image_length = len;
          cert.attractor = attractor->x_star;
          cert.repeller = repeller->x_star;
          return cert;
        }
      }
    }
  }
  return std::nullopt;
}

bool verify_certificate(const SkewSystem& F, const ContractivityCertificate& cert,
                        double eps, int probe_points) {
  if (cert.V.length <= 1.0 - eps - 1e-12) return false;
  std::vector<CirclePoint> probes;
  probes.reserve(static_cast<std::size_t>(probe_points));
  for (int i = 0; i < probe_points; ++i)
    probes.emplace_back(cert.V.start.value +
                        cert.V.length * (static_cast<double>(i) / (probe_points - 1)));
  auto [yk, images] = fiber_compose(F, cert.y_hat, probes, cert.k * cert.n);
  if (circle_dist(yk, cert.y_hat) > 1e-6) return false;
  auto arc = minimal_covering_arc(images, 1.0);
  return arc.length < eps;
}

MixingReport mixing_check(const SkewSystem& F, int k, int particles_per_box, int n_max,
                          int threads) {
  if (k < 4) throw std::invalid_argument("resolution k must be >= 4");
  if (particles_per_box < 25) throw std::invalid_argument("need >= 25 particles per box");
  MixingReport report;
  report.k = k;
  report.n_max = n_max;
  const int boxes = k * k;
  report.first_hit.assign(static_cast<std::size_t>(boxes) * boxes, -1);

  const int side = static_cast<int>(std::ceil(std::sqrt(particles_per_box)));
  parallel_for(boxes, threads, [&](int u) {
    const int uy = u / k, ux = u % k;
    std::vector<double> ys, xs;
    ys.reserve(static_cast<std::size_t>(side) * side);
    xs.reserve(static_cast<std::size_t>(side) * side);
    for (int iy = 0; iy < side; ++iy)
      for (int ix = 0; ix < side; ++ix) {
        ys.push_back((uy + (iy + 0.5) / side) / k);
        xs.push_back((ux + (ix + 0.5) / side) / k);
      }
    int* row = report.first_hit.data() + static_cast<std::size_t>(u) * boxes;
    auto mark = [&](int t) {
      for (std::size_t i = 0; i < ys.size(); ++i) {
        int by = static_cast<int>(ys[i] * k);
        int bx = static_cast<int>(xs[i] * k);
        if (by >= k) by = k - 1;
        if (bx >= k) bx = k - 1;
        int v = by * k + bx;
        if (row[v] < 0) row[v] = t;
      }
    };
    mark(0);
    for (int t = 1; t <= n_max; ++t) {
      for (std::size_t i = 0; i < ys.size(); ++i) {
        double ny = wrap(F.base->lift(ys[i]));
        xs[i] = wrap(F.fiber->lift(ys[i], xs[i]));
        ys[i] = ny;
      }
      mark(t);
    }
  });

  report.verdict = true;
  for (int u = 0; u < boxes && report.verdict; ++u)
    for (int v = 0; v < boxes; ++v)
      if (report.first_hit[static_cast<std::size_t>(u) * boxes + v] < 0) {
        report.verdict = false;
        report.witness_source = u;
        report.witness_target = v;
        break;
      }
  return report;
}

double invariant_circle_check(int i, int j, int samples, std::uint64_t rng_seed) {
  if (i <= 1) throw std::invalid_argument("base degree i must exceed 1");
  SkewSystem F{std::make_shared<LinearBase>(i), std::make_shared<LinearShear>(j)};
  Rng rng(rng_seed);
  double worst = 0.0;
  for (int t = 0; t < samples; ++t) {
    double y = rng.next_double(), x = rng.next_double();
    double c0 = wrap(j * x - (i - 1) * y);
    TorusPoint p = step(F, CirclePoint(y), CirclePoint(x));
    double c1 = wrap(j * p.x.value - (i - 1) * p.y.value);
    worst = std::max(worst, circle_dist(c0, c1));
  }
  return worst;
}

namespace {

struct AtomResult {
  CirclePoint location;
  double dispersion = 1.0;
  bool low_confidence = true;
};

AtomResult safe_atom(const EmpiricalCircleMeasure& m) {
  AtomResult r;
  try {
    AtomEstimate est = atom_estimate(m);
    r.location = est.location;
    r.dispersion = est.dispersion;
    r.low_confidence = est.dispersion > 0.1;
  } catch (const std::runtime_error&) {
    r.low_confidence = true;
  }
  return r;
}

}  // namespace

GraphSample estimate_graph(const SkewSystem& F, const SolenoidSample& s, int cloud_n) {
  if (s.depth() < 10) throw std::invalid_argument("need depth >= 10");
  GraphSample out;
  out.sample = s;

  AtomResult plus = safe_atom(pullback_push(F, s, uniform_measure(cloud_n), s.depth()));
  out.omega_plus = plus.location;
  out.dispersion_plus = plus.dispersion;
  out.low_confidence_plus = plus.low_confidence;

  AtomResult minus =
      safe_atom(forward_inverse_pullback(F, s.y0, s.depth(), uniform_measure(cloud_n)));
  out.omega_minus = minus.location;
  out.dispersion_minus = minus.dispersion;
  out.low_confidence_minus = minus.low_confidence;

  // invariance residual: compare f_{y0}(omega+) against an independent
  // estimate of omega+ at the shifted sample
  SolenoidSample adv = advance(*F.base, s);
  AtomResult plus_next = safe_atom(pullback_push(F, adv, uniform_measure(cloud_n), adv.depth()));
  if (!plus.low_confidence && !plus_next.low_confidence)
    out.residual_plus = circle_dist(F.fiber->eval(s.y0, out.omega_plus), plus_next.location);
  else
    out.residual_plus = 1.0;
  return out;
}

SeparationSummary graph_separation(const SkewSystem& F, int n_samples, int depth, int cloud_n,
                                   std::uint64_t rng_seed, int burn_in, int threads) {
  if (n_samples < 50) throw std::invalid_argument("need >= 50 samples");
  SeparationSummary out;
  out.n_samples = n_samples;
  out.samples.resize(static_cast<std::size_t>(n_samples));
  parallel_for(n_samples, threads, [&](int i) {
    SolenoidSample s =
        sample_solenoid(*F.base, depth, burn_in, Rng::derive(rng_seed, static_cast<std::uint64_t>(i)));
    out.samples[static_cast<std::size_t>(i)] = estimate_graph(F, s, cloud_n);
  });

  std::vector<double> seps;
  int below = 0;
  for (const GraphSample& gs : out.samples) {
    if (gs.low_confidence_plus || gs.low_confidence_minus) continue;
    double d = circle_dist(gs.omega_plus, gs.omega_minus);
    seps.push_back(d);
    if (d < 1e-3) ++below;
  }
  out.n_confident = static_cast<int>(seps.size());
  if (!seps.empty()) {
    std::sort(seps.begin(), seps.end());
    out.min_separation = seps.front();
    out.max_separation = seps.back();
    out.median_separation = seps[seps.size() / 2];
    out.fraction_below_1e3 = static_cast<double>(below) / static_cast<double>(seps.size());
  }
  return out;
}

EmpiricalCircleMeasure marginal_estimate(const SkewSystem& F, CirclePoint y0, int n_pasts,
                                         int depth, int cloud_n, std::uint64_t rng_seed,
                                         int threads) {
  if (n_pasts < 100) throw std::invalid_argument("need >= 100 pasts");
  std::vector<double> pooled(static_cast<std::size_t>(n_pasts), -1.0);
  parallel_for(n_pasts, threads, [&](int i) {
    Rng rng(Rng::derive(rng_seed, static_cast<std::uint64_t>(i)));
    BranchWord word(static_cast<std::size_t>(depth));
    for (int& digit : word) digit = rng.next_int(F.base->degree());
    SolenoidSample s = backward_orbit(*F.base, y0, word);
    AtomResult r = safe_atom(pullback_push(F, s, uniform_measure(cloud_n), depth));
    if (!r.low_confidence) pooled[static_cast<std::size_t>(i)] = r.location.value;
  });
  EmpiricalCircleMeasure m;
  for (double v : pooled)
    if (v >= 0.0) m.points.push_back(v);
  if (m.points.empty()) throw std::runtime_error("no concentration");
  m.weights.assign(m.points.size(), 1.0 / static_cast<double>(m.points.size()));
  return m;
}

}  // namespace fibersync
