#include "fibersync/catalog.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>

namespace fibersync {

namespace {

// cubic Hermite on [a, b]
double hermite(double a, double b, double va, double vb, double ma, double mb, double x) {
  double h = b - a, t = (x - a) / h;
  double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * va + (t3 - 2 * t2 + t) * h * ma +
         (-2 * t3 + 3 * t2) * vb + (t3 - t2) * h * mb;
}

double hermite_deriv(double a, double b, double va, double vb, double ma, double mb, double x) {
  double h = b - a, t = (x - a) / h;
  double t2 = t * t;
  return ((6 * t2 - 6 * t) * va + (3 * t2 - 4 * t + 1) * h * ma + (-6 * t2 + 6 * t) * vb +
          (3 * t2 - 2 * t) * h * mb) /
         h;
}

}  // namespace

MonotoneCircleMap::MonotoneCircleMap(std::vector<double> knot_x, std::vector<double> knot_v,
                                     std::vector<double> knot_m)
    : xs_(std::move(knot_x)), vs_(std::move(knot_v)), ms_(std::move(knot_m)) {
  if (xs_.size() < 2 || xs_.size() != vs_.size() || xs_.size() != ms_.size())
    throw std::invalid_argument("parameters infeasible");
  // close the period
  xs_.push_back(xs_.front() + 1.0);
  vs_.push_back(vs_.front() + 1.0);
  ms_.push_back(ms_.front());
  for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
    if (xs_[i + 1] <= xs_[i] || vs_[i + 1] <= vs_[i] || ms_[i] <= 0.0)
      throw std::invalid_argument("parameters infeasible");
    // monotonicity grid check per segment
    for (int t = 0; t <= 64; ++t) {
      double x = xs_[i] + (xs_[i + 1] - xs_[i]) * t / 64.0;
      if (hermite_deriv(xs_[i], xs_[i + 1], vs_[i], vs_[i + 1], ms_[i], ms_[i + 1], x) <= 0.0)
        throw std::invalid_argument("parameters infeasible");
    }
  }
}

double MonotoneCircleMap::lift(double x) const {
  double k = std::floor(x - xs_.front());
  double u = x - k;  // in [xs_.front(), xs_.front() + 1)
  std::size_t i = 0;
  while (i + 2 < xs_.size() && u >= xs_[i + 1]) ++i;
  return hermite(xs_[i], xs_[i + 1], vs_[i], vs_[i + 1], ms_[i], ms_[i + 1], u) + k;
}

double MonotoneCircleMap::deriv(double x) const {
  double k = std::floor(x - xs_.front());
  double u = x - k;
  std::size_t i = 0;
  while (i + 2 < xs_.size() && u >= xs_[i + 1]) ++i;
  return hermite_deriv(xs_[i], xs_[i + 1], vs_[i], vs_[i + 1], ms_[i], ms_[i + 1], u);
}

void StepIFSParams::validate() const {
  if (!(slope > 0.5 && slope < 1.0))
    throw std::invalid_argument("slope must lie in (1/2, 1)");
  if (smoothing < 0.0) throw std::invalid_argument("smoothing width must be >= 0");
  if (!(p0 < p2 && p2 < p1))
    throw std::invalid_argument("need p0 < p2 < p1");
  const double marks[6] = {p0, p1, p2, q0, q1, q2};
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      if (circle_dist(marks[i], marks[j]) < 1e-6)
        throw std::invalid_argument("marked points must be distinct");
  if (!(q2 > p0 && q2 < p1))
    throw std::invalid_argument("q2 must lie in (p0, p1)");
}

nlohmann::json StepIFSParams::to_json() const {
  return {{"p0", p0}, {"p1", p1}, {"p2", p2}, {"q0", q0}, {"q1", q1},
          {"q2", q2}, {"slope", slope}, {"smoothing", smoothing}};
}

StepIFSParams StepIFSParams::from_json(const nlohmann::json& j) {
  StepIFSParams p;
  p.p0 = j.value("p0", p.p0);
  p.p1 = j.value("p1", p.p1);
  p.p2 = j.value("p2", p.p2);
  p.q0 = j.value("q0", p.q0);
  p.q1 = j.value("q1", p.q1);
  p.q2 = j.value("q2", p.q2);
  p.slope = j.value("slope", p.slope);
  p.smoothing = j.value("smoothing", p.smoothing);
  p.validate();
  return p;
}

namespace {

// Repeller slope: start at 1.5 and bisect toward 1.2 until the spline
// passes the monotonicity check; the multiplier stays above 1.2.
std::shared_ptr<MonotoneCircleMap> build_with_tuned_repeller(
    const std::function<std::shared_ptr<MonotoneCircleMap>(double)>& make) {
  double r = 1.5;
  for (int attempt = 0; attempt < 8; ++attempt) {
    try {
      return make(r);
    } catch (const std::invalid_argument&) {
      r = 0.5 * (r + 1.2);
    }
  }
  throw std::invalid_argument("parameters infeasible");
}

}  // namespace

StepIFSFamily::StepIFSFamily(StepIFSParams params, int base_degree)
    : params_(params), base_degree_(base_degree) {
  params_.validate();
  if (base_degree_ < 4)
    throw std::invalid_argument("step family needs base degree >= 4");
  const double s = params_.slope;
  const double p0 = params_.p0, p1 = params_.p1, p2 = params_.p2;
  // lift q0, q1 into the closure arc (p1, p0 + 1)
  auto lift_into = [](double q, double lo) { return q < lo ? q + 1.0 : q; };
  const double q0l = lift_into(params_.q0, p1);
  const double q1l = lift_into(params_.q1, p1);

  maps_[0] = build_with_tuned_repeller([&](double r) {
    return std::make_shared<MonotoneCircleMap>(
        std::vector<double>{p0, p1, q0l}, std::vector<double>{p0, p0 + s * (p1 - p0), q0l},
        std::vector<double>{s, s, r});
  });
  maps_[1] = build_with_tuned_repeller([&](double r) {
    return std::make_shared<MonotoneCircleMap>(
        std::vector<double>{p0, p1, q1l}, std::vector<double>{p1 - s * (p1 - p0), p1, q1l},
        std::vector<double>{s, s, r});
  });
  maps_[2] = build_with_tuned_repeller([&](double r) {
    return std::make_shared<MonotoneCircleMap>(std::vector<double>{p2, params_.q2},
                                               std::vector<double>{p2, params_.q2},
                                               std::vector<double>{s, r});
  });
}

double StepIFSFamily::map_lift(int k, double x) const {
  if (k < 3) return maps_[static_cast<std::size_t>(k)]->lift(x);
  // h3 = h2^{-1}: monotone bisection on the h2 lift
  const MonotoneCircleMap& h2 = *maps_[2];
  double n = std::floor(x);
  double f = x - n;
  const double c = h2.lift(0.0);
  double t = f + std::ceil(c - f);
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    double mid = 0.5 * (lo + hi);
    if (h2.lift(mid) < t)
      lo = mid;
    else
      hi = mid;
  }
  double u = 0.5 * (lo + hi);
  for (int i = 0; i < 3; ++i) {
    double d = h2.deriv(u);
    if (d <= 0.0) break;
    double un = u - (h2.lift(u) - t) / d;
    if (un < lo - 1e-12 || un > hi + 1e-12) break;
    u = un;
  }
  // h2.lift(u) = t and h2.lift(v + m) = h2.lift(v) + m give the translate
  return u + n - std::ceil(c - f);
}

double StepIFSFamily::map_deriv(int k, double x) const {
  if (k < 3) return maps_[static_cast<std::size_t>(k)]->deriv(x);
  return 1.0 / maps_[2]->deriv(map_lift(3, x));
}

// C0 blending lives in the top `smoothing` sliver of each digit cell, so the
// map at the cell's left edge (in particular at y = 0) is the pure h_k.
double StepIFSFamily::lift(double y, double x) const {
  const double pos = wrap(y) * base_degree_;
  const int cell = std::min(static_cast<int>(pos), base_degree_ - 1);
  const double u = pos - cell;  // position within the digit cell, in [0, 1)
  const int t = cell % 4;
  const double w = params_.smoothing;
  if (w > 0.0 && u > 1.0 - w) {
    double alpha = (1.0 - u) / w;  // 1 at the blend start, 0 at the boundary
    int next = (cell + 1) % base_degree_ % 4;
    return alpha * map_lift(t, x) + (1.0 - alpha) * map_lift(next, x);
  }
  return map_lift(t, x);
}

double StepIFSFamily::deriv(double y, double x) const {
  const double pos = wrap(y) * base_degree_;
  const int cell = std::min(static_cast<int>(pos), base_degree_ - 1);
  const double u = pos - cell;
  const int t = cell % 4;
  const double w = params_.smoothing;
  if (w > 0.0 && u > 1.0 - w) {
    double alpha = (1.0 - u) / w;
    int next = (cell + 1) % base_degree_ % 4;
    return alpha * map_deriv(t, x) + (1.0 - alpha) * map_deriv(next, x);
  }
  return map_deriv(t, x);
}

nlohmann::json StepIFSFamily::to_json() const {
  nlohmann::json j = {{"variant", "step_ifs"}, {"params", params_.to_json()}};
  j["params"]["base_degree"] = base_degree_;
  return j;
}

std::shared_ptr<const StepIFSFamily> build_step_ifs(const StepIFSParams& params,
                                                    int base_degree) {
  return std::make_shared<StepIFSFamily>(params, base_degree);
}

namespace {

MinimalityResult run_word(const StepIFSFamily& fam, const std::function<int()>& next_map,
                          long word_length, double delta) {
  const int bins = std::max(1, static_cast<int>(std::ceil(1.0 / delta - 1e-12)));
  MinimalityResult res;
  res.visit_histogram.assign(static_cast<std::size_t>(bins), 0);
  double x = 0.0;
  for (long t = 0; t < word_length; ++t) {
    int b = static_cast<int>(wrap(x) * bins);
    if (b >= bins) b = bins - 1;
    ++res.visit_histogram[static_cast<std::size_t>(b)];
    x = wrap(fam.map_lift(next_map(), x));
  }
  res.minimal = true;
  for (int v : res.visit_histogram)
    if (v == 0) res.minimal = false;
  return res;
}

}  // namespace

MinimalityResult ifs_minimality_test(const StepIFSParams& params, long word_length,
                                     double delta, std::uint64_t rng_seed) {
  if (word_length < 1000) throw std::invalid_argument("word length must be >= 1000");
  auto fam = build_step_ifs(params);
  Rng rng(rng_seed);
  return run_word(*fam, [&rng] { return rng.next_int(4); }, word_length, delta);
}

MinimalityResult ifs_single_map_test(const StepIFSParams& params, int map_index,
                                     long word_length, double delta) {
  auto fam = build_step_ifs(params);
  return run_word(*fam, [map_index] { return map_index; }, word_length, delta);
}

namespace {

bool parse_call(const std::string& name, const std::string& head, std::vector<double>& args) {
  if (name.rfind(head + "(", 0) != 0 || name.back() != ')') return false;
  args.clear();
  std::string body = name.substr(head.size() + 1, name.size() - head.size() - 2);
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t comma = body.find(',', pos);
    std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      args.push_back(std::stod(tok));
    } catch (...) {
      return false;
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return true;
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"flagship", "shear(i,j)", "rotation(d)", "northsouth(a,d)", "stepifs"};
}

SkewSystem make_named(const std::string& name) {
  std::vector<double> args;
  if (name == "flagship")
    return {std::make_shared<LinearBase>(3), std::make_shared<SineCoupled>(0.125)};
  if (parse_call(name, "shear", args) && args.size() == 2)
    return {std::make_shared<LinearBase>(static_cast<int>(args[0])),
            std::make_shared<LinearShear>(static_cast<int>(args[1]))};
  if (parse_call(name, "rotation", args) && args.size() == 1)
    return {std::make_shared<LinearBase>(static_cast<int>(args[0])),
            std::make_shared<RigidRotation>()};
  if (parse_call(name, "northsouth", args) && args.size() == 2)
    return {std::make_shared<LinearBase>(static_cast<int>(args[1])),
            std::make_shared<NorthSouth>(args[0])};
  if (name == "stepifs")
    return {std::make_shared<LinearBase>(4), build_step_ifs(StepIFSParams{})};
  std::string msg = "unknown system '" + name + "'; catalog:";
  for (const auto& n : catalog_names()) msg += " " + n;
  throw std::invalid_argument(msg);
}

SkewSystem system_from_json(const nlohmann::json& j) {
  if (j.is_string()) return make_named(j.get<std::string>());
  SkewSystem sys;
  sys.base = base_from_json(j.at("base"));
  const auto& fj = j.at("fiber");
  if (fj.at("variant") == "step_ifs") {
    auto params = StepIFSParams::from_json(fj.value("params", nlohmann::json::object()));
    int d = fj.value("params", nlohmann::json::object()).value("base_degree", sys.base->degree());
    sys.fiber = build_step_ifs(params, d);
  } else {
    sys.fiber = fiber_from_json(fj);
  }
  return sys;
}

}  // namespace fibersync
