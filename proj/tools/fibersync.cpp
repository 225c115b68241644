// fibersync: experiments on circle diffeomorphisms forced by expanding
// circle maps.  One subcommand per experiment; every run writes a CSV block
// and a JSON summary embedding the resolved configuration.
//
// Exit codes: 0 success, 1 error, 2 experiment ran but the checked claim
// was refuted (e.g. a mixing witness was found).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fibersync/analysis.hpp"
#include "fibersync/catalog.hpp"
#include "fibersync/parallel.hpp"
#include "fibersync/rng.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fibersync;

namespace {

constexpr int kExitRefuted = 2;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", std::gmtime(&t));
  return buf;
}

struct Run {
  std::string command;
  json config;  // resolved parameters, embedded in every summary
  SkewSystem sys;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  int threads = 1;

  fs::path path(const std::string& ext) const {
    fs::create_directories(out_dir);
    return fs::path(out_dir) / (command + "-" + std::to_string(seed) + "-" + timestamp() + ext);
  }

  void write_csv(const std::string& content) const {
    std::ofstream f(path(".csv"));
    if (!f) throw std::runtime_error("cannot write output under " + out_dir);
    f << content;
  }

  void write_summary(json summary) const {
    summary["command"] = command;
    summary["config"] = config;
    summary["system"] = sys.to_json();
    summary["seed"] = seed;
    std::ofstream f(path(".json"));
    if (!f) throw std::runtime_error("cannot write output under " + out_dir);
    f << summary.dump(2) << "\n";
  }
};

// config file < explicit flags; flag defaults fill whatever remains
json load_config(const std::string& config_path) {
  if (config_path.empty()) return json::object();
  std::ifstream f(config_path);
  if (!f) throw std::runtime_error("cannot read config " + config_path);
  return json::parse(f);
}

int param_int(const json& cfg, const std::string& key, int flag_value, bool flag_set) {
  if (flag_set) return flag_value;
  return cfg.value(key, flag_value);
}

double param_real(const json& cfg, const std::string& key, double flag_value, bool flag_set) {
  if (flag_set) return flag_value;
  return cfg.value(key, flag_value);
}

// --- attractor ------------------------------------------------------------

int cmd_attractor(Run& run, int iterations, int burn_in, int resolution) {
  Rng rng(run.seed);
  CirclePoint y(rng.next_double()), x(rng.next_double());
  for (int t = 0; t < burn_in; ++t) {
    TorusPoint p = step(run.sys, y, x);
    y = p.y;
    x = p.x;
  }
  std::vector<int> raster(static_cast<std::size_t>(resolution) * resolution, 0);
  std::vector<int> coarse(128 * 128, 0);
  std::string csv = "y,x\n";
  for (int t = 0; t < iterations; ++t) {
    int ry = std::min(static_cast<int>(y.value * resolution), resolution - 1);
    int rx = std::min(static_cast<int>(x.value * resolution), resolution - 1);
    raster[static_cast<std::size_t>(ry) * resolution + rx] = 1;
    coarse[std::min(static_cast<int>(y.value * 128), 127) * 128 +
           std::min(static_cast<int>(x.value * 128), 127)] = 1;
    csv += fmt(y.value) + "," + fmt(x.value) + "\n";
    TorusPoint p = step(run.sys, y, x);
    y = p.y;
    x = p.x;
  }
  run.write_csv(csv);

  std::ofstream pgm(run.path(".pgm"));
  pgm << "P2\n" << resolution << " " << resolution << "\n1\n";
  for (int r = 0; r < resolution; ++r) {
    for (int c = 0; c < resolution; ++c)
      pgm << raster[static_cast<std::size_t>(r) * resolution + c] << (c + 1 == resolution ? "" : " ");
    pgm << "\n";
  }

  int occupied = 0, occupied128 = 0;
  for (int v : raster) occupied += v;
  for (int v : coarse) occupied128 += v;
  run.write_summary({{"iterations", iterations},
                     {"burn_in", burn_in},
                     {"resolution", resolution},
                     {"occupancy_fraction", static_cast<double>(occupied) / (resolution * resolution)},
                     {"occupancy_fraction_128", occupied128 / 16384.0}});
  return 0;
}

// --- sync -----------------------------------------------------------------

int cmd_sync(Run& run, double y0, int n_points, int iterations) {
  std::vector<CirclePoint> xs;
  for (int i = 0; i < n_points; ++i) xs.emplace_back(static_cast<double>(i) / n_points);
  auto series = sync_experiment(run.sys, CirclePoint(y0), xs, iterations);

  std::string csv = "t";
  for (int i = 0; i < n_points; ++i) csv += ",x" + std::to_string(i);
  csv += ",max_spread\n";
  for (std::size_t t = 0; t < series.max_spread.size(); ++t) {
    csv += std::to_string(t);
    for (double v : series.traces[t]) csv += "," + fmt(v);
    csv += "," + fmt(series.max_spread[t]) + "\n";
  }
  run.write_csv(csv);

  int upticks = 0;
  for (std::size_t t = 1; t < series.max_spread.size(); ++t)
    if (series.max_spread[t] > series.max_spread[t - 1] + 1e-15) ++upticks;
  run.write_summary({{"y0", y0},
                     {"n_points", n_points},
                     {"iterations", iterations},
                     {"initial_spread", series.max_spread.front()},
                     {"final_spread", series.max_spread.back()},
                     {"uptick_fraction",
                      static_cast<double>(upticks) / static_cast<double>(iterations)}});
  return 0;
}

// --- lyapunov -------------------------------------------------------------

int cmd_lyapunov(Run& run, int iterations) {
  Rng rng(run.seed);
  CirclePoint y(rng.next_double()), x(rng.next_double());
  std::string csv = "n,partial_average\n";
  double sum = 0.0;
  CirclePoint yy = y, xx = x;
  for (int t = 1; t <= iterations; ++t) {
    sum += std::log(run.sys.fiber->deriv(yy.value, xx.value));
    TorusPoint p = step(run.sys, yy, xx);
    yy = p.y;
    xx = p.x;
    if (t % 100 == 0 || t == iterations)
      csv += std::to_string(t) + "," + fmt(sum / t) + "\n";
  }
  run.write_csv(csv);
  run.write_summary({{"iterations", iterations},
                     {"y0", y.value},
                     {"x0", x.value},
                     {"fiber_lyapunov", sum / iterations}});
  return 0;
}

// --- pullback -------------------------------------------------------------

int cmd_pullback(Run& run, int n_samples, int depth, int cloud_n, double eps, int burn_in) {
  std::vector<double> len_half(static_cast<std::size_t>(n_samples));
  std::vector<double> len_full(static_cast<std::size_t>(n_samples));
  parallel_for(n_samples, run.threads, [&](int i) {
    auto s = sample_solenoid(*run.sys.base, depth, burn_in,
                             Rng::derive(run.seed, static_cast<std::uint64_t>(i)));
    auto half = pullback_push(run.sys, s, uniform_measure(cloud_n), depth / 2);
    auto full = pullback_push(run.sys, s, uniform_measure(cloud_n), depth);
    len_half[static_cast<std::size_t>(i)] = concentration(half, eps).length;
    len_full[static_cast<std::size_t>(i)] = concentration(full, eps).length;
  });

  std::string csv = "sample,arc_depth_half,arc_depth_full\n";
  for (int i = 0; i < n_samples; ++i)
    csv += std::to_string(i) + "," + fmt(len_half[static_cast<std::size_t>(i)]) + "," +
           fmt(len_full[static_cast<std::size_t>(i)]) + "\n";
  run.write_csv(csv);

  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  int concentrated = 0;
  for (double v : len_full)
    if (v < 1e-3) ++concentrated;
  run.write_summary({{"n_samples", n_samples},
                     {"depth", depth},
                     {"cloud_n", cloud_n},
                     {"eps", eps},
                     {"median_arc_half_depth", median(len_half)},
                     {"median_arc_full_depth", median(len_full)},
                     {"fraction_below_1e3", static_cast<double>(concentrated) / n_samples}});
  return 0;
}

// --- graph ----------------------------------------------------------------

int cmd_graph(Run& run, int n_samples, int depth, int cloud_n, int burn_in) {
  auto summary = graph_separation(run.sys, n_samples, depth, cloud_n, run.seed, burn_in,
                                  run.threads);
  std::string csv =
      "sample,y0,omega_plus,omega_minus,residual_plus,dispersion_plus,dispersion_minus,"
      "low_confidence\n";
  std::vector<double> residuals;
  for (std::size_t i = 0; i < summary.samples.size(); ++i) {
    const GraphSample& g = summary.samples[i];
    bool low = g.low_confidence_plus || g.low_confidence_minus;
    csv += std::to_string(i) + "," + fmt(g.sample.y0.value) + "," + fmt(g.omega_plus.value) +
           "," + fmt(g.omega_minus.value) + "," + fmt(g.residual_plus) + "," +
           fmt(g.dispersion_plus) + "," + fmt(g.dispersion_minus) + "," +
           (low ? "1" : "0") + "\n";
    if (!low) residuals.push_back(g.residual_plus);
  }
  run.write_csv(csv);

  json j = {{"n_samples", n_samples},
            {"depth", depth},
            {"cloud_n", cloud_n},
            {"n_confident", summary.n_confident},
            {"low_confidence_fraction",
             1.0 - static_cast<double>(summary.n_confident) / n_samples}};
  if (!residuals.empty()) {
    std::sort(residuals.begin(), residuals.end());
    j["median_residual_plus"] = residuals[residuals.size() / 2];
    j["median_separation"] = summary.median_separation;
    j["min_separation"] = summary.min_separation;
    j["max_separation"] = summary.max_separation;
    j["separation_fraction_below_1e3"] = summary.fraction_below_1e3;
  }
  run.write_summary(j);
  return 0;
}

// --- mixing ---------------------------------------------------------------

int cmd_mixing(Run& run, int resolution, int particles, int n_max) {
  auto report = mixing_check(run.sys, resolution, particles, n_max, run.threads);
  // Verdict semantics: false certifies a non-mixing witness at this box
  // resolution (up to the particle approximation); true is evidence only.
  std::string csv = "source,target,first_hit\n";
  const int boxes = resolution * resolution;
  for (int u = 0; u < boxes; ++u)
    for (int v = 0; v < boxes; ++v)
      csv += std::to_string(u) + "," + std::to_string(v) + "," +
             std::to_string(report.first_hit[static_cast<std::size_t>(u) * boxes + v]) + "\n";
  run.write_csv(csv);

  json j = {{"resolution", resolution},
            {"particles_per_box", particles},
            {"n_max", n_max},
            {"verdict", report.verdict},
            {"semantics", "false = certified non-mixing witness at this resolution; "
                          "true = evidence, not proof"}};
  if (!report.verdict) {
    j["witness_source_box"] = report.witness_source;
    j["witness_target_box"] = report.witness_target;
  }
  run.write_summary(j);
  return report.verdict ? 0 : kExitRefuted;
}

// --- contractive ----------------------------------------------------------

int cmd_contractive(Run& run, double eps, int k_max, int n_max) {
  auto cert = strongly_contractive_check(run.sys, eps, k_max, n_max);
  json j = {{"eps", eps}, {"k_max", k_max}, {"n_max", n_max}};
  if (cert) {
    j["certificate"] = {{"y_hat", cert->y_hat.value},
                        {"k", cert->k},
                        {"V_start", cert->V.start.value},
                        {"V_length", cert->V.length},
                        {"n", cert->n},
                        {"image_length", cert->image_length},
                        {"attractor", cert->attractor.value},
                        {"repeller", cert->repeller.value}};
    j["reverified"] = verify_certificate(run.sys, *cert, eps);
  } else {
    j["certificate"] = nullptr;
    j["failure"] = "no certificate found at k <= " + std::to_string(k_max);
  }
  run.write_summary(j);
  return cert ? 0 : kExitRefuted;
}

// --- ifs ------------------------------------------------------------------

int cmd_ifs(Run& run, long word_length, double delta) {
  StepIFSParams params;
  if (run.config.contains("step_params"))
    params = StepIFSParams::from_json(run.config["step_params"]);
  auto res = ifs_minimality_test(params, word_length, delta, run.seed);
  std::string csv = "bin,visits\n";
  for (std::size_t b = 0; b < res.visit_histogram.size(); ++b)
    csv += std::to_string(b) + "," + std::to_string(res.visit_histogram[b]) + "\n";
  run.write_csv(csv);
  run.write_summary({{"word_length", word_length},
                     {"delta", delta},
                     {"step_params", params.to_json()},
                     {"minimal", res.minimal}});
  return res.minimal ? 0 : kExitRefuted;
}

// --- sweep ----------------------------------------------------------------

int cmd_sweep(Run& run, const std::string& inner, double amp_min, double amp_max, int steps,
              int iterations) {
  std::string csv = "amplitude,summary\n";
  json cells = json::array();
  for (int i = 0; i < steps; ++i) {
    double a = amp_min + (amp_max - amp_min) * i / std::max(1, steps - 1);
    SkewSystem sys{std::make_shared<LinearBase>(3), std::make_shared<SineCoupled>(a)};
    double value = 0.0;
    if (inner == "sync") {
      std::vector<CirclePoint> xs;
      for (int p = 0; p < 20; ++p) xs.emplace_back(p / 20.0);
      value = sync_experiment(sys, CirclePoint(0.371), xs, iterations).max_spread.back();
    } else if (inner == "lyapunov") {
      Rng rng(Rng::derive(run.seed, static_cast<std::uint64_t>(i)));
      value = fiber_lyapunov(sys, CirclePoint(rng.next_double()), CirclePoint(rng.next_double()),
                             iterations);
    } else {
      throw std::invalid_argument("sweep supports inner commands: sync, lyapunov");
    }
    csv += fmt(a) + "," + fmt(value) + "\n";
    cells.push_back({{"amplitude", a}, {"value", value}});
  }
  run.write_csv(csv);
  run.write_summary({{"inner", inner},
                     {"amplitude_min", amp_min},
                     {"amplitude_max", amp_max},
                     {"steps", steps},
                     {"iterations", iterations},
                     {"cells", cells}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skew products of circle diffeomorphisms over expanding base maps"};
  app.require_subcommand(1);

  std::string config_path, system_name = "flagship", out_dir = ".";
  std::uint64_t seed = 1;
  int threads = 1;
  app.add_option("--config", config_path, "JSON config file")->capture_default_str();
  app.add_option("--system", system_name, "catalog name or inline JSON descriptor");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker cap (output is thread-count independent)");

  auto* c_catalog = app.add_subcommand("catalog", "list named systems");

  int iterations = 10000, burn_in = 1000, resolution = 512;
  auto* c_attr = app.add_subcommand("attractor", "orbit cloud raster (PGM + CSV)");
  auto* o_iter = c_attr->add_option("--iterations", iterations);
  auto* o_burn = c_attr->add_option("--burn-in", burn_in);
  auto* o_res = c_attr->add_option("--resolution", resolution);

  double sync_y0 = 0.371;
  int sync_points = 20, sync_iters = 200;
  auto* c_sync = app.add_subcommand("sync", "fiber synchronization time series");
  auto* o_sy0 = c_sync->add_option("--y0", sync_y0);
  auto* o_spts = c_sync->add_option("--n-points", sync_points);
  auto* o_sit = c_sync->add_option("--iterations", sync_iters);

  int lyap_iters = 10000;
  auto* c_lyap = app.add_subcommand("lyapunov", "fiber Lyapunov exponent");
  auto* o_lit = c_lyap->add_option("--iterations", lyap_iters);

  int pb_samples = 200, pb_depth = 40, pb_cloud = 1000, pb_burn = 0;
  double pb_eps = 0.1;
  auto* c_pb = app.add_subcommand("pullback", "pullback concentration statistics");
  auto* o_pbs = c_pb->add_option("--samples", pb_samples);
  auto* o_pbd = c_pb->add_option("--depth", pb_depth);
  auto* o_pbc = c_pb->add_option("--cloud", pb_cloud);
  auto* o_pbe = c_pb->add_option("--eps", pb_eps);
  auto* o_pbb = c_pb->add_option("--burn-in", pb_burn);

  int gr_samples = 200, gr_depth = 40, gr_cloud = 1000, gr_burn = 0;
  auto* c_graph = app.add_subcommand("graph", "invariant graph estimation and separation");
  auto* o_grs = c_graph->add_option("--samples", gr_samples);
  auto* o_grd = c_graph->add_option("--depth", gr_depth);
  auto* o_grc = c_graph->add_option("--cloud", gr_cloud);
  auto* o_grb = c_graph->add_option("--burn-in", gr_burn);

  int mx_res = 16, mx_particles = 400, mx_nmax = 40;
  auto* c_mix = app.add_subcommand("mixing", "box-resolution mixing check");
  auto* o_mxr = c_mix->add_option("--resolution", mx_res);
  auto* o_mxp = c_mix->add_option("--particles", mx_particles);
  auto* o_mxn = c_mix->add_option("--n-max", mx_nmax);

  double ct_eps = 0.05;
  int ct_kmax = 3, ct_nmax = 1000;
  auto* c_ct = app.add_subcommand("contractive", "strong contractivity certificate");
  auto* o_cte = c_ct->add_option("--eps", ct_eps);
  auto* o_ctk = c_ct->add_option("--k-max", ct_kmax);
  auto* o_ctn = c_ct->add_option("--n-max", ct_nmax);

  long ifs_word = 100000;
  double ifs_delta = 0.01;
  auto* c_ifs = app.add_subcommand("ifs", "iterated function system minimality test");
  auto* o_ifw = c_ifs->add_option("--word-length", ifs_word);
  auto* o_ifd = c_ifs->add_option("--delta", ifs_delta);

  std::string sweep_inner = "sync";
  double sweep_min = 0.0, sweep_max = 0.15;
  int sweep_steps = 16, sweep_iters = 200;
  auto* c_sweep = app.add_subcommand("sweep", "run a command over an amplitude grid");
  c_sweep->add_option("--command", sweep_inner);
  c_sweep->add_option("--min", sweep_min);
  c_sweep->add_option("--max", sweep_max);
  c_sweep->add_option("--steps", sweep_steps);
  c_sweep->add_option("--iterations", sweep_iters);

  CLI11_PARSE(app, argc, argv);

  try {
    json cfg = load_config(config_path);
    if (cfg.contains("seed") && !app.count("--seed")) seed = cfg["seed"].get<std::uint64_t>();
    if (cfg.contains("out") && !app.count("--out")) out_dir = cfg["out"].get<std::string>();
    if (cfg.contains("threads") && !app.count("--threads")) threads = cfg["threads"].get<int>();
    if (threads < 1) throw std::invalid_argument("config field 'threads' must be >= 1");

    json system_desc;
    if (cfg.contains("system") && !app.count("--system"))
      system_desc = cfg["system"];
    else if (!system_name.empty() && system_name.front() == '{')
      system_desc = json::parse(system_name);
    else
      system_desc = system_name;

    Run run;
    run.sys = system_from_json(system_desc);
    run.seed = seed;
    run.out_dir = out_dir;
    run.threads = threads;
    run.config = cfg;

    if (c_catalog->parsed()) {
      for (const auto& n : catalog_names()) std::cout << n << "\n";
      return 0;
    }
    if (c_attr->parsed()) {
      run.command = "attractor";
      int it = param_int(cfg, "iterations", iterations, o_iter->count() > 0);
      int bi = param_int(cfg, "burn_in", burn_in, o_burn->count() > 0);
      int res = param_int(cfg, "resolution", resolution, o_res->count() > 0);
      if (it < 1) throw std::invalid_argument("config field 'iterations' must be >= 1");
      return cmd_attractor(run, it, bi, res);
    }
    if (c_sync->parsed()) {
      run.command = "sync";
      int np = param_int(cfg, "n_points", sync_points, o_spts->count() > 0);
      if (np < 2) throw std::invalid_argument("config field 'n_points' must be >= 2");
      return cmd_sync(run, param_real(cfg, "y0", sync_y0, o_sy0->count() > 0), np,
                      param_int(cfg, "iterations", sync_iters, o_sit->count() > 0));
    }
    if (c_lyap->parsed()) {
      run.command = "lyapunov";
      return cmd_lyapunov(run, param_int(cfg, "iterations", lyap_iters, o_lit->count() > 0));
    }
    if (c_pb->parsed()) {
      run.command = "pullback";
      return cmd_pullback(run, param_int(cfg, "samples", pb_samples, o_pbs->count() > 0),
                          param_int(cfg, "depth", pb_depth, o_pbd->count() > 0),
                          param_int(cfg, "cloud", pb_cloud, o_pbc->count() > 0),
                          param_real(cfg, "eps", pb_eps, o_pbe->count() > 0),
                          param_int(cfg, "burn_in", pb_burn, o_pbb->count() > 0));
    }
    if (c_graph->parsed()) {
      run.command = "graph";
      return cmd_graph(run, param_int(cfg, "samples", gr_samples, o_grs->count() > 0),
                       param_int(cfg, "depth", gr_depth, o_grd->count() > 0),
                       param_int(cfg, "cloud", gr_cloud, o_grc->count() > 0),
                       param_int(cfg, "burn_in", gr_burn, o_grb->count() > 0));
    }
    if (c_mix->parsed()) {
      run.command = "mixing";
      return cmd_mixing(run, param_int(cfg, "resolution", mx_res, o_mxr->count() > 0),
                        param_int(cfg, "particles", mx_particles, o_mxp->count() > 0),
                        param_int(cfg, "n_max", mx_nmax, o_mxn->count() > 0));
    }
    if (c_ct->parsed()) {
      run.command = "contractive";
      return cmd_contractive(run, param_real(cfg, "eps", ct_eps, o_cte->count() > 0),
                             param_int(cfg, "k_max", ct_kmax, o_ctk->count() > 0),
                             param_int(cfg, "n_max", ct_nmax, o_ctn->count() > 0));
    }
    if (c_ifs->parsed()) {
      run.command = "ifs";
      return cmd_ifs(run, o_ifw->count() ? ifs_word : cfg.value("word_length", ifs_word),
                     param_real(cfg, "delta", ifs_delta, o_ifd->count() > 0));
    }
    if (c_sweep->parsed()) {
      run.command = "sweep";
      return cmd_sweep(run, sweep_inner, sweep_min, sweep_max, sweep_steps, sweep_iters);
    }
  } catch (const json::exception& e) {
    std::cerr << "config parse error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
