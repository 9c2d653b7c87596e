#include "censorlab/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "censorlab/contraction.hpp"
#include "censorlab/errors.hpp"
#include "censorlab/exact.hpp"
#include "censorlab/mc.hpp"
#include "censorlab/models.hpp"
#include "censorlab/report.hpp"
#include "censorlab/rng.hpp"
#include "censorlab/schedules.hpp"
#include "censorlab/suites.hpp"

namespace censorlab {

namespace {

using nlohmann::json;

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  }
};

void stamp_and_write(const std::string& out_dir, std::vector<ReportEntry>& es,
                     bool timing, const Stopwatch& sw) {
  if (timing) {
    double ms = sw.ms();
    for (auto& e : es) e.wall_time = ms;
  }
  write_report(join_path(out_dir, "report.json"), es);
  for (const auto& e : es)
    std::cout << e.verdict << ": " << e.claim << "\n";
}

int exit_code(const std::vector<ReportEntry>& es) {
  for (const auto& e : es)
    if (e.verdict == "violated") return 1;
  return 0;
}

std::vector<int> int_list(const json& j) {
  std::vector<int> out;
  for (const auto& x : j) out.push_back(x.get<int>());
  return out;
}

}  // namespace

GibbsSystem model_from_config(const json& model) {
  if (!model.is_object()) throw config_error("model must be a JSON object");
  if (model.contains("system_file"))
    return load_system(model["system_file"].get<std::string>());
  std::string family = model.value("family", std::string("ising"));
  std::string graph_kind = model.value("graph", std::string("cycle"));
  std::vector<int> params =
      model.contains("params") ? int_list(model["params"]) : std::vector<int>{4};
  SiteGraph g = build_graph(graph_kind, params);
  if (family == "ising")
    return build_ising(g, model.value("beta", 0.2), model.value("field", 0.0));
  if (family == "hardcore")
    return build_hardcore_bipartite(g, model.value("lambda", 1.0));
  throw config_error("unknown model family: " + family);
}

json load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::exception& e) {
    throw config_error(std::string("bad config JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// verify-censoring
// ---------------------------------------------------------------------------

int cmd_verify_censoring(const json& cfg, const std::string& out_dir) {
  Stopwatch sw;
  require_out_dir(out_dir);
  const double tol = cfg.value("tolerance", kIneqTol);
  const int max_len = cfg.value("max_length", 5);
  const int lemma_len = cfg.value("lemma_length", 4);
  const int relaxed = cfg.value("relaxed_starts", 1);
  const uint64_t seed = cfg.value("seed", uint64_t{0});

  std::vector<SuiteSystem> systems;
  if (cfg.contains("model"))
    systems.push_back({cfg.value("name", std::string("model")),
                       model_from_config(cfg["model"])});
  else
    systems = default_censoring_systems();

  std::vector<ReportEntry> entries;
  for (const auto& [name, sys] : systems) {
    StateSpace space = enumerate_states(sys);
    MonotoneCertificate mono = verify_monotone(sys, space);
    if (!mono.ok) {
      std::ostringstream d;
      d << "system not monotone (" << name << ": states " << mono.lo << " <= "
        << mono.hi << ", site " << mono.site << ", rank cut " << mono.cut_rank
        << ", gap " << mono.gap << ")";
      throw model_error(d.str());
    }
    if (!space.top_index)
      throw model_error("no unique top state in " + name);

    DistVector top = point_mass(space, *space.top_index);
    SubsequenceSuiteResult sub =
        censoring_subsequence_suite(space, top, max_len, tol);
    json w{{"sequences", sub.n_sequences},
           {"pairs", sub.n_pairs},
           {"violations", sub.n_violations},
           {"max_tv_gap", sub.max_tv_gap},
           {"worst", sub.worst}};
    entries.push_back(
        sub.n_violations == 0
            ? certified(name + ": every censored run ends at least as far "
                              "from stationarity",
                        w, tol, seed)
            : violated(name + ": every censored run ends at least as far "
                             "from stationarity",
                       w, tol, seed));

    bool hard = sys.constraint == ConstraintKind::hardcore;
    LemmaSuiteResult lem = lemma_suite(space, lemma_len, tol, hard);
    json lw{{"distributions", lem.n_distributions},
            {"pairs", lem.n_pairs},
            {"density_monotone_violations", lem.lr_violations},
            {"update_dominance_violations", lem.update_dominance_violations},
            {"tv_order_violations", lem.tv_order_violations},
            {"extension_violations", lem.extension_violations},
            {"worst", lem.worst}};
    entries.push_back(
        lem.ok() ? certified(name + ": reachable laws stay density-monotone, "
                                    "dominated by their updates, and "
                                    "TV-ordered under dominance",
                             lw, tol, seed)
                 : violated(name + ": reachable laws stay density-monotone, "
                                   "dominated by their updates, and "
                                   "TV-ordered under dominance",
                            lw, tol, seed));

    for (int r = 0; r < relaxed; ++r) {
      double c = 0.5 + 0.5 * r;
      DistVector pi = stationary_distribution(space);
      DistVector mu0;
      mu0.space = &space;
      mu0.p.resize(space.size());
      double tot = 0.0;
      for (int i = 0; i < space.size(); ++i) {
        int ranksum = 0;
        for (int v = 0; v < space.n_sites; ++v)
          ranksum += space.rank(v, space.states[i].spins[v]);
        mu0.p[i] = pi.p[i] * std::exp(c * ranksum);
        tot += mu0.p[i];
      }
      for (double& x : mu0.p) x /= tot;
      SubsequenceSuiteResult rel = censoring_subsequence_suite(
          space, mu0, std::min(max_len, 3), tol);
      json rw{{"tilt", c},
              {"pairs", rel.n_pairs},
              {"violations", rel.n_violations},
              {"max_tv_gap", rel.max_tv_gap}};
      entries.push_back(
          rel.n_violations == 0
              ? certified(name + ": censoring inequality from a tilted "
                                 "density-monotone start",
                          rw, tol, seed)
              : violated(name + ": censoring inequality from a tilted "
                                "density-monotone start",
                         rw, tol, seed));
    }
  }

  // dominance of ratio-tilted laws on one totally ordered spin set
  {
    bool ok = chain_ratio_dominance_case({1.0, 2.0, 3.0}, {1.0, 2.0, 4.0}, tol);
    ok = ok && chain_ratio_dominance_case({0.7, 0.1, 0.9, 0.4},
                                          {0.2, 0.5, 0.5, 1.7}, tol);
    SequentialRng rng(seed, 11);
    int cases = 2;
    for (int k = 3; k <= 5 && ok; ++k) {
      std::vector<double> base(k), tilt(k);
      for (int s = 0; s < k; ++s) base[s] = std::exp(rng.next_uniform() - 0.5);
      double acc = 0.1;
      for (int s = 0; s < k; ++s) {
        acc += rng.next_uniform();
        tilt[s] = acc;
      }
      ok = ok && chain_ratio_dominance_case(base, tilt, tol);
      ++cases;
    }
    json w{{"cases", cases}};
    entries.push_back(
        ok ? certified("ratio-tilted laws on a totally ordered spin set "
                       "dominate their base law",
                       w, tol, seed)
           : violated("ratio-tilted laws on a totally ordered spin set "
                      "dominate their base law",
                      w, tol, seed));
  }

  stamp_and_write(out_dir, entries, cfg.value("timing", false), sw);
  return exit_code(entries);
}

// ---------------------------------------------------------------------------
// compare-schedules
// ---------------------------------------------------------------------------

int cmd_compare_schedules(const json& cfg, const std::string& out_dir) {
  Stopwatch sw;
  require_out_dir(out_dir);
  const double eps = cfg.value("epsilon", 0.25);
  if (!(eps > 0.0 && eps < 1.0))
    throw config_error("epsilon must lie in (0, 1)");
  const uint64_t seed = cfg.value("seed", uint64_t{0});

  std::vector<std::pair<std::string, GibbsSystem>> models;
  if (cfg.contains("models")) {
    int i = 0;
    for (const auto& m : cfg["models"]) {
      models.push_back({m.value("name", "model" + std::to_string(i)),
                        model_from_config(m)});
      ++i;
    }
  } else if (cfg.contains("model")) {
    models.push_back({cfg.value("name", std::string("model")),
                      model_from_config(cfg["model"])});
  } else {
    for (double beta : {0.2, 0.6}) {
      models.push_back({"ising-C4-b" + format_double(beta),
                        build_ising(build_cycle(4), beta, 0.0)});
      models.push_back({"ising-P4-b" + format_double(beta),
                        build_ising(build_path(4), beta, 0.0)});
    }
  }

  std::vector<ReportEntry> entries;
  CsvWriter curves({"step", "tv", "schedule_id"});
  for (const auto& [name, sys] : models) {
    StateSpace space = enumerate_states(sys);
    MonotoneCertificate mono = verify_monotone(sys, space);
    if (!mono.ok) throw model_error("system not monotone (" + name + ")");
    int n = space.n_sites;
    int cap = cfg.value("update_cap",
                        static_cast<int>(200 * n * std::log(n + 1.0)) + 50);
    ScheduleComparison c = compare_schedules_exact(sys, space, eps, cap);

    auto emit = [&](const char* kind, const std::vector<double>& curve) {
      for (size_t k = 0; k < curve.size(); ++k)
        curves.row({std::to_string(k), format_double(curve[k]),
                    name + "/" + kind});
    };
    emit("systematic", c.curve_systematic);
    emit("random", c.curve_random);

    if (!c.alternating_available) {
      entries.push_back(notice(
          name + ": alternating scan skipped (graph has no two-coloring)",
          {{"tau_systematic", c.tau_systematic},
           {"tau_random", c.tau_random}},
          seed));
      continue;
    }
    emit("alternating", c.curve_alternating);

    json w1{{"tau_alternating", c.tau_alternating},
            {"tau_systematic", c.tau_systematic},
            {"bound", c.bound_systematic},
            {"sweeps_alternating", (c.tau_alternating + n - 1) / n},
            {"sweeps_systematic", (c.tau_systematic + n - 1) / n}};
    entries.push_back(
        c.systematic_ok
            ? certified(name + ": systematic scan mixes within twice the "
                               "alternating scan",
                        w1, 0.0, seed)
            : violated(name + ": systematic scan mixes within twice the "
                              "alternating scan",
                       w1, 0.0, seed));

    json w2{{"tau_random", c.tau_random},
            {"tau_alternating", c.tau_alternating},
            {"bound_natural_log", c.bound_random_ln},
            {"bound_log2", c.bound_random_log2},
            {"sites", n}};
    entries.push_back(
        c.random_ok
            ? certified(name + ": random scan mixes within the 2 log n "
                               "alternating budget",
                        w2, 0.0, seed)
            : violated(name + ": random scan mixes within the 2 log n "
                              "alternating budget",
                       w2, 0.0, seed));
  }

  curves.save(join_path(out_dir, "tv_curves.csv"));
  stamp_and_write(out_dir, entries, cfg.value("timing", false), sw);
  return exit_code(entries);
}

// ---------------------------------------------------------------------------
// contraction
// ---------------------------------------------------------------------------

int cmd_contraction(const json& cfg, const std::string& out_dir) {
  Stopwatch sw;
  require_out_dir(out_dir);
  ContractionParams p;
  p.d = cfg.value("d", 1);
  p.N = cfg.value("N", 6);
  p.ell = cfg.value("ell", 2);
  p.beta = cfg.value("beta", 0.2);
  p.h = cfg.value("field", 0.0);
  p.gamma_target = cfg.value("gamma_target", 0.0);
  p.eps = cfg.value("epsilon", 0.25);
  p.seed = cfg.value("seed", uint64_t{0});

  ContractionPipelineResult res = run_contraction_pipeline(p);

  CsvWriter phi({"u", "B_anchor", "phi", "witness"});
  for (const auto& e : res.check.phi_table) {
    std::string wit = "boundary=";
    for (uint8_t s : e.boundary_spins) wit += std::to_string(int(s));
    wit += ";flip_to=" + std::to_string(e.flip_to);
    phi.row({std::to_string(e.site), std::to_string(e.block_index),
             format_double(e.phi), wit});
  }
  phi.save(join_path(out_dir, "phi_table.csv"));

  if (!res.approx.empty()) {
    CsvWriter rho({"t", "rho"});
    const auto& curve = res.approx.front().rho_curve;
    for (size_t t = 0; t < curve.size(); ++t)
      rho.row({std::to_string(t + 1), format_double(curve[t])});
    rho.save(join_path(out_dir, "rho_curve.csv"));
  }

  std::vector<ReportEntry> entries = res.entries;
  stamp_and_write(out_dir, entries, cfg.value("timing", false), sw);
  return exit_code(entries);
}

// ---------------------------------------------------------------------------
// hanging
// ---------------------------------------------------------------------------

int cmd_hanging(const json& cfg, const std::string& out_dir) {
  Stopwatch sw;
  require_out_dir(out_dir);
  const uint64_t seed = cfg.value("seed", uint64_t{0});
  const double beta = cfg.value("beta", 0.3);
  const double identity_tol = cfg.value("identity_tolerance", kExactTol);
  if (cfg.contains("field") && cfg["field"].get<double>() != 0.0)
    throw config_error("hanging surrogate requires zero external field");

  std::vector<HangingParams> pairs;
  if (cfg.contains("pairs")) {
    for (const auto& pj : cfg["pairs"]) {
      HangingParams p;
      p.name = pj.value("name", std::string("pair"));
      int n = pj.at("sites").get<int>();
      std::vector<std::pair<int, int>> edges;
      for (const auto& e : pj.at("edges"))
        edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
      p.graph = SiteGraph::make(n, std::move(edges));
      p.h_sites = int_list(pj.at("h_sites"));
      std::sort(p.h_sites.begin(), p.h_sites.end());
      p.beta = pj.value("beta", beta);
      if (pj.contains("js")) p.js = int_list(pj["js"]);
      p.rounds = pj.value("rounds", 6);
      p.eps = cfg.value("epsilon", 0.25);
      pairs.push_back(std::move(p));
    }
  } else {
    pairs = default_hanging_pairs(beta);
  }

  std::vector<ReportEntry> entries;
  CsvWriter curves({"slot", "tv", "curve_id"});
  for (const auto& p : pairs) {
    HangingResult r = hanging_surrogate(p, kIneqTol);
    json w1{{"identity_gap", r.identity_gap}, {"cut_vertex", r.cut_vertex}};
    entries.push_back(
        r.identity_gap <= identity_tol
            ? certified(r.name + ": the block replacement leaves the "
                                 "subgraph law unchanged",
                        w1, identity_tol, seed)
            : violated(r.name + ": the block replacement leaves the "
                                "subgraph law unchanged",
                       w1, identity_tol, seed));

    json w2{{"js", r.js},
            {"final_gap", r.final_gap},
            {"tau_h", r.tau_h},
            {"tau_j", r.tau_j}};
    bool ok = r.taus_ordered && r.gaps_monotone;
    entries.push_back(
        ok ? certified(r.name + ": single-site replacements converge "
                                "monotonically and never mix faster",
                       w2, kIneqTol, seed)
           : violated(r.name + ": single-site replacements converge "
                               "monotonically and never mix faster",
                      w2, kIneqTol, seed));

    for (size_t s = 0; s < r.tv_h_curve.size(); ++s)
      curves.row({std::to_string(s), format_double(r.tv_h_curve[s]),
                  r.name + "/subgraph-only"});
    for (size_t ji = 0; ji < r.tv_j_curves.size(); ++ji)
      for (size_t s = 0; s < r.tv_j_curves[ji].size(); ++s)
        curves.row({std::to_string(s), format_double(r.tv_j_curves[ji][s]),
                    r.name + "/j" + std::to_string(r.js[ji])});
  }

  curves.save(join_path(out_dir, "hanging_curves.csv"));
  stamp_and_write(out_dir, entries, cfg.value("timing", false), sw);
  return exit_code(entries);
}

// ---------------------------------------------------------------------------
// mc
// ---------------------------------------------------------------------------

int cmd_mc(const json& cfg, const std::string& out_dir) {
  Stopwatch sw;
  require_out_dir(out_dir);
  const std::string mode = cfg.value("mode", std::string("coalescence"));
  const uint64_t seed0 = cfg.value("seed", uint64_t{1});
  const int n_seeds = cfg.value("seeds", 8);
  const double beta = cfg.value("beta", 0.2);

  GibbsSystem sys;
  if (cfg.contains("model")) {
    sys = model_from_config(cfg["model"]);
  } else {
    const std::string graph = cfg.value("graph", std::string("torus"));
    const int size = cfg.value("size", 16);
    SiteGraph g;
    if (graph == "torus")
      g = build_torus(cfg.value("d", 2), size);
    else if (graph == "cycle")
      g = build_cycle(size);
    else
      throw config_error("mc graph must be torus or cycle");
    sys = build_ising(g, beta, cfg.value("field", 0.0));
  }
  const int n = sys.graph.n_sites;

  std::vector<ReportEntry> entries;
  if (mode == "coalescence") {
    const std::string sched = cfg.value("schedule", std::string("random"));
    std::vector<int> order;
    if (sched == "systematic") {
      order.resize(n);
      for (int v = 0; v < n; ++v) order[v] = v;
    } else if (sched == "alternating") {
      if (!sys.graph.bipartition)
        throw config_error("alternating schedule needs a two-colored graph");
      for (const Target& t : alternating_schedule(sys.graph, 1).steps)
        order.push_back(t.site());
    } else if (sched != "random") {
      throw config_error("mc schedule must be random, systematic or "
                         "alternating");
    }
    int64_t max_steps = cfg.value("max_steps", int64_t{0});
    if (max_steps <= 0)
      max_steps =
          static_cast<int64_t>(50.0 * n * std::log(std::max(n, 2)) + 1000);
    const int64_t every = cfg.value("checkpoint_every", int64_t{n});

    CsvWriter traj({"seed", "step", "hamming", "mag_top", "mag_bottom"});
    std::vector<double> times;
    int coalesced = 0;
    for (int i = 0; i < n_seeds; ++i) {
      uint64_t seed = seed0 + static_cast<uint64_t>(i);
      CouplingTrajectory tr =
          order.empty()
              ? simulate_coalescence(sys, max_steps, seed, every)
              : simulate_coalescence_ordered(sys, order, max_steps, seed,
                                             every);
      for (const auto& pt : tr.points)
        traj.row({std::to_string(seed), std::to_string(pt.step),
                  std::to_string(pt.hamming), format_double(pt.mag_top),
                  format_double(pt.mag_bottom)});
      if (tr.coalesce_step >= 0) {
        ++coalesced;
        times.push_back(static_cast<double>(tr.coalesce_step));
      }
    }
    traj.save(join_path(out_dir, "trajectories.csv"));
    std::sort(times.begin(), times.end());
    json w{{"seeds", n_seeds},
           {"coalesced", coalesced},
           {"max_steps", max_steps},
           {"schedule", sched}};
    if (!times.empty()) {
      double med = times.size() % 2
                       ? times[times.size() / 2]
                       : 0.5 * (times[times.size() / 2 - 1] +
                                times[times.size() / 2]);
      double mean = 0.0;
      for (double t : times) mean += t;
      mean /= times.size();
      w["median_steps"] = med;
      w["mean_steps"] = mean;
    }
    entries.push_back(
        coalesced == n_seeds
            ? certified("all coupled chains coalesced within the horizon", w,
                        0.0, seed0)
            : notice("some coupled chains did not coalesce within the horizon",
                     w, seed0));
  } else if (mode == "censoring") {
    const int64_t steps = cfg.value("steps", int64_t{4} * n);
    CensoringComparison c =
        empirical_censoring_comparison(sys, steps, n_seeds, seed0);
    json w{{"steps", c.steps},
           {"seeds", c.n_seeds},
           {"mean_full", c.mean_full},
           {"mean_censored", c.mean_censored},
           {"se_diff", c.se_diff},
           {"z", c.z}};
    entries.push_back(
        !c.violation
            ? certified("censored-run magnetization stays within 4 sigma "
                        "above the full run",
                        w, 4.0, seed0)
            : violated("censored-run magnetization stays within 4 sigma "
                       "above the full run",
                       w, 4.0, seed0));
  } else if (mode == "scaling") {
    std::vector<int> sizes =
        cfg.contains("sizes") ? int_list(cfg["sizes"])
                              : std::vector<int>{8, 16, 32};
    std::vector<ScalingRow> rows =
        estimate_mixing_scaling(sizes, beta, n_seeds, seed0);
    CsvWriter t({"n", "median_steps", "ratio"});
    double rmin = 1e300, rmax = 0.0;
    json jr = json::array();
    for (const auto& r : rows) {
      t.row({std::to_string(r.n_sites), format_double(r.median_coalescence),
             format_double(r.ratio)});
      rmin = std::min(rmin, r.ratio);
      rmax = std::max(rmax, r.ratio);
      jr.push_back({{"n", r.n_sites},
                    {"median", r.median_coalescence},
                    {"ratio", r.ratio}});
    }
    t.save(join_path(out_dir, "scaling.csv"));
    double band = cfg.value("band", 4.0);
    json w{{"rows", jr}, {"band_limit", band}, {"band", rmax / rmin}};
    entries.push_back(rmax / rmin <= band
                          ? certified("coalescence medians stay in a bounded "
                                      "n log n band",
                                      w, band, seed0)
                          : violated("coalescence medians stay in a bounded "
                                     "n log n band",
                                     w, band, seed0));
  } else {
    throw config_error("mc mode must be coalescence, censoring or scaling");
  }

  stamp_and_write(out_dir, entries, cfg.value("timing", false), sw);
  return exit_code(entries);
}

}  // namespace censorlab
