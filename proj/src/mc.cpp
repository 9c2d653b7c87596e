#include "censorlab/mc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include "censorlab/errors.hpp"
#include "censorlab/models.hpp"

namespace censorlab {

namespace {

int words_for(int n) { return (n + 63) / 64; }

}  // namespace

LatticeState LatticeState::top(int n) {
  LatticeState s;
  s.n_sites = n;
  s.bits.assign(words_for(n), ~0ull);
  if (n & 63) s.bits.back() = (1ull << (n & 63)) - 1;
  return s;
}

LatticeState LatticeState::bottom(int n) {
  LatticeState s;
  s.n_sites = n;
  s.bits.assign(words_for(n), 0ull);
  return s;
}

bool LatticeState::dominates(const LatticeState& lo) const {
  for (size_t w = 0; w < bits.size(); ++w)
    if (lo.bits[w] & ~bits[w]) return false;
  return true;
}

int LatticeState::hamming(const LatticeState& other) const {
  int d = 0;
  for (size_t w = 0; w < bits.size(); ++w)
    d += std::popcount(bits[w] ^ other.bits[w]);
  return d;
}

Configuration LatticeState::to_configuration(const GibbsSystem& sys) const {
  Configuration c;
  c.spins.resize(n_sites);
  for (int v = 0; v < n_sites; ++v)
    c.spins[v] = static_cast<uint8_t>(sys.spin_at_rank(v, rank(v)));
  return c;
}

LatticeState LatticeState::from_configuration(const GibbsSystem& sys,
                                              const Configuration& c) {
  LatticeState s = bottom(sys.graph.n_sites);
  for (int v = 0; v < sys.graph.n_sites; ++v)
    s.set_rank(v, sys.rank_of(v, c.spins[v]));
  return s;
}

LocalUpdater::LocalUpdater(const GibbsSystem& sys) : sys_(&sys) {
  if (static_cast<int>(sys.spins.labels.size()) != 2)
    throw model_error("sampler supports two-spin systems only");
  if (!sys.pairwise_local())
    throw model_error("sampler requires a pairwise-local system");

  bool flips = false;
  for (uint8_t f : sys.order_flip)
    if (f) flips = true;

  // tabulated path: unconstrained, unflipped, uniform site potential; the
  // conditional then depends only on (degree, #rank-one neighbors)
  bool uniform_site = true;
  for (int v = 1; v < sys.graph.n_sites && uniform_site; ++v)
    if (sys.site_potential[v] != sys.site_potential[0]) uniform_site = false;

  if (sys.constraint == ConstraintKind::none && !flips && uniform_site &&
      sys.graph.n_sites > 0) {
    max_deg_ = sys.graph.max_degree();
    p_low_tbl_.assign((max_deg_ + 1) * (max_deg_ + 1), 0.0);
    for (int deg = 0; deg <= max_deg_; ++deg) {
      for (int k = 0; k <= deg; ++k) {
        double w0 = sys.site_potential[0][0];
        double w1 = sys.site_potential[0][1];
        w0 *= std::pow(sys.psi(0, 1), k) * std::pow(sys.psi(0, 0), deg - k);
        w1 *= std::pow(sys.psi(1, 1), k) * std::pow(sys.psi(1, 0), deg - k);
        p_low_tbl_[deg * (max_deg_ + 1) + k] = w0 / (w0 + w1);
      }
    }
    tabulated_ = true;
  }
}

double LocalUpdater::generic_p_low(const LatticeState& s, int v) const {
  const GibbsSystem& sys = *sys_;
  double w[2];
  for (int r = 0; r < 2; ++r) {
    int sp = sys.spin_at_rank(v, r);
    double acc = sys.site_potential[v][sp];
    for (int u : sys.graph.neighbors[v]) {
      int su = sys.spin_at_rank(u, s.rank(u));
      acc *= sys.psi(sp, su);
      if (sys.constraint == ConstraintKind::hardcore &&
          sys.spins.values[sp] != 0.0 && sys.spins.values[su] != 0.0)
        acc = 0.0;
    }
    w[r] = acc;
  }
  double tot = w[0] + w[1];
  if (!(tot > 0.0)) throw model_error("local conditional has empty support");
  return w[0] / tot;
}

double LocalUpdater::p_low(const LatticeState& s, int v) const {
  if (!tabulated_) return generic_p_low(s, v);
  const auto& nb = sys_->graph.neighbors[v];
  int k = 0;
  for (int u : nb) k += s.rank(u);
  return p_low_tbl_[static_cast<int>(nb.size()) * (max_deg_ + 1) + k];
}

double magnetization(const GibbsSystem& sys, const LatticeState& s) {
  double m = 0.0;
  for (int v = 0; v < s.n_sites; ++v)
    m += sys.spins.values[sys.spin_at_rank(v, s.rank(v))];
  return s.n_sites > 0 ? m / s.n_sites : 0.0;
}

namespace {

CouplingTrajectory run_coupling(const GibbsSystem& sys,
                                const std::vector<int>* order,
                                int64_t max_steps, uint64_t seed,
                                int64_t checkpoint_every) {
  const int n = sys.graph.n_sites;
  LocalUpdater up(sys);
  LatticeState hi = LatticeState::top(n);
  LatticeState lo = LatticeState::bottom(n);
  CounterRng site_rng(seed, kStreamSite);
  CounterRng u_rng(seed, kStreamUniform);

  CouplingTrajectory traj;
  traj.seed = seed;
  int mismatches = n;
  traj.points.push_back(
      {0, mismatches, magnetization(sys, hi), magnetization(sys, lo)});

  for (int64_t step = 1; step <= max_steps; ++step) {
    uint64_t t = static_cast<uint64_t>(step - 1);
    int v = order ? (*order)[t % order->size()] : site_rng.pick(t, n);
    double u = u_rng.uniform(t);
    int before = hi.rank(v) != lo.rank(v) ? 1 : 0;
    int rh = up.move(hi, v, u);
    int rl = up.move(lo, v, u);
    mismatches += (rh != rl ? 1 : 0) - before;
    bool log_now = checkpoint_every > 0 && step % checkpoint_every == 0;
    if (mismatches == 0 && traj.coalesce_step < 0) {
      traj.coalesce_step = step;
      log_now = true;
    }
    if (log_now) {
      if (!hi.dominates(lo))
        throw model_error("order preservation violated at step " +
                          std::to_string(step));
      traj.points.push_back(
          {step, mismatches, magnetization(sys, hi), magnetization(sys, lo)});
    }
    if (mismatches == 0) break;  // coupled moves keep the chains glued
  }
  return traj;
}

}  // namespace

CouplingTrajectory simulate_coalescence(const GibbsSystem& sys,
                                        int64_t max_steps, uint64_t seed,
                                        int64_t checkpoint_every) {
  return run_coupling(sys, nullptr, max_steps, seed, checkpoint_every);
}

CouplingTrajectory simulate_coalescence_ordered(const GibbsSystem& sys,
                                                const std::vector<int>& order,
                                                int64_t max_steps,
                                                uint64_t seed,
                                                int64_t checkpoint_every) {
  if (order.empty()) throw config_error("site order must not be empty");
  return run_coupling(sys, &order, max_steps, seed, checkpoint_every);
}

LatticeState run_chain_top(const GibbsSystem& sys, int64_t steps,
                           uint64_t seed,
                           const std::vector<uint8_t>* keep_mask) {
  const int n = sys.graph.n_sites;
  LocalUpdater up(sys);
  LatticeState s = LatticeState::top(n);
  CounterRng site_rng(seed, kStreamSite);
  CounterRng u_rng(seed, kStreamUniform);
  for (int64_t t = 0; t < steps; ++t) {
    if (keep_mask && !(*keep_mask)[t]) continue;
    uint64_t c = static_cast<uint64_t>(t);
    int v = site_rng.pick(c, n);
    up.move(s, v, u_rng.uniform(c));
  }
  return s;
}

LatticeState run_schedule_top(const GibbsSystem& sys, const Schedule& sched,
                              uint64_t seed) {
  LocalUpdater up(sys);
  LatticeState s = LatticeState::top(sys.graph.n_sites);
  CounterRng u_rng(seed, kStreamUniform);
  for (size_t t = 0; t < sched.steps.size(); ++t) {
    const Target& tg = sched.steps[t];
    if (!tg.is_site())
      throw config_error("sampler schedules must be single-site");
    up.move(s, tg.site(), u_rng.uniform(t));
  }
  return s;
}

CensoringComparison empirical_censoring_comparison(const GibbsSystem& sys,
                                                   int64_t steps, int n_seeds,
                                                   uint64_t seed0) {
  CensoringComparison out;
  out.steps = steps;
  out.n_seeds = n_seeds;
  std::vector<double> diffs;
  diffs.reserve(n_seeds);
  double sum_f = 0.0, sum_c = 0.0;
  for (int i = 0; i < n_seeds; ++i) {
    uint64_t seed = seed0 + static_cast<uint64_t>(i);
    std::vector<uint8_t> keep(steps);
    CounterRng mask_rng(seed, kStreamMask);
    for (int64_t t = 0; t < steps; ++t)
      keep[t] = static_cast<uint8_t>(mask_rng.word(t) & 1ull);
    LatticeState full = run_chain_top(sys, steps, seed, nullptr);
    LatticeState cens = run_chain_top(sys, steps, seed, &keep);
    double mf = magnetization(sys, full);
    double mc = magnetization(sys, cens);
    sum_f += mf;
    sum_c += mc;
    diffs.push_back(mc - mf);
  }
  out.mean_full = sum_f / n_seeds;
  out.mean_censored = sum_c / n_seeds;
  double mean_d = (sum_c - sum_f) / n_seeds;
  double ss = 0.0;
  for (double d : diffs) ss += (d - mean_d) * (d - mean_d);
  double var = n_seeds > 1 ? ss / (n_seeds - 1) : 0.0;
  out.se_diff = std::sqrt(var / n_seeds);
  out.z = out.se_diff > 0.0 ? mean_d / out.se_diff : 0.0;
  out.violation = out.z < -4.0;
  return out;
}

std::vector<ScalingRow> estimate_mixing_scaling(const std::vector<int>& sizes,
                                                double beta, int n_seeds,
                                                uint64_t seed0) {
  std::vector<ScalingRow> rows;
  for (size_t si = 0; si < sizes.size(); ++si) {
    int n = sizes[si];
    GibbsSystem sys = build_ising(build_cycle(n), beta, 0.0);
    int64_t horizon =
        static_cast<int64_t>(50.0 * n * std::log(std::max(n, 2)) + 1000.0);
    std::vector<double> times;
    times.reserve(n_seeds);
    for (int j = 0; j < n_seeds; ++j) {
      uint64_t seed = seed0 + 1000003ull * si + static_cast<uint64_t>(j);
      CouplingTrajectory tr = simulate_coalescence(sys, horizon, seed);
      times.push_back(tr.coalesce_step < 0 ? static_cast<double>(horizon)
                                           : tr.coalesce_step);
    }
    std::sort(times.begin(), times.end());
    double med = n_seeds % 2 ? times[n_seeds / 2]
                             : 0.5 * (times[n_seeds / 2 - 1] +
                                      times[n_seeds / 2]);
    double nln = n * std::log(n);
    rows.push_back({n, med, nln, med / nln});
  }
  return rows;
}

}  // namespace censorlab
