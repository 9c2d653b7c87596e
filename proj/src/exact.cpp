#include "censorlab/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace censorlab {

double DistVector::sum() const {
  double s = 0.0;
  for (double x : p) s += x;
  return s;
}

void DistVector::check_normalized(double tol) const {
  if (std::abs(sum() - 1.0) > tol)
    throw model_error("distribution does not sum to 1");
  for (double x : p)
    if (x < -tol) throw model_error("negative probability");
}

DistVector point_mass(const StateSpace& space, int state_index) {
  if (state_index < 0 || state_index >= space.size())
    throw model_error("point mass outside the state space");
  DistVector d;
  d.space = &space;
  d.p.assign(space.size(), 0.0);
  d.p[state_index] = 1.0;
  return d;
}

DistVector point_mass(const StateSpace& space, const Configuration& c) {
  int i = space.index_of(c);
  if (i < 0) throw model_error("configuration is not in the state space");
  return point_mass(space, i);
}

DistVector stationary_distribution(const StateSpace& space) {
  DistVector d;
  d.space = &space;
  d.p.resize(space.size());
  double total = std::accumulate(space.weights.begin(), space.weights.end(), 0.0);
  if (!(total > 0.0)) throw model_error("total Gibbs weight is zero");
  for (int i = 0; i < space.size(); ++i) d.p[i] = space.weights[i] / total;
  return d;
}

DistVector update(const DistVector& mu, int site) {
  const StateSpace& sp = *mu.space;
  if (!sp.has_orbits)
    throw budget_error("update needs per-site orbits; state space too large");
  const auto& orb = sp.site_orbits[site];
  DistVector out;
  out.space = mu.space;
  out.p.assign(sp.size(), 0.0);
  const size_t groups = orb.start.size() - 1;
  for (size_t g = 0; g < groups; ++g) {
    double mass = 0.0, wsum = 0.0;
    for (int32_t k = orb.start[g]; k < orb.start[g + 1]; ++k) {
      int i = orb.order[k];
      mass += mu.p[i];
      wsum += sp.weights[i];
    }
    if (mass == 0.0) continue;
    for (int32_t k = orb.start[g]; k < orb.start[g + 1]; ++k) {
      int i = orb.order[k];
      out.p[i] = sp.weights[i] / wsum * mass;
    }
  }
  return out;
}

DistVector block_update(const DistVector& mu, const std::vector<int>& block) {
  const StateSpace& sp = *mu.space;
  const int m = sp.size();
  std::vector<std::pair<uint64_t, int32_t>> keyed(m);
  for (int i = 0; i < m; ++i) {
    uint64_t code = sp.raw_code(sp.states[i]);
    for (int v : block) code -= sp.states[i].spins[v] * sp.place[v];
    keyed[i] = {code, static_cast<int32_t>(i)};
  }
  std::sort(keyed.begin(), keyed.end());
  DistVector out;
  out.space = mu.space;
  out.p.assign(m, 0.0);
  int g = 0;
  while (g < m) {
    int h = g;
    double mass = 0.0, wsum = 0.0;
    while (h < m && keyed[h].first == keyed[g].first) {
      mass += mu.p[keyed[h].second];
      wsum += sp.weights[keyed[h].second];
      ++h;
    }
    if (mass != 0.0)
      for (int k = g; k < h; ++k) {
        int i = keyed[k].second;
        out.p[i] = sp.weights[i] / wsum * mass;
      }
    g = h;
  }
  return out;
}

DistVector averaged_block_step(const DistVector& mu,
                               const std::vector<std::vector<int>>& blocks) {
  if (blocks.empty()) throw model_error("averaged step needs blocks");
  DistVector out;
  out.space = mu.space;
  out.p.assign(mu.size(), 0.0);
  for (const auto& b : blocks) {
    DistVector one = block_update(mu, b);
    for (int i = 0; i < mu.size(); ++i) out.p[i] += one.p[i];
  }
  for (double& x : out.p) x /= blocks.size();
  return out;
}

DistVector random_scan_step(const DistVector& mu) {
  const int n = mu.space->n_sites;
  DistVector out;
  out.space = mu.space;
  out.p.assign(mu.size(), 0.0);
  for (int v = 0; v < n; ++v) {
    DistVector one = update(mu, v);
    for (int i = 0; i < mu.size(); ++i) out.p[i] += one.p[i];
  }
  for (double& x : out.p) x /= n;
  return out;
}

DistVector apply_schedule(const DistVector& mu, const Schedule& s) {
  DistVector cur = mu;
  for (const auto& t : s.steps)
    cur = t.is_site() ? update(cur, t.site()) : block_update(cur, t.sites);
  return cur;
}

double tv_distance(const DistVector& a, const DistVector& b) {
  if (a.space != b.space || a.size() != b.size())
    throw model_error("TV distance needs a common state space");
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += std::abs(a.p[i] - b.p[i]);
  return 0.5 * s;
}

LrCertificate likelihood_ratio_increasing(const DistVector& mu, double tol) {
  const StateSpace& sp = *mu.space;
  sp.require_comparability("likelihood_ratio_increasing");
  const int m = sp.size();
  double total = std::accumulate(sp.weights.begin(), sp.weights.end(), 0.0);
  std::vector<double> ratio(m);
  for (int i = 0; i < m; ++i) ratio[i] = mu.p[i] / (sp.weights[i] / total);
  LrCertificate cert;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j || !sp.leq(i, j)) continue;
      if (ratio[i] > ratio[j] + tol) {
        cert.ok = false;
        cert.lo = i;
        cert.hi = j;
        cert.gap = ratio[i] - ratio[j];
        return cert;
      }
    }
  cert.ok = true;
  return cert;
}

std::vector<double> monotone_extension(const DistVector& mu, uint64_t budget) {
  const StateSpace& sp = *mu.space;
  if (sp.raw_size > budget)
    throw budget_error("monotone extension table exceeds budget");
  const int m = sp.size();
  double total = std::accumulate(sp.weights.begin(), sp.weights.end(), 0.0);
  std::vector<double> ratio(m);
  for (int i = 0; i < m; ++i) ratio[i] = mu.p[i] / (sp.weights[i] / total);

  std::vector<double> f(sp.raw_size, 0.0);
  Configuration c;
  c.spins.assign(sp.n_sites, 0);
  for (uint64_t code = 0;; ++code) {
    double best = 0.0;
    for (int i = 0; i < m; ++i) {
      const Configuration& w = sp.states[i];
      bool below = true;
      for (int v = 0; v < sp.n_sites && below; ++v)
        below = sp.rank(v, w.spins[v]) <= sp.rank(v, c.spins[v]);
      if (below) best = std::max(best, ratio[i]);
    }
    f[code] = best;
    int v = sp.n_sites - 1;
    while (v >= 0 && c.spins[v] == sp.n_spins - 1) c.spins[v--] = 0;
    if (v < 0) break;
    ++c.spins[v];
  }
  return f;
}

// --- dominance max-flow ------------------------------------------------------

namespace {

// Dinic with double capacities; networks here are tiny (two supports plus
// source and sink)
struct FlowNet {
  struct Edge {
    int to;
    double cap;
    int rev;
  };
  std::vector<std::vector<Edge>> g;
  std::vector<int> level, iter;

  explicit FlowNet(int n) : g(n) {}

  void add_edge(int a, int b, double cap) {
    g[a].push_back({b, cap, static_cast<int>(g[b].size())});
    g[b].push_back({a, 0.0, static_cast<int>(g[a].size()) - 1});
  }

  bool bfs(int s, int t) {
    level.assign(g.size(), -1);
    std::vector<int> q{s};
    level[s] = 0;
    for (size_t h = 0; h < q.size(); ++h) {
      int v = q[h];
      for (const auto& e : g[v])
        if (e.cap > 1e-15 && level[e.to] < 0) {
          level[e.to] = level[v] + 1;
          q.push_back(e.to);
        }
    }
    return level[t] >= 0;
  }

  double dfs(int v, int t, double f) {
    if (v == t) return f;
    for (int& i = iter[v]; i < static_cast<int>(g[v].size()); ++i) {
      auto& e = g[v][i];
      if (e.cap > 1e-15 && level[v] < level[e.to]) {
        double d = dfs(e.to, t, std::min(f, e.cap));
        if (d > 0) {
          e.cap -= d;
          g[e.to][e.rev].cap += d;
          return d;
        }
      }
    }
    return 0.0;
  }

  double max_flow(int s, int t) {
    double flow = 0.0;
    while (bfs(s, t)) {
      iter.assign(g.size(), 0);
      double f;
      while ((f = dfs(s, t, 1e30)) > 0) flow += f;
    }
    return flow;
  }

  std::vector<uint8_t> min_cut_side(int s) {
    std::vector<uint8_t> side(g.size(), 0);
    std::vector<int> q{s};
    side[s] = 1;
    for (size_t h = 0; h < q.size(); ++h) {
      int v = q[h];
      for (const auto& e : g[v])
        if (e.cap > 1e-15 && !side[e.to]) {
          side[e.to] = 1;
          q.push_back(e.to);
        }
    }
    return side;
  }
};

}  // namespace

DominanceCertificate stochastic_dominance(const DistVector& lower,
                                          const DistVector& upper,
                                          double tol) {
  if (lower.space != upper.space)
    throw model_error("dominance needs a common state space");
  const StateSpace& sp = *lower.space;
  sp.require_comparability("stochastic_dominance");
  const int m = sp.size();

  std::vector<int> lo_supp, up_supp;
  for (int i = 0; i < m; ++i) {
    if (lower.p[i] > 0.0) lo_supp.push_back(i);
    if (upper.p[i] > 0.0) up_supp.push_back(i);
  }

  const int nl = static_cast<int>(lo_supp.size());
  const int nu = static_cast<int>(up_supp.size());
  const int S = 0, T = 1 + nl + nu;
  FlowNet net(T + 1);
  for (int a = 0; a < nl; ++a) net.add_edge(S, 1 + a, lower.p[lo_supp[a]]);
  for (int b = 0; b < nu; ++b)
    net.add_edge(1 + nl + b, T, upper.p[up_supp[b]]);
  for (int a = 0; a < nl; ++a)
    for (int b = 0; b < nu; ++b)
      if (sp.leq(lo_supp[a], up_supp[b]))
        net.add_edge(1 + a, 1 + nl + b, 1e30);

  double flow = net.max_flow(S, T);

  DominanceCertificate cert;
  cert.deficit = 1.0 - flow;
  if (flow >= 1.0 - tol) {
    cert.dominates = true;
    for (int a = 0; a < nl; ++a)
      for (const auto& e : net.g[1 + a]) {
        if (e.to == S || e.to == T) continue;
        // forward edges into upper nodes carry flow on their reverse side
        int b = e.to - 1 - nl;
        if (b < 0 || b >= nu) continue;
        double sent = net.g[e.to][e.rev].cap;
        if (sent > kSumTol)
          cert.coupling.emplace_back(lo_supp[a], up_supp[b], sent);
      }
    return cert;
  }

  // min cut: lower-support states on the source side generate an up-set
  // carrying more lower-mass than upper-mass
  auto side = net.min_cut_side(S);
  std::vector<uint8_t> in_upset(m, 0);
  for (int a = 0; a < nl; ++a)
    if (side[1 + a])
      for (int j = 0; j < m; ++j)
        if (sp.leq(lo_supp[a], j)) in_upset[j] = 1;
  for (int j = 0; j < m; ++j)
    if (in_upset[j]) cert.violating_upset.push_back(j);
  cert.dominates = false;
  return cert;
}

MixingResult mixing_time_exact(const DistVector& start,
                               const KernelSchedule& ks, double eps,
                               int step_cap) {
  DistVector pi = stationary_distribution(*start.space);
  MixingResult res;
  DistVector cur = start;
  res.tv_curve.push_back(tv_distance(cur, pi));
  if (res.tv_curve.back() <= eps) {
    res.steps = 0;
    res.reached = true;
    return res;
  }
  for (int t = 1; t <= step_cap; ++t) {
    if (ks.kind == KernelSchedule::Kind::random_scan) {
      cur = random_scan_step(cur);
    } else {
      const auto& tgt = ks.cycle[(t - 1) % ks.cycle.size()];
      cur = tgt.is_site() ? update(cur, tgt.site())
                          : block_update(cur, tgt.sites);
    }
    res.tv_curve.push_back(tv_distance(cur, pi));
    if (!res.reached && res.tv_curve.back() <= eps) {
      res.steps = t;
      res.reached = true;
      return res;
    }
  }
  return res;
}

MixingResult mixing_time_exact_worst(const StateSpace& space,
                                     const KernelSchedule& ks, double eps,
                                     int step_cap) {
  MixingResult worst;
  worst.steps = -1;
  worst.reached = true;
  for (int i = 0; i < space.size(); ++i) {
    MixingResult r = mixing_time_exact(point_mass(space, i), ks, eps, step_cap);
    if (!r.reached) {
      r.steps = -1;
      return r;
    }
    if (r.steps > worst.steps) {
      worst.steps = r.steps;
      worst.tv_curve = r.tv_curve;
    }
  }
  return worst;
}

}  // namespace censorlab
