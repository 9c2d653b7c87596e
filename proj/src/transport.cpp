#include "censorlab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace censorlab {

int hamming(const Configuration& a, const Configuration& b) {
  if (a.size() != b.size())
    throw model_error("Hamming distance needs equal site counts");
  int d = 0;
  for (int v = 0; v < a.size(); ++v) d += a.spins[v] != b.spins[v];
  return d;
}

namespace {

constexpr double kMassEps = 1e-15;
constexpr double kInf = std::numeric_limits<double>::infinity();

// successive shortest augmenting paths with Dijkstra and node potentials;
// supply/demand are real masses, costs are small nonnegative integers, so
// every path length is an exact small integer in double arithmetic
struct Mcmf {
  struct Edge {
    int to;
    double cap;
    double cost;
    int rev;
  };
  std::vector<std::vector<Edge>> g;
  std::vector<double> pot, dist;
  std::vector<int> pv, pe;

  explicit Mcmf(int n) : g(n), pot(n, 0.0), dist(n), pv(n), pe(n) {}

  void add_edge(int a, int b, double cap, double cost) {
    g[a].push_back({b, cap, cost, static_cast<int>(g[b].size())});
    g[b].push_back({a, 0.0, -cost, static_cast<int>(g[a].size()) - 1});
  }

  // returns total cost; flows are left on the edges
  double run(int s, int t, double want) {
    double total_cost = 0.0;
    double shipped = 0.0;
    while (want - shipped > kMassEps) {
      std::fill(dist.begin(), dist.end(), kInf);
      dist[s] = 0.0;
      using Item = std::pair<double, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      pq.push({0.0, s});
      while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d > dist[v]) continue;
        for (int i = 0; i < static_cast<int>(g[v].size()); ++i) {
          const auto& e = g[v][i];
          if (e.cap <= kMassEps) continue;
          double nd = d + e.cost + pot[v] - pot[e.to];
          if (nd < dist[e.to] - 1e-12) {
            dist[e.to] = nd;
            pv[e.to] = v;
            pe[e.to] = i;
            pq.push({nd, e.to});
          }
        }
      }
      if (dist[t] == kInf) break;
      double dmax = 0.0;
      for (double d : dist)
        if (d != kInf) dmax = std::max(dmax, d);
      for (size_t v = 0; v < pot.size(); ++v)
        pot[v] += dist[v] == kInf ? dmax : dist[v];
      double push = want - shipped;
      for (int v = t; v != s; v = pv[v])
        push = std::min(push, g[pv[v]][pe[v]].cap);
      for (int v = t; v != s; v = pv[v]) {
        auto& e = g[pv[v]][pe[v]];
        e.cap -= push;
        g[v][e.rev].cap += push;
        total_cost += push * e.cost;
      }
      shipped += push;
    }
    if (want - shipped > 1e-9)
      throw model_error("transport problem is infeasible");
    return total_cost;
  }
};

}  // namespace

TransportResult min_cost_transport(const std::vector<double>& a,
                                   const std::vector<double>& b,
                                   const std::vector<std::vector<int>>& cost,
                                   uint64_t edge_budget) {
  const int na = static_cast<int>(a.size());
  const int nb = static_cast<int>(b.size());
  double ta = 0.0, tb = 0.0;
  for (double x : a) {
    if (x < -kSumTol) throw model_error("negative mass");
    ta += x;
  }
  for (double x : b) {
    if (x < -kSumTol) throw model_error("negative mass");
    tb += x;
  }
  if (std::abs(ta - tb) > 1e-9)
    throw model_error("transport endpoints carry different total mass");
  if (static_cast<int>(cost.size()) != na)
    throw model_error("cost matrix row count mismatch");

  std::vector<int> ia, ib;  // support indices
  for (int i = 0; i < na; ++i)
    if (a[i] > kMassEps) ia.push_back(i);
  for (int j = 0; j < nb; ++j)
    if (b[j] > kMassEps) ib.push_back(j);
  if (static_cast<uint64_t>(ia.size()) * ib.size() > edge_budget)
    throw budget_error("transport support product exceeds edge budget");

  const int nl = static_cast<int>(ia.size());
  const int nu = static_cast<int>(ib.size());
  const int S = 0, T = 1 + nl + nu;
  Mcmf net(T + 1);
  for (int x = 0; x < nl; ++x) net.add_edge(S, 1 + x, a[ia[x]], 0.0);
  for (int y = 0; y < nu; ++y) net.add_edge(1 + nl + y, T, b[ib[y]], 0.0);
  for (int x = 0; x < nl; ++x) {
    const auto& row = cost[ia[x]];
    if (static_cast<int>(row.size()) != nb)
      throw model_error("cost matrix column count mismatch");
    for (int y = 0; y < nu; ++y) {
      int c = row[ib[y]];
      if (c < 0) throw model_error("transport costs must be >= 0");
      net.add_edge(1 + x, 1 + nl + y, 1e30, static_cast<double>(c));
    }
  }

  TransportResult res;
  res.cost = net.run(S, T, std::min(ta, tb));
  for (int x = 0; x < nl; ++x)
    for (const auto& e : net.g[1 + x]) {
      int y = e.to - 1 - nl;
      if (y < 0 || y >= nu) continue;
      double sent = net.g[e.to][e.rev].cap;
      if (sent > kMassEps)
        res.plan.entries.emplace_back(ia[x], ib[y], sent);
    }
  res.plan.cost = res.cost;
  // duals: transport edges keep zero reduced cost whenever they carry flow,
  // so (-pot[left], pot[right]) is feasible and meets the primal objective
  res.dual_a.assign(na, 0.0);
  res.dual_b.assign(nb, 0.0);
  double base = net.pot[S];
  for (int x = 0; x < nl; ++x) res.dual_a[ia[x]] = base - net.pot[1 + x];
  for (int y = 0; y < nu; ++y) res.dual_b[ib[y]] = net.pot[1 + nl + y] - base;
  return res;
}

TransportResult kantorovich(const DistVector& a, const DistVector& b,
                            uint64_t edge_budget) {
  if (a.space != b.space)
    throw model_error("Kantorovich distance needs a common state space");
  const StateSpace& sp = *a.space;
  const int m = sp.size();
  std::vector<int> sa, sb;
  for (int i = 0; i < m; ++i) {
    if (a.p[i] > kMassEps) sa.push_back(i);
    if (b.p[i] > kMassEps) sb.push_back(i);
  }
  if (static_cast<uint64_t>(sa.size()) * sb.size() > edge_budget)
    throw budget_error("Kantorovich support product exceeds edge budget");

  // compact cost matrix over supports only
  std::vector<double> av(sa.size()), bv(sb.size());
  for (size_t x = 0; x < sa.size(); ++x) av[x] = a.p[sa[x]];
  for (size_t y = 0; y < sb.size(); ++y) bv[y] = b.p[sb[y]];
  std::vector<std::vector<int>> cost(sa.size(),
                                     std::vector<int>(sb.size(), 0));
  for (size_t x = 0; x < sa.size(); ++x)
    for (size_t y = 0; y < sb.size(); ++y)
      cost[x][y] = hamming(sp.states[sa[x]], sp.states[sb[y]]);

  TransportResult res = min_cost_transport(av, bv, cost, edge_budget);
  // translate support-local indices back to state indices
  for (auto& [from, to, mass] : res.plan.entries) {
    from = sa[from];
    to = sb[to];
  }
  std::vector<double> da(m, 0.0), db(m, 0.0);
  for (size_t x = 0; x < sa.size(); ++x) da[sa[x]] = res.dual_a[x];
  for (size_t y = 0; y < sb.size(); ++y) db[sb[y]] = res.dual_b[y];
  res.dual_a = std::move(da);
  res.dual_b = std::move(db);
  return res;
}

}  // namespace censorlab
