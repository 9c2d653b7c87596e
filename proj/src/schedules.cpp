#include "censorlab/schedules.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "censorlab/exact.hpp"
#include "censorlab/rng.hpp"
#include "json.hpp"

namespace censorlab {

Schedule random_schedule(int n_sites, int length, uint64_t seed) {
  if (n_sites < 1 || length < 0) throw config_error("bad schedule shape");
  Schedule s;
  s.provenance = "random";
  s.seed = seed;
  CounterRng rng(seed, /*stream=*/0);
  s.steps.reserve(length);
  for (int k = 0; k < length; ++k)
    s.steps.push_back(Target::at(rng.pick(k, n_sites)));
  return s;
}

Schedule systematic_schedule(int n_sites, int rounds,
                             const std::vector<int>& permutation) {
  std::vector<int> perm = permutation;
  if (perm.empty()) {
    perm.resize(n_sites);
    for (int v = 0; v < n_sites; ++v) perm[v] = v;
  }
  if (static_cast<int>(perm.size()) != n_sites)
    throw config_error("permutation length mismatch");
  std::vector<uint8_t> seen(n_sites, 0);
  for (int v : perm) {
    if (v < 0 || v >= n_sites || seen[v])
      throw config_error("not a permutation of the sites");
    seen[v] = 1;
  }
  Schedule s;
  s.provenance = "systematic";
  for (int r = 0; r < rounds; ++r)
    for (int v : perm) s.steps.push_back(Target::at(v));
  return s;
}

Schedule alternating_schedule(const SiteGraph& graph, int rounds) {
  if (!graph.bipartition)
    throw model_error("alternating schedule needs a bipartite graph");
  std::vector<int> odd, even;
  for (int v = 0; v < graph.n_sites; ++v)
    ((*graph.bipartition)[v] == 0 ? odd : even).push_back(v);
  Schedule s;
  s.provenance = "alternating";
  for (int r = 0; r < rounds; ++r) {
    for (int v : odd) s.steps.push_back(Target::at(v));
    for (int v : even) s.steps.push_back(Target::at(v));
  }
  return s;
}

Schedule censor(const Schedule& base, const std::vector<uint8_t>& mask) {
  if (mask.size() != base.steps.size())
    throw config_error("censor mask length mismatch");
  Schedule s;
  s.provenance = base.provenance + "+censored";
  s.seed = base.seed;
  for (size_t k = 0; k < mask.size(); ++k)
    if (mask[k]) s.steps.push_back(base.steps[k]);
  return s;
}

Schedule censor_to_sites(const Schedule& base,
                         const std::vector<int>& allowed) {
  std::vector<uint8_t> ok;
  std::vector<uint8_t> mask(base.steps.size(), 0);
  int n_max = 0;
  for (const auto& t : base.steps)
    for (int v : t.sites) n_max = std::max(n_max, v + 1);
  ok.assign(n_max, 0);
  for (int v : allowed)
    if (v >= 0 && v < n_max) ok[v] = 1;
  for (size_t k = 0; k < base.steps.size(); ++k) {
    bool keep = true;
    for (int v : base.steps[k].sites)
      if (!ok[v]) { keep = false; break; }
    mask[k] = keep;
  }
  Schedule s = censor(base, mask);
  s.provenance = base.provenance + "+censored-to-sites";
  return s;
}

Schedule censor_to_blocks(const Schedule& base,
                          const std::vector<std::vector<int>>& blocks) {
  // map each site to its grid block (blocks must be disjoint)
  std::map<int, int> owner;
  for (size_t b = 0; b < blocks.size(); ++b)
    for (int v : blocks[b]) {
      if (owner.count(v))
        throw model_error("censor_to_blocks needs disjoint blocks");
      owner[v] = static_cast<int>(b);
    }
  Schedule s;
  s.provenance = base.provenance + "+censored-to-blocks";
  s.seed = base.seed;
  std::vector<uint8_t> hit(blocks.size(), 0);
  for (const auto& t : base.steps) {
    if (!t.is_site()) continue;  // raw draws are single sites
    auto it = owner.find(t.site());
    if (it == owner.end()) continue;  // outside every block: censored
    if (hit[it->second]) continue;    // block already updated this sweep
    hit[it->second] = 1;
    s.steps.push_back(Target::block(blocks[it->second]));
  }
  return s;
}

Schedule global_block_schedule(const std::vector<std::vector<int>>& blocks) {
  Schedule s;
  s.provenance = "global-blocks";
  for (const auto& b : blocks) s.steps.push_back(Target::block(b));
  return s;
}

ParityPhaseResult alternating_parity_phases(const SiteGraph& graph, int phases,
                                            uint64_t seed) {
  if (!graph.bipartition)
    throw model_error("parity phases need a bipartite graph");
  ParityPhaseResult res;
  res.schedule.provenance = "parity-phases";
  res.schedule.seed = seed;
  CounterRng rng(seed, /*stream=*/0);
  const int n = graph.n_sites;
  std::vector<int> class_size(2, 0);
  for (int v = 0; v < n; ++v) ++class_size[(*graph.bipartition)[v]];
  uint64_t counter = 0;
  for (int ph = 0; ph < phases; ++ph) {
    const uint8_t active = static_cast<uint8_t>(ph % 2);
    std::vector<uint8_t> seen(n, 0);
    int covered = 0;
    while (covered < class_size[active]) {
      int v = rng.pick(counter++, n);
      if ((*graph.bipartition)[v] != active) continue;  // censored draw
      res.schedule.steps.push_back(Target::at(v));
      if (!seen[v]) {
        seen[v] = 1;
        ++covered;
      }
    }
    res.phase_kept.push_back(res.schedule.length());
    res.phase_raw.push_back(counter);
  }
  res.raw_draws = counter;
  return res;
}

Schedule birthday_thinning(const SiteGraph& graph, uint64_t seed) {
  Schedule s;
  s.provenance = "birthday";
  s.seed = seed;
  CounterRng rng(seed, /*stream=*/0);
  std::vector<uint8_t> blocked(graph.n_sites, 0);
  uint64_t counter = 0;
  for (;;) {
    int v = rng.pick(counter++, graph.n_sites);
    if (blocked[v]) break;  // collision with a kept site or its neighborhood
    s.steps.push_back(Target::at(v));
    blocked[v] = 1;
    for (int u : graph.neighbors[v]) blocked[u] = 1;
  }
  return s;
}

std::string serialize_schedule(const Schedule& s) {
  std::ostringstream out;
  for (const auto& t : s.steps) {
    nlohmann::json j;
    if (t.is_site())
      j["site"] = t.site();
    else
      j["block"] = t.sites;
    out << j.dump() << "\n";
  }
  return out.str();
}

Schedule parse_schedule(const std::string& text) {
  Schedule s;
  s.provenance = "file";
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw config_error(std::string("bad schedule line: ") + e.what());
    }
    if (j.contains("site"))
      s.steps.push_back(Target::at(j.at("site").get<int>()));
    else if (j.contains("block"))
      s.steps.push_back(Target::block(j.at("block").get<std::vector<int>>()));
    else
      throw config_error("schedule line needs \"site\" or \"block\"");
  }
  return s;
}

void save_schedule(const Schedule& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write schedule file: " + path);
  out << serialize_schedule(s);
}

Schedule load_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open schedule file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_schedule(ss.str());
}

CommuteCertificate commute_check(const StateSpace& space, const Schedule& a,
                                 const Schedule& b, double tol) {
  CommuteCertificate cert;
  for (int i = 0; i < space.size(); ++i) {
    DistVector d = point_mass(space, i);
    double gap = tv_distance(apply_schedule(d, a), apply_schedule(d, b));
    if (gap > tol) {
      cert.ok = false;
      cert.state = i;
      cert.gap = gap;
      return cert;
    }
  }
  cert.ok = true;
  return cert;
}

}  // namespace censorlab
