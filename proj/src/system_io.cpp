#include <fstream>
#include <sstream>

#include "censorlab/system.hpp"
#include "json.hpp"

namespace censorlab {

using nlohmann::json;

// Canonical on-disk form (keys serialize alphabetically, which is the
// normalization the round-trip guarantee refers to):
//   bipartition     optional [0/1,...]
//   constraint      "none" | "hardcore"
//   edges           [[i,j],...]
//   pair_potential  {"a|b": w} over all ordered label pairs
//   site_potential  {"default": [w...]} or {"0": [w...], ...}
//   sites           n
//   spins           [{"label": l, "value": x}, ...]
// The hardcore monotone order flip is not stored; the loader re-derives it
// (flip on bipartition class 1) whenever constraint is hardcore and a
// bipartition is present.

GibbsSystem parse_system(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw config_error(std::string("bad system JSON: ") + e.what());
  }
  try {
    GibbsSystem sys;
    SpinSpace sp;
    for (const auto& s : j.at("spins")) {
      sp.labels.push_back(s.at("label").get<std::string>());
      sp.values.push_back(s.at("value").get<double>());
    }
    sys.spins = sp;
    const int ns = sp.size();

    int n = j.at("sites").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges"))
      edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    std::optional<std::vector<uint8_t>> bip;
    if (j.contains("bipartition")) {
      std::vector<uint8_t> b;
      for (const auto& x : j.at("bipartition"))
        b.push_back(static_cast<uint8_t>(x.get<int>()));
      bip = std::move(b);
    }
    sys.graph = SiteGraph::make(n, std::move(edges), std::move(bip));

    sys.pair_potential.assign(ns * ns, -1.0);
    for (int s = 0; s < ns; ++s)
      for (int t = 0; t < ns; ++t) {
        std::string key = sp.labels[s] + "|" + sp.labels[t];
        sys.pair_potential[s * ns + t] = j.at("pair_potential").at(key).get<double>();
      }

    const auto& site_pot = j.at("site_potential");
    std::vector<double> def;
    if (site_pot.contains("default"))
      def = site_pot.at("default").get<std::vector<double>>();
    sys.site_potential.resize(n);
    for (int v = 0; v < n; ++v) {
      std::string key = std::to_string(v);
      if (site_pot.contains(key))
        sys.site_potential[v] = site_pot.at(key).get<std::vector<double>>();
      else if (!def.empty())
        sys.site_potential[v] = def;
      else
        throw config_error("site_potential missing site " + key);
    }

    std::string ck = j.at("constraint").get<std::string>();
    if (ck == "none")
      sys.constraint = ConstraintKind::none;
    else if (ck == "hardcore")
      sys.constraint = ConstraintKind::hardcore;
    else
      throw config_error("unknown constraint kind: " + ck);

    if (sys.constraint == ConstraintKind::hardcore && sys.graph.bipartition) {
      sys.order_flip.assign(sys.graph.bipartition->begin(),
                            sys.graph.bipartition->end());
    }
    sys.validate();
    return sys;
  } catch (const json::exception& e) {
    throw config_error(std::string("bad system JSON: ") + e.what());
  }
}

std::string serialize_system(const GibbsSystem& system) {
  json j;
  const int ns = system.n_spins();
  json spins = json::array();
  for (int s = 0; s < ns; ++s)
    spins.push_back({{"label", system.spins.labels[s]},
                     {"value", system.spins.values[s]}});
  j["spins"] = spins;
  j["sites"] = system.n_sites();
  json edges = json::array();
  for (auto [a, b] : system.graph.edges) edges.push_back({a, b});
  j["edges"] = edges;
  json pp = json::object();
  for (int s = 0; s < ns; ++s)
    for (int t = 0; t < ns; ++t)
      pp[system.spins.labels[s] + "|" + system.spins.labels[t]] =
          system.psi(s, t);
  j["pair_potential"] = pp;
  bool uniform = true;
  for (const auto& row : system.site_potential)
    if (row != system.site_potential[0]) { uniform = false; break; }
  json sp = json::object();
  if (uniform) {
    sp["default"] = system.site_potential[0];
  } else {
    for (int v = 0; v < system.n_sites(); ++v)
      sp[std::to_string(v)] = system.site_potential[v];
  }
  j["site_potential"] = sp;
  j["constraint"] =
      system.constraint == ConstraintKind::hardcore ? "hardcore" : "none";
  if (system.graph.bipartition) {
    json bip = json::array();
    for (auto c : *system.graph.bipartition) bip.push_back(static_cast<int>(c));
    j["bipartition"] = bip;
  }
  return j.dump(2) + "\n";
}

GibbsSystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open system file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

void save_system(const GibbsSystem& system, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write system file: " + path);
  out << serialize_system(system);
}

}  // namespace censorlab
