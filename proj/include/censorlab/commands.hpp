#pragma once

#include <string>

#include "censorlab/system.hpp"
#include "json.hpp"

namespace censorlab {

// Build a system from a config "model" object:
//   {"system_file": "path.json"}                      load from disk
//   {"family": "ising", "graph": "cycle", "params": [4],
//    "beta": 0.2, "field": 0.0}                       Ising on a graph family
//   {"family": "hardcore", "graph": "cycle", "params": [4], "lambda": 1.0}
GibbsSystem model_from_config(const nlohmann::json& model);

nlohmann::json load_config(const std::string& path);

// Subcommand drivers. Each writes report/CSV files into out_dir and returns
// the process exit code: 0 all certified, 1 violation found. Configuration
// and budget problems are thrown (config_error / model_error / budget_error).
int cmd_verify_censoring(const nlohmann::json& cfg, const std::string& out_dir);
int cmd_compare_schedules(const nlohmann::json& cfg,
                          const std::string& out_dir);
int cmd_contraction(const nlohmann::json& cfg, const std::string& out_dir);
int cmd_hanging(const nlohmann::json& cfg, const std::string& out_dir);
int cmd_mc(const nlohmann::json& cfg, const std::string& out_dir);

}  // namespace censorlab
