#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace unidisc::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Everything that determines a run. Serialized into every output file so a
/// file can be replayed with `rerun`. The thread count is deliberately absent:
/// results do not depend on it.
struct RunConfig {
  std::string command;
  std::string family;
  int n = 4;
  int d = 2;
  std::string q = "inf";
  int a = 4;
  std::vector<int> degrees;
  int r = -1;
  std::uint64_t m = 256;
  std::uint64_t seed = 1;
  int samples = 200;
  int spikes = 50;
  std::vector<int> only;
  std::string evaluation = "auto";
  double linf_slack = 0.1;
  int t = 0;
  std::string method = "exact";
  bool allow_large = false;
  int a_min = 1;
  std::string search = "auto";
  std::string input;
  std::string output;
  std::string csv;
  std::optional<double> assert_c1;
  std::optional<double> assert_c2;
  std::optional<double> assert_ratio;
};

nlohmann::json to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

/// Output document: tool, version, config, result and generated_at.
struct Outcome {
  nlohmann::json result;
  int exit_code = 0;
};

Outcome execute(const RunConfig& config);

/// Entry point of the `unidisc` tool. Exit codes: 0 success, 1 a check or
/// assertion failed, 2 usage or input error.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace unidisc::cli
