#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "dlab/action.hpp"
#include "dlab/measure.hpp"
#include "dlab/record.hpp"

namespace dlab {

inline constexpr int kExitPass = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitRuntime = 3;

struct RunOutput {
  int exit_code = kExitPass;
  std::string summary;
  Record record;
  std::optional<PlotData> plot;
};

/// Parses a JSON config; syntax errors become Schema errors with line/column.
nlohmann::json parse_config(const std::string& text);
nlohmann::json load_config(const std::string& path);

GroupDescriptor group_from_config(const nlohmann::json& j);
Measure measure_from_config(const nlohmann::json& j, const GroupDescriptor& g);
/// Builds the action; `record` receives the chosen flow parameters.
ActionSpace action_from_config(const nlohmann::json& j, const GroupDescriptor& g,
                               Record* record = nullptr);

/// Runs one experiment (or a sweep). Never throws: errors map to exit codes
/// 2 (schema) and 3 (runtime/resource) with the message in the summary.
RunOutput run_experiment(const nlohmann::json& config, int jobs = 1);

/// Writes summary.txt, record.csv or record.kv, and plot.csv when present.
void write_outputs(const RunOutput& out, const std::string& dir, const std::string& format);

/// Entry point of the dlab executable.
int run_cli(int argc, char** argv);

}  // namespace dlab
