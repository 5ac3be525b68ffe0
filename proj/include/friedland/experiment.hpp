#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "friedland/actions.hpp"
#include "friedland/orbit_space.hpp"

namespace friedland {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Parsed batch-run description. The on-disk format is a JSON document with
// the action (space, generators with exact integer parameters), the command,
// and schedule/budget/seed fields.
struct ExperimentConfig {
  std::string command;
  Action action;
  std::vector<ScheduleEntry> schedule;  // grid stored as spacing in (0, 1]
  int depth = 3;
  std::size_t budget = 300000;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  int threads = 0;
  std::vector<double> probe_point;  // preimage base / hurley sample, optional
  std::vector<long> m_list{2, 3};
  int hurley_n = 9;
  double hurley_epsilon = 0.3;
  int hurley_grid = 512;
  int hurley_hi_grid = 64;
  double hurley_slack = 0.05;
  double conj_shift = 0.25;
  std::string echo;  // normalized config text
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

struct RunReport {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> summary;
  std::string config_echo;
  bool ok = true;
};

// Executes the configured command. Budget overruns are reported per row and
// the run continues; ok turns false only on failed invariant checks.
RunReport run(const ExperimentConfig& config);

// Stable column order, one line per row; no timestamps.
std::string to_csv(const RunReport& report);

// Writes <command>.csv (timestamp isolated in a leading comment line) and
// <command>_summary.txt under out_dir; returns the written paths.
std::vector<std::string> emit(const RunReport& report, const std::string& out_dir);

}  // namespace friedland
