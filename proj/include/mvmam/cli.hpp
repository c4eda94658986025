#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "mvmam/amam.hpp"
#include "mvmam/particles.hpp"

namespace mvmam::cli {

/// A parsed value from the run file: number, quoted string or number array.
using Value = std::variant<double, std::string, std::vector<double>>;

struct Entry {
  std::string section;  // "" for top-level keys
  std::string key;
  Value value;
  int line = 0;
};

/// Line-oriented strict parse of the [section] key = value format (a
/// TOML-compatible subset: quoted strings, numbers, number arrays, comments
/// with #). Duplicate keys and malformed lines are config errors citing the
/// line number.
std::vector<Entry> parse_entries(const std::string& text);

/// A fully validated run description with all defaults applied.
struct RunFile {
  std::string command;
  std::string output_dir = "out";
  std::string initial_path = "line";

  std::string field = "maier-stein";
  std::map<std::string, double> field_params;
  std::string interaction = "zero";
  std::map<std::string, double> interaction_params;
  Vec x1, x2;

  SolverConfig solver;
  std::vector<double> t_list;

  SimConfig sim;
  int record_stride = 1;
  double hit_radius = 0.2;

  int jobs = 1;
};

/// Strict-schema interpretation: unknown keys or sections, missing command,
/// type mismatches and semantic violations are config errors.
RunFile interpret(const std::vector<Entry>& entries);

/// parse_entries + interpret.
RunFile parse_run_file(const std::string& text);

/// Apply a --set section.key=value override (top-level keys have no dot).
void apply_override(std::vector<Entry>& entries, const std::string& assignment);

/// Initial path construction: "parabola" (2-D only), "line", or a CSV file
/// with d columns and N+1 rows. Endpoints are overwritten to x1/x2 and times
/// are uniform on [0, T].
DiscretePath build_initial_path(const std::string& kind, const ModelSpec& model, int N,
                                double T);

/// Execute the run; writes the command's output files under run.output_dir.
/// Returns the process exit code (0 ok, 1 numerical failure, 2 config error).
int run(const RunFile& run_file);

}  // namespace mvmam::cli
