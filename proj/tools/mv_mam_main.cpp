#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mvmam/cli.hpp"
#include "mvmam/log.hpp"
#include "mvmam/version.hpp"

namespace {

void print_usage() {
  std::cout << "mv-mam " << mvmam::kVersion
            << " -- most likely transition paths for McKean-Vlasov systems\n\n"
               "usage: mv-mam <runfile> [--output-dir DIR] [--jobs N] "
               "[--set section.key=value ...]\n\n"
               "commands (chosen inside the run file): solve, qp-scan, equipotentials,\n"
               "fixed-points, simulate. Exit codes: 0 success, 1 numerical failure,\n"
               "2 configuration error. Set MV_MAM_LOG=error|warn|info|debug for\n"
               "diagnostics on stderr.\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::string runfile_path;
  std::string output_dir_override;
  int jobs = 1;
  std::vector<std::string> overrides;

  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "-h" || arg == "--help") {
      print_usage();
      return 0;
    } else if (arg == "--version") {
      std::cout << mvmam::kVersion << "\n";
      return 0;
    } else if (arg == "--output-dir") {
      if (++i >= argc) {
        mvmam::log::error("--output-dir expects a directory");
        return 2;
      }
      output_dir_override = argv[i];
    } else if (arg == "--jobs") {
      if (++i >= argc) {
        mvmam::log::error("--jobs expects a count");
        return 2;
      }
      jobs = std::atoi(argv[i]);
      if (jobs < 1) {
        mvmam::log::error("--jobs must be >= 1");
        return 2;
      }
    } else if (arg == "--set") {
      if (++i >= argc) {
        mvmam::log::error("--set expects section.key=value");
        return 2;
      }
      overrides.emplace_back(argv[i]);
    } else if (!arg.empty() && arg[0] == '-') {
      mvmam::log::error("unknown flag \"" + arg + "\"");
      return 2;
    } else if (runfile_path.empty()) {
      runfile_path = arg;
    } else {
      mvmam::log::error("unexpected argument \"" + arg + "\"");
      return 2;
    }
  }

  if (runfile_path.empty()) {
    print_usage();
    return 2;
  }

  std::ifstream in(runfile_path);
  if (!in) {
    mvmam::log::error("cannot open run file \"" + runfile_path + "\"");
    return 2;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();

  try {
    auto entries = mvmam::cli::parse_entries(buffer.str());
    for (const auto& o : overrides) mvmam::cli::apply_override(entries, o);
    mvmam::cli::RunFile run = mvmam::cli::interpret(entries);
    if (!output_dir_override.empty()) run.output_dir = output_dir_override;
    run.jobs = jobs;
    return mvmam::cli::run(run);
  } catch (const mvmam::config_error& e) {
    mvmam::log::error(e.what());
    return 2;
  } catch (const mvmam::invalid_argument& e) {
    mvmam::log::error(e.what());
    return 2;
  } catch (const std::exception& e) {
    mvmam::log::error(e.what());
    return 1;
  }
}
