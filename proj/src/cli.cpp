#include "mvmam/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mvmam/equilibria.hpp"
#include "mvmam/log.hpp"
#include "mvmam/models.hpp"
#include "mvmam/version.hpp"

namespace mvmam::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void fail(int line, const std::string& message) {
  throw config_error("line " + std::to_string(line) + ": " + message);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

// strip a trailing comment that is not inside a quoted string
std::string strip_comment(const std::string& s) {
  bool in_quote = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_quote = !in_quote;
    if (s[i] == '#' && !in_quote) return s.substr(0, i);
  }
  return s;
}

double parse_number(const std::string& text, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    fail(line, "expected a number, got \"" + text + "\"");
  }
  if (used != text.size()) fail(line, "trailing characters after number: \"" + text + "\"");
  return v;
}

Value parse_value(const std::string& raw, int line) {
  const std::string text = trim(raw);
  if (text.empty()) fail(line, "missing value");
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') fail(line, "unterminated string");
    return text.substr(1, text.size() - 2);
  }
  if (text.front() == '[') {
    if (text.back() != ']') fail(line, "unterminated array");
    std::vector<double> values;
    std::string inner = text.substr(1, text.size() - 2);
    std::stringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) fail(line, "empty array element");
      values.push_back(parse_number(item, line));
    }
    if (values.empty()) fail(line, "empty array");
    return values;
  }
  return parse_number(text, line);
}

}  // namespace

std::vector<Entry> parse_entries(const std::string& text) {
  std::vector<Entry> entries;
  std::set<std::pair<std::string, std::string>> seen;
  std::string section;
  std::istringstream stream(text);
  std::string raw_line;
  int line_no = 0;
  while (std::getline(stream, raw_line)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw_line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail(line_no, "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) fail(line_no, "empty key");
    if (!seen.insert({section, key}).second) {
      fail(line_no, "duplicate key \"" + key + "\"" +
                        (section.empty() ? "" : " in [" + section + "]"));
    }
    entries.push_back({section, key, parse_value(line.substr(eq + 1), line_no), line_no});
  }
  return entries;
}

void apply_override(std::vector<Entry>& entries, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw config_error("--set expects section.key=value, got \"" + assignment + "\"");
  }
  std::string path = trim(assignment.substr(0, eq));
  std::string section, key;
  const auto dot = path.find('.');
  if (dot == std::string::npos) {
    key = path;
  } else {
    section = path.substr(0, dot);
    key = path.substr(dot + 1);
  }
  if (key.empty()) throw config_error("--set: empty key in \"" + assignment + "\"");
  Value value = parse_value(assignment.substr(eq + 1), 0);
  for (auto& e : entries) {
    if (e.section == section && e.key == key) {
      e.value = std::move(value);  // flag wins over the file
      return;
    }
  }
  entries.push_back({section, key, std::move(value), 0});
}

namespace {

struct EntryReader {
  const std::vector<Entry>& entries;
  std::set<std::pair<std::string, std::string>> consumed;

  const Entry* find(const std::string& section, const std::string& key) {
    for (const auto& e : entries) {
      if (e.section == section && e.key == key) {
        consumed.insert({section, key});
        return &e;
      }
    }
    return nullptr;
  }

  std::optional<double> number(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    if (const double* v = std::get_if<double>(&e->value)) return *v;
    fail(e->line, "key \"" + key + "\" expects a number");
  }

  std::optional<std::string> string(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    if (const auto* v = std::get_if<std::string>(&e->value)) return *v;
    fail(e->line, "key \"" + key + "\" expects a quoted string");
  }

  std::optional<std::vector<double>> array(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    if (const auto* v = std::get_if<std::vector<double>>(&e->value)) return *v;
    fail(e->line, "key \"" + key + "\" expects an array of numbers");
  }

  std::optional<int> integer(const std::string& section, const std::string& key) {
    auto v = number(section, key);
    if (!v) return std::nullopt;
    const double rounded = std::round(*v);
    if (std::abs(*v - rounded) > 1e-9) {
      const Entry* e = find(section, key);
      fail(e ? e->line : 0, "key \"" + key + "\" expects an integer");
    }
    return static_cast<int>(rounded);
  }

  void reject_unconsumed() const {
    for (const auto& e : entries) {
      if (!consumed.count({e.section, e.key})) {
        fail(e.line, "unknown key \"" + (e.section.empty() ? e.key : e.section + "." + e.key) +
                         "\"");
      }
    }
  }
};

Vec to_vec(const std::vector<double>& values) {
  Vec v(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) v(i) = values[i];
  return v;
}

ModelSpec model_from(const RunFile& run) {
  return build_model(run.field, run.field_params, run.interaction, run.interaction_params,
                     run.x1, run.x2, run.solver.fd_step);
}

}  // namespace

RunFile interpret(const std::vector<Entry>& entries) {
  EntryReader reader{entries, {}};
  RunFile run;

  auto command = reader.string("", "command");
  if (!command) throw config_error("missing command");
  run.command = *command;
  static const std::set<std::string> known_commands = {"solve", "qp-scan", "equipotentials",
                                                       "fixed-points", "simulate"};
  if (!known_commands.count(run.command)) {
    throw config_error("unknown command \"" + run.command +
                       "\"; expected solve, qp-scan, equipotentials, fixed-points or simulate");
  }
  if (auto v = reader.string("", "output_dir")) run.output_dir = *v;
  if (auto v = reader.string("", "initial_path")) run.initial_path = *v;

  auto field = reader.string("model", "field");
  if (!field) throw config_error("missing model.field");
  run.field = *field;
  auto interaction = reader.string("model", "interaction");
  if (!interaction) throw config_error("missing model.interaction");
  run.interaction = *interaction;
  if (auto v = reader.number("model", "beta")) run.field_params["beta"] = *v;
  if (auto v = reader.number("model", "delta")) run.interaction_params["delta"] = *v;
  auto x1 = reader.array("model", "x1");
  auto x2 = reader.array("model", "x2");
  if (!x1 || !x2) throw config_error("missing model.x1 or model.x2");
  run.x1 = to_vec(*x1);
  run.x2 = to_vec(*x2);

  if (auto v = reader.integer("solver", "n")) run.solver.N = *v;
  if (auto v = reader.integer("solver", "k")) run.solver.K = *v;
  if (auto v = reader.number("solver", "t")) run.solver.T = *v;
  if (auto v = reader.number("solver", "dtau")) run.solver.dtau = *v;
  if (auto v = reader.number("solver", "r")) run.solver.r = *v;
  if (auto v = reader.number("solver", "theta")) run.solver.theta = *v;
  if (auto v = reader.number("solver", "tol_residual")) run.solver.tol_residual = *v;
  if (auto v = reader.number("solver", "tol_action")) run.solver.tol_action = *v;
  if (auto v = reader.number("solver", "fd_step")) run.solver.fd_step = *v;
  if (auto v = reader.string("solver", "interp")) {
    if (*v == "linear") {
      run.solver.interp = InterpMode::linear;
    } else if (*v == "cubic") {
      run.solver.interp = InterpMode::cubic;
    } else {
      throw config_error("solver.interp must be \"linear\" or \"cubic\"");
    }
  }
  if (auto v = reader.array("solver", "t_list")) run.t_list = *v;

  if (auto v = reader.integer("sim", "n_particles")) run.sim.n_particles = *v;
  if (auto v = reader.number("sim", "epsilon")) run.sim.epsilon = *v;
  if (auto v = reader.number("sim", "dt")) run.sim.dt = *v;
  if (auto v = reader.number("sim", "t_end")) run.sim.t_end = *v;
  if (auto v = reader.number("sim", "seed")) {
    if (*v < 0) throw config_error("sim.seed must be non-negative");
    run.sim.seed = static_cast<std::uint64_t>(*v);
  }
  if (auto v = reader.integer("sim", "n_paths")) run.sim.n_paths = *v;
  if (auto v = reader.integer("sim", "record_stride")) run.record_stride = *v;
  if (auto v = reader.number("sim", "hit_radius")) run.hit_radius = *v;

  reader.reject_unconsumed();

  // semantic checks (exit code 2 territory)
  try {
    run.solver.validate();
  } catch (const invalid_argument& e) {
    throw config_error(e.what());
  }
  if (run.command == "qp-scan") {
    if (run.t_list.empty()) throw config_error("qp-scan requires solver.t_list");
    for (double t : run.t_list) {
      if (!(t > 0.0)) throw config_error("solver.t_list entries must be positive");
    }
  } else if (!run.t_list.empty()) {
    throw config_error("solver.t_list is only valid for the qp-scan command");
  }
  if (run.command == "simulate" || run.command == "equipotentials") run.sim.validate();
  if (run.record_stride < 1) throw config_error("sim.record_stride must be >= 1");
  if (!(run.hit_radius > 0.0)) throw config_error("sim.hit_radius must be positive");

  model_from(run);  // validates field/interaction identifiers and parameters

  const bool is_file_path = run.initial_path != "parabola" && run.initial_path != "line";
  if (is_file_path && !fs::exists(run.initial_path)) {
    throw config_error("initial_path file \"" + run.initial_path + "\" does not exist");
  }
  return run;
}

RunFile parse_run_file(const std::string& text) { return interpret(parse_entries(text)); }

DiscretePath build_initial_path(const std::string& kind, const ModelSpec& model, int N,
                                double T) {
  if (N < 1) throw config_error("build_initial_path: N >= 1 required");
  DiscretePath path;
  path.times.resize(N + 1);
  for (int i = 0; i <= N; ++i) path.times[i] = T * static_cast<double>(i) / N;

  if (kind == "parabola") {
    if (model.dim != 2) throw config_error("initial_path \"parabola\" requires a 2-D model");
    path.states.resize(N + 1, Vec(2));
    const double a = model.anchor_x1(0), b = model.target_x2(0);
    for (int i = 0; i <= N; ++i) {
      const double x = a + (b - a) * static_cast<double>(i) / N;
      path.states[i](0) = x;
      path.states[i](1) = -0.5 * x * x + 0.5;
    }
  } else if (kind == "line") {
    path.states.resize(N + 1, Vec(model.dim));
    for (int i = 0; i <= N; ++i) {
      const double s = static_cast<double>(i) / N;
      path.states[i] = (1.0 - s) * model.anchor_x1 + s * model.target_x2;
    }
  } else {
    std::ifstream in(kind);
    if (!in) throw config_error("cannot open initial path file \"" + kind + "\"");
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string item;
      Vec row(model.dim);
      int c = 0;
      while (std::getline(ss, item, ',')) {
        if (c >= model.dim) break;
        row(c++) = parse_number(trim(item), 0);
      }
      if (c != model.dim) {
        throw config_error("initial path file: expected " + std::to_string(model.dim) +
                           " columns");
      }
      path.states.push_back(row);
    }
    if (static_cast<int>(path.states.size()) != N + 1) {
      throw config_error("initial path file: expected " + std::to_string(N + 1) + " rows, got " +
                         std::to_string(path.states.size()));
    }
  }
  path.states.front() = model.anchor_x1;
  path.states.back() = model.target_x2;
  return path;
}

namespace {

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const fs::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw numerical_error("cannot write " + file.string());
  out << content;
}

std::string path_csv(const DiscretePath& path) {
  std::ostringstream os;
  const int N = path.n_cells();
  os << "index,alpha,t";
  for (Eigen::Index c = 0; c < path.states.front().size(); ++c) os << ",x_" << (c + 1);
  os << "\n";
  for (int i = 0; i <= N; ++i) {
    os << i << ',' << format_g17(static_cast<double>(i) / N) << ',' << format_g17(path.times[i]);
    for (Eigen::Index c = 0; c < path.states[i].size(); ++c) {
      os << ',' << format_g17(path.states[i](c));
    }
    os << "\n";
  }
  return os.str();
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << "index,t";
  for (Eigen::Index c = 0; c < traj.states.front().size(); ++c) os << ",x_" << (c + 1);
  os << "\n";
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    os << i << ',' << format_g17(traj.grid.nodes[i]);
    for (Eigen::Index c = 0; c < traj.states[i].size(); ++c) {
      os << ',' << format_g17(traj.states[i](c));
    }
    os << "\n";
  }
  return os.str();
}

json config_echo(const RunFile& run) {
  json j;
  j["command"] = run.command;
  j["output_dir"] = run.output_dir;
  j["initial_path"] = run.initial_path;
  j["model"] = {{"field", run.field},
                {"field_params", run.field_params},
                {"interaction", run.interaction},
                {"interaction_params", run.interaction_params},
                {"x1", std::vector<double>(run.x1.data(), run.x1.data() + run.x1.size())},
                {"x2", std::vector<double>(run.x2.data(), run.x2.data() + run.x2.size())}};
  json solver = {{"n", run.solver.N},
                 {"k", run.solver.K},
                 {"t", run.solver.T},
                 {"r", run.solver.r},
                 {"theta", run.solver.theta},
                 {"tol_residual", run.solver.tol_residual},
                 {"tol_action", run.solver.tol_action},
                 {"interp", run.solver.interp == InterpMode::linear ? "linear" : "cubic"},
                 {"fd_step", run.solver.fd_step}};
  if (run.solver.dtau) {
    solver["dtau"] = *run.solver.dtau;
  } else {
    solver["dtau"] = "auto";
  }
  if (!run.t_list.empty()) solver["t_list"] = run.t_list;
  j["solver"] = solver;
  j["sim"] = {{"n_particles", run.sim.n_particles}, {"epsilon", run.sim.epsilon},
              {"dt", run.sim.dt},                   {"t_end", run.sim.t_end},
              {"seed", run.sim.seed},               {"n_paths", run.sim.n_paths},
              {"record_stride", run.record_stride}, {"hit_radius", run.hit_radius}};
  return j;
}

std::vector<Vec> default_seed_grid(int dim, int per_axis) {
  std::vector<Vec> seeds;
  std::vector<int> idx(dim, 0);
  const double lo = -1.5, hi = 1.5;
  while (true) {
    Vec s(dim);
    for (int d = 0; d < dim; ++d) {
      s(d) = per_axis == 1 ? 0.0 : lo + (hi - lo) * idx[d] / (per_axis - 1);
    }
    seeds.push_back(s);
    int d = 0;
    while (d < dim && ++idx[d] == per_axis) idx[d++] = 0;
    if (d == dim) break;
  }
  return seeds;
}

// 20 flow seeds: 20 points in 1-D, a 5 x 4 grid in 2-D, 3 per axis beyond
std::vector<Vec> equipotential_seeds(int dim) {
  if (dim == 1) {
    std::vector<Vec> seeds;
    for (int i = 0; i < 20; ++i) {
      Vec s(1);
      s(0) = -1.5 + 3.0 * i / 19.0;
      seeds.push_back(s);
    }
    return seeds;
  }
  if (dim == 2) {
    std::vector<Vec> seeds;
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 4; ++j) {
        Vec s(2);
        s(0) = -1.5 + 3.0 * i / 4.0;
        s(1) = -1.5 + 3.0 * j / 3.0;
        seeds.push_back(s);
      }
    }
    return seeds;
  }
  return default_seed_grid(dim, 3);
}

int run_solve(const RunFile& run, const ModelSpec& model, const fs::path& out_dir, json& report) {
  const DiscretePath init =
      build_initial_path(run.initial_path, model, run.solver.N, run.solver.T);
  const SolveReport rep = solve_mlp(model, run.solver, init);
  report["action"] = rep.action_value;
  report["iterations"] = rep.iterations;
  report["converged"] = rep.converged;
  report["final_sup_residual"] = rep.final_sup_residual;
  report["max_equidistribution_error"] = rep.max_equidistribution_error;
  report["residual_history"] = rep.residual_history;
  report["action_history"] = rep.action_history;
  write_text(out_dir / "path.csv", path_csv(rep.path));
  return 0;
}

int run_qp_scan(const RunFile& run, const ModelSpec& model, const fs::path& out_dir,
                json& report) {
  const DiscretePath init =
      build_initial_path(run.initial_path, model, run.solver.N, run.solver.T);
  QuasiPotentialTable table;
  if (run.jobs <= 1) {
    table = quasi_potential_scan(model, run.solver, run.t_list, init);
  } else {
    // cold-started rows in parallel; deterministic ordering by t_list
    std::vector<std::future<QuasiPotentialRow>> futures;
    std::vector<std::future<SolveReport>> reports;
    for (double T : run.t_list) {
      futures.push_back(std::async(std::launch::async, [&, T] {
        SolverConfig cfg = run.solver;
        cfg.T = T;
        DiscretePath row_init = init;
        const double scale = T / init.horizon();
        for (auto& t : row_init.times) t *= scale;
        row_init.times.front() = 0.0;
        row_init.times.back() = T;
        QuasiPotentialRow row;
        row.T = T;
        try {
          const SolveReport rep = solve_mlp(model, cfg, row_init);
          row.min_action = rep.action_value;
          row.converged = rep.converged;
        } catch (const std::exception& e) {
          row.error = e.what();
          row.min_action = std::numeric_limits<double>::quiet_NaN();
        }
        return row;
      }));
    }
    table.quasi_potential = std::numeric_limits<double>::infinity();
    for (auto& f : futures) {
      auto row = f.get();
      if (row.error.empty() && row.min_action < table.quasi_potential) {
        table.quasi_potential = row.min_action;
      }
      table.rows.push_back(std::move(row));
    }
    // recover the best path with one warm solve at the winning T
    for (const auto& row : table.rows) {
      if (row.error.empty() && row.min_action == table.quasi_potential) {
        SolverConfig cfg = run.solver;
        cfg.T = row.T;
        DiscretePath row_init = init;
        const double scale = row.T / init.horizon();
        for (auto& t : row_init.times) t *= scale;
        row_init.times.front() = 0.0;
        row_init.times.back() = row.T;
        table.best_path = solve_mlp(model, cfg, row_init).path;
        break;
      }
    }
  }

  std::ostringstream os;
  os << "T,min_action,converged,running_min\n";
  double running = std::numeric_limits<double>::infinity();
  for (const auto& row : table.rows) {
    if (row.error.empty()) running = std::min(running, row.min_action);
    os << format_g17(row.T) << ',' << format_g17(row.min_action) << ','
       << (row.converged ? 1 : 0) << ',' << format_g17(running) << "\n";
  }
  write_text(out_dir / "qp_scan.csv", os.str());
  if (!table.best_path.states.empty()) {
    write_text(out_dir / "path.csv", path_csv(table.best_path));
  }
  report["quasi_potential"] = table.quasi_potential;
  json rows = json::array();
  for (const auto& row : table.rows) {
    rows.push_back({{"T", row.T},
                    {"min_action", row.min_action},
                    {"converged", row.converged},
                    {"error", row.error}});
  }
  report["rows"] = rows;
  return 0;
}

int run_equipotentials(const RunFile& run, const ModelSpec& model, const fs::path& out_dir,
                       json& report) {
  const auto seeds = equipotential_seeds(model.dim);
  const auto flows =
      equipotential_field(model, model.anchor_x1, seeds, run.sim.t_end, run.sim.dt);
  json seeds_json = json::array();
  int failures = 0;
  for (const auto& sf : flows) {
    json entry;
    entry["seed_index"] = sf.seed_index;
    entry["ok"] = sf.ok;
    if (sf.ok) {
      write_text(out_dir / ("equipotential_" + std::to_string(sf.seed_index) + ".csv"),
                 trajectory_csv(sf.trajectory));
    } else {
      entry["error"] = sf.error;
      ++failures;
    }
    seeds_json.push_back(entry);
  }
  report["seeds"] = seeds_json;
  report["n_seeds"] = seeds.size();
  report["n_failures"] = failures;
  return failures == static_cast<int>(flows.size()) ? 1 : 0;
}

int run_fixed_points(const RunFile& run, const ModelSpec& model, const fs::path& out_dir,
                     json& report) {
  const auto seeds = default_seed_grid(model.dim, 5);
  const auto roots = find_fixed_points(model, model.anchor_x1, seeds, 1e-12, 100);
  json arr = json::array();
  for (const auto& fp : roots) {
    arr.push_back({{"location", std::vector<double>(fp.location.data(),
                                                    fp.location.data() + fp.location.size())},
                   {"kind", to_string(fp.kind)},
                   {"eigen_real_parts", fp.eigen_real_parts},
                   {"residual_norm", fp.residual_norm}});
  }
  json doc;
  doc["fixed_points"] = arr;
  doc["anchor"] =
      std::vector<double>(model.anchor_x1.data(), model.anchor_x1.data() + model.dim);
  write_text(out_dir / "fixed_points.json", doc.dump(2) + "\n");
  report["n_fixed_points"] = roots.size();
  report["fixed_points"] = arr;
  return 0;
}

int run_simulate(const RunFile& run, const ModelSpec& model, const fs::path& out_dir,
                 json& report) {
  const auto snapshots = simulate_particles(model, run.sim, run.record_stride);
  std::ostringstream os;
  os << "time,particle";
  for (int c = 0; c < model.dim; ++c) os << ",x_" << (c + 1);
  os << "\n";
  for (const auto& snap : snapshots) {
    for (std::size_t p = 0; p < snap.positions.size(); ++p) {
      os << format_g17(snap.time) << ',' << p;
      for (int c = 0; c < model.dim; ++c) os << ',' << format_g17(snap.positions[p](c));
      os << "\n";
    }
  }
  write_text(out_dir / "snapshots.csv", os.str());

  const TimeGrid grid = make_uniform_grid(run.sim.t_end, run.sim.dt);
  const Trajectory skeleton = integrate_skeleton(model, model.anchor_x1, grid);
  const auto paths = simulate_corresponding_sde(model, skeleton, run.sim);
  const TransitionStats stats =
      empirical_transition_stats(paths, model.target_x2, run.hit_radius);

  json sj;
  sj["hit_fraction"] = stats.hit_fraction;
  if (stats.mean_hit_time) {
    sj["mean_hit_time"] = *stats.mean_hit_time;
  } else {
    sj["mean_hit_time"] = nullptr;
  }
  sj["n_paths"] = run.sim.n_paths;
  sj["radius"] = run.hit_radius;
  sj["target"] =
      std::vector<double>(model.target_x2.data(), model.target_x2.data() + model.dim);
  write_text(out_dir / "stats.json", sj.dump(2) + "\n");
  report["hit_fraction"] = stats.hit_fraction;
  report["n_snapshots"] = snapshots.size();
  return 0;
}

}  // namespace

int run(const RunFile& run_file) {
  const auto t_start = std::chrono::steady_clock::now();
  const fs::path out_dir(run_file.output_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  // probe writability before any computation starts
  {
    std::ofstream probe(out_dir / ".write_probe", std::ios::binary);
    if (!probe) {
      log::error("output directory \"" + out_dir.string() + "\" is not writable");
      return 1;
    }
    probe.close();
    fs::remove(out_dir / ".write_probe", ec);
  }

  const ModelSpec model = model_from(run_file);
  json report;
  report["tool_version"] = kVersion;
  report["config"] = config_echo(run_file);

  int code = 0;
  try {
    if (run_file.command == "solve") {
      code = run_solve(run_file, model, out_dir, report);
    } else if (run_file.command == "qp-scan") {
      code = run_qp_scan(run_file, model, out_dir, report);
    } else if (run_file.command == "equipotentials") {
      code = run_equipotentials(run_file, model, out_dir, report);
    } else if (run_file.command == "fixed-points") {
      code = run_fixed_points(run_file, model, out_dir, report);
    } else if (run_file.command == "simulate") {
      code = run_simulate(run_file, model, out_dir, report);
    } else {
      throw config_error("unknown command \"" + run_file.command + "\"");
    }
  } catch (const config_error& e) {
    log::error(e.what());
    return 2;
  } catch (const invalid_argument& e) {
    log::error(e.what());
    return 2;
  } catch (const std::exception& e) {
    log::error(e.what());
    code = 1;
  }

  const auto t_end = std::chrono::steady_clock::now();
  report["wall_time_seconds"] =
      std::chrono::duration_cast<std::chrono::duration<double>>(t_end - t_start).count();
  report["exit_code"] = code;
  write_text(out_dir / "report.json", report.dump(2) + "\n");
  return code;
}

}  // namespace mvmam::cli
