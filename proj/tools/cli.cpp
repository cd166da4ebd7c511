#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "wholm/adjust.hpp"
#include "wholm/check.hpp"
#include "wholm/closure.hpp"
#include "wholm/error.hpp"
#include "wholm/graphical.hpp"
#include "wholm/procedures.hpp"

namespace wholm::cli {
namespace {

const CLI::Validator kOpenUnit(
    [](const std::string& text) -> std::string {
      double v = 0.0;
      std::istringstream in(text);
      if (!(in >> v) || !(v > 0.0 && v < 1.0)) return "must lie strictly between 0 and 1";
      return {};
    },
    "(0,1)", "OpenUnit");

// Sink that is stdout unless --output names a file.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ValidationError("cannot open output file: " + path);
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::string significant(double v) {
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

std::string full(double v) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return out.str();
}

std::string fixed4(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << v;
  return out.str();
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) items.push_back(trim(item));
  return items;
}

double parse_double(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw ValidationError(where + ": not a number: '" + text + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!text.empty() && text[0] != '-') v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw ValidationError(where + ": not a non-negative integer: '" + text + "'");
  }
  return v;
}

int cmd_adjust(const std::string& input, double alpha, const std::string& precision,
               const std::string& output, std::ostream& out) {
  const auto problem = load_problem_csv(input, alpha);
  const auto whp = adjusted_whp(problem);
  const auto wap = adjusted_wap(problem);
  const auto rej_whp = whp_stepdown(problem);
  const auto rej_wap = wap_stepdown(problem);
  const bool exact = precision == "full";
  const auto num = exact ? full : significant;
  const auto adj = exact ? full : fixed4;

  Sink sink(output, out);
  *sink << "hypothesis,p_value,weight,adj_whp,adj_wap,reject_whp,reject_wap\n";
  for (std::size_t i = 0; i < problem.size(); ++i) {
    *sink << problem.labels()[i] << ',' << num(problem.p()[i]) << ',' << num(problem.w()[i])
          << ',' << adj(whp.values[i]) << ',' << adj(wap.values[i]) << ','
          << (rej_whp.contains(i) ? 1 : 0) << ',' << (rej_wap.contains(i) ? 1 : 0) << '\n';
  }
  return kOk;
}

int cmd_ctp(const std::string& input, double alpha, const std::string& test,
            const std::string& output, std::ostream& out) {
  const auto problem = load_problem_csv(input, alpha);
  const auto report = ctp(problem, test == "whp" ? &whp_local_test : &wap_local_test);
  Sink sink(output, out);
  *sink << "subset_bitmask,rejected\n";
  for (std::size_t bits = 1; bits < report.local_decisions.size(); ++bits) {
    *sink << bits << ',' << static_cast<int>(report.local_decisions[bits]) << '\n';
  }
  return kOk;
}

int cmd_graph(const std::string& input, double alpha, const std::string& ordering,
              const std::string& dir, std::ostream& out) {
  const auto problem = load_problem_csv(input, alpha);
  const auto run = run_graphical(problem, ordering == "raw" ? OrderKey::Raw : OrderKey::Weighted);
  const auto initial = initial_graph(problem.w(), problem.alpha());
  const auto stages = export_dot(run.trace, initial, problem.labels());

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory: " + dir);
  for (std::size_t k = 0; k < stages.size(); ++k) {
    const auto path = std::filesystem::path(dir) / ("stage_" + std::to_string(k) + ".dot");
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ValidationError("cannot write " + path.string());
    file << stages[k];
  }

  std::vector<std::size_t> step(problem.size(), 0);
  for (const auto& s : run.rejections.trace()) step[s.index] = s.step;
  const auto summary = std::filesystem::path(dir) / "summary.csv";
  std::ofstream file(summary, std::ios::binary);
  if (!file) throw ValidationError("cannot write " + summary.string());
  file << "hypothesis,p_value,weight,rejected,step\n";
  for (std::size_t i = 0; i < problem.size(); ++i) {
    file << problem.labels()[i] << ',' << significant(problem.p()[i]) << ','
         << significant(problem.w()[i]) << ',' << (step[i] ? 1 : 0) << ',';
    if (step[i]) file << step[i];
    file << '\n';
  }
  out << "wrote " << stages.size() << " stage(s) and summary.csv to " << dir << '\n';
  return kOk;
}

int cmd_simulate(const std::string& config_path, std::uint64_t seed, std::size_t threads,
                 const std::string& output, std::ostream& out, std::ostream& err) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config: " + config_path);
  auto grid = parse_simulation_config(in);
  grid.base.seed = seed;
  grid.base.threads = threads;

  Sink sink(output, out);
  *sink << "procedure,m,pi0,rho,scenario,fwer,fwer_se,power,power_se,reps,seed\n";
  for (const auto& cell : grid.cells()) {
    const auto result = run_simulation(cell);
    for (const auto& s : result.summaries) {
      *sink << procedure_name(s.procedure) << ',' << cell.m << ',' << significant(cell.pi0)
            << ',' << significant(cell.rho) << ',' << scenario_name(cell.scenario) << ','
            << significant(s.fwer) << ',' << significant(s.fwer_se) << ','
            << significant(s.power) << ',' << significant(s.power_se) << ',' << cell.reps
            << ',' << cell.seed << '\n';
    }
    if (result.resamples > 0) {
      err << "note: m=" << cell.m << " pi0=" << cell.pi0 << " rho=" << cell.rho << ' '
          << scenario_name(cell.scenario) << ": " << result.resamples
          << " replicate(s) resampled after a zero-variance column\n";
    }
  }
  return kOk;
}

int cmd_sharpness(const std::string& procedure, const std::string& weights_text,
                  std::size_t m0, double alpha, std::size_t reps, std::uint64_t seed,
                  std::size_t threads, std::ostream& out) {
  std::vector<double> weights;
  for (const auto& item : split_list(weights_text)) {
    weights.push_back(parse_double(item, "--weights"));
  }
  if (m0 == 0) m0 = weights.size();
  const Procedure proc = procedure == "whp" ? Procedure::Whp : Procedure::Wap;
  const auto est = estimate_sharpness(proc, weights, m0, alpha, reps, seed, threads);
  out << "procedure,m,m0,alpha,reps,seed,fwer,se,errors\n";
  out << procedure_name(proc) << ',' << weights.size() << ',' << m0 << ','
      << significant(alpha) << ',' << est.reps << ',' << seed << ',' << significant(est.fwer)
      << ',' << significant(est.se) << ',' << est.errors << '\n';
  return kOk;
}

int cmd_check(std::size_t trials, std::uint64_t seed, std::ostream& out) {
  BatteryConfig config;
  config.trials = trials;
  config.seed = seed;
  const auto outcomes = run_property_battery(config);
  std::size_t failed = 0;
  for (const auto& o : outcomes) {
    out << (o.passed ? "PASS " : "FAIL ") << o.name << " (" << o.cases << " cases)";
    if (!o.detail.empty()) out << ": " << o.detail;
    out << '\n';
    if (!o.passed) ++failed;
  }
  out << (outcomes.size() - failed) << '/' << outcomes.size() << " properties passed\n";
  return failed == 0 ? kOk : kPropertyFailure;
}

}  // namespace

TestingProblem load_problem_csv(const std::string& path, double alpha) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file: " + path);
  try {
    return read_problem_csv(in, alpha);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what(), e.index());
  }
}

std::vector<SimulationConfig> SimulationGrid::cells() const {
  std::vector<SimulationConfig> out;
  for (auto mm : m) {
    for (auto p : pi0) {
      for (auto r : rho) {
        for (auto s : scenario) {
          SimulationConfig c = base;
          c.m = mm;
          c.pi0 = p;
          c.rho = r;
          c.scenario = s;
          c.validate();
          out.push_back(c);
        }
      }
    }
  }
  return out;
}

SimulationGrid parse_simulation_config(std::istream& in) {
  SimulationGrid grid;
  grid.m = {grid.base.m};
  grid.pi0 = {grid.base.pi0};
  grid.rho = {grid.base.rho};
  grid.scenario = {grid.base.scenario};

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    const std::string where = "config line " + std::to_string(line_no);
    if (eq == std::string::npos) throw ValidationError(where + ": expected key=value");
    const auto key = trim(std::string_view(text).substr(0, eq));
    const auto value = trim(std::string_view(text).substr(eq + 1));
    const std::string at = where + ", key '" + key + "'";
    const auto items = split_list(value);
    if (value.empty()) throw ValidationError(at + ": empty value");

    if (key == "m") {
      grid.m.clear();
      for (const auto& s : items) grid.m.push_back(parse_u64(s, at));
    } else if (key == "pi0") {
      grid.pi0.clear();
      for (const auto& s : items) grid.pi0.push_back(parse_double(s, at));
    } else if (key == "rho_list" || key == "rho") {
      grid.rho.clear();
      for (const auto& s : items) grid.rho.push_back(parse_double(s, at));
    } else if (key == "scenario") {
      grid.scenario.clear();
      for (const auto& s : items) {
        const auto kind = parse_scenario(s);
        if (!kind) throw ValidationError(at + ": unknown scenario '" + s + "'");
        grid.scenario.push_back(*kind);
      }
    } else if (items.size() != 1) {
      throw ValidationError(at + ": expects a single value");
    } else if (key == "n") {
      grid.base.n = parse_u64(value, at);
    } else if (key == "mu_alt") {
      grid.base.mu_alt = parse_double(value, at);
    } else if (key == "alpha") {
      grid.base.alpha = parse_double(value, at);
    } else if (key == "reps") {
      grid.base.reps = parse_u64(value, at);
    } else if (key == "seed") {
      grid.base.seed = parse_u64(value, at);
    } else {
      throw ValidationError(at + ": unknown key");
    }
  }
  return grid;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted Holm procedures: adjusted p-values, closed testing, graphs, "
               "simulation"};
  app.name("wholm");
  app.require_subcommand(1);

  std::string input;
  std::string output;
  std::string precision = "default";
  std::string test;
  std::string ordering = "weighted";
  std::string output_dir;
  std::string config_path;
  std::string procedure;
  std::string weights;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::size_t trials = 10000;
  std::size_t reps = 0;
  std::size_t m0 = 0;

  auto* adjust = app.add_subcommand("adjust", "Adjusted p-values and decisions for WHP and WAP");
  adjust->add_option("--input", input, "Problem CSV")->required()->check(CLI::ExistingFile);
  adjust->add_option("--alpha", alpha, "Level")->required()->check(kOpenUnit);
  adjust->add_option("--precision", precision, "default (4 decimals) or full")
      ->check(CLI::IsMember({"default", "full"}));
  adjust->add_option("--output", output, "Output CSV (default stdout)");

  auto* ctp_cmd = app.add_subcommand("ctp", "Local decision for every intersection");
  ctp_cmd->add_option("--input", input, "Problem CSV")->required()->check(CLI::ExistingFile);
  ctp_cmd->add_option("--alpha", alpha, "Level")->required()->check(kOpenUnit);
  ctp_cmd->add_option("--test", test, "Local test")->required()->check(CLI::IsMember({"whp", "wap"}));
  ctp_cmd->add_option("--output", output, "Output CSV (default stdout)");

  auto* graph = app.add_subcommand("graph", "Graphical procedure with DOT output per stage");
  graph->add_option("--input", input, "Problem CSV")->required()->check(CLI::ExistingFile);
  graph->add_option("--alpha", alpha, "Level")->required()->check(kOpenUnit);
  graph->add_option("--ordering", ordering, "weighted (WHP) or raw (WAP)")
      ->check(CLI::IsMember({"weighted", "raw"}));
  graph->add_option("--output-dir", output_dir, "Directory for stage_<k>.dot")->required();

  auto* simulate = app.add_subcommand("simulate", "FWER and power simulation");
  simulate->add_option("--config", config_path, "key=value config")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--seed", seed, "Seed (overrides the config)")->required();
  simulate->add_option("--threads", threads, "Worker threads (0 = all cores)");
  simulate->add_option("--output", output, "Output CSV (default stdout)");

  auto* sharp = app.add_subcommand("sharpness", "Empirical FWER under the least favorable configuration");
  sharp->add_option("--procedure", procedure, "whp or wap")
      ->required()
      ->check(CLI::IsMember({"whp", "wap"}));
  sharp->add_option("--weights", weights, "Comma-separated weights")->required();
  sharp->add_option("--m0", m0, "True nulls (default: all)");
  sharp->add_option("--alpha", alpha, "Level")->check(kOpenUnit);
  sharp->add_option("--reps", reps, "Replicates")->required();
  sharp->add_option("--seed", seed, "Seed")->required();
  sharp->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* check = app.add_subcommand("check", "Seeded property battery");
  check->add_option("--trials", trials, "Random problems");
  check->add_option("--seed", seed, "Seed")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (adjust->parsed()) return cmd_adjust(input, alpha, precision, output, out);
    if (ctp_cmd->parsed()) return cmd_ctp(input, alpha, test, output, out);
    if (graph->parsed()) return cmd_graph(input, alpha, ordering, output_dir, out);
    if (simulate->parsed()) return cmd_simulate(config_path, seed, threads, output, out, err);
    if (sharp->parsed()) return cmd_sharpness(procedure, weights, m0, alpha, reps, seed, threads, out);
    if (check->parsed()) return cmd_check(trials, seed, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
  err << "error: no subcommand\n";
  return kUsage;
}

}  // namespace wholm::cli
