// mpnet: command-line front end.
//
//   mpnet check <spec>
//   mpnet run <spec> --method <implicit|explicit|extended|oracle|all>
//             [--steps K] [--format csv|json] [--dump-matrices] [--trace]
//             [--seed N] [--out DIR]
//
// Exit codes: 0 ok / match, 1 input error, 2 unsolvable or deadlock,
// 3 engine-oracle mismatch.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mpnet/mpnet.hpp"

namespace {

enum ExitCode : int { kOk = 0, kInputError = 1, kUnsolvable = 2, kMismatch = 3 };

struct RunConfig {
  std::string spec_path;
  std::string method = "all";
  std::optional<std::size_t> steps;
  std::string format = "csv";
  bool dump_matrices = false;
  bool trace = false;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
};

std::string node_list(const std::vector<std::size_t>& nodes, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) out += (i ? sep : "") + std::to_string(nodes[i] + 1);
  return out;
}

void print_unsolvable(std::ostream& os, const mpnet::SolvabilityReport& report) {
  os << "solvable: no\n";
  os << "circuit: " << node_list(report.circuit, " → ") << '\n';
  for (const auto& fix : report.remediation)
    os << "remediation: set r_" << fix.node + 1 << " >= " << fix.min_initial << " to remove the arcs into node "
       << fix.node + 1 << " from G_0\n";
}

int cmd_check(const std::string& path) {
  mpnet::NetworkFile file;
  try {
    file = mpnet::load_network(path);
    mpnet::validate(file.spec);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  const auto da = mpnet::build_delayed_adjacency(file.spec);
  const auto report = mpnet::check_solvability(da);
  if (!report.solvable) {
    print_unsolvable(std::cout, report);
    return kUnsolvable;
  }
  std::cout << "solvable: yes\n";
  std::cout << "p: " << report.longest_path << '\n';
  std::cout << "M: " << da.horizon << '\n';
  return kOk;
}

void emit(const RunConfig& cfg, const std::string& name, const mpnet::Trajectory& traj) {
  auto write = [&](std::ostream& os) {
    if (cfg.format == "json")
      mpnet::write_json(os, traj);
    else
      mpnet::write_csv(os, traj);
  };
  if (cfg.out_dir.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(std::filesystem::path(cfg.out_dir) / ("trajectory_" + name + "." + cfg.format));
  write(out);
}

int cmd_run(const RunConfig& cfg) {
  mpnet::NetworkFile file;
  std::size_t steps = 0;
  try {
    file = mpnet::load_network(cfg.spec_path);
    mpnet::validate(file.spec);
    if (cfg.seed) {
      if (file.service.is_table()) throw mpnet::InputError("--seed given but the network file uses an explicit service table");
      file.service = file.service.with_seed(*cfg.seed);
    }
    if (!cfg.steps && !file.steps) throw mpnet::InputError("no step count: pass --steps or set 'steps' in the network file");
    steps = cfg.steps ? *cfg.steps : *file.steps;
    if (file.service.is_table() && steps > 0)
      for (std::size_t i = 0; i < file.spec.node_count; ++i) file.service.raw(i, steps);
    if (!cfg.out_dir.empty()) std::filesystem::create_directories(cfg.out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  const auto& spec = file.spec;
  const auto& src = file.service;

  std::vector<mpnet::Method> engines;
  bool with_oracle = false;
  if (cfg.method == "implicit") engines = {mpnet::Method::Implicit};
  if (cfg.method == "explicit") engines = {mpnet::Method::Explicit};
  if (cfg.method == "extended") engines = {mpnet::Method::Extended};
  if (cfg.method == "oracle") with_oracle = true;
  if (cfg.method == "all") {
    engines = {mpnet::Method::Implicit, mpnet::Method::Explicit, mpnet::Method::Extended};
    with_oracle = true;
  }

  int code = kOk;
  std::vector<std::future<mpnet::Trajectory>> pending;
  for (auto m : engines)
    pending.push_back(std::async(std::launch::async, [&, m] { return mpnet::run(spec, src, steps, m, cfg.trace); }));
  auto oracle = std::async(std::launch::async, [&]() -> std::optional<mpnet::EventLog> {
    if (!with_oracle) return std::nullopt;
    return mpnet::simulate(spec, src, steps);
  });

  std::vector<mpnet::Trajectory> trajectories;
  for (auto& f : pending) {
    try {
      trajectories.push_back(f.get());
    } catch (const mpnet::UnsolvableNetwork& e) {
      if (code == kOk) print_unsolvable(std::cerr, e.report());
      code = kUnsolvable;
    }
  }
  std::optional<mpnet::EventLog> log;
  try {
    log = oracle.get();
  } catch (const mpnet::Deadlock& e) {
    std::cerr << "deadlock: nodes " << node_list(e.blocked(), ", ") << " cannot complete " << steps
              << " departures\n";
    code = kUnsolvable;
  }
  if (code != kOk) return code;

  for (const auto& traj : trajectories) emit(cfg, std::string(mpnet::to_string(*traj.method)), traj);
  if (log) emit(cfg, "oracle", mpnet::to_trajectory(*log, cfg.trace));

  if (cfg.dump_matrices) {
    const auto dump = mpnet::matrices_json(spec, src, steps).dump(2);
    if (cfg.out_dir.empty())
      std::cout << dump << '\n';
    else
      std::ofstream(std::filesystem::path(cfg.out_dir) / "matrices.json") << dump << '\n';
  }

  if (log && !trajectories.empty()) {
    for (const auto& traj : trajectories) {
      const auto report = mpnet::compare(traj, *log);
      if (report.ok()) continue;
      std::cout << "MISMATCH " << mpnet::to_string(*traj.method) << " vs oracle";
      if (auto first = report.first())
        std::cout << " at node " << first->node + 1 << ", k = " << first->k << ": engine " << first->engine
                  << ", oracle " << first->oracle;
      std::cout << '\n';
      return kMismatch;
    }
    std::cout << "MATCH\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Max-plus state equations for fork-join queueing networks"};
  app.require_subcommand(1);

  std::string check_path;
  auto* check = app.add_subcommand("check", "Test whether an explicit state equation exists");
  check->add_option("spec", check_path, "Network spec (JSON)")->required();

  RunConfig cfg;
  auto* run = app.add_subcommand("run", "Evolve departure epochs");
  run->add_option("spec", cfg.spec_path, "Network spec (JSON)")->required();
  run->add_option("--method", cfg.method, "Evolution method")
      ->check(CLI::IsMember({"implicit", "explicit", "extended", "oracle", "all"}));
  run->add_option("--steps", cfg.steps, "Number of departures per node (K)");
  run->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  run->add_flag("--dump-matrices", cfg.dump_matrices, "Also write G, H, T and extended T matrices");
  run->add_flag("--trace", cfg.trace, "Add a, b, c columns");
  run->add_option("--seed", cfg.seed, "Override the seed of a seeded service source");
  run->add_option("--out", cfg.out_dir, "Directory for output files (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }

  if (*check) return cmd_check(check_path);
  return cmd_run(cfg);
}
