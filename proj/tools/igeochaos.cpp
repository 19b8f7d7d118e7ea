// Command-line front end: one subcommand per experiment, a JSON scenario
// loader, and a reproduce-all mode that runs every default scenario in
// parallel followed by the acceptance gate.

#include "igc/acceptance.hpp"
#include "igc/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <thread>

namespace {

const std::vector<std::string> kExperiments = {"curvature", "geodesic", "jacobi", "ige",
                                               "ratios",    "newtonian", "iho",   "ohmic"};

struct CliState {
  std::string scenario_file;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool quick = false;
  bool json = false;
  int workers = 0;
};

void print_report(const igc::Report& rep, std::ostream& os) {
  os << rep.name << " (" << rep.experiment << ")  seed=" << rep.seed << "\n";
  for (const auto& row : rep.checks) {
    char line[512];
    std::snprintf(line, sizeof(line), "  [%s] %-38s actual=%-14.6g expected=%-14.6g tol=%g",
                  row.pass ? "ok" : "FAIL", row.name.c_str(), row.actual, row.expected,
                  row.tol);
    os << line << "  (" << row.source << ")\n";
    if (!row.note.empty()) os << "         note: " << row.note << "\n";
  }
  if (!rep.metrics.empty()) os << "  metrics: " << rep.metrics.dump() << "\n";
  for (const auto& cv : rep.caveats) os << "  caveat: " << cv << "\n";
  char tail[128];
  std::snprintf(tail, sizeof(tail), "  result: %s  (%.2fs)", rep.pass() ? "PASS" : "FAIL",
                rep.runtime_seconds);
  os << tail << "\n";
}

int run_single(const std::string& experiment, const CliState& cli, bool seed_given) {
  igc::Scenario sc = cli.scenario_file.empty() ? igc::default_scenario(experiment)
                                               : igc::load_scenario(cli.scenario_file);
  if (sc.experiment != experiment) {
    std::cerr << "scenario file declares experiment '" << sc.experiment
              << "' but the subcommand is '" << experiment << "'\n";
    return 2;
  }
  igc::RunOptions opts;
  opts.out_dir = cli.out_dir;
  if (seed_given) opts.seed = cli.seed;
  opts.quick = cli.quick;
  const igc::Report rep = igc::run_scenario(sc, opts);
  if (cli.json)
    std::cout << rep.to_json().dump(2) << "\n";
  else
    print_report(rep, std::cout);
  if (!cli.out_dir.empty())
    std::cerr << "report written under " << cli.out_dir << "\n";
  return rep.pass() ? 0 : 1;
}

int run_all(const CliState& cli, bool seed_given) {
  std::vector<igc::Scenario> scenarios;
  for (const auto& e : kExperiments) scenarios.push_back(igc::default_scenario(e));
  igc::RunOptions opts;
  opts.out_dir = cli.out_dir;
  if (seed_given) opts.seed = cli.seed;
  opts.quick = cli.quick;
  const int workers = cli.workers > 0
                          ? cli.workers
                          : std::max(1u, std::thread::hardware_concurrency());
  const std::vector<igc::Report> reports = igc::run_suite(scenarios, opts, workers);
  const std::vector<igc::CriterionResult> gate = igc::run_acceptance(cli.quick);

  bool all_pass = igc::acceptance_pass(gate);
  for (const auto& rep : reports) all_pass = all_pass && rep.pass();

  if (cli.json) {
    igc::Json j;
    j["reports"] = igc::Json::array();
    for (const auto& rep : reports) j["reports"].push_back(rep.to_json());
    j["acceptance"] = igc::Json::array();
    for (const auto& r : gate) {
      igc::Json g;
      g["id"] = r.id;
      g["title"] = r.title;
      g["pass"] = r.pass;
      g["seconds"] = r.seconds;
      g["details"] = r.details;
      j["acceptance"].push_back(g);
    }
    j["pass"] = all_pass;
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& rep : reports) {
      print_report(rep, std::cout);
      std::cout << "\n";
    }
    igc::print_acceptance(gate, std::cout, /*verbose=*/false);
    std::cout << "overall: " << (all_pass ? "PASS" : "FAIL") << "\n";
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"igeochaos: information-geometric chaoticity indicators"};
  app.require_subcommand(1);
  CliState cli;

  auto add_common = [&](CLI::App* sub, bool with_scenario) {
    sub->add_option("--out", cli.out_dir, "directory for report.json and CSV traces");
    sub->add_option("--seed", cli.seed, "override the scenario RNG seed");
    sub->add_flag("--quick", cli.quick, "shrink horizons and sweeps (smoke mode)");
    sub->add_flag("--json", cli.json, "print the full report as JSON");
    if (with_scenario)
      sub->add_option("--scenario", cli.scenario_file, "JSON scenario file")
          ->check(CLI::ExistingFile);
  };

  std::vector<std::pair<std::string, CLI::App*>> subs;
  for (const auto& e : kExperiments) {
    CLI::App* sub = app.add_subcommand(e, "run the " + e + " experiment");
    add_common(sub, true);
    subs.emplace_back(e, sub);
  }
  CLI::App* all = app.add_subcommand(
      "reproduce-all", "run every default scenario, then the acceptance gate");
  add_common(all, false);
  all->add_option("--workers", cli.workers, "parallel scenario workers (0 = all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (all->parsed()) return run_all(cli, all->count("--seed") > 0);
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) return run_single(name, cli, sub->count("--seed") > 0);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 2;
}
