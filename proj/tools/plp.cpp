#include "plp/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

std::vector<int> split_ints(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string field = text.substr(pos, comma - pos);
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(field, &used);
    } catch (const std::exception&) {
      throw CLI::ValidationError("expected a comma-separated list of integers, got '" + text + "'");
    }
    if (used != field.size()) throw CLI::ValidationError("expected a comma-separated list of integers, got '" + text + "'");
    out.push_back(value);
    pos = comma + 1;
  }
  return out;
}

plp::Rat rational_option(const std::string& text) {
  try {
    return plp::Rat::parse(text);
  } catch (const std::exception&) {
    throw CLI::ValidationError("expected a rational p or p/q, got '" + text + "'");
  }
}

struct Overrides {
  std::string scheduler;  // default depends on the subcommand
  std::optional<std::string> epsilon;
  std::optional<std::string> box_bound;
};

void add_solver_options(CLI::App* cmd, plp::RunConfig& cfg, Overrides& o) {
  cmd->add_option("--scheduler", o.scheduler, "seq, static or dynamic")->check(CLI::IsMember({"seq", "static", "dynamic"}));
  cmd->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--repair-depth", cfg.repair_depth, "cap on nested midpoint repairs");
  cmd->add_option("--epsilon", o.epsilon, "step past a facet, relative to the crossing's size (rational)");
  cmd->add_option("--box-bound", o.box_bound, "bound on |mu| used when probing facets (rational)");
}

void add_output_options(CLI::App* cmd, plp::RunConfig& cfg) {
  cmd->add_option("--regions", cfg.regions, "regions JSON path");
  cmd->add_option("--dot", cfg.dot, "spanning tree DOT path");
  cmd->add_option("--stats", cfg.stats, "run statistics JSON path");
  cmd->add_flag("--sort-output", cfg.sort_output, "order regions by basis");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parametric linear programming and polyhedral projection"};
  app.require_subcommand(1);
  plp::RunConfig cfg;
  Overrides o;
  std::string eliminate;
  std::string sweep;
  std::string seed_point;

  auto* project = app.add_subcommand("project", "project a .poly polyhedron");
  project->add_option("--in", cfg.input, ".poly input")->required();
  project->add_option("--eliminate", eliminate, "1-based variables to eliminate, e.g. 3 or 1,2")->required();
  project->add_option("--out", cfg.out, "result .poly (stdout if omitted)");
  add_solver_options(project, cfg, o);
  add_output_options(project, cfg);

  auto* solve = app.add_subcommand("solve", "solve a .plp parametric LP");
  solve->add_option("--in", cfg.input, ".plp input")->required();
  solve->add_option("--seed-point", seed_point, "starting parameter point \"r,...\" (default all ones)");
  solve->add_option("--out", cfg.out, "regions JSON (stdout if neither --out nor --regions)");
  add_solver_options(solve, cfg, o);
  add_output_options(solve, cfg);

  auto* bench = app.add_subcommand("bench", "time repeated runs over a thread-count sweep");
  bench->add_option("--in", cfg.input, ".poly or .plp input")->required();
  bench->add_option("--eliminate", eliminate, "variables to eliminate for .poly input (default: last)");
  bench->add_option("--seed-point", seed_point, "starting parameter point for .plp input");
  bench->add_option("--sweep", sweep, "thread counts, e.g. 1,2,4");
  bench->add_option("--repeats", cfg.repeats, "runs per cell")->check(CLI::PositiveNumber);
  bench->add_option("--csv", cfg.csv, "CSV output (stdout if omitted)");
  add_solver_options(bench, cfg, o);

  auto* generate = app.add_subcommand("generate", "write a random bounded polyhedron in .poly format");
  generate->add_option("--nvars", cfg.generator.nvars)->check(CLI::PositiveNumber);
  generate->add_option("--nrows", cfg.generator.nrows)->check(CLI::PositiveNumber);
  generate->add_option("--density", cfg.generator.density)->check(CLI::Range(0.0, 1.0));
  generate->add_option("--seed", cfg.generator.seed);
  generate->add_option("--range", cfg.generator.coefficient_range, "coefficients drawn from [-range, range]");
  generate->add_option("--out", cfg.out, ".poly output (stdout if omitted)");

  try {
    app.parse(argc, argv);
    if (project->parsed()) {
      cfg.command = plp::Command::Project;
    } else if (solve->parsed()) {
      cfg.command = plp::Command::Solve;
    } else if (bench->parsed()) {
      cfg.command = plp::Command::Bench;
    } else {
      cfg.command = plp::Command::Generate;
    }
    if (!eliminate.empty()) cfg.eliminated = split_ints(eliminate);
    if (!sweep.empty()) cfg.sweep = split_ints(sweep);
    if (!seed_point.empty()) cfg.seed_point = seed_point;
    if (o.epsilon) cfg.epsilon = rational_option(*o.epsilon);
    if (o.box_bound) cfg.box_bound = rational_option(*o.box_bound);
    if (o.scheduler.empty()) o.scheduler = cfg.command == plp::Command::Bench ? "dynamic" : "seq";
    cfg.scheduler = plp::parse_scheduler(o.scheduler);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : plp::exit_code::parse;
  }
  return plp::run(cfg, std::cout, std::cerr);
}
