#pragma once

#include "plp/io.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace plp {

enum class Command { Project, Solve, Bench, Generate };

struct RunConfig {
  Command command = Command::Project;
  std::string input;
  std::vector<int> eliminated;  // 1-based
  Scheduler scheduler = Scheduler::Sequential;
  int threads = 1;

  std::string out;      // result polyhedron; stdout when empty
  std::string regions;  // regions JSON
  std::string dot;
  std::string stats;    // stats JSON
  bool sort_output = false;
  std::optional<std::string> seed_point;

  std::optional<int> repair_depth;
  std::optional<Rat> epsilon;
  std::optional<Rat> box_bound;

  // bench
  std::vector<int> sweep{1, 2, 4};
  int repeats = 10;
  std::string csv;  // stdout when empty

  // generate
  GeneratorParams generator;

  [[nodiscard]] SolveOptions solve_options() const;
  /// Throws InvalidProblem when an invariant is violated.
  void validate() const;
};

struct RunStats {
  std::size_t regions = 0;
  std::size_t tasks_spawned = 0;
  std::size_t tasks_completed = 0;
  std::size_t tasks_aborted_covered = 0;
  std::size_t tasks_aborted_basis = 0;
  std::size_t retries = 0;
  std::size_t repairs = 0;
  std::size_t exact_fallbacks = 0;
  std::size_t facet_splits = 0;
  double wall_ms = 0;
  int threads = 1;
  Scheduler scheduler = Scheduler::Sequential;

  static RunStats from(const Solution& s, Scheduler scheduler, int threads);
  [[nodiscard]] bool identities_hold() const;
  [[nodiscard]] std::string json() const;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int parse = 1;
inline constexpr int geometry = 2;
inline constexpr int unbounded = 3;
}  // namespace exit_code

int run_project(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err);
/// Writes a random .poly instance (deterministic in the seed).
int run_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace plp
