#include "plp/cli.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace plp {

namespace {

class IoFailure : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoFailure("write to '" + path + "' failed");
}

// Maps the library's failure modes onto exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const UnboundedDirection& e) {
    err << "plp: " << e.what() << "\n";
    return exit_code::unbounded;
  } catch (const EmptyOrFlat& e) {
    err << "plp: " << e.what() << "\n";
    return exit_code::geometry;
  } catch (const InfeasibleParametricLP& e) {
    err << "plp: " << e.what() << "\n";
    return exit_code::geometry;
  } catch (const EmptyInterior& e) {
    err << "plp: " << e.what() << "\n";
    return exit_code::geometry;
  } catch (const ParseError& e) {
    err << "plp: parse error at " << e.what() << "\n";
    return exit_code::parse;
  } catch (const std::exception& e) {
    err << "plp: " << e.what() << "\n";
    return exit_code::parse;
  }
}

std::vector<int> zero_based(const std::vector<int>& one_based) {
  std::vector<int> out;
  for (int i : one_based) out.push_back(i - 1);
  return out;
}

void emit_solution(const RunConfig& cfg, const Solution& raw, std::ostream& err) {
  const Solution s = cfg.sort_output ? sorted_by_basis(raw) : raw;
  if (!cfg.regions.empty()) write_file(cfg.regions, regions_json(s));
  if (!cfg.dot.empty()) write_file(cfg.dot, spanning_tree_dot(s));
  const RunStats stats = RunStats::from(s, cfg.scheduler, cfg.threads);
  if (!cfg.stats.empty()) write_file(cfg.stats, stats.json());
  if (!stats.identities_hold()) err << "plp: warning: task accounting identities do not hold\n";
  for (const std::string& w : s.warnings) err << "plp: warning: " << w << "\n";
}

bool is_plp_text(std::string_view text) {
  std::size_t i = 0;
  for (;;) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i < text.size() && text[i] == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    break;
  }
  return text.substr(i, 4) == "plp " || text.substr(i, 4) == "plp\t";
}

std::string csv_field(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n') c = ';';
  return s;
}

}  // namespace

SolveOptions RunConfig::solve_options() const {
  SolveOptions o;
  if (repair_depth) o.repair_depth_cap = *repair_depth;
  if (epsilon) o.epsilon_scale = *epsilon;
  if (box_bound) o.box_bound = *box_bound;
  return o;
}

void RunConfig::validate() const {
  if (threads < 1) throw InvalidProblem("--threads must be at least 1");
  if (command == Command::Project && eliminated.empty()) throw InvalidProblem("--eliminate is required");
  for (int i : eliminated)
    if (i < 1) throw InvalidProblem("--eliminate takes 1-based indices");
  if (repair_depth && *repair_depth < 0) throw InvalidProblem("--repair-depth must be nonnegative");
  if (epsilon && epsilon->sign() <= 0) throw InvalidProblem("--epsilon must be positive");
  if (box_bound && box_bound->sign() <= 0) throw InvalidProblem("--box-bound must be positive");
  if (command == Command::Bench) {
    if (repeats < 1) throw InvalidProblem("--repeats must be at least 1");
    if (sweep.empty()) throw InvalidProblem("--sweep needs at least one thread count");
    for (int t : sweep)
      if (t < 1) throw InvalidProblem("--sweep entries must be at least 1");
  }
}

RunStats RunStats::from(const Solution& s, Scheduler scheduler, int threads) {
  RunStats r;
  r.regions = s.regions.size();
  r.tasks_spawned = s.stats.tasks_spawned;
  r.tasks_completed = s.stats.tasks_completed;
  r.tasks_aborted_covered = s.stats.tasks_aborted_covered;
  r.tasks_aborted_basis = s.stats.tasks_aborted_basis;
  r.retries = s.stats.retries;
  r.repairs = s.stats.repairs;
  r.exact_fallbacks = s.stats.exact_fallbacks;
  r.facet_splits = s.stats.facet_splits;
  r.wall_ms = s.stats.wall_ms;
  r.scheduler = scheduler;
  r.threads = scheduler == Scheduler::Sequential ? 1 : threads;
  return r;
}

bool RunStats::identities_hold() const {
  return tasks_completed == regions &&
         tasks_spawned == tasks_completed + tasks_aborted_covered + tasks_aborted_basis + retries;
}

std::string RunStats::json() const {
  nlohmann::ordered_json j;
  j["scheduler"] = to_string(scheduler);
  j["threads"] = threads;
  j["regions"] = regions;
  j["tasks_spawned"] = tasks_spawned;
  j["tasks_completed"] = tasks_completed;
  j["tasks_aborted_covered"] = tasks_aborted_covered;
  j["tasks_aborted_basis"] = tasks_aborted_basis;
  j["retries"] = retries;
  j["repairs"] = repairs;
  j["exact_fallbacks"] = exact_fallbacks;
  j["facet_splits"] = facet_splits;
  j["wall_ms"] = wall_ms;
  return j.dump(2) + "\n";
}

int run_project(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const Polyhedron P = parse_polyhedron(read_file(cfg.input));
    Solution solution;
    const Polyhedron result =
        project(P, zero_based(cfg.eliminated), cfg.scheduler, cfg.threads, cfg.solve_options(), &solution);
    if (cfg.out.empty())
      out << format_polyhedron(result);
    else
      write_file(cfg.out, format_polyhedron(result));
    emit_solution(cfg, solution, err);
    return exit_code::ok;
  });
}

int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const ParametricLP plp = parse_plp(read_file(cfg.input));
    const RatVec seed = cfg.seed_point ? parse_point(*cfg.seed_point) : default_seed(plp);
    if (seed.size() != plp.params())
      throw DimensionMismatch("--seed-point has " + std::to_string(seed.size()) + " coordinates, expected " +
                              std::to_string(plp.params()));
    const Solution solution = solve(plp, seed, cfg.scheduler, cfg.threads, cfg.solve_options());
    RunConfig effective = cfg;
    if (effective.regions.empty() && cfg.out.empty()) {
      // nothing requested: regions JSON to stdout
      out << regions_json(cfg.sort_output ? sorted_by_basis(solution) : solution);
    } else if (effective.regions.empty()) {
      effective.regions = cfg.out;
    }
    emit_solution(effective, solution, err);
    return exit_code::ok;
  });
}

int run_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const std::string text = read_file(cfg.input);
    std::function<std::size_t(int)> once;
    std::optional<ParametricLP> plp;
    std::optional<Polyhedron> poly;
    std::vector<int> elim;
    if (is_plp_text(text)) {
      plp.emplace(parse_plp(text));
      const RatVec seed = cfg.seed_point ? parse_point(*cfg.seed_point) : default_seed(*plp);
      once = [&, seed](int threads) { return solve(*plp, seed, cfg.scheduler, threads, cfg.solve_options()).regions.size(); };
    } else {
      poly.emplace(parse_polyhedron(text));
      elim = cfg.eliminated.empty() ? std::vector<int>{poly->nvars() - 1} : zero_based(cfg.eliminated);
      once = [&](int threads) {
        Solution s;
        project(*poly, elim, cfg.scheduler, threads, cfg.solve_options(), &s);
        return s.regions.size();
      };
    }

    std::vector<int> sweep = cfg.sweep;
    if (cfg.scheduler == Scheduler::Sequential) sweep = {1};

    std::ostringstream csv;
    csv << "scheduler,threads,run,wall_ms,regions,mean_ms,stddev_ms,status\n";
    for (int threads : sweep) {
      std::vector<double> times;
      std::size_t regions = 0;
      int failures = 0;
      for (int run = 1; run <= cfg.repeats; ++run) {
        std::string status = "ok";
        double ms = 0;
        std::size_t n = 0;
        try {
          const auto start = std::chrono::steady_clock::now();
          n = once(threads);
          ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
          times.push_back(ms);
          regions = n;
        } catch (const std::exception& e) {
          status = "error: " + std::string(e.what());
          ++failures;
        }
        csv << to_string(cfg.scheduler) << "," << threads << "," << run << ",";
        if (status == "ok")
          csv << ms << "," << n;
        else
          csv << ",";
        csv << ",,," << csv_field(status) << "\n";
      }
      double mean = 0;
      double var = 0;
      for (double t : times) mean += t;
      if (!times.empty()) mean /= static_cast<double>(times.size());
      for (double t : times) var += (t - mean) * (t - mean);
      if (!times.empty()) var /= static_cast<double>(times.size());
      csv << to_string(cfg.scheduler) << "," << threads << ",summary,," << regions << ",";
      if (times.empty())
        csv << ",,";
      else
        csv << mean << "," << std::sqrt(var) << ",";
      csv << (failures == 0 ? std::string("ok") : std::to_string(failures) + " failed") << "\n";
    }
    if (cfg.csv.empty())
      out << csv.str();
    else
      write_file(cfg.csv, csv.str());
    return exit_code::ok;
  });
}

int run_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::string text = format_polyhedron(generate_polyhedron(cfg.generator));
    if (cfg.out.empty())
      out << text;
    else
      write_file(cfg.out, text);
    return exit_code::ok;
  });
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  switch (cfg.command) {
    case Command::Project: return run_project(cfg, out, err);
    case Command::Solve: return run_solve(cfg, out, err);
    case Command::Bench: return run_bench(cfg, out, err);
    case Command::Generate: return run_generate(cfg, out, err);
  }
  return exit_code::parse;
}

}  // namespace plp
