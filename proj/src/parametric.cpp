#include "plp/parametric.hpp"

#include <algorithm>
#include <cmath>
#include <chrono>

namespace plp {

ParametricLP::ParametricLP(StandardLP lp_, std::vector<RatVec> objectives_)
    : lp(std::move(lp_)), objectives(std::move(objectives_)) {
  if (objectives.size() < 2) throw InvalidProblem("parametric LP needs at least one parameter");
  for (const RatVec& c : objectives)
    if (c.size() != lp.cols()) throw InvalidProblem("objective length differs from column count");
}

bool Region::contains(const RatVec& mu) const {
  return std::all_of(constraints.begin(), constraints.end(), [&](const AffineForm& f) { return f(mu).sign() <= 0; });
}

bool Region::contains_interior(const RatVec& mu) const {
  return std::all_of(constraints.begin(), constraints.end(), [&](const AffineForm& f) { return f(mu).sign() < 0; });
}

void Region::prepare_screen() {
  if (constraints.empty()) return;
  const Eigen::Index k = constraints.front().coeffs.size();
  screen.resize(static_cast<Eigen::Index>(constraints.size()), k + 1);
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    screen.row(r).head(k) = to_float(constraints[i].coeffs).transpose();
    screen(r, k) = to_float(constraints[i].constant);
  }
}

bool Region::certainly_outside(const Vec<double>& mu) const {
  const Eigen::Index k = mu.size();
  if (screen.rows() != static_cast<Eigen::Index>(constraints.size()) || screen.cols() != k + 1) return false;
  for (Eigen::Index i = 0; i < screen.rows(); ++i) {
    double value = screen(i, k);
    double size = std::abs(screen(i, k));
    for (Eigen::Index j = 0; j < k; ++j) {
      const double term = screen(i, j) * mu(j);
      value += term;
      size += std::abs(term);
    }
    // the computed value is off by ~1e-15·size at most
    if (std::isfinite(size) && size > 1e-250 && value > 1e-9 * size) return true;
  }
  return false;
}

SharedState::SharedState(const ParametricLP& plp_, SolveOptions options_) : plp(plp_), options(std::move(options_)) {}

void SharedState::warn(std::string message) {
  std::lock_guard lock(warn_mutex_);
  warnings_.push_back(std::move(message));
}

Solution SharedState::collect(double wall_ms) const {
  Solution out;
  out.params = plp.params();
  const std::size_t n = regions.size();
  out.regions.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.regions.push_back(regions[i]);
  out.stats.regions = n;
  out.stats.tasks_spawned = counters.spawned.load();
  out.stats.tasks_completed = counters.completed.load();
  out.stats.tasks_aborted_covered = counters.aborted_covered.load();
  out.stats.tasks_aborted_basis = counters.aborted_basis.load();
  out.stats.retries = counters.retries.load();
  out.stats.repairs = counters.repairs.load();
  out.stats.repairs_dropped = counters.repairs_dropped.load();
  out.stats.exact_fallbacks = counters.exact_fallbacks.load();
  out.stats.degenerate_regions = counters.degenerate.load();
  out.stats.skipped_facets = counters.skipped_facets.load();
  out.stats.facet_splits = counters.facet_splits.load();
  out.stats.wall_ms = wall_ms;
  {
    std::lock_guard lock(warn_mutex_);
    out.warnings = warnings_;
  }
  return out;
}

RatVec instantiate_objective(const ParametricLP& plp, const RatVec& D) {
  if (D.size() != plp.params()) throw InvalidProblem("parameter vector length mismatch");
  RatVec c = plp.objectives[0];
  for (Eigen::Index i = 0; i < D.size(); ++i) {
    if (D(i).is_zero()) continue;
    const RatVec& ci = plp.objectives[static_cast<std::size_t>(i + 1)];
    for (Eigen::Index j = 0; j < c.size(); ++j)
      if (!ci(j).is_zero()) c(j) += D(i) * ci(j);
  }
  return c;
}

std::vector<AffineForm> sign_conditions(const ParametricLP& plp, const Basis& basis) {
  const StandardLP& lp = plp.lp;
  if (static_cast<int>(basis.size()) != lp.rows()) throw InvalidProblem("basis size differs from row count");
  const int k = plp.params();
  const Eigen::Index m = lp.rows();

  // Column i of Y holds the simplex multipliers of objective C_i.
  RatMat Y = RatMat::Zero(m, k + 1);
  if (m > 0) {
    RatMat rhs(m, k + 1);
    for (int i = 0; i <= k; ++i) rhs.col(i) = plp.objectives[static_cast<std::size_t>(i)](basis.columns);
    try {
      Y = gauss_solve_multi(RatMat(lp.A()(Eigen::all, basis.columns).transpose()), rhs);
    } catch (const SingularMatrix&) {
      throw SingularBasis();
    }
  }

  std::vector<AffineForm> forms;
  for (int j : basis.nonbasic(lp.cols())) {
    const auto column = lp.A().col(j);
    AffineForm f{RatVec(k), Rat(0)};
    for (int i = 0; i <= k; ++i) {
      Rat alpha = plp.objectives[static_cast<std::size_t>(i)](j) - Y.col(i).dot(column);
      if (i == 0)
        f.constant = std::move(alpha);
      else
        f.coeffs(i - 1) = std::move(alpha);
    }
    forms.push_back(std::move(f));
  }
  return forms;
}

namespace {

// Scales a nonzero form so its largest coefficient magnitude is 1.
AffineForm normalize(const AffineForm& f) {
  const Rat scale = Rat(1) / max_abs(f.coeffs);
  AffineForm out{f.coeffs * scale, f.constant * scale};
  return out;
}

bool is_constant(const AffineForm& f) { return max_abs(f.coeffs).is_zero(); }

// Builds max t over (μ, t) with μ in the box, optionally keeping a slack of t
// from the box faces. t is free, so the problem stays feasible and a
// nonpositive optimum reports the empty case.
InequalityLP slack_problem(Eigen::Index k, const Rat& box, bool box_slack) {
  InequalityLP lp(k + 1);
  lp.c(k) = Rat(1);
  for (Eigen::Index i = 0; i < k; ++i) {
    RatVec row = RatVec::Zero(k + 1);
    row(i) = Rat(1);
    if (box_slack) row(k) = Rat(1);
    lp.add_le(row, box);
    row(i) = Rat(-1);
    lp.add_le(row, box);
  }
  return lp;
}

// form(μ) + sign·t ≤ 0
void add_form(InequalityLP& lp, const AffineForm& f, int t_sign) {
  const Eigen::Index k = f.coeffs.size();
  RatVec row(k + 1);
  row.head(k) = f.coeffs;
  row(k) = Rat(t_sign);
  lp.add_le(row, -f.constant);
}

}  // namespace

RedundancyResult eliminate_redundancy(const std::vector<AffineForm>& forms, const Rat& box_bound) {
  RedundancyResult out;
  if (forms.empty()) return out;
  const Eigen::Index k = forms.front().coeffs.size();

  std::vector<AffineForm> normal;
  std::vector<std::size_t> origin;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    if (is_constant(forms[i])) {
      if (forms[i].constant.sign() > 0) throw EmptyInterior();
      continue;
    }
    AffineForm nf = normalize(forms[i]);
    if (std::find(normal.begin(), normal.end(), nf) != normal.end()) continue;
    normal.push_back(std::move(nf));
    origin.push_back(i);
  }
  if (normal.empty()) return out;

  {
    InequalityLP interior = slack_problem(k, box_bound, false);
    for (const AffineForm& f : normal) add_form(interior, f, 1);
    const auto r = solve_inequality_lp(interior);
    if (r.status != LpStatus::Optimal || r.value.sign() <= 0) throw EmptyInterior();
  }

  std::vector<bool> active(normal.size(), true);
  std::vector<std::pair<std::size_t, RatVec>> kept;
  for (std::size_t i = 0; i < normal.size(); ++i) {
    InequalityLP probe = slack_problem(k, box_bound, false);
    for (std::size_t j = 0; j < normal.size(); ++j)
      if (j != i && active[j]) add_form(probe, normal[j], 1);
    AffineForm flipped{-normal[i].coeffs, -normal[i].constant};
    add_form(probe, flipped, 1);
    const auto r = solve_inequality_lp(probe);
    if (r.status != LpStatus::Optimal || r.value.sign() <= 0) {
      active[i] = false;
      continue;
    }
    kept.emplace_back(i, r.x.head(k));
  }
  for (auto& [i, w] : kept) {
    out.kept.push_back(forms[origin[i]]);
    out.kept_index.push_back(origin[i]);
    out.witness.push_back(std::move(w));
  }
  return out;
}

FacetProbe compute_next(const Region& region, std::size_t facet, const SolveOptions& options,
                        std::span<const AffineForm> piece) {
  if (facet >= region.constraints.size()) throw InvalidProblem("compute_next: facet index out of range");
  const AffineForm& target = region.constraints[facet];
  if (is_constant(target)) throw DegenerateFacet();
  const Eigen::Index k = target.coeffs.size();
  const AffineForm gradient = normalize(target);

  InequalityLP lp = slack_problem(k, options.box_bound, true);
  {
    RatVec row(k + 1);
    row.head(k) = gradient.coeffs;
    row(k) = Rat(0);
    lp.add_eq(row, -gradient.constant);
  }
  for (std::size_t j = 0; j < region.constraints.size(); ++j) {
    if (j == facet || is_constant(region.constraints[j])) continue;
    add_form(lp, normalize(region.constraints[j]), 1);
  }
  for (const AffineForm& f : piece) {
    if (is_constant(f)) {
      if (f.constant.sign() >= 0) throw DegenerateFacet();
      continue;
    }
    add_form(lp, normalize(f), 1);
  }
  const auto r = solve_inequality_lp(lp);
  if (r.status != LpStatus::Optimal || r.value.sign() <= 0) throw DegenerateFacet();

  FacetProbe out;
  out.crossing = r.x.head(k);
  Rat eps = options.epsilon_scale * std::max(Rat(1), max_abs(out.crossing));
  if (r.value < eps) eps = r.value;  // stay inside the box
  out.next = out.crossing + gradient.coeffs * eps;
  return out;
}

const Region* find_covering(const RatVec& D, std::span<const Region> regions) {
  for (const Region& r : regions)
    if (r.contains(D)) return &r;
  return nullptr;
}

const Region* is_covered(const RatVec& D, const RegionStore& store) {
  const Vec<double> Df = to_float(D);
  for (std::size_t i = 0; i < store.size(); ++i) {
    const Region& r = store[i];
    if (!r.certainly_outside(Df) && r.contains(D)) return &r;
  }
  return nullptr;
}

bool are_adjacent(const RatVec& crossing, const Region& covering) { return covering.contains(crossing); }

RatVec midpoint(const RatVec& crossing, const RatVec& D, const Region& covering) {
  // Along p(t) = crossing + t(D - crossing) each constraint is affine in t and
  // nonpositive at t = 1, so the covering region is entered at the largest
  // root among constraints positive at t = 0.
  Rat enter(0);
  for (const AffineForm& f : covering.constraints) {
    const Rat at0 = f(crossing);
    if (at0.sign() <= 0) continue;
    const Rat at1 = f(D);
    const Rat t = at0 / (at0 - at1);
    if (t > enter) enter = t;
  }
  if (enter.is_zero()) throw NoGap();
  return crossing + (D - crossing) * (enter / Rat(2));
}

Rat region_value(const ParametricLP& plp, const Region& region, const RatVec& mu) {
  return instantiate_objective(plp, mu).dot(region.optimum);
}

RatVec default_seed(const ParametricLP& plp) { return RatVec::Constant(plp.params(), Rat(1)); }

namespace {

struct SolvedBasis {
  Basis basis;
  RatVec optimum;
  bool from_exact = false;
};

// Verified optimal basis at C, from the float candidate when it checks out.
SolvedBasis solve_exactly(const ParametricLP& plp, const RatVec& C, const RatVec& D,
                          const std::optional<Basis>& candidate, SharedState& shared) {
  if (candidate) {
    try {
      if (verify_optimal_basis(plp.lp, *candidate, C)) return {*candidate, exact_point(plp.lp, *candidate), false};
    } catch (const SingularBasis&) {
    }
  }
  shared.counters.exact_fallbacks.fetch_add(1, std::memory_order_relaxed);
  auto exact = exact_simplex(plp.lp, C);
  if (exact.outcome.status == LpStatus::Unbounded) throw UnboundedDirection(format_vec(D));
  if (exact.outcome.status == LpStatus::Infeasible) throw InfeasibleParametricLP();
  return {std::move(exact.outcome.basis), std::move(exact.optimum), true};
}

std::optional<Basis> float_candidate(const ParametricLP& plp, const RatVec& C) {
  try {
    auto out = float_simplex(plp.lp, to_float(C));
    if (out.optimal()) return std::move(out.basis);
  } catch (const IterationLimit&) {
  }
  return std::nullopt;
}

Region build_region(const ParametricLP& plp, SolvedBasis solved, const Task& task, SharedState& shared) {
  Region region;
  region.basis = std::move(solved.basis);
  region.optimum = std::move(solved.optimum);
  region.seed = task.point;
  if (task.from_region) region.parent = ParentEdge{*task.from_region, task.facet};

  auto forms = sign_conditions(plp, region.basis);
  try {
    region.constraints = eliminate_redundancy(forms, shared.options.box_bound).kept;
  } catch (const EmptyInterior&) {
    region.degenerate = true;
    for (auto& f : forms) {
      if (is_constant(f)) continue;
      if (std::find(region.constraints.begin(), region.constraints.end(), f) == region.constraints.end())
        region.constraints.push_back(std::move(f));
    }
  }
  region.prepare_screen();
  return region;
}

// Probes around a region without interior, so full-dimensional neighbours
// meeting at its seed are still discovered.
void probe_around(const Region& region, const SolveOptions& options, std::vector<Task>& out) {
  const Eigen::Index k = region.seed.size();
  const Rat delta = options.epsilon_scale * std::max(Rat(1), max_abs(region.seed));
  for (Eigen::Index i = 0; i < k; ++i) {
    for (int dir : {1, -1}) {
      RatVec p = region.seed;
      p(i) += delta * Rat(dir);
      if (abs(p(i)) > options.box_bound) continue;
      Task t;
      t.from_region = region.id;
      t.crossing = region.seed;
      t.point = std::move(p);
      t.facet = -1 - static_cast<int>(out.size());
      out.push_back(std::move(t));
    }
  }
}

// Under primal degeneracy a facet can border several regions. Probes the
// parts of the task's facet piece left outside `covering`, one disjoint
// piece per covering constraint.
void split_facet(const Task& task, const Region& from, const Region& covering, SharedState& shared,
                 std::vector<Task>& out) {
  // A primal nondegenerate basis owns the whole optimality cone of its
  // vertex, and that cone contains every facet whose relative interior
  // meets it.
  const bool primal_degenerate = std::any_of(covering.basis.columns.begin(), covering.basis.columns.end(),
                                             [&](int j) { return covering.optimum(j).is_zero(); });
  if (!primal_degenerate) return;
  std::vector<AffineForm> piece = task.piece;
  for (const AffineForm& g : covering.constraints) {
    piece.push_back(AffineForm{-g.coeffs, -g.constant});
    try {
      FacetProbe probe = compute_next(from, static_cast<std::size_t>(task.facet), shared.options, piece);
      Task child;
      child.from_region = from.id;
      child.crossing = std::move(probe.crossing);
      child.point = std::move(probe.next);
      child.facet = task.facet;
      child.piece = piece;
      shared.counters.facet_splits.fetch_add(1, std::memory_order_relaxed);
      out.push_back(std::move(child));
    } catch (const DegenerateFacet&) {
    }
    piece.back() = g;
  }
}

}  // namespace

std::vector<Task> process_task(const Task& task, SharedState& shared) {
  const ParametricLP& plp = shared.plp;
  std::vector<Task> spawned;
  auto& counters = shared.counters;

  const Region* covering = is_covered(task.point, shared.regions);
  if (covering != nullptr) {
    counters.aborted_covered.fetch_add(1, std::memory_order_relaxed);
  } else {
    const RatVec C = instantiate_objective(plp, task.point);
    const std::optional<Basis> candidate = float_candidate(plp, C);

    // A known float basis means another task owns (or owned) this region.
    bool duplicate = candidate && shared.bases.contains(*candidate);
    std::optional<SolvedBasis> solved;
    if (duplicate) {
      covering = is_covered(task.point, shared.regions);
      if (covering == nullptr) {
        solved = solve_exactly(plp, C, task.point, candidate, shared);
        duplicate = !solved->from_exact || shared.bases.test_and_insert(solved->basis);
      }
    } else {
      solved = solve_exactly(plp, C, task.point, candidate, shared);
      duplicate = shared.bases.test_and_insert(solved->basis);
    }

    if (duplicate) {
      if (covering == nullptr) covering = is_covered(task.point, shared.regions);
      if (covering == nullptr) {
        if (task.retries < shared.options.retry_budget) {
          Task again = task;
          ++again.retries;
          counters.retries.fetch_add(1, std::memory_order_relaxed);
          counters.spawned.fetch_add(1, std::memory_order_relaxed);
          spawned.push_back(std::move(again));
        } else {
          counters.aborted_basis.fetch_add(1, std::memory_order_relaxed);
          shared.warn("retry budget exhausted at " + format_vec(task.point) + "; point left to other regions");
        }
        return spawned;
      }
      counters.aborted_basis.fetch_add(1, std::memory_order_relaxed);
    } else {
      Region fresh = build_region(plp, std::move(*solved), task, shared);
      const std::size_t id = shared.regions.push_with_index([&](std::size_t i) {
        fresh.id = static_cast<int>(i);
        return std::move(fresh);
      });
      counters.completed.fetch_add(1, std::memory_order_relaxed);
      const Region& region = shared.regions[id];
      covering = &region;

      if (region.degenerate) {
        counters.degenerate.fetch_add(1, std::memory_order_relaxed);
        probe_around(region, shared.options, spawned);
      } else {
        for (std::size_t f = 0; f < region.constraints.size(); ++f) {
          try {
            FacetProbe probe = compute_next(region, f, shared.options);
            Task child;
            child.from_region = region.id;
            child.crossing = std::move(probe.crossing);
            child.point = std::move(probe.next);
            child.facet = static_cast<int>(f);
            spawned.push_back(std::move(child));
          } catch (const DegenerateFacet&) {
            counters.skipped_facets.fetch_add(1, std::memory_order_relaxed);
            shared.warn("region " + std::to_string(region.id) + " facet " + std::to_string(f) + " skipped: degenerate");
          }
        }
      }
    }
  }

  if (task.from_region && covering->id != *task.from_region && !are_adjacent(*task.crossing, *covering)) {
    if (task.depth < shared.options.repair_depth_cap) {
      Task repair;
      repair.from_region = task.from_region;
      repair.crossing = task.crossing;
      repair.point = midpoint(*task.crossing, task.point, *covering);
      repair.facet = task.facet;
      repair.depth = task.depth + 1;
      repair.piece = task.piece;
      counters.repairs.fetch_add(1, std::memory_order_relaxed);
      spawned.push_back(std::move(repair));
    } else {
      counters.repairs_dropped.fetch_add(1, std::memory_order_relaxed);
      shared.warn("repair depth cap reached probing from region " + std::to_string(*task.from_region));
    }
  } else if (task.from_region && covering->id != *task.from_region && task.facet >= 0) {
    const Region& from = shared.regions[static_cast<std::size_t>(*task.from_region)];
    if (!from.degenerate) split_facet(task, from, *covering, shared, spawned);
  }
  counters.spawned.fetch_add(spawned.size(), std::memory_order_relaxed);
  return spawned;
}

Solution solve_sequential(const ParametricLP& plp, const RatVec& D0, const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SharedState shared(plp, options);
  if (D0.size() != plp.params()) throw InvalidProblem("seed point length mismatch");

  std::vector<Task> work;
  work.push_back(Task{std::nullopt, std::nullopt, D0});
  shared.counters.spawned.fetch_add(1);
  while (!work.empty()) {
    Task task = std::move(work.back());
    work.pop_back();
    auto more = process_task(task, shared);
    for (auto& t : more) work.push_back(std::move(t));
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return shared.collect(ms);
}

}  // namespace plp
