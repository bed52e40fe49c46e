#pragma once

#include "plp/concurrent.hpp"
#include "plp/lp.hpp"

#include <atomic>
#include <cstddef>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace plp {

class EmptyInterior : public Error {
 public:
  EmptyInterior() : Error("region has empty interior") {}
};

class DegenerateFacet : public Error {
 public:
  DegenerateFacet() : Error("facet has no relative-interior point inside the bounding box") {}
};

class NoGap : public Error {
 public:
  NoGap() : Error("midpoint: crossing already lies in the covering region") {}
};

class UnboundedDirection : public Error {
 public:
  explicit UnboundedDirection(const std::string& where) : Error("objective unbounded at parameter " + where) {}
};

class InfeasibleParametricLP : public Error {
 public:
  InfeasibleParametricLP() : Error("parametric LP has no feasible point") {}
};

/// Objective family C_0 + Σ μ_i C_i over a fixed standard-form polyhedron.
struct ParametricLP {
  StandardLP lp;
  std::vector<RatVec> objectives;  // C_0 … C_k

  ParametricLP(StandardLP lp, std::vector<RatVec> objectives);

  [[nodiscard]] int params() const noexcept { return static_cast<int>(objectives.size()) - 1; }
};

/// μ ↦ coeffs·μ + constant.
struct AffineForm {
  RatVec coeffs;
  Rat constant;

  [[nodiscard]] Rat operator()(const RatVec& mu) const { return coeffs.dot(mu) + constant; }
  friend bool operator==(const AffineForm&, const AffineForm&) = default;
};

struct ParentEdge {
  int region = -1;
  int facet = -1;  // negative for probes around a degenerate region's seed
  friend bool operator==(const ParentEdge&, const ParentEdge&) = default;
};

/// Optimality region of one basis: {μ : every constraint ≤ 0}.
struct Region {
  int id = -1;
  std::vector<AffineForm> constraints;
  Basis basis;
  RatVec optimum;
  RatVec seed;
  std::optional<ParentEdge> parent;
  bool degenerate = false;  // published without redundancy elimination

  [[nodiscard]] bool contains(const RatVec& mu) const;
  /// Every constraint strictly negative at mu.
  [[nodiscard]] bool contains_interior(const RatVec& mu) const;

  /// binary64 copy of the constraints, one row [coeffs | constant] each.
  Mat<double> screen;
  void prepare_screen();
  /// True only when some constraint is violated at mu beyond any rounding
  /// error; false means undecided. Needs prepare_screen().
  [[nodiscard]] bool certainly_outside(const Vec<double>& mu) const;
};

using RegionStore = PublicationArray<Region>;

struct Task {
  std::optional<int> from_region;
  std::optional<RatVec> crossing;  // point on the generating facet of from_region
  RatVec point;
  int facet = -1;
  int depth = 0;
  int retries = 0;
  std::vector<AffineForm> piece;  // extra forms (≤ 0) narrowing the facet
};

struct SolveOptions {
  Rat box_bound{1000000};
  Rat epsilon_scale{1, 1024};
  int repair_depth_cap = 64;
  int retry_budget = 16;
};

struct SolveStats {
  std::size_t regions = 0;
  std::size_t tasks_spawned = 0;
  std::size_t tasks_completed = 0;
  std::size_t tasks_aborted_covered = 0;
  std::size_t tasks_aborted_basis = 0;
  std::size_t retries = 0;
  std::size_t repairs = 0;
  std::size_t repairs_dropped = 0;
  std::size_t exact_fallbacks = 0;
  std::size_t degenerate_regions = 0;
  std::size_t skipped_facets = 0;
  std::size_t facet_splits = 0;  // probes for facet parts outside the first neighbour
  double wall_ms = 0;
};

struct Solution {
  int params = 0;
  std::vector<Region> regions;  // index == id
  SolveStats stats;
  std::vector<std::string> warnings;
};

/// Everything tasks share. Only the region store, the basis table, the
/// counters and the warning log are mutated, all of them thread-safe.
class SharedState {
 public:
  SharedState(const ParametricLP& plp, SolveOptions options);

  const ParametricLP& plp;
  const SolveOptions options;
  RegionStore regions;
  BasisTable bases;

  struct Counters {
    std::atomic<std::size_t> spawned{0};
    std::atomic<std::size_t> completed{0};
    std::atomic<std::size_t> aborted_covered{0};
    std::atomic<std::size_t> aborted_basis{0};
    std::atomic<std::size_t> retries{0};
    std::atomic<std::size_t> repairs{0};
    std::atomic<std::size_t> repairs_dropped{0};
    std::atomic<std::size_t> exact_fallbacks{0};
    std::atomic<std::size_t> degenerate{0};
    std::atomic<std::size_t> skipped_facets{0};
    std::atomic<std::size_t> facet_splits{0};
  } counters;

  void warn(std::string message);
  /// Snapshot after quiescence.
  [[nodiscard]] Solution collect(double wall_ms) const;

 private:
  mutable std::mutex warn_mutex_;
  std::vector<std::string> warnings_;
};

RatVec instantiate_objective(const ParametricLP& plp, const RatVec& D);

/// One form per nonbasic column, in column order: its reduced cost as an
/// affine function of μ.
std::vector<AffineForm> sign_conditions(const ParametricLP& plp, const Basis& basis);

struct RedundancyResult {
  std::vector<AffineForm> kept;
  std::vector<std::size_t> kept_index;  // positions in the input list
  std::vector<RatVec> witness;          // parallel to kept
};

/// Irredundant subsystem of {μ : forms ≤ 0} inside the box |μ_i| ≤ bound,
/// with one exterior witness per kept constraint. Throws EmptyInterior.
RedundancyResult eliminate_redundancy(const std::vector<AffineForm>& forms, const Rat& box_bound = Rat(1000000));

struct FacetProbe {
  RatVec crossing;
  RatVec next;
};

/// Central point of one facet (restricted to `piece`, forms ≤ 0) and a probe
/// just past it. Throws DegenerateFacet.
FacetProbe compute_next(const Region& region, std::size_t facet, const SolveOptions& options = {},
                        std::span<const AffineForm> piece = {});

/// First published region (in index order) whose closure contains D.
const Region* is_covered(const RatVec& D, const RegionStore& store);
const Region* find_covering(const RatVec& D, std::span<const Region> regions);

bool are_adjacent(const RatVec& crossing, const Region& covering);

/// Point halfway between `crossing` and where the segment towards D enters
/// `covering`. Throws NoGap when the crossing is already inside.
RatVec midpoint(const RatVec& crossing, const RatVec& D, const Region& covering);

/// One step of the region exploration; returns the tasks it spawns.
std::vector<Task> process_task(const Task& task, SharedState& shared);

/// Optimal value C(μ)·X* of a region's basis at μ.
Rat region_value(const ParametricLP& plp, const Region& region, const RatVec& mu);

RatVec default_seed(const ParametricLP& plp);

Solution solve_sequential(const ParametricLP& plp, const RatVec& D0, const SolveOptions& options = {});

}  // namespace plp
