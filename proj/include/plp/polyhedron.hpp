#pragma once

#include "plp/parallel.hpp"
#include "plp/parametric.hpp"

#include <cstdint>
#include <vector>

namespace plp {

class EmptyOrFlat : public Error {
 public:
  EmptyOrFlat() : Error("polyhedron is empty or has no interior") {}
};

class SizeLimit : public Error {
 public:
  SizeLimit() : Error("Fourier-Motzkin: intermediate system too large") {}
};

/// {x : A·x ≤ b}.
class Polyhedron {
 public:
  Polyhedron(RatMat A, RatVec b);
  /// The whole space.
  explicit Polyhedron(int nvars);

  [[nodiscard]] int nvars() const noexcept { return static_cast<int>(a_.cols()); }
  [[nodiscard]] int rows() const noexcept { return static_cast<int>(a_.rows()); }
  [[nodiscard]] const RatMat& A() const noexcept { return a_; }
  [[nodiscard]] const RatVec& b() const noexcept { return b_; }

  [[nodiscard]] Polyhedron with_row(const RatVec& a, const Rat& rhs) const;
  [[nodiscard]] bool contains(const RatVec& x) const;

 private:
  RatMat a_;
  RatVec b_;
};

struct ProjectionContext {
  std::vector<int> kept;
  std::vector<int> eliminated;
  RatMat kept_columns;  // A restricted to the kept variables
  RatVec b;
  RatVec interior;      // interior point of the source polyhedron
};

struct ProjectionEncoding {
  ParametricLP plp;
  ProjectionContext context;

  /// Kept coordinates of the interior point.
  [[nodiscard]] RatVec seed() const;
};

/// Chebyshev-style centre: maximises the common slack r ≤ 1 of all rows
/// scaled by their 1-norms. Throws EmptyOrFlat when r ≤ 0.
RatVec interior_point(const Polyhedron& P);

/// Farkas-multiplier parametric LP whose regions' optima are the
/// constraints of the projection onto the non-eliminated variables.
/// `eliminated` holds 0-based indices. Throws InfeasibleParametricLP when
/// the projection is the whole space.
ProjectionEncoding encode_projection(const Polyhedron& P, const std::vector<int>& eliminated);

Polyhedron extract_projection(const Solution& solution, const ProjectionContext& ctx);

/// encode, solve and extract in one call.
Polyhedron project(const Polyhedron& P, const std::vector<int>& eliminated, Scheduler scheduler = Scheduler::Sequential,
                   int threads = 1, const SolveOptions& options = {}, Solution* solution_out = nullptr);

/// Pairwise elimination with LP-based pruning after every step.
Polyhedron fourier_motzkin(const Polyhedron& P, const std::vector<int>& eliminated, std::size_t row_limit = 10000);

/// Drops rows implied by the others (P assumed nonempty).
Polyhedron remove_redundant_rows(const Polyhedron& P);

/// P ⊆ Q, decided by one exact LP per row of Q.
bool includes(const Polyhedron& P, const Polyhedron& Q);
bool equal(const Polyhedron& P, const Polyhedron& Q);

struct GeneratorParams {
  int nvars = 4;
  int nrows = 8;
  double density = 1.0;  // probability of a nonzero coefficient
  std::uint64_t seed = 1;
  int coefficient_range = 10;
};

/// Deterministic random polyhedron, bounded and with nonempty interior.
Polyhedron generate_polyhedron(const GeneratorParams& params);

}  // namespace plp
