#pragma once

#include "plp/errors.hpp"
#include "plp/numkernel.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <vector>

namespace plp {

class InvalidProblem : public Error {
 public:
  using Error::Error;
};

class SingularBasis : public Error {
 public:
  SingularBasis() : Error("basic column block is singular") {}
};

/// Raised by the floating-point simplex when it gives up; callers fall back
/// to the exact simplex.
class IterationLimit : public Error {
 public:
  using Error::Error;
};

/// max C·X subject to A·X = B, X ≥ 0, with A of full row rank.
class StandardLP {
 public:
  StandardLP(RatMat A, RatVec B);

  [[nodiscard]] const RatMat& A() const noexcept { return a_; }
  [[nodiscard]] const RatVec& B() const noexcept { return b_; }
  [[nodiscard]] int rows() const noexcept { return static_cast<int>(a_.rows()); }
  [[nodiscard]] int cols() const noexcept { return static_cast<int>(a_.cols()); }

 private:
  RatMat a_;
  RatVec b_;
};

/// Strictly increasing basic column indices. Doubles as the dedup key.
struct Basis {
  std::vector<int> columns;

  /// Sorts `indices`; throws InvalidProblem on duplicates or negatives.
  static Basis from(std::vector<int> indices);

  [[nodiscard]] std::size_t size() const noexcept { return columns.size(); }
  [[nodiscard]] bool contains(int column) const;
  [[nodiscard]] std::vector<int> nonbasic(int n) const;

  friend bool operator==(const Basis&, const Basis&) = default;
  friend auto operator<=>(const Basis&, const Basis&) = default;
};

struct BasisHash {
  std::size_t operator()(const Basis& b) const noexcept;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  Basis basis;  // meaningful only when Optimal

  [[nodiscard]] bool optimal() const noexcept { return status == LpStatus::Optimal; }
};

struct ExactLpResult {
  LpOutcome outcome;
  RatVec optimum;  // X*, empty unless Optimal
};

struct ReducedCosts {
  std::map<int, Rat> alpha;  // nonbasic column -> coefficient
  Rat constant;              // C_basic · X*_basic
};

/// Dense two-phase primal simplex in binary64 with Dantzig pricing. The
/// basis it returns is a candidate to be checked exactly.
LpOutcome float_simplex(const StandardLP& lp, const Vec<double>& C);

RatVec exact_point(const StandardLP& lp, const Basis& basis);

ReducedCosts exact_reduced_costs(const StandardLP& lp, const Basis& basis, const RatVec& C);

bool verify_optimal_basis(const StandardLP& lp, const Basis& basis, const RatVec& C);

/// Exact two-phase simplex with Bland's rule.
ExactLpResult exact_simplex(const StandardLP& lp, const RatVec& C);

/// max c·x subject to rows g·x ≤ h, rows e·x = f, and x_j ≥ 0 where
/// nonneg[j]; other variables are free. Converted to standard form and
/// solved exactly.
struct InequalityLP {
  RatVec c;
  std::vector<std::pair<RatVec, Rat>> le;
  std::vector<std::pair<RatVec, Rat>> eq;
  std::vector<bool> nonneg;

  explicit InequalityLP(Eigen::Index nvars);
  void add_le(const RatVec& row, const Rat& rhs);
  void add_eq(const RatVec& row, const Rat& rhs);
};

struct InequalityLpResult {
  LpStatus status = LpStatus::Infeasible;
  RatVec x;
  Rat value;
};

InequalityLpResult solve_inequality_lp(const InequalityLP& problem);

}  // namespace plp
