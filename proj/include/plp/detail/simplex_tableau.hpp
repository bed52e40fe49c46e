#pragma once

// Dense tableau simplex shared by the binary64 and the exact rational
// solvers. Only the pricing rule and the comparisons differ per scalar.

#include "plp/lp.hpp"
#include "plp/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace plp::detail {

template <class Scalar>
struct PricingRule;

template <>
struct PricingRule<double> {
  static constexpr bool bland = false;
  static constexpr double optimality_tol = 1e-9;
  static constexpr double ratio_tol = 1e-10;

  static bool positive(double x) { return x > optimality_tol; }
  static bool pivotable(double x) { return x > optimality_tol; }
  static bool nonzero(double x) { return x != 0.0; }
  static bool ratio_less(double a, double b) { return a < b - ratio_tol; }
  static bool ratio_tie(double a, double b) { return std::abs(a - b) <= ratio_tol; }
  static double magnitude(double x) { return std::abs(x); }
};

template <>
struct PricingRule<Rat> {
  static constexpr bool bland = true;

  static bool positive(const Rat& x) { return x.sign() > 0; }
  static bool pivotable(const Rat& x) { return x.sign() > 0; }
  static bool nonzero(const Rat& x) { return !x.is_zero(); }
  static bool ratio_less(const Rat& a, const Rat& b) { return a < b; }
  static bool ratio_tie(const Rat& a, const Rat& b) { return a == b; }
  static Rat magnitude(const Rat& x) { return abs(x); }
};

template <class Scalar>
struct SimplexRun {
  LpStatus status = LpStatus::Infeasible;
  std::vector<int> basis;
  Vec<Scalar> x;
};

/// Two-phase primal simplex over `Scalar` on max c·x, A·x = b, x ≥ 0.
/// `max_pivots < 0` means no cap; exceeding a cap throws IterationLimit.
template <class Scalar>
class TableauSimplex {
  using Rule = PricingRule<Scalar>;
  using Table = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

 public:
  TableauSimplex(const Mat<Scalar>& A, const Vec<Scalar>& b, long max_pivots)
      : m_(A.rows()), n_(A.cols()), total_(A.cols() + A.rows()), max_pivots_(max_pivots) {
    table_ = Table::Zero(m_, total_ + 1);
    basis_.resize(static_cast<std::size_t>(m_));
    for (Eigen::Index i = 0; i < m_; ++i) {
      const bool flip = b(i) < Scalar(0);
      for (Eigen::Index j = 0; j < n_; ++j) table_(i, j) = flip ? Scalar(-A(i, j)) : A(i, j);
      table_(i, n_ + i) = Scalar(1);
      table_(i, total_) = flip ? Scalar(-b(i)) : b(i);
      basis_[static_cast<std::size_t>(i)] = static_cast<int>(n_ + i);
      if constexpr (!Rule::bland) rhs_scale_ = std::max(rhs_scale_, std::abs(b(i)));
    }
  }

  SimplexRun<Scalar> solve(const Vec<Scalar>& c) {
    SimplexRun<Scalar> run;

    Vec<Scalar> phase1 = Vec<Scalar>::Zero(total_);
    for (Eigen::Index i = n_; i < total_; ++i) phase1(i) = Scalar(-1);
    reset_costs(phase1);
    iterate(total_);
    // costs_(total_) holds minus the objective; phase one optimum is -Σ artificials
    bool infeasible = false;
    if constexpr (Rule::bland)
      infeasible = Rule::positive(costs_(total_));
    else
      infeasible = Rule::positive(costs_(total_) / rhs_scale_);  // roundoff grows with |b|
    if (infeasible) {
      run.status = LpStatus::Infeasible;
      return run;
    }
    drive_out_artificials();

    Vec<Scalar> phase2 = Vec<Scalar>::Zero(total_);
    phase2.head(n_) = c;
    reset_costs(phase2);
    run.status = iterate(n_) ? LpStatus::Optimal : LpStatus::Unbounded;
    if (run.status != LpStatus::Optimal) return run;

    run.basis = basis_;
    std::sort(run.basis.begin(), run.basis.end());
    run.x = Vec<Scalar>::Zero(n_);
    for (Eigen::Index i = 0; i < m_; ++i) run.x(basis_[static_cast<std::size_t>(i)]) = table_(i, total_);
    return run;
  }

 private:
  void reset_costs(const Vec<Scalar>& cost) {
    costs_ = Vec<Scalar>::Zero(total_ + 1);
    costs_.head(total_) = cost;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Scalar cb = cost(basis_[static_cast<std::size_t>(i)]);
      if (!Rule::nonzero(cb)) continue;
      for (Eigen::Index j = 0; j <= total_; ++j)
        if (Rule::nonzero(table_(i, j))) costs_(j) -= cb * table_(i, j);
    }
  }

  // Returns false when an improving column has no bounding row.
  bool iterate(Eigen::Index allowed) {
    for (;;) {
      Eigen::Index entering = -1;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        if (!Rule::positive(costs_(j))) continue;
        if constexpr (Rule::bland) {
          entering = j;
          break;
        } else {
          if (entering < 0 || costs_(j) > costs_(entering)) entering = j;
        }
      }
      if (entering < 0) return true;

      Eigen::Index leaving = -1;
      Scalar best;
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (!Rule::pivotable(table_(i, entering))) continue;
        Scalar ratio = table_(i, total_) / table_(i, entering);
        if (leaving < 0 || Rule::ratio_less(ratio, best) ||
            (Rule::ratio_tie(ratio, best) && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leaving)])) {
          leaving = i;
          best = std::move(ratio);
        }
      }
      if (leaving < 0) return false;
      pivot(leaving, entering);
    }
  }

  void drive_out_artificials() {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < n_) continue;
      Eigen::Index col = -1;
      Scalar best(0);
      for (Eigen::Index j = 0; j < n_; ++j) {
        Scalar mag = Rule::magnitude(table_(i, j));
        if (!Rule::positive(mag)) continue;
        if (col < 0 || mag > best) {
          col = j;
          best = std::move(mag);
        }
      }
      if (col < 0) {
        if constexpr (Rule::bland)
          throw InvalidProblem("constraint matrix is rank deficient");
        else
          throw IterationLimit("float simplex: artificial variable stuck in basis");
      }
      pivot(i, col);
    }
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    if (max_pivots_ >= 0 && ++pivots_ > max_pivots_)
      throw IterationLimit("float simplex: pivot cap exceeded");
    const Scalar inv = Scalar(1) / table_(r, c);
    std::vector<Eigen::Index> support;
    for (Eigen::Index j = 0; j <= total_; ++j) {
      if (!Rule::nonzero(table_(r, j))) continue;
      table_(r, j) *= inv;
      support.push_back(j);
    }
    table_(r, c) = Scalar(1);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (i == r || !Rule::nonzero(table_(i, c))) continue;
      const Scalar f = table_(i, c);
      for (Eigen::Index j : support) table_(i, j) -= f * table_(r, j);
      table_(i, c) = Scalar(0);
    }
    if (Rule::nonzero(costs_(c))) {
      const Scalar f = costs_(c);
      for (Eigen::Index j : support) costs_(j) -= f * table_(r, j);
      costs_(c) = Scalar(0);
    }
    basis_[static_cast<std::size_t>(r)] = static_cast<int>(c);
  }

  Eigen::Index m_;
  Eigen::Index n_;
  Eigen::Index total_;
  long max_pivots_;
  long pivots_ = 0;
  double rhs_scale_ = 1.0;  // binary64 only
  Table table_;
  Vec<Scalar> costs_;
  std::vector<int> basis_;
};

}  // namespace plp::detail
