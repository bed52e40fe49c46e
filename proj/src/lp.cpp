#include "plp/lp.hpp"

#include "plp/detail/simplex_tableau.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace plp {

StandardLP::StandardLP(RatMat A, RatVec B) : a_(std::move(A)), b_(std::move(B)) {
  if (b_.size() != a_.rows()) throw InvalidProblem("StandardLP: B length differs from row count of A");
  if (a_.rows() > a_.cols()) throw InvalidProblem("StandardLP: more rows than columns");
  if (static_cast<Eigen::Index>(independent_rows(a_).size()) != a_.rows())
    throw InvalidProblem("StandardLP: A does not have full row rank");
}

Basis Basis::from(std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  if (!indices.empty() && indices.front() < 0) throw InvalidProblem("basis: negative column index");
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
    throw InvalidProblem("basis: repeated column index");
  return Basis{std::move(indices)};
}

bool Basis::contains(int column) const {
  return std::binary_search(columns.begin(), columns.end(), column);
}

std::vector<int> Basis::nonbasic(int n) const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(n) - std::min<std::size_t>(columns.size(), static_cast<std::size_t>(n)));
  for (int j = 0; j < n; ++j)
    if (!contains(j)) out.push_back(j);
  return out;
}

std::size_t BasisHash::operator()(const Basis& b) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (int c : b.columns) {
    h ^= static_cast<std::size_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

namespace {

void check_basis(const StandardLP& lp, const Basis& basis) {
  if (static_cast<int>(basis.size()) != lp.rows()) throw InvalidProblem("basis size differs from row count");
  for (int c : basis.columns)
    if (c < 0 || c >= lp.cols()) throw InvalidProblem("basis column out of range");
}

RatMat basic_block(const StandardLP& lp, const Basis& basis) {
  return lp.A()(Eigen::all, basis.columns);
}

}  // namespace

LpOutcome float_simplex(const StandardLP& lp, const Vec<double>& C) {
  if (C.size() != lp.cols()) throw InvalidProblem("float_simplex: objective length mismatch");
  const long cap = 50L * (lp.rows() + lp.cols());
  detail::TableauSimplex<double> simplex(to_float(lp.A()), to_float(lp.B()), cap);
  auto run = simplex.solve(C);
  LpOutcome out;
  out.status = run.status;
  if (run.status == LpStatus::Optimal) out.basis = Basis{std::move(run.basis)};
  return out;
}

RatVec exact_point(const StandardLP& lp, const Basis& basis) {
  check_basis(lp, basis);
  RatVec x = RatVec::Zero(lp.cols());
  if (basis.size() == 0) return x;
  RatVec xb;
  try {
    xb = gauss_solve(basic_block(lp, basis), lp.B());
  } catch (const SingularMatrix&) {
    throw SingularBasis();
  }
  for (std::size_t i = 0; i < basis.size(); ++i) x(basis.columns[i]) = xb(static_cast<Eigen::Index>(i));
  return x;
}

ReducedCosts exact_reduced_costs(const StandardLP& lp, const Basis& basis, const RatVec& C) {
  check_basis(lp, basis);
  if (C.size() != lp.cols()) throw InvalidProblem("reduced costs: objective length mismatch");
  RatVec y = RatVec::Zero(lp.rows());
  if (basis.size() > 0) {
    const RatVec cb = C(basis.columns);
    try {
      y = gauss_solve(basic_block(lp, basis).transpose(), cb);
    } catch (const SingularMatrix&) {
      throw SingularBasis();
    }
  }
  ReducedCosts out;
  out.constant = y.dot(lp.B());
  for (int j : basis.nonbasic(lp.cols())) out.alpha.emplace(j, C(j) - y.dot(lp.A().col(j)));
  return out;
}

bool verify_optimal_basis(const StandardLP& lp, const Basis& basis, const RatVec& C) {
  const RatVec x = exact_point(lp, basis);
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x(i).sign() < 0) return false;
  const ReducedCosts rc = exact_reduced_costs(lp, basis, C);
  return std::all_of(rc.alpha.begin(), rc.alpha.end(), [](const auto& kv) { return kv.second.sign() <= 0; });
}

ExactLpResult exact_simplex(const StandardLP& lp, const RatVec& C) {
  if (C.size() != lp.cols()) throw InvalidProblem("exact_simplex: objective length mismatch");
  detail::TableauSimplex<Rat> simplex(lp.A(), lp.B(), -1);
  auto run = simplex.solve(C);
  ExactLpResult out;
  out.outcome.status = run.status;
  if (run.status == LpStatus::Optimal) {
    out.outcome.basis = Basis{std::move(run.basis)};
    out.optimum = std::move(run.x);
  }
  return out;
}

InequalityLP::InequalityLP(Eigen::Index nvars)
    : c(RatVec::Zero(nvars)), nonneg(static_cast<std::size_t>(nvars), false) {}

namespace {

// Basis from the floating-point simplex, accepted only when it is exactly
// primal feasible and dual optimal. Rows from `n_eq` on carry a slack in
// column first_slack + (row - n_eq); a basic slack leaves its row loose, so
// the exact check reduces to the square system of tight rows over basic
// structural columns.
std::optional<RatVec> certified_optimum(const RatMat& A, const RatVec& B, const RatVec& C, Eigen::Index n_eq,
                                        Eigen::Index first_slack) {
  if (A.rows() == 0) return std::nullopt;
  detail::SimplexRun<double> run;
  try {
    run = detail::TableauSimplex<double>(to_float(A), to_float(B), 50L * (A.rows() + A.cols())).solve(to_float(C));
  } catch (const Error&) {
    return std::nullopt;
  }
  if (run.status != LpStatus::Optimal || static_cast<Eigen::Index>(run.basis.size()) != A.rows()) return std::nullopt;

  const Eigen::Index m = A.rows();
  std::vector<bool> basic(static_cast<std::size_t>(A.cols()), false);
  for (int j : run.basis) basic[static_cast<std::size_t>(j)] = true;
  auto slack_of = [&](Eigen::Index r) { return first_slack + r - n_eq; };

  std::vector<Eigen::Index> tight, structural;
  for (Eigen::Index r = 0; r < m; ++r)
    if (r < n_eq || !basic[static_cast<std::size_t>(slack_of(r))]) tight.push_back(r);
  for (int j : run.basis)
    if (j < first_slack) structural.push_back(j);
  if (tight.size() != structural.size()) return std::nullopt;

  RatVec xs, y;
  if (!tight.empty()) {
    const RatMat block = A(tight, structural);
    try {
      xs = gauss_solve(block, RatVec(B(tight)));
      y = gauss_solve(block.transpose(), RatVec(C(structural)));
    } catch (const SingularMatrix&) {
      return std::nullopt;
    }
  }

  RatVec x = RatVec::Zero(A.cols());
  for (std::size_t i = 0; i < structural.size(); ++i) {
    if (xs(static_cast<Eigen::Index>(i)).sign() < 0) return std::nullopt;
    x(structural[i]) = xs(static_cast<Eigen::Index>(i));
  }
  for (Eigen::Index r = n_eq; r < m; ++r) {
    Rat slack = B(r);
    for (int j : structural) slack -= A(r, j) * x(j);
    if (slack.sign() < 0) return std::nullopt;
    x(slack_of(r)) = std::move(slack);
  }
  // duals vanish on loose rows; tight inequality rows need y ≥ 0
  for (std::size_t i = 0; i < tight.size(); ++i)
    if (tight[i] >= n_eq && y(static_cast<Eigen::Index>(i)).sign() < 0) return std::nullopt;
  for (Eigen::Index j = 0; j < first_slack; ++j) {
    if (basic[static_cast<std::size_t>(j)]) continue;
    Rat reduced = C(j);
    for (std::size_t i = 0; i < tight.size(); ++i) reduced -= y(static_cast<Eigen::Index>(i)) * A(tight[i], j);
    if (reduced.sign() > 0) return std::nullopt;
  }
  return x;
}

}  // namespace

void InequalityLP::add_le(const RatVec& row, const Rat& rhs) {
  if (row.size() != c.size()) throw InvalidProblem("inequality row length mismatch");
  le.emplace_back(row, rhs);
}

void InequalityLP::add_eq(const RatVec& row, const Rat& rhs) {
  if (row.size() != c.size()) throw InvalidProblem("equality row length mismatch");
  eq.emplace_back(row, rhs);
}

InequalityLpResult solve_inequality_lp(const InequalityLP& p) {
  const Eigen::Index nv = p.c.size();
  // column layout: one column per variable, a second (negated) one per free
  // variable, then one slack per inequality
  std::vector<Eigen::Index> neg_col(static_cast<std::size_t>(nv), -1);
  Eigen::Index ncols = nv;
  for (Eigen::Index j = 0; j < nv; ++j)
    if (!p.nonneg[static_cast<std::size_t>(j)]) neg_col[static_cast<std::size_t>(j)] = ncols++;
  const Eigen::Index slack0 = ncols;
  const auto n_le = static_cast<Eigen::Index>(p.le.size());
  ncols += n_le;

  // Dependent equalities are dropped; an inconsistent one means infeasible.
  InequalityLpResult result;
  std::vector<int> eq_rows;
  if (!p.eq.empty()) {
    RatMat augmented(static_cast<Eigen::Index>(p.eq.size()), nv + 1);
    for (std::size_t i = 0; i < p.eq.size(); ++i)
      augmented.row(static_cast<Eigen::Index>(i)) << p.eq[i].first.transpose(), p.eq[i].second;
    const auto with_rhs = independent_rows(augmented);
    eq_rows = independent_rows(augmented.leftCols(nv));
    if (with_rhs.size() != eq_rows.size()) return result;
  }

  const Eigen::Index nrows = static_cast<Eigen::Index>(eq_rows.size()) + n_le;
  RatMat A = RatMat::Zero(nrows, ncols);
  RatVec B(nrows);
  auto place = [&](Eigen::Index r, const auto& row) {
    for (Eigen::Index j = 0; j < nv; ++j) {
      if (row(j).is_zero()) continue;
      A(r, j) = row(j);
      if (neg_col[static_cast<std::size_t>(j)] >= 0) A(r, neg_col[static_cast<std::size_t>(j)]) = -row(j);
    }
  };
  Eigen::Index r = 0;
  for (int e : eq_rows) {
    place(r, p.eq[static_cast<std::size_t>(e)].first);
    B(r) = p.eq[static_cast<std::size_t>(e)].second;
    ++r;
  }
  for (Eigen::Index i = 0; i < n_le; ++i, ++r) {
    place(r, p.le[static_cast<std::size_t>(i)].first);
    A(r, slack0 + i) = Rat(1);
    B(r) = p.le[static_cast<std::size_t>(i)].second;
  }
  RatVec C = RatVec::Zero(ncols);
  for (Eigen::Index j = 0; j < nv; ++j) {
    C(j) = p.c(j);
    if (neg_col[static_cast<std::size_t>(j)] >= 0) C(neg_col[static_cast<std::size_t>(j)]) = -p.c(j);
  }

  std::optional<RatVec> full = certified_optimum(A, B, C, static_cast<Eigen::Index>(eq_rows.size()), slack0);
  if (!full) {
    detail::TableauSimplex<Rat> simplex(A, B, -1);
    auto run = simplex.solve(C);
    result.status = run.status;
    if (run.status != LpStatus::Optimal) return result;
    full = std::move(run.x);
  }
  result.status = LpStatus::Optimal;
  result.x = RatVec(nv);
  for (Eigen::Index j = 0; j < nv; ++j) {
    result.x(j) = (*full)(j);
    if (neg_col[static_cast<std::size_t>(j)] >= 0) result.x(j) -= (*full)(neg_col[static_cast<std::size_t>(j)]);
  }
  result.value = p.c.dot(result.x);
  return result;
}

}  // namespace plp
