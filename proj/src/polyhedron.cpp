#include "plp/polyhedron.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace plp {

Polyhedron::Polyhedron(RatMat A, RatVec b) : a_(std::move(A)), b_(std::move(b)) {
  if (a_.rows() != b_.size()) throw InvalidProblem("polyhedron: row count differs from right-hand side length");
}

Polyhedron::Polyhedron(int nvars) : a_(0, nvars), b_(0) {}

Polyhedron Polyhedron::with_row(const RatVec& a, const Rat& rhs) const {
  if (a.size() != nvars()) throw InvalidProblem("polyhedron: row length mismatch");
  RatMat A(rows() + 1, nvars());
  A << a_, a.transpose();
  RatVec b(rows() + 1);
  b << b_, rhs;
  return Polyhedron(std::move(A), std::move(b));
}

bool Polyhedron::contains(const RatVec& x) const {
  for (Eigen::Index i = 0; i < a_.rows(); ++i)
    if (a_.row(i).dot(x.transpose()) > b_(i)) return false;
  return true;
}

RatVec ProjectionEncoding::seed() const { return context.interior(context.kept); }

namespace {

Rat one_norm(const RatVec& v) {
  Rat s(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) s += abs(v(i));
  return s;
}

Polyhedron from_rows(int nvars, const std::vector<std::pair<RatVec, Rat>>& rows) {
  RatMat A(static_cast<Eigen::Index>(rows.size()), nvars);
  RatVec b(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    A.row(static_cast<Eigen::Index>(i)) = rows[i].first.transpose();
    b(static_cast<Eigen::Index>(i)) = rows[i].second;
  }
  return Polyhedron(std::move(A), std::move(b));
}

// Row scaled so its largest coefficient magnitude is one; the key for
// positive-multiple duplicate detection.
std::pair<RatVec, Rat> scaled_row(const RatVec& a, const Rat& b) {
  const Rat s = Rat(1) / max_abs(a);
  return {a * s, b * s};
}

// Positive multiple with coprime integer entries.
std::pair<RatVec, Rat> primitive_row(const RatVec& a, const Rat& b) {
  mpz_class lcm = b.den();
  for (Eigen::Index i = 0; i < a.size(); ++i) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), a(i).den().get_mpz_t());
  mpz_class gcd = (b * Rat(lcm, mpz_class(1))).num();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const mpz_class n = (a(i) * Rat(lcm, mpz_class(1))).num();
    mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), n.get_mpz_t());
  }
  const Rat s = Rat(lcm, mpz_class(abs(gcd)));
  return {a * s, b * s};
}

struct RowLess {
  bool operator()(const std::pair<RatVec, Rat>& x, const std::pair<RatVec, Rat>& y) const {
    for (Eigen::Index i = 0; i < x.first.size(); ++i) {
      if (x.first(i) != y.first(i)) return x.first(i) < y.first(i);
    }
    return x.second < y.second;
  }
};

std::vector<int> complement(int n, const std::vector<int>& idx) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (std::find(idx.begin(), idx.end(), i) == idx.end()) out.push_back(i);
  return out;
}

std::vector<int> checked_elimination_set(const Polyhedron& P, const std::vector<int>& eliminated) {
  std::vector<int> e = eliminated;
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  if (e.empty()) throw InvalidProblem("projection: nothing to eliminate");
  if (e.front() < 0 || e.back() >= P.nvars()) throw InvalidProblem("projection: variable index out of range");
  if (static_cast<int>(e.size()) >= P.nvars()) throw InvalidProblem("projection: must keep at least one variable");
  return e;
}

}  // namespace

RatVec interior_point(const Polyhedron& P) {
  const int n = P.nvars();
  InequalityLP lp(n + 1);
  lp.nonneg[static_cast<std::size_t>(n)] = true;
  lp.c(n) = Rat(1);
  for (int i = 0; i < P.rows(); ++i) {
    const RatVec a = P.A().row(i).transpose();
    const Rat norm = one_norm(a);
    if (norm.is_zero()) {
      if (P.b()(i).sign() <= 0) throw EmptyOrFlat();
      continue;
    }
    RatVec row(n + 1);
    row.head(n) = a;
    row(n) = norm;
    lp.add_le(row, P.b()(i));
  }
  RatVec cap = RatVec::Zero(n + 1);
  cap(n) = Rat(1);
  lp.add_le(cap, Rat(1));
  const auto r = solve_inequality_lp(lp);
  if (r.status != LpStatus::Optimal || r.value.sign() <= 0) throw EmptyOrFlat();
  return r.x.head(n);
}

ProjectionEncoding encode_projection(const Polyhedron& P, const std::vector<int>& eliminated) {
  ProjectionContext ctx;
  ctx.eliminated = checked_elimination_set(P, eliminated);
  ctx.kept = complement(P.nvars(), ctx.eliminated);
  ctx.interior = interior_point(P);
  ctx.kept_columns = P.A()(Eigen::all, ctx.kept);
  ctx.b = P.b();

  const Eigen::Index m = P.rows();
  // λ^T A_e = 0 for each eliminated column, λ^T (b - A x̊) = 1
  RatMat elim = P.A()(Eigen::all, ctx.eliminated).transpose();
  const std::vector<int> independent = independent_rows(elim);
  RatMat rows(static_cast<Eigen::Index>(independent.size()) + 1, m);
  for (std::size_t r = 0; r < independent.size(); ++r) rows.row(static_cast<Eigen::Index>(r)) = elim.row(independent[r]);
  const RatVec slack = P.b() - P.A() * ctx.interior;
  rows.row(rows.rows() - 1) = slack.transpose();
  if (static_cast<Eigen::Index>(independent_rows(rows).size()) != rows.rows()) throw InfeasibleParametricLP();
  RatVec rhs = RatVec::Zero(rows.rows());
  rhs(rhs.size() - 1) = Rat(1);

  std::vector<RatVec> objectives;
  objectives.push_back(-P.b());
  for (int k : ctx.kept) objectives.push_back(P.A().col(k));
  return ProjectionEncoding{ParametricLP(StandardLP(std::move(rows), std::move(rhs)), std::move(objectives)),
                            std::move(ctx)};
}

Polyhedron extract_projection(const Solution& solution, const ProjectionContext& ctx) {
  const int k = static_cast<int>(ctx.kept.size());
  std::set<std::pair<RatVec, Rat>, RowLess> seen;
  std::vector<std::pair<RatVec, Rat>> rows;
  for (const Region& region : solution.regions) {
    const RatVec a = ctx.kept_columns.transpose() * region.optimum;
    const Rat b = ctx.b.dot(region.optimum);
    if (max_abs(a).is_zero()) continue;  // 0 ≤ b, implied
    if (!seen.insert(scaled_row(a, b)).second) continue;
    rows.push_back(primitive_row(a, b));
  }
  return from_rows(k, rows);
}

Polyhedron project(const Polyhedron& P, const std::vector<int>& eliminated, Scheduler scheduler, int threads,
                   const SolveOptions& options, Solution* solution_out) {
  const auto elim = checked_elimination_set(P, eliminated);
  const int kept = P.nvars() - static_cast<int>(elim.size());
  if (P.rows() == 0) return Polyhedron(kept);
  try {
    const ProjectionEncoding enc = encode_projection(P, elim);
    Solution solution = solve(enc.plp, enc.seed(), scheduler, threads, options);
    Polyhedron out = extract_projection(solution, enc.context);
    if (solution_out) *solution_out = std::move(solution);
    return out;
  } catch (const InfeasibleParametricLP&) {
    return Polyhedron(kept);
  }
}

Polyhedron remove_redundant_rows(const Polyhedron& P) {
  const int n = P.nvars();
  std::set<std::pair<RatVec, Rat>, RowLess> seen;
  std::vector<std::pair<RatVec, Rat>> rows;
  for (int i = 0; i < P.rows(); ++i) {
    const RatVec a = P.A().row(i).transpose();
    if (max_abs(a).is_zero()) {
      if (P.b()(i).sign() < 0) rows.emplace_back(a, P.b()(i));  // keeps emptiness visible
      continue;
    }
    if (!seen.insert(scaled_row(a, P.b()(i))).second) continue;
    rows.emplace_back(a, P.b()(i));
  }

  // Row i is implied iff some λ ≥ 0 over the other active rows has
  // λ^T A = a_i and λ^T b ≤ b_i.
  std::vector<bool> active(rows.size(), true);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < rows.size(); ++j)
      if (j != i && active[j]) others.push_back(j);
    if (others.empty()) continue;
    InequalityLP dual(static_cast<Eigen::Index>(others.size()));
    std::fill(dual.nonneg.begin(), dual.nonneg.end(), true);
    for (std::size_t t = 0; t < others.size(); ++t) dual.c(static_cast<Eigen::Index>(t)) = -rows[others[t]].second;
    for (int c = 0; c < n; ++c) {
      RatVec eq(static_cast<Eigen::Index>(others.size()));
      for (std::size_t t = 0; t < others.size(); ++t) eq(static_cast<Eigen::Index>(t)) = rows[others[t]].first(c);
      dual.add_eq(eq, rows[i].first(c));
    }
    const auto r = solve_inequality_lp(dual);
    if (r.status == LpStatus::Unbounded || (r.status == LpStatus::Optimal && -r.value <= rows[i].second))
      active[i] = false;
  }
  std::vector<std::pair<RatVec, Rat>> kept;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (active[i]) kept.push_back(std::move(rows[i]));
  return from_rows(n, kept);
}

Polyhedron fourier_motzkin(const Polyhedron& P, const std::vector<int>& eliminated, std::size_t row_limit) {
  const auto elim = checked_elimination_set(P, eliminated);
  std::vector<int> columns(static_cast<std::size_t>(P.nvars()));
  for (int i = 0; i < P.nvars(); ++i) columns[static_cast<std::size_t>(i)] = i;
  Polyhedron cur = P;

  for (int var : elim) {
    const auto pos_it = std::find(columns.begin(), columns.end(), var);
    const Eigen::Index col = pos_it - columns.begin();
    std::vector<Eigen::Index> pos, neg;
    std::vector<std::pair<RatVec, Rat>> next;
    const Eigen::Index width = cur.nvars() - 1;
    auto drop_column = [&](const RatVec& a) {
      RatVec out(width);
      out << a.head(col), a.tail(width - col);
      return out;
    };
    for (Eigen::Index i = 0; i < cur.rows(); ++i) {
      const int s = cur.A()(i, col).sign();
      if (s > 0)
        pos.push_back(i);
      else if (s < 0)
        neg.push_back(i);
      else
        next.emplace_back(drop_column(cur.A().row(i).transpose()), cur.b()(i));
    }
    if (next.size() + pos.size() * neg.size() > row_limit) throw SizeLimit();
    for (Eigen::Index p : pos) {
      for (Eigen::Index q : neg) {
        const Rat wp = -cur.A()(q, col);
        const Rat wq = cur.A()(p, col);
        const RatVec a = cur.A().row(p).transpose() * wp + cur.A().row(q).transpose() * wq;
        next.emplace_back(drop_column(a), cur.b()(p) * wp + cur.b()(q) * wq);
      }
    }
    columns.erase(pos_it);
    cur = remove_redundant_rows(from_rows(static_cast<int>(width), next));
  }
  return cur;
}

bool includes(const Polyhedron& P, const Polyhedron& Q) {
  if (P.nvars() != Q.nvars()) throw InvalidProblem("includes: dimension mismatch");
  for (int i = 0; i < Q.rows(); ++i) {
    InequalityLP lp(P.nvars());
    lp.c = Q.A().row(i).transpose();
    for (int r = 0; r < P.rows(); ++r) lp.add_le(P.A().row(r).transpose(), P.b()(r));
    const auto res = solve_inequality_lp(lp);
    if (res.status == LpStatus::Infeasible) return true;
    if (res.status == LpStatus::Unbounded) return false;
    if (res.value > Q.b()(i)) return false;
  }
  return true;
}

bool equal(const Polyhedron& P, const Polyhedron& Q) { return includes(P, Q) && includes(Q, P); }

Polyhedron generate_polyhedron(const GeneratorParams& params) {
  if (params.nvars < 1 || params.nrows <= params.nvars)
    throw InvalidProblem("generator: need nrows > nvars >= 1 for a bounded polyhedron");
  std::mt19937_64 rng(params.seed);
  const int range = std::max(1, params.coefficient_range);
  std::uniform_int_distribution<int> coef(-range, range);
  std::uniform_int_distribution<int> centre(-3, 3);
  std::uniform_int_distribution<int> offset(1, 2 * range);
  std::uniform_int_distribution<int> column(0, params.nvars - 1);
  std::bernoulli_distribution nonzero(std::clamp(params.density, 0.0, 1.0));

  for (;;) {
    RatVec c(params.nvars);
    for (int j = 0; j < params.nvars; ++j) c(j) = centre(rng);
    RatMat A = RatMat::Zero(params.nrows, params.nvars);
    RatVec b(params.nrows);
    for (int i = 0; i < params.nrows; ++i) {
      for (int j = 0; j < params.nvars; ++j)
        if (nonzero(rng)) A(i, j) = coef(rng);
      while (max_abs(RatVec(A.row(i).transpose())).is_zero()) A(i, column(rng)) = coef(rng);
      b(i) = A.row(i).dot(c.transpose()) + Rat(offset(rng));
    }
    Polyhedron P(A, b);
    bool bounded = true;
    for (int j = 0; j < params.nvars && bounded; ++j) {
      for (int s : {1, -1}) {
        InequalityLP lp(params.nvars);
        lp.c(j) = Rat(s);
        for (int r = 0; r < P.rows(); ++r) lp.add_le(P.A().row(r).transpose(), P.b()(r));
        if (solve_inequality_lp(lp).status != LpStatus::Optimal) {
          bounded = false;
          break;
        }
      }
    }
    if (bounded) return P;
  }
}

}  // namespace plp
