#pragma once

// Shared fixtures and independent checks for the test binaries.

#include "plp/parametric.hpp"
#include "plp/polyhedron.hpp"

#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace plp::testing {

/// 3x1 - x2 + x3 = 6, -x1 + 3x2 + x4 = 6: the quadrilateral with vertices
/// (0,0), (2,0), (3,3), (0,2) in slack form.
inline StandardLP polygon_lp() {
  RatMat A(2, 4);
  A << 3, -1, 1, 0,
      -1, 3, 0, 1;
  return StandardLP(A, rat_vec({6, 6}));
}

/// max μ1 x1 + μ2 x2 over the polygon.
inline ParametricLP polygon_plp() {
  return ParametricLP(polygon_lp(), {RatVec::Zero(4), rat_vec({1, 0, 0, 0}), rat_vec({0, 1, 0, 0})});
}

inline Polyhedron polygon_poly() {
  RatMat A(4, 2);
  A << -1, 0,
       0, -1,
       3, -1,
      -1, 3;
  return Polyhedron(A, rat_vec({0, 0, 6, 6}));
}

/// max μ y1 + y2 over the diamond |y1 - 1| + |y2 - 1| ≤ 1: regions
/// (-inf,-1], [-1,1], [1,inf).
inline ParametricLP diamond_plp() {
  RatMat A(4, 6);
  A << 1, 1, 1, 0, 0, 0,
      -1, 1, 0, 1, 0, 0,
       1, -1, 0, 0, 1, 0,
      -1, -1, 0, 0, 0, 1;
  StandardLP lp(A, rat_vec({3, 1, 1, -1}));
  return ParametricLP(lp, {rat_vec({0, 1, 0, 0, 0, 0}), rat_vec({1, 0, 0, 0, 0, 0})});
}

inline Polyhedron box_poly(int n, const Rat& lo, const Rat& hi) {
  RatMat A = RatMat::Zero(2 * n, n);
  RatVec b(2 * n);
  for (int i = 0; i < n; ++i) {
    A(2 * i, i) = 1;
    b(2 * i) = hi;
    A(2 * i + 1, i) = -1;
    b(2 * i + 1) = -lo;
  }
  return Polyhedron(A, b);
}

/// Unit cube cut by x + y + z ≤ 3/2.
inline Polyhedron cut_cube() {
  Polyhedron p = box_poly(3, 0, 1);
  return p.with_row(rat_vec({1, 1, 1}), Rat(3, 2));
}

inline RatVec random_point(std::mt19937_64& rng, int k, int range, int den = 16) {
  std::uniform_int_distribution<int> d(-range * den, range * den);
  RatVec p(k);
  for (int i = 0; i < k; ++i) p(i) = Rat(d(rng), den);
  return p;
}

/// Parent edges form a tree over all regions.
inline bool is_spanning_tree(const Solution& s) {
  const std::size_t n = s.regions.size();
  if (n == 0) return false;
  std::size_t roots = 0;
  for (const Region& r : s.regions) {
    if (!r.parent) {
      ++roots;
      continue;
    }
    if (r.parent->region < 0 || static_cast<std::size_t>(r.parent->region) >= n) return false;
  }
  if (roots != 1) return false;
  // every region reaches the root without revisiting
  for (const Region& r : s.regions) {
    std::set<int> seen;
    const Region* cur = &r;
    while (cur->parent) {
      if (!seen.insert(cur->id).second) return false;
      cur = &s.regions[static_cast<std::size_t>(cur->parent->region)];
    }
  }
  return true;
}

/// Exact optimum of the instantiated LP, independent of the region machinery.
inline std::optional<Rat> direct_value(const ParametricLP& plp, const RatVec& mu) {
  const auto r = exact_simplex(plp.lp, instantiate_objective(plp, mu));
  if (!r.outcome.optimal()) return std::nullopt;
  return instantiate_objective(plp, mu).dot(r.optimum);
}

/// Every covering region yields the directly computed optimum.
struct CoverageReport {
  int uncovered = 0;
  int value_mismatch = 0;
  int interior_overlaps = 0;
};

inline CoverageReport check_coverage(const ParametricLP& plp, const Solution& s, const std::vector<RatVec>& points,
                                     bool check_overlap = false) {
  CoverageReport rep;
  for (const RatVec& mu : points) {
    const auto expect = direct_value(plp, mu);
    bool covered = false;
    int interior_hits = 0;
    for (const Region& r : s.regions) {
      if (!r.contains(mu)) continue;
      covered = true;
      if (expect && region_value(plp, r, mu) != *expect) ++rep.value_mismatch;
      if (check_overlap && r.contains_interior(mu)) ++interior_hits;
    }
    if (expect && !covered) ++rep.uncovered;
    if (interior_hits > 1) ++rep.interior_overlaps;
  }
  return rep;
}

}  // namespace plp::testing
