#include "doctest.h"

#include "fixtures.hpp"

#include <random>

using namespace plp;
using namespace plp::testing;

namespace {

AffineForm form(std::initializer_list<Rat> coeffs, Rat constant = 0) { return AffineForm{rat_vec(coeffs), constant}; }

Region region_of(std::vector<AffineForm> constraints, RatVec seed, int id = 0) {
  Region r;
  r.id = id;
  r.constraints = std::move(constraints);
  r.seed = std::move(seed);
  return r;
}

// Mutual inclusion of two regions given as constraint lists, decided with
// exact LPs over the inequality systems.
bool same_set(const std::vector<AffineForm>& a, const std::vector<AffineForm>& b) {
  auto as_poly = [](const std::vector<AffineForm>& forms) {
    const Eigen::Index k = forms.front().coeffs.size();
    RatMat A(static_cast<Eigen::Index>(forms.size()), k);
    RatVec rhs(static_cast<Eigen::Index>(forms.size()));
    for (std::size_t i = 0; i < forms.size(); ++i) {
      A.row(static_cast<Eigen::Index>(i)) = forms[i].coeffs.transpose();
      rhs(static_cast<Eigen::Index>(i)) = -forms[i].constant;
    }
    return Polyhedron(A, rhs);
  };
  return equal(as_poly(a), as_poly(b));
}

}  // namespace

TEST_CASE("ParametricLP validation") {
  CHECK_THROWS_AS(ParametricLP(polygon_lp(), {RatVec::Zero(4)}), InvalidProblem);
  CHECK_THROWS_AS(ParametricLP(polygon_lp(), {RatVec::Zero(4), RatVec::Zero(3)}), InvalidProblem);
}

TEST_CASE("instantiate_objective") {
  const auto plp = polygon_plp();
  CHECK(instantiate_objective(plp, rat_vec({1, 1})) == rat_vec({1, 1, 0, 0}));
  CHECK(instantiate_objective(plp, rat_vec({0, 0})) == plp.objectives[0]);
  CHECK(instantiate_objective(plp, rat_vec({0, 1})) == RatVec(plp.objectives[0] + plp.objectives[2]));
  CHECK_THROWS_AS(instantiate_objective(plp, rat_vec({1})), InvalidProblem);
}

TEST_CASE("sign_conditions") {
  const auto plp = polygon_plp();
  SUBCASE("basis {x1,x2} gives the two-facet cone") {
    const auto forms = sign_conditions(plp, Basis::from({0, 1}));
    REQUIRE(forms.size() == 2);
    CHECK(forms[0] == form({Rat(-3, 8), Rat(-1, 8)}));
    CHECK(forms[1] == form({Rat(-1, 8), Rat(-3, 8)}));
    // 3μ1 + μ2 ≥ 0 and μ1 + 3μ2 ≥ 0
    CHECK(same_set(forms, {form({-3, -1}), form({-1, -3})}));
  }
  SUBCASE("origin vertex") {
    const auto forms = sign_conditions(plp, Basis::from({2, 3}));
    REQUIRE(forms.size() == 2);
    CHECK(forms[0] == form({1, 0}));
    CHECK(forms[1] == form({0, 1}));
  }
  SUBCASE("parameters without influence give constant forms") {
    ParametricLP flat(polygon_lp(), {rat_vec({1, 1, 0, 0}), RatVec::Zero(4), RatVec::Zero(4)});
    for (const auto& f : sign_conditions(flat, Basis::from({0, 1}))) CHECK(max_abs(f.coeffs).is_zero());
  }
}

TEST_CASE("eliminate_redundancy") {
  SUBCASE("duplicates collapse") {
    const auto r = eliminate_redundancy({form({-1, 0}), form({-1, 0})});
    REQUIRE(r.kept.size() == 1);
    CHECK(r.kept[0] == form({-1, 0}));
    CHECK(r.kept[0](r.witness[0]).sign() > 0);
  }
  SUBCASE("implied constraint removed") {
    const auto r = eliminate_redundancy({form({-1, 0}), form({0, -1}), form({-1, -1})});
    REQUIRE(r.kept.size() == 2);
    CHECK(r.kept_index == std::vector<std::size_t>{0, 1});
  }
  SUBCASE("positive multiples are duplicates") {
    const auto r = eliminate_redundancy({form({-2, 0}, 2), form({-1, 0}, 1), form({0, 1})});
    CHECK(r.kept.size() == 2);
  }
  SUBCASE("cone of the worked example keeps both facets") {
    const auto forms = sign_conditions(polygon_plp(), Basis::from({0, 1}));
    const auto r = eliminate_redundancy(forms);
    CHECK(r.kept.size() == 2);
  }
  SUBCASE("witnesses violate exactly their own constraint") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<AffineForm> forms;
      // all forms strictly satisfied at the origin, so the interior is nonempty
      for (int i = 0; i < 6; ++i) {
        RatVec c = random_point(rng, 3, 4, 1);
        if (max_abs(c).is_zero()) c(0) = 1;
        forms.push_back(AffineForm{c, Rat(-1 - static_cast<int>(rng() % 5))});
      }
      const auto r = eliminate_redundancy(forms, Rat(100));
      for (std::size_t i = 0; i < r.kept.size(); ++i) {
        CHECK(r.kept[i](r.witness[i]).sign() > 0);
        for (std::size_t j = 0; j < r.kept.size(); ++j)
          if (j != i) CHECK(r.kept[j](r.witness[i]).sign() < 0);
      }
      // same set inside the box: sample and compare membership
      for (int s = 0; s < 50; ++s) {
        const RatVec p = random_point(rng, 3, 20, 4);
        const bool all = std::all_of(forms.begin(), forms.end(), [&](const AffineForm& f) { return f(p).sign() <= 0; });
        const bool kept = std::all_of(r.kept.begin(), r.kept.end(), [&](const AffineForm& f) { return f(p).sign() <= 0; });
        CHECK(all == kept);
      }
    }
  }
  SUBCASE("empty interior") {
    CHECK_THROWS_AS(eliminate_redundancy({form({1, 0}), form({-1, 0})}), EmptyInterior);
    CHECK_THROWS_AS(eliminate_redundancy({form({0, 0}, 1)}), EmptyInterior);
    CHECK(eliminate_redundancy({form({0, 0}, -1)}).kept.empty());
  }
}

TEST_CASE("compute_next") {
  SUBCASE("cone facet 3μ1 + μ2 = 0") {
    const auto forms = sign_conditions(polygon_plp(), Basis::from({0, 1}));
    const Region r = region_of(forms, rat_vec({1, 1}));
    const auto probe = compute_next(r, 0);
    const RatVec& x = probe.crossing;
    CHECK(Rat(3) * x(0) + x(1) == 0);
    CHECK(x(0) < 0);  // the facet ray is t(-1, 3)
    CHECK(r.contains(x));
    CHECK(Rat(3) * probe.next(0) + probe.next(1) < 0);
    CHECK(abs(probe.next(0)) <= Rat(1000000));
    CHECK(abs(probe.next(1)) <= Rat(1000000));
  }
  SUBCASE("half line") {
    const Region r = region_of({form({1})}, rat_vec({-1}));
    const auto probe = compute_next(r, 0);
    CHECK(probe.crossing == rat_vec({0}));
    CHECK(probe.next == rat_vec({Rat(1, 1024)}));
  }
  SUBCASE("unit square") {
    const Region r = region_of({form({-1, 0}), form({1, 0}, -1), form({0, -1}), form({0, 1}, -1)}, rat_vec({Rat(1, 2), Rat(1, 2)}));
    const auto probe = compute_next(r, 1);
    CHECK(probe.crossing == rat_vec({1, Rat(1, 2)}));
    CHECK(probe.next == rat_vec({1 + Rat(1, 1024), Rat(1, 2)}));
  }
  SUBCASE("restricted to a piece of the facet") {
    const Region r = region_of({form({-1, 0}), form({1, 0}, -1), form({0, -1}), form({0, 1}, -1)}, rat_vec({Rat(1, 2), Rat(1, 2)}));
    const std::vector<AffineForm> upper{form({0, -1}, Rat(1, 2))};  // μ2 ≥ 1/2
    const auto probe = compute_next(r, 1, {}, upper);
    CHECK(probe.crossing == rat_vec({1, Rat(3, 4)}));
    const std::vector<AffineForm> corner{form({0, -1}, 1)};  // μ2 ≥ 1 touches the facet in a point
    CHECK_THROWS_AS(compute_next(r, 1, {}, corner), DegenerateFacet);
  }
  SUBCASE("degenerate facet") {
    // μ1 ≤ 0 and μ1 ≥ 0 leave no relative interior where the others are strict
    const Region r = region_of({form({1, 0}), form({-1, 0}), form({0, 1})}, rat_vec({0, -1}));
    CHECK_THROWS_AS(compute_next(r, 2), DegenerateFacet);
    CHECK_THROWS_AS(compute_next(r, 7), InvalidProblem);
  }
}

TEST_CASE("is_covered, are_adjacent and midpoint") {
  RegionStore store;
  CHECK(is_covered(rat_vec({0, 0}), store) == nullptr);

  store.push(region_of({form({1, 0})}, rat_vec({-1, 0}), 0));  // μ1 ≤ 0
  store.push(region_of({form({-1, 0})}, rat_vec({1, 0}), 1));  // μ1 ≥ 0
  CHECK(is_covered(rat_vec({-1, 0}), store)->id == 0);
  CHECK(is_covered(rat_vec({1, 5}), store)->id == 1);
  CHECK(is_covered(rat_vec({0, 3}), store)->id == 0);  // shared boundary: first in scan order

  const Region beyond = region_of({form({-1, 0}, 2)}, rat_vec({3, 0}));  // μ1 ≥ 2
  CHECK_FALSE(are_adjacent(rat_vec({0, 0}), beyond));
  CHECK(are_adjacent(rat_vec({2, 7}), beyond));
  CHECK(midpoint(rat_vec({0, 0}), rat_vec({4, 0}), beyond) == rat_vec({1, 0}));

  const Region diag = region_of({form({-1, -1}, 1)}, rat_vec({1, 1}));  // μ1 + μ2 ≥ 1
  CHECK(midpoint(rat_vec({0, 0}), rat_vec({1, 1}), diag) == rat_vec({Rat(1, 4), Rat(1, 4)}));
  CHECK_THROWS_AS(midpoint(rat_vec({2, 0}), rat_vec({4, 0}), beyond), NoGap);

  SUBCASE("neighbouring vertex cones share a ray") {
    const auto plp = polygon_plp();
    const Region top = region_of(sign_conditions(plp, Basis::from({0, 1})), rat_vec({1, 1}));
    const Region right = region_of(sign_conditions(plp, Basis::from({0, 3})), rat_vec({1, -1}));
    const RatVec on_ray = rat_vec({3, -1});
    CHECK(top.contains(on_ray));
    CHECK(are_adjacent(on_ray, right));
  }
}

TEST_CASE("process_task") {
  const auto plp = polygon_plp();
  SharedState shared(plp, {});
  const auto spawned = process_task(Task{std::nullopt, std::nullopt, rat_vec({1, 1})}, shared);
  REQUIRE(shared.regions.size() == 1);
  const Region& r = shared.regions[0];
  CHECK(r.basis == Basis::from({0, 1}));
  CHECK(r.optimum == rat_vec({3, 3, 0, 0}));
  CHECK(same_set(r.constraints, {form({-3, -1}), form({-1, -3})}));
  CHECK(spawned.size() == 2);
  for (const Task& t : spawned) {
    CHECK(t.from_region == 0);
    CHECK_FALSE(r.contains(t.point));
    CHECK(r.contains(*t.crossing));
  }

  SUBCASE("covered and adjacent probe is a no-op") {
    Task t{0, rat_vec({1, 1}), rat_vec({2, 2})};
    CHECK(process_task(t, shared).empty());
    CHECK(shared.regions.size() == 1);
    CHECK(shared.counters.aborted_covered == 1);
  }
}

TEST_CASE("midpoint repair finds a skipped region") {
  // left region μ ≤ -1; a probe from its facet lands in μ ≥ 1, skipping [-1, 1]
  const auto plp = diamond_plp();
  SharedState shared(plp, {});
  process_task(Task{std::nullopt, std::nullopt, rat_vec({-5})}, shared);
  REQUIRE(shared.regions.size() == 1);
  const auto spawned = process_task(Task{0, rat_vec({-1}), rat_vec({5})}, shared);
  REQUIRE(shared.regions.size() == 2);
  const Task* repair = nullptr;
  for (const Task& t : spawned)
    if (t.depth == 1) repair = &t;
  REQUIRE(repair != nullptr);
  CHECK(repair->point == rat_vec({0}));
  process_task(*repair, shared);
  REQUIRE(shared.regions.size() == 3);
  CHECK(shared.regions[2].contains(rat_vec({0})));
  CHECK(shared.regions[2].parent == ParentEdge{0, -1});
}

TEST_CASE("solve_sequential") {
  SUBCASE("polygon normal fan") {
    const auto plp = polygon_plp();
    const auto s = solve_sequential(plp, default_seed(plp));
    CHECK(s.regions.size() == 4);
    CHECK(s.stats.tasks_completed == 4);
    CHECK(s.stats.tasks_spawned ==
          s.stats.tasks_completed + s.stats.tasks_aborted_covered + s.stats.tasks_aborted_basis + s.stats.retries);
    CHECK(is_spanning_tree(s));
    std::set<Basis> bases;
    for (const Region& r : s.regions) {
      CHECK(r.contains(r.seed));
      CHECK(r.optimum == exact_point(plp.lp, r.basis));
      bases.insert(r.basis);
    }
    CHECK(bases.size() == 4);
    std::vector<RatVec> dirs;
    for (int a : {-1, 0, 1})
      for (int b : {-1, 0, 1})
        if (a || b) dirs.push_back(rat_vec({a, b}));
    const auto rep = check_coverage(plp, s, dirs);
    CHECK(rep.uncovered == 0);
    CHECK(rep.value_mismatch == 0);
  }
  SUBCASE("covering, value consistency and quasi-partition on 1000 points") {
    const auto plp = polygon_plp();
    const auto s = solve_sequential(plp, default_seed(plp));
    std::mt19937_64 rng(99);
    std::vector<RatVec> pts;
    for (int i = 0; i < 1000; ++i) pts.push_back(random_point(rng, 2, 1000));
    const auto rep = check_coverage(plp, s, pts, true);
    CHECK(rep.uncovered == 0);
    CHECK(rep.value_mismatch == 0);
    CHECK(rep.interior_overlaps == 0);
  }
  SUBCASE("three strips") {
    const auto plp = diamond_plp();
    const auto s = solve_sequential(plp, rat_vec({5}));
    CHECK(s.regions.size() == 3);
    CHECK(is_spanning_tree(s));
  }
  SUBCASE("single region") {
    ParametricLP one(StandardLP(RatMat::Identity(1, 1), rat_vec({1})), {rat_vec({1}), rat_vec({0})});
    const auto s = solve_sequential(one, rat_vec({1}));
    CHECK(s.regions.size() == 1);
    CHECK(s.stats.tasks_completed == 1);
    CHECK(s.stats.tasks_spawned == 1);
  }
  SUBCASE("unbounded direction is an error") {
    RatMat a(1, 2);
    a << 1, -1;
    ParametricLP ray(StandardLP(a, rat_vec({0})), {RatVec::Zero(2), rat_vec({1, 0})});
    CHECK_THROWS_AS(solve_sequential(ray, rat_vec({1})), UnboundedDirection);
  }
}

TEST_CASE("floating-point screen never rejects a containing region") {
  std::mt19937_64 rng(8);
  int rejected = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<AffineForm> forms;
    for (int i = 0; i < 5; ++i) forms.push_back(AffineForm{random_point(rng, 3, 5, 3), Rat(-1)});
    Region r = region_of(forms, RatVec::Zero(3));
    r.prepare_screen();
    for (int s = 0; s < 50; ++s) {
      // points on or near the boundary are the interesting ones
      RatVec p = random_point(rng, 3, 3, 7);
      if (s % 2 == 0) {
        const AffineForm& f = forms[static_cast<std::size_t>(s) % forms.size()];
        const Eigen::Index j = (f.coeffs(0) != 0) ? 0 : (f.coeffs(1) != 0 ? 1 : 2);
        if (f.coeffs(j) != 0) p(j) -= f(p) / f.coeffs(j);  // now exactly on f = 0
      }
      const bool outside = r.certainly_outside(to_float(p));
      if (outside) {
        ++rejected;
        CHECK_FALSE(r.contains(p));
      }
    }
  }
  CHECK(rejected > 0);
  Region bare = region_of({form({1, 0})}, rat_vec({-1, 0}));
  CHECK_FALSE(bare.certainly_outside(to_float(rat_vec({5, 0}))));  // no screen: undecided
}
