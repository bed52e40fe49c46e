#include "doctest.h"

#include "fixtures.hpp"
#include "plp/concurrent.hpp"

#include <thread>

using namespace plp;
using namespace plp::testing;

namespace {

std::set<Basis> bases_of(const Solution& s) {
  std::set<Basis> out;
  for (const Region& r : s.regions) out.insert(r.basis);
  return out;
}

}  // namespace

TEST_CASE("PublicationArray: concurrent pushes publish a gap-free prefix") {
  for (int rep = 0; rep < 20; ++rep) {
    PublicationArray<std::pair<int, int>> arr;
    constexpr int kWriters = 8;
    constexpr int kEach = 100;
    std::atomic<bool> done{false};
    std::atomic<int> reader_errors{0};

    std::jthread reader([&] {
      std::size_t last = 0;
      while (!done.load()) {
        const std::size_t n = arr.size();
        if (n < last) ++reader_errors;
        for (std::size_t i = last; i < n; ++i)
          if (!arr.peek(i).has_value()) ++reader_errors;
        last = n;
      }
    });
    {
      std::vector<std::jthread> writers;
      for (int w = 0; w < kWriters; ++w)
        writers.emplace_back([&arr, w] {
          for (int j = 0; j < kEach; ++j) arr.push({w, j});
        });
    }
    done = true;
    reader.join();

    CHECK(reader_errors == 0);
    REQUIRE(arr.size() == kWriters * kEach);
    CHECK(arr.reserved() == arr.size());
    std::set<std::pair<int, int>> seen;
    std::vector<int> next(kWriters, 0);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto [w, j] = arr[i];
      seen.insert({w, j});
      // each writer's own pushes appear in program order
      CHECK(j == next[static_cast<std::size_t>(w)]++);
    }
    CHECK(seen.size() == kWriters * kEach);
  }
}

TEST_CASE("PublicationArray: push_with_index and stable references") {
  PublicationArray<std::size_t> arr;
  const std::size_t& first = (arr.push_with_index([](std::size_t i) { return i * 10; }), arr[0]);
  for (int i = 1; i < 5000; ++i) arr.push_with_index([](std::size_t j) { return j * 10; });
  CHECK(&first == &arr[0]);
  for (std::size_t i = 0; i < arr.size(); ++i) CHECK(arr[i] == i * 10);
}

TEST_CASE("BasisTable: exactly one winner per key") {
  BasisTable table;
  constexpr int kThreads = 8;
  constexpr int kKeys = 200;
  std::atomic<int> wins{0};
  {
    std::vector<std::jthread> pool;
    for (int t = 0; t < kThreads; ++t)
      pool.emplace_back([&table, &wins, t] {
        for (int k = 0; k < kKeys; ++k) {
          // same key set, visited in different orders and with unsorted columns
          const int key = (k * (t + 1)) % kKeys;
          Basis b{{key + 1000, key, key % 7 + 2000}};
          if (t % 2) std::swap(b.columns[0], b.columns[2]);
          if (!table.test_and_insert(b)) ++wins;
        }
      });
  }
  CHECK(table.size() == static_cast<std::size_t>(wins.load()));
  CHECK(table.contains(Basis::from({0, 1000, 2000})));
  CHECK(table.contains(Basis{{2000, 1000, 0}}));
  CHECK_FALSE(table.contains(Basis::from({0, 1, 2})));
}

TEST_CASE("scheduler parsing") {
  CHECK(parse_scheduler("seq") == Scheduler::Sequential);
  CHECK(parse_scheduler("static") == Scheduler::Static);
  CHECK(parse_scheduler("dynamic") == Scheduler::Dynamic);
  CHECK_THROWS_AS(parse_scheduler("greedy"), InvalidProblem);
  CHECK(to_string(Scheduler::Dynamic) == "dynamic");
}

TEST_CASE("parallel schedulers agree with the sequential one") {
  const auto plp = polygon_plp();
  const auto seq = solve_sequential(plp, default_seed(plp));
  for (Scheduler sch : {Scheduler::Static, Scheduler::Dynamic}) {
    for (int threads : {1, 2, 4, 8}) {
      CAPTURE(to_string(sch));
      CAPTURE(threads);
      const auto par = solve(plp, default_seed(plp), sch, threads);
      CHECK(bases_of(par) == bases_of(seq));
      CHECK(par.regions.size() == seq.regions.size());
      CHECK(is_spanning_tree(par));
      const auto& st = par.stats;
      CHECK(st.tasks_spawned == st.tasks_completed + st.tasks_aborted_covered + st.tasks_aborted_basis + st.retries);
    }
  }
  CHECK_THROWS_AS(solve(plp, default_seed(plp), Scheduler::Static, 0), InvalidProblem);
  CHECK_THROWS_AS(solve(plp, rat_vec({1}), Scheduler::Dynamic, 2), InvalidProblem);
}

TEST_CASE("parallel projections match the sequential one") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    CAPTURE(seed);
    const Polyhedron p = generate_polyhedron({4, 8, 1.0, seed});
    const Polyhedron ref = project(p, {0});
    for (Scheduler sch : {Scheduler::Static, Scheduler::Dynamic}) {
      Solution sol;
      const Polyhedron q = project(p, {0}, sch, 4, {}, &sol);
      CHECK(equal(q, ref));
      CHECK(is_spanning_tree(sol));
    }
  }
}

TEST_CASE("dynamic schedule covers a facet split between several neighbours") {
  // primal-degenerate instance whose region facets are not matched one to one
  const auto enc = encode_projection(generate_polyhedron({5, 11, 0.8, 13}), {0, 1});
  std::mt19937_64 rng(4242);
  std::vector<RatVec> points;
  for (int i = 0; i < 300; ++i) points.push_back(random_point(rng, enc.plp.params(), 10, 16));
  for (int rep = 0; rep < 10; ++rep) {
    CAPTURE(rep);
    const auto sol = solve(enc.plp, enc.seed(), Scheduler::Dynamic, 4);
    const auto report = check_coverage(enc.plp, sol, points);
    CHECK(report.uncovered == 0);
    CHECK(report.value_mismatch == 0);
  }
}

TEST_CASE("errors inside workers surface to the caller") {
  RatMat a(1, 2);
  a << 1, -1;
  ParametricLP ray(StandardLP(a, rat_vec({0})), {RatVec::Zero(2), rat_vec({1, 0})});
  CHECK_THROWS_AS(solve(ray, rat_vec({1}), Scheduler::Static, 4), UnboundedDirection);
  CHECK_THROWS_AS(solve(ray, rat_vec({1}), Scheduler::Dynamic, 4), UnboundedDirection);
}
