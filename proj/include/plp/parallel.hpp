#pragma once

#include "plp/parametric.hpp"

#include <string>
#include <string_view>

namespace plp {

enum class Scheduler { Sequential, Static, Dynamic };

Scheduler parse_scheduler(std::string_view name);
std::string to_string(Scheduler s);

/// Round-based: every task of the current round runs, then the tasks they
/// spawned form the next round.
Solution solve_static(const ParametricLP& plp, const RatVec& D0, int threads, const SolveOptions& options = {});

/// Shared work pool; spawned tasks are available to idle workers at once.
/// Terminates when the pool is empty and no task is in flight.
Solution solve_dynamic(const ParametricLP& plp, const RatVec& D0, int threads, const SolveOptions& options = {});

Solution solve(const ParametricLP& plp, const RatVec& D0, Scheduler scheduler, int threads,
               const SolveOptions& options = {});

}  // namespace plp
