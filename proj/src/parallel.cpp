#include "plp/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <exception>
#include <mutex>
#include <thread>

namespace plp {

Scheduler parse_scheduler(std::string_view name) {
  if (name == "seq") return Scheduler::Sequential;
  if (name == "static") return Scheduler::Static;
  if (name == "dynamic") return Scheduler::Dynamic;
  throw InvalidProblem("unknown scheduler '" + std::string(name) + "'");
}

std::string to_string(Scheduler s) {
  switch (s) {
    case Scheduler::Sequential: return "seq";
    case Scheduler::Static: return "static";
    case Scheduler::Dynamic: return "dynamic";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Task seed_task(const ParametricLP& plp, const RatVec& D0) {
  if (D0.size() != plp.params()) throw InvalidProblem("seed point length mismatch");
  return Task{std::nullopt, std::nullopt, D0};
}

}  // namespace

Solution solve_static(const ParametricLP& plp, const RatVec& D0, int threads, const SolveOptions& options) {
  if (threads < 1) throw InvalidProblem("thread count must be at least 1");
  const auto start = Clock::now();
  SharedState shared(plp, options);
  std::vector<Task> round{seed_task(plp, D0)};
  shared.counters.spawned.fetch_add(1);

  while (!round.empty()) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), round.size());
    std::vector<std::vector<Task>> produced(workers);
    std::vector<std::exception_ptr> errors(workers);
    std::atomic<std::size_t> next{0};

    auto drain = [&](std::size_t w) {
      for (std::size_t i; (i = next.fetch_add(1)) < round.size();) {
        try {
          auto more = process_task(round[i], shared);
          std::move(more.begin(), more.end(), std::back_inserter(produced[w]));
        } catch (...) {
          if (!errors[w]) errors[w] = std::current_exception();
        }
      }
    };
    if (workers == 1) {
      drain(0);
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(drain, w);
    }
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);

    round.clear();
    for (auto& batch : produced) std::move(batch.begin(), batch.end(), std::back_inserter(round));
  }
  return shared.collect(elapsed_ms(start));
}

namespace {

class WorkPool {
 public:
  explicit WorkPool(SharedState& shared) : shared_(shared) {}

  void push(Task t) {
    std::lock_guard lock(mutex_);
    tasks_.push_back(std::move(t));
    ++in_flight_;
  }

  void work() {
    for (;;) {
      Task task;
      {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return failed_ || !tasks_.empty() || in_flight_ == 0; });
        if (failed_ || tasks_.empty()) return;
        task = std::move(tasks_.back());
        tasks_.pop_back();
      }
      if (task.retries > 0) {
        // the owner of this basis has not published yet
        std::this_thread::sleep_for(std::chrono::microseconds(1L << std::min(task.retries, 14)));
      }
      try {
        auto more = process_task(task, shared_);
        std::lock_guard lock(mutex_);
        for (auto& t : more) {
          if (t.retries > task.retries)
            tasks_.push_front(std::move(t));
          else
            tasks_.push_back(std::move(t));
        }
        in_flight_ += more.size();
        --in_flight_;
      } catch (...) {
        std::lock_guard lock(mutex_);
        if (!error_) error_ = std::current_exception();
        failed_ = true;
        --in_flight_;
      }
      cv_.notify_all();
    }
  }

  void rethrow_if_failed() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  SharedState& shared_;
  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<Task> tasks_;  // back: LIFO end; front: retries wait here
  std::size_t in_flight_ = 0;  // queued plus running
  bool failed_ = false;
  std::exception_ptr error_;
};

}  // namespace

Solution solve_dynamic(const ParametricLP& plp, const RatVec& D0, int threads, const SolveOptions& options) {
  if (threads < 1) throw InvalidProblem("thread count must be at least 1");
  const auto start = Clock::now();
  SharedState shared(plp, options);
  WorkPool pool(shared);
  pool.push(seed_task(plp, D0));
  shared.counters.spawned.fetch_add(1);
  {
    std::vector<std::jthread> workers;
    workers.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) workers.emplace_back([&pool] { pool.work(); });
  }
  pool.rethrow_if_failed();
  return shared.collect(elapsed_ms(start));
}

Solution solve(const ParametricLP& plp, const RatVec& D0, Scheduler scheduler, int threads,
               const SolveOptions& options) {
  switch (scheduler) {
    case Scheduler::Sequential: return solve_sequential(plp, D0, options);
    case Scheduler::Static: return solve_static(plp, D0, threads, options);
    case Scheduler::Dynamic: return solve_dynamic(plp, D0, threads, options);
  }
  throw InvalidProblem("unknown scheduler");
}

}  // namespace plp
