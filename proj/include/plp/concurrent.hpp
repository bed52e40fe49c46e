#pragma once

#include "plp/lp.hpp"

#include <array>
#include <atomic>
#include <bit>
#include <cstddef>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_set>

namespace plp {

/// Append-only array with ordered publication.
///
/// Writers reserve a slot with a fetch-and-increment on the fill counter,
/// write it, wait for every earlier slot to be published and then advance the
/// ready counter with release semantics. Readers that observe `size() > i`
/// therefore see slot i fully written. Storage grows in doubling chunks that
/// never move, so published references stay valid.
template <class T>
class PublicationArray {
 public:
  PublicationArray() {
    for (auto& c : chunks_) c.store(nullptr, std::memory_order_relaxed);
  }
  ~PublicationArray() {
    for (std::size_t c = 0; c < kChunks; ++c) delete[] chunks_[c].load(std::memory_order_relaxed);
  }
  PublicationArray(const PublicationArray&) = delete;
  PublicationArray& operator=(const PublicationArray&) = delete;

  /// Returns the slot index assigned to `value`.
  std::size_t push(T value) {
    const std::size_t i = fill_.fetch_add(1, std::memory_order_acq_rel);
    slot(i).emplace(std::move(value));
    wait_for_turn(i);
    ready_.store(i + 1, std::memory_order_release);
    ready_.notify_all();
    return i;
  }

  /// Emplaces a value built from its own slot index.
  template <class Make>
  std::size_t push_with_index(Make&& make) {
    const std::size_t i = fill_.fetch_add(1, std::memory_order_acq_rel);
    slot(i).emplace(make(i));
    wait_for_turn(i);
    ready_.store(i + 1, std::memory_order_release);
    ready_.notify_all();
    return i;
  }

  /// Length of the published prefix; monotonically nondecreasing.
  [[nodiscard]] std::size_t size() const noexcept { return ready_.load(std::memory_order_acquire); }
  [[nodiscard]] std::size_t reserved() const noexcept { return fill_.load(std::memory_order_acquire); }

  /// Valid for i < size().
  [[nodiscard]] const T& operator[](std::size_t i) const { return *peek(i); }

  /// Raw slot view for tests; empty optional means not yet written.
  [[nodiscard]] const std::optional<T>& peek(std::size_t i) const {
    const auto [c, off] = locate(i);
    return chunks_[c].load(std::memory_order_acquire)[off];
  }

 private:
  static constexpr std::size_t kFirstChunk = 64;
  static constexpr std::size_t kChunks = 40;

  static std::pair<std::size_t, std::size_t> locate(std::size_t i) {
    const std::size_t q = i / kFirstChunk + 1;
    const std::size_t c = static_cast<std::size_t>(std::bit_width(q)) - 1;
    return {c, i - kFirstChunk * ((std::size_t{1} << c) - 1)};
  }

  std::optional<T>& slot(std::size_t i) {
    const auto [c, off] = locate(i);
    std::optional<T>* chunk = chunks_[c].load(std::memory_order_acquire);
    if (chunk == nullptr) {
      auto* fresh = new std::optional<T>[kFirstChunk << c];
      if (chunks_[c].compare_exchange_strong(chunk, fresh, std::memory_order_acq_rel)) {
        chunk = fresh;
      } else {
        delete[] fresh;
      }
    }
    return chunk[off];
  }

  void wait_for_turn(std::size_t i) {
    for (int spin = 0; spin < 64; ++spin) {
      if (ready_.load(std::memory_order_acquire) == i) return;
    }
    for (int spin = 0; spin < 64; ++spin) {
      if (ready_.load(std::memory_order_acquire) == i) return;
      std::this_thread::yield();
    }
    for (std::size_t cur = ready_.load(std::memory_order_acquire); cur != i;
         cur = ready_.load(std::memory_order_acquire))
      ready_.wait(cur, std::memory_order_acquire);
  }

  std::array<std::atomic<std::optional<T>*>, kChunks> chunks_;
  std::atomic<std::size_t> fill_{0};
  std::atomic<std::size_t> ready_{0};
};

/// Grow-only set of bases with an atomic test-and-insert.
class BasisTable {
 public:
  /// True iff `basis` was already present; otherwise inserts it.
  bool test_and_insert(const Basis& basis);
  [[nodiscard]] bool contains(const Basis& basis) const;
  [[nodiscard]] std::size_t size() const;

 private:
  static constexpr std::size_t kShards = 16;
  struct Shard {
    mutable std::mutex mutex;
    std::unordered_set<Basis, BasisHash> keys;
  };
  std::array<Shard, kShards> shards_;
};

}  // namespace plp
