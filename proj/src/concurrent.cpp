#include "plp/concurrent.hpp"

#include <algorithm>

namespace plp {

namespace {

Basis normalized(const Basis& basis) {
  if (std::is_sorted(basis.columns.begin(), basis.columns.end())) return basis;
  return Basis::from(basis.columns);
}

}  // namespace

bool BasisTable::test_and_insert(const Basis& basis) {
  Basis key = normalized(basis);
  Shard& shard = shards_[BasisHash{}(key) % kShards];
  std::lock_guard lock(shard.mutex);
  return !shard.keys.insert(std::move(key)).second;
}

bool BasisTable::contains(const Basis& basis) const {
  const Basis key = normalized(basis);
  const Shard& shard = shards_[BasisHash{}(key) % kShards];
  std::lock_guard lock(shard.mutex);
  return shard.keys.count(key) != 0;
}

std::size_t BasisTable::size() const {
  std::size_t total = 0;
  for (const Shard& s : shards_) {
    std::lock_guard lock(s.mutex);
    total += s.keys.size();
  }
  return total;
}

}  // namespace plp
