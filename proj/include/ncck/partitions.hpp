#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ncck {

/// A set partition of {1..m}. Blocks are sorted internally and ordered by
/// their smallest element.
struct NcPartition {
  std::vector<std::vector<std::size_t>> blocks;

  std::size_t size() const;
  friend bool operator==(const NcPartition&, const NcPartition&) = default;
};

std::uint64_t catalan(std::size_t m);

/// All non-crossing partitions of {1..m}, generated by choosing the block
/// of the first element and recursing into the gaps it leaves.
std::vector<NcPartition> noncrossing_partitions(std::size_t m);

/// Non-crossing partitions whose blocks all have size two. Empty for odd m.
std::vector<NcPartition> noncrossing_pairings(std::size_t m);

bool is_noncrossing(const NcPartition& p);

}  // namespace ncck
