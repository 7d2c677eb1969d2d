#include "ncck/partitions.hpp"

#include <algorithm>

namespace ncck {

std::size_t NcPartition::size() const {
  std::size_t s = 0;
  for (const auto& b : blocks) s += b.size();
  return s;
}

std::uint64_t catalan(std::size_t m) {
  std::uint64_t c = 1;
  for (std::size_t i = 0; i < m; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

namespace {

using Blocks = std::vector<std::vector<std::size_t>>;

// Non-crossing partitions of the interval [lo, hi] (1-based, inclusive).
// When pairs_only, every block has exactly two elements.
void generate(std::size_t lo, std::size_t hi, bool pairs_only, Blocks& acc, std::vector<Blocks>& out);

// Continue the partition after fixing `block` inside [lo, hi]: the gaps
// between consecutive elements and the tail after the last one are partitioned
// independently.
void fill_gaps(const std::vector<std::size_t>& block, std::size_t gap_index, std::size_t hi, bool pairs_only,
               Blocks& acc, std::vector<Blocks>& out) {
  if (gap_index == block.size()) {
    out.push_back(acc);
    return;
  }
  std::size_t from = block[gap_index] + 1;
  std::size_t to = gap_index + 1 < block.size() ? block[gap_index + 1] - 1 : hi;
  std::vector<Blocks> sub;
  Blocks empty;
  generate(from, to, pairs_only, empty, sub);
  for (const auto& s : sub) {
    std::size_t mark = acc.size();
    acc.insert(acc.end(), s.begin(), s.end());
    fill_gaps(block, gap_index + 1, hi, pairs_only, acc, out);
    acc.resize(mark);
  }
}

void choose_block(std::size_t next, std::size_t hi, bool pairs_only, std::vector<std::size_t>& block, Blocks& acc,
                  std::vector<Blocks>& out) {
  if (!pairs_only || block.size() == 2) {
    acc.push_back(block);
    fill_gaps(block, 0, hi, pairs_only, acc, out);
    acc.pop_back();
    if (pairs_only) return;
  }
  for (std::size_t e = next; e <= hi; ++e) {
    block.push_back(e);
    choose_block(e + 1, hi, pairs_only, block, acc, out);
    block.pop_back();
  }
}

void generate(std::size_t lo, std::size_t hi, bool pairs_only, Blocks& acc, std::vector<Blocks>& out) {
  if (lo > hi) {
    out.push_back(acc);
    return;
  }
  std::vector<std::size_t> block{lo};
  choose_block(lo + 1, hi, pairs_only, block, acc, out);
}

NcPartition normalize(Blocks b) {
  for (auto& blk : b) std::sort(blk.begin(), blk.end());
  std::sort(b.begin(), b.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });
  return NcPartition{std::move(b)};
}

}  // namespace

std::vector<NcPartition> noncrossing_partitions(std::size_t m) {
  std::vector<Blocks> raw;
  Blocks acc;
  generate(1, m, false, acc, raw);
  std::vector<NcPartition> out;
  out.reserve(raw.size());
  for (auto& b : raw) out.push_back(normalize(std::move(b)));
  return out;
}

std::vector<NcPartition> noncrossing_pairings(std::size_t m) {
  if (m % 2 == 1) return {};
  std::vector<Blocks> raw;
  Blocks acc;
  generate(1, m, true, acc, raw);
  std::vector<NcPartition> out;
  out.reserve(raw.size());
  for (auto& b : raw) out.push_back(normalize(std::move(b)));
  return out;
}

bool is_noncrossing(const NcPartition& p) {
  std::vector<std::size_t> owner(p.size() + 1, 0);
  for (std::size_t b = 0; b < p.blocks.size(); ++b)
    for (std::size_t e : p.blocks[b]) owner[e] = b;
  const std::size_t m = p.size();
  for (std::size_t a = 1; a <= m; ++a)
    for (std::size_t b = a + 1; b <= m; ++b)
      for (std::size_t c = b + 1; c <= m; ++c)
        for (std::size_t d = c + 1; d <= m; ++d)
          if (owner[a] == owner[c] && owner[b] == owner[d] && owner[a] != owner[b]) return false;
  return true;
}

}  // namespace ncck
