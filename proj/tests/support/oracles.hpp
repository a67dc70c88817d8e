#pragma once

// Reference implementations that share no code with the library paths they
// check. Exponential or quadratic on purpose; only for small inputs.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "patmine/digest.hpp"

namespace patmine::testing {

// Longest common subsequence length by enumerating every subsequence of
// `a` (2^|a| candidates) and testing it against `b`.
inline std::size_t exhaustive_lcs_length(std::span<const Digest> a, std::span<const Digest> b) {
  std::size_t best = 0;
  const std::uint32_t subsets = 1u << a.size();
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    std::size_t len = static_cast<std::size_t>(__builtin_popcount(mask));
    if (len <= best) continue;
    std::size_t j = 0;
    bool ok = true;
    for (std::size_t i = 0; i < a.size() && ok; ++i) {
      if (!(mask & (1u << i))) continue;
      while (j < b.size() && !(b[j] == a[i])) ++j;
      if (j == b.size()) ok = false;
      else ++j;
    }
    if (ok) best = len;
  }
  return best;
}

// Number of start positions where `needle` occurs contiguously in `hay`.
inline std::size_t naive_occurrences(std::span<const Digest> hay, std::span<const Digest> needle) {
  if (needle.empty() || needle.size() > hay.size()) return 0;
  std::size_t count = 0;
  for (std::size_t start = 0; start + needle.size() <= hay.size(); ++start) {
    bool equal = true;
    for (std::size_t k = 0; k < needle.size(); ++k) {
      if (!(hay[start + k] == needle[k])) {
        equal = false;
        break;
      }
    }
    if (equal) ++count;
  }
  return count;
}

// Digest of a single symbol of a small alphabet.
inline Digest symbol(int s) {
  Digest d;
  d.bytes[15] = static_cast<std::uint8_t>(s + 1);
  return d;
}

inline std::vector<Digest> random_digests(std::mt19937& rng, std::size_t max_len, int alphabet,
                                          std::size_t min_len = 0) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<int> sym(0, alphabet - 1);
  std::vector<Digest> out(len(rng));
  for (auto& d : out) d = symbol(sym(rng));
  return out;
}

}  // namespace patmine::testing
