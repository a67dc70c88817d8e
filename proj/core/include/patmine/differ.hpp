#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patmine/digest.hpp"
#include "patmine/normalizer.hpp"
#include "patmine/repo_ingest.hpp"

namespace patmine {

enum class AlignTag { Common, BeforeOnly, AfterOnly };

struct AlignedElement {
  AlignTag tag;
  std::size_t before_index;  // meaningful unless tag == AfterOnly
  std::size_t after_index;   // meaningful unless tag == BeforeOnly

  friend bool operator==(const AlignedElement&, const AlignedElement&) = default;
};

using Alignment = std::vector<AlignedElement>;

// LCS alignment of two digest arrays. Every element of both arrays appears
// exactly once, in order. Ties are broken towards the earliest match in
// `before`: the backtrace prefers Common, then BeforeOnly, then AfterOnly.
// Shared prefixes and suffixes are peeled off before the quadratic table.
[[nodiscard]] Alignment lcs_align(std::span<const Digest> before, std::span<const Digest> after);

[[nodiscard]] std::size_t common_count(const Alignment& alignment);

enum class DeltaKind { Deletion, Addition, Replacement };

[[nodiscard]] std::string_view to_string(DeltaKind kind);
[[nodiscard]] std::optional<DeltaKind> delta_kind_from_string(std::string_view s);

// A contiguous chunk of changed statements in one file of one commit.
struct CodeDelta {
  std::string commit_id;
  std::string path;
  DeltaKind kind = DeltaKind::Replacement;
  std::vector<NormalizedStatement> before;  // empty iff Addition
  std::vector<NormalizedStatement> after;   // empty iff Deletion
  std::optional<LineSpan> before_line_span;
  std::optional<LineSpan> after_line_span;

  friend bool operator==(const CodeDelta&, const CodeDelta&) = default;
};

// Concatenated hex digests of a statement sequence. Empty for no statements.
[[nodiscard]] std::string digest_key(std::span<const NormalizedStatement> statements);
[[nodiscard]] std::string digest_key(std::span<const Digest> digests);

struct DeltaKey {
  std::string before_key;
  std::string after_key;

  [[nodiscard]] static DeltaKey of(const CodeDelta& delta);

  friend auto operator<=>(const DeltaKey&, const DeltaKey&) = default;
};

// Each maximal run of non-common elements between two common anchors (or
// an array end) becomes one delta. Runs never merge across an anchor.
[[nodiscard]] std::vector<CodeDelta> extract_deltas(const Alignment& alignment,
                                                    const NormalizedFile& before_file,
                                                    const NormalizedFile& after_file,
                                                    const CommitRecord& commit);

// lcs_align + extract_deltas on the two files' digest arrays.
[[nodiscard]] std::vector<CodeDelta> diff_files(const NormalizedFile& before_file,
                                                const NormalizedFile& after_file,
                                                const CommitRecord& commit);

}  // namespace patmine
