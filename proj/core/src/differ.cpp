#include "patmine/differ.hpp"

#include <algorithm>
#include <cstdint>

namespace patmine {

namespace {

template <typename Cell>
void align_middle(std::span<const Digest> a, std::span<const Digest> b, std::size_t a_off,
                  std::size_t b_off, Alignment& out) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t width = m + 1;
  // table[i * width + j] = LCS length of a[i..] and b[j..]
  std::vector<Cell> table((n + 1) * width, 0);
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      table[i * width + j] =
          a[i] == b[j] ? static_cast<Cell>(table[(i + 1) * width + j + 1] + 1)
                       : std::max(table[(i + 1) * width + j], table[i * width + j + 1]);
    }
  }
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (a[i] == b[j] && table[i * width + j] == table[(i + 1) * width + j + 1] + 1) {
      out.push_back({AlignTag::Common, a_off + i++, b_off + j++});
    } else if (table[(i + 1) * width + j] >= table[i * width + j + 1]) {
      out.push_back({AlignTag::BeforeOnly, a_off + i++, 0});
    } else {
      out.push_back({AlignTag::AfterOnly, 0, b_off + j++});
    }
  }
  while (i < n) out.push_back({AlignTag::BeforeOnly, a_off + i++, 0});
  while (j < m) out.push_back({AlignTag::AfterOnly, 0, b_off + j++});
}

LineSpan span_of(std::span<const NormalizedStatement> statements) {
  return {statements.front().line_span.first, statements.back().line_span.last};
}

}  // namespace

Alignment lcs_align(std::span<const Digest> before, std::span<const Digest> after) {
  Alignment out;
  out.reserve(std::max(before.size(), after.size()));

  std::size_t prefix = 0;
  while (prefix < before.size() && prefix < after.size() && before[prefix] == after[prefix]) {
    out.push_back({AlignTag::Common, prefix, prefix});
    ++prefix;
  }
  std::size_t suffix = 0;
  while (suffix < before.size() - prefix && suffix < after.size() - prefix &&
         before[before.size() - 1 - suffix] == after[after.size() - 1 - suffix]) {
    ++suffix;
  }

  auto mid_a = before.subspan(prefix, before.size() - prefix - suffix);
  auto mid_b = after.subspan(prefix, after.size() - prefix - suffix);
  if (std::min(mid_a.size(), mid_b.size()) < UINT16_MAX) {
    align_middle<std::uint16_t>(mid_a, mid_b, prefix, prefix, out);
  } else {
    align_middle<std::uint32_t>(mid_a, mid_b, prefix, prefix, out);
  }

  for (std::size_t k = suffix; k > 0; --k) {
    out.push_back({AlignTag::Common, before.size() - k, after.size() - k});
  }
  return out;
}

std::size_t common_count(const Alignment& alignment) {
  return static_cast<std::size_t>(std::count_if(
      alignment.begin(), alignment.end(),
      [](const AlignedElement& e) { return e.tag == AlignTag::Common; }));
}

std::string_view to_string(DeltaKind kind) {
  switch (kind) {
    case DeltaKind::Deletion:
      return "deletion";
    case DeltaKind::Addition:
      return "addition";
    case DeltaKind::Replacement:
      return "replacement";
  }
  return "unknown";
}

std::optional<DeltaKind> delta_kind_from_string(std::string_view s) {
  if (s == "deletion") return DeltaKind::Deletion;
  if (s == "addition") return DeltaKind::Addition;
  if (s == "replacement") return DeltaKind::Replacement;
  return std::nullopt;
}

std::string digest_key(std::span<const NormalizedStatement> statements) {
  std::string key;
  key.reserve(statements.size() * 32);
  for (const auto& s : statements) key += s.digest.hex();
  return key;
}

std::string digest_key(std::span<const Digest> digests) {
  std::string key;
  key.reserve(digests.size() * 32);
  for (const auto& d : digests) key += d.hex();
  return key;
}

DeltaKey DeltaKey::of(const CodeDelta& delta) {
  return {digest_key(delta.before), digest_key(delta.after)};
}

std::vector<CodeDelta> extract_deltas(const Alignment& alignment,
                                      const NormalizedFile& before_file,
                                      const NormalizedFile& after_file,
                                      const CommitRecord& commit) {
  std::vector<CodeDelta> deltas;
  std::vector<NormalizedStatement> removed, added;

  auto flush = [&] {
    if (removed.empty() && added.empty()) return;
    CodeDelta d;
    d.commit_id = commit.id;
    d.path = after_file.path.empty() ? before_file.path : after_file.path;
    d.kind = removed.empty() ? DeltaKind::Addition
             : added.empty() ? DeltaKind::Deletion
                             : DeltaKind::Replacement;
    if (!removed.empty()) d.before_line_span = span_of(removed);
    if (!added.empty()) d.after_line_span = span_of(added);
    d.before = std::move(removed);
    d.after = std::move(added);
    removed.clear();
    added.clear();
    deltas.push_back(std::move(d));
  };

  for (const auto& e : alignment) {
    switch (e.tag) {
      case AlignTag::Common:
        flush();
        break;
      case AlignTag::BeforeOnly:
        removed.push_back(before_file.statements.at(e.before_index));
        break;
      case AlignTag::AfterOnly:
        added.push_back(after_file.statements.at(e.after_index));
        break;
    }
  }
  flush();
  return deltas;
}

std::vector<CodeDelta> diff_files(const NormalizedFile& before_file,
                                  const NormalizedFile& after_file, const CommitRecord& commit) {
  auto a = before_file.digests();
  auto b = after_file.digests();
  return extract_deltas(lcs_align(a, b), before_file, after_file, commit);
}

}  // namespace patmine
