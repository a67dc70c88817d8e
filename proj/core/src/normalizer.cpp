#include "patmine/normalizer.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

namespace patmine {

namespace {

constexpr std::array<std::string_view, 3> kVisibility = {"public", "protected", "private"};
constexpr std::array<std::string_view, 8> kPrimitiveTypes = {
    "int", "long", "short", "byte", "char", "float", "double", "boolean"};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& set, std::string_view s) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

bool is_boundary(const Token& t) {
  return t.kind == TokenKind::Separator && (t.text == ";" || t.text == "{" || t.text == "}");
}

}  // namespace

std::vector<Digest> NormalizedFile::digests() const {
  std::vector<Digest> out;
  out.reserve(statements.size());
  for (const auto& s : statements) out.push_back(s.digest);
  return out;
}

std::vector<std::vector<Token>> segment_statements(std::span<const Token> tokens) {
  std::vector<std::vector<Token>> groups;
  std::vector<Token> current;
  for (const auto& t : tokens) {
    current.push_back(t);
    if (is_boundary(t)) {
      groups.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) groups.push_back(std::move(current));
  return groups;
}

std::string normalize_statement(std::span<const Token> group) {
  std::unordered_map<std::string_view, std::size_t> numbering;
  std::string out;
  auto append = [&out](std::string_view piece) {
    if (!out.empty()) out.push_back(' ');
    out.append(piece);
  };
  for (std::size_t i = 0; i < group.size(); ++i) {
    const auto& t = group[i];
    switch (t.kind) {
      case TokenKind::Keyword:
        if (contains(kVisibility, t.text)) break;
        append(contains(kPrimitiveTypes, t.text) ? std::string_view("T") : t.text);
        break;
      case TokenKind::Literal:
        append("L");
        break;
      case TokenKind::Identifier: {
        bool method_name = i + 1 < group.size() && group[i + 1].text == "(" &&
                           group[i + 1].kind == TokenKind::Separator;
        if (method_name) {
          append(t.text);
        } else {
          auto [it, inserted] = numbering.try_emplace(t.text, numbering.size());
          append("V" + std::to_string(it->second));
        }
        break;
      }
      case TokenKind::Operator:
      case TokenKind::Separator:
        append(t.text);
        break;
    }
  }
  return out;
}

std::string raw_statement(std::span<const Token> group) {
  std::string out;
  for (const auto& t : group) {
    if (!out.empty()) out.push_back(' ');
    out += t.text;
  }
  return out;
}

NormalizedFile abstract_file(std::string_view source, std::string path,
                             const AbstractionOptions& options, Diagnostics* diagnostics) {
  NormalizedFile file{std::move(path), {}};
  auto tokens = tokenize(source, diagnostics);
  for (const auto& group : segment_statements(tokens)) {
    auto text = options.normalize ? normalize_statement(group) : raw_statement(group);
    if (text.empty()) continue;  // a group of only visibility modifiers
    auto [lo, hi] = std::minmax_element(group.begin(), group.end(),
                                        [](const Token& a, const Token& b) { return a.line < b.line; });
    auto digest = md5(text);
    file.statements.push_back({std::move(text), digest, {lo->line, hi->line}});
  }
  return file;
}

}  // namespace patmine
