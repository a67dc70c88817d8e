#include <algorithm>
#include <array>
#include <string>
#include <string_view>

#include "patmine/normalizer.hpp"

namespace patmine {

namespace {

constexpr std::array<std::string_view, 50> kKeywords = {
    "abstract",  "assert",     "boolean",   "break",     "byte",         "case",
    "catch",     "char",       "class",     "const",     "continue",     "default",
    "do",        "double",     "else",      "enum",      "extends",      "final",
    "finally",   "float",      "for",       "goto",      "if",           "implements",
    "import",    "instanceof", "int",       "interface", "long",         "native",
    "new",       "package",    "private",   "protected", "public",       "return",
    "short",     "static",     "strictfp",  "super",     "switch",       "synchronized",
    "this",      "throw",      "throws",    "transient", "try",          "void",
    "volatile",  "while"};

constexpr std::array<std::string_view, 3> kWordLiterals = {"true", "false", "null"};

// Longest first so that greedy matching picks `>>>=` over `>>`.
constexpr std::array<std::string_view, 37> kOperators = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||", "==", "!=",
    "<=",   ">=",  "+=",  "-=",  "*=",  "/=", "&=", "|=", "^=", "%=", "<<", ">>", "=",
    ">",    "<",   "!",   "~",   "?",   ":",  "+",  "-",  "*",  "/",  "&"};
constexpr std::string_view kSeparators = "(){}[];,.@";

bool is_ident_start(char c) {
  auto u = static_cast<unsigned char>(c);
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || u >= 0x80;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_ident_part(char c) { return is_ident_start(c) || is_digit(c); }

class Lexer {
 public:
  Lexer(std::string_view src, Diagnostics* diags) : src_(src), diags_(diags) {}

  std::vector<Token> run() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
        ++pos_;
      } else if (starts_with("//")) {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (starts_with("/*")) {
        block_comment();
      } else if (starts_with("\"\"\"")) {
        text_block();
      } else if (c == '"' || c == '\'') {
        quoted(c);
      } else if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
        number();
      } else if (is_ident_start(c)) {
        word();
      } else {
        punctuation();
      }
    }
    return std::move(tokens_);
  }

 private:
  bool starts_with(std::string_view s) const { return src_.substr(pos_).starts_with(s); }

  void emit(TokenKind kind, std::size_t begin, std::uint32_t line) {
    tokens_.push_back({kind, std::string(src_.substr(begin, pos_ - begin)), line});
  }

  void warn(std::string what, std::uint32_t line) {
    if (diags_) diags_->push_back("line " + std::to_string(line) + ": " + std::move(what));
  }

  void advance_over(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i, ++pos_) {
      if (src_[pos_] == '\n') ++line_;
    }
  }

  void block_comment() {
    auto start_line = line_;
    auto end = src_.find("*/", pos_ + 2);
    if (end == std::string_view::npos) {
      warn("unterminated block comment", start_line);
      advance_over(src_.size() - pos_);
    } else {
      advance_over(end + 2 - pos_);
    }
  }

  void text_block() {
    auto begin = pos_;
    auto start_line = line_;
    advance_over(3);
    while (pos_ < src_.size() && !starts_with("\"\"\"")) {
      advance_over(src_[pos_] == '\\' ? 2 : 1);
    }
    if (pos_ >= src_.size()) {
      warn("unterminated text block", start_line);
    } else {
      advance_over(3);
    }
    emit(TokenKind::Literal, begin, start_line);
  }

  void quoted(char quote) {
    auto begin = pos_;
    auto start_line = line_;
    ++pos_;
    while (pos_ < src_.size() && src_[pos_] != quote) {
      advance_over(src_[pos_] == '\\' ? 2 : 1);
    }
    if (pos_ >= src_.size()) {
      warn(quote == '"' ? "unterminated string literal" : "unterminated char literal",
           start_line);
    } else {
      ++pos_;
    }
    emit(TokenKind::Literal, begin, start_line);
  }

  void number() {
    auto begin = pos_;
    bool hex = starts_with("0x") || starts_with("0X");
    if (hex) pos_ += 2;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      char prev = pos_ > begin ? src_[pos_ - 1] : '\0';
      bool exponent_sign = (c == '+' || c == '-') &&
                           (hex ? (prev == 'p' || prev == 'P') : (prev == 'e' || prev == 'E'));
      if (is_ident_part(c) || exponent_sign) {
        ++pos_;
      } else if (c == '.' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '.') {
        break;
      } else if (c == '.' && src_.substr(begin, pos_ - begin).find('.') == std::string_view::npos) {
        ++pos_;
      } else {
        break;
      }
    }
    emit(TokenKind::Literal, begin, line_);
  }

  void word() {
    auto begin = pos_;
    while (pos_ < src_.size() && is_ident_part(src_[pos_])) ++pos_;
    auto text = src_.substr(begin, pos_ - begin);
    TokenKind kind = TokenKind::Identifier;
    if (std::find(kWordLiterals.begin(), kWordLiterals.end(), text) != kWordLiterals.end()) {
      kind = TokenKind::Literal;
    } else if (std::find(kKeywords.begin(), kKeywords.end(), text) != kKeywords.end()) {
      kind = TokenKind::Keyword;
    }
    emit(kind, begin, line_);
  }

  void punctuation() {
    auto begin = pos_;
    for (auto op : kOperators) {
      if (starts_with(op)) {
        pos_ += op.size();
        auto kind = (op == "..." || op == "::") ? TokenKind::Separator : TokenKind::Operator;
        emit(kind, begin, line_);
        return;
      }
    }
    char c = src_[pos_++];
    // Anything that is not a separator is an operator, including stray
    // characters such as `#` or a backslash.
    emit(kSeparators.find(c) != std::string_view::npos ? TokenKind::Separator
                                                       : TokenKind::Operator,
         begin, line_);
  }

  std::string_view src_;
  Diagnostics* diags_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::vector<Token> tokens_;
};

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier:
      return "identifier";
    case TokenKind::Keyword:
      return "keyword";
    case TokenKind::Literal:
      return "literal";
    case TokenKind::Operator:
      return "operator";
    case TokenKind::Separator:
      return "separator";
  }
  return "unknown";
}

std::vector<Token> tokenize(std::string_view source, Diagnostics* diagnostics) {
  return Lexer(source, diagnostics).run();
}

}  // namespace patmine
