#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "semq/error.hpp"
#include "semq/rdf.hpp"

namespace semq::detail {

// Character cursor with 1-based line/column tracking, shared by the
// N-Triples, Turtle and SPARQL readers. All failures throw semq::Error with
// a ParseDiagnostic.
class Scanner {
 public:
  explicit Scanner(std::string_view text, std::size_t first_line = 1)
      : text_(text), line_(first_line) {}

  struct Mark {
    std::size_t pos, line, column;
  };

  bool at_end() const noexcept { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const noexcept {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  Mark mark() const noexcept { return {pos_, line_, column_}; }

  char get() {
    if (at_end()) fail("unexpected end of input");
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  bool consume(char c) {
    if (peek() != c || at_end()) return false;
    get();
    return true;
  }

  void expect(char c, std::string_view what) {
    if (!consume(c)) fail("expected " + std::string(what));
  }

  // Case-insensitive keyword match that does not run into a following name
  // character.
  bool consume_keyword(std::string_view keyword) {
    if (text_.size() - pos_ < keyword.size()) return false;
    for (std::size_t i = 0; i < keyword.size(); ++i) {
      const char a = text_[pos_ + i];
      const char b = keyword[i];
      if (to_lower(a) != to_lower(b)) return false;
    }
    const char next = peek(keyword.size());
    if (is_alnum(next) || next == '_' || next == ':' || next == '-')
      return false;
    for (std::size_t i = 0; i < keyword.size(); ++i) get();
    return true;
  }

  void skip_space(bool allow_newlines, bool allow_comments) {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' ||
          (allow_newlines && c == '\n')) {
        get();
      } else if (allow_comments && c == '#') {
        while (!at_end() && peek() != '\n') get();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& message,
                         Errc code = Errc::Syntax) const {
    fail_at(mark(), message, code);
  }

  [[noreturn]] static void fail_at(const Mark& at, const std::string& message,
                                   Errc code = Errc::Syntax) {
    throw Error(code, ParseDiagnostic{at.line, at.column, message,
                                      ParseDiagnostic::Severity::error});
  }

  // '<' iri '>' ; the IRI text is validated by make_iri.
  Iri read_iriref() {
    const Mark start = mark();
    expect('<', "'<'");
    std::string value;
    while (!at_end() && peek() != '>' && peek() != '\n') value += get();
    if (!consume('>')) fail("unterminated IRI");
    try {
      return make_iri(value);
    } catch (const Error& e) {
      fail_at(start, e.what(), e.code());
    }
  }

  // '"' chars '"' with \" \\ \n \t \r escapes.
  std::string read_quoted() {
    expect('"', "'\"'");
    std::string value;
    for (;;) {
      if (at_end() || peek() == '\n') fail("unterminated string literal");
      const char c = get();
      if (c == '"') break;
      if (c != '\\') {
        value += c;
        continue;
      }
      if (at_end()) fail("unterminated escape sequence");
      const Mark esc = mark();
      switch (get()) {
        case '"': value += '"'; break;
        case '\\': value += '\\'; break;
        case 'n': value += '\n'; break;
        case 't': value += '\t'; break;
        case 'r': value += '\r'; break;
        default: fail_at(esc, "unsupported escape sequence");
      }
    }
    return value;
  }

  // After '@'.
  std::string read_language_tag() {
    const Mark start = mark();
    std::string tag;
    while (is_alnum(peek()) || peek() == '-') tag += get();
    if (!valid_language_tag(tag)) fail_at(start, "invalid language tag");
    return tag;
  }

  // '_:' label
  BlankNode read_blank_node() {
    const Mark start = mark();
    expect('_', "'_:'");
    expect(':', "':' after '_'");
    std::string label;
    while (is_alnum(peek()) || peek() == '_' || peek() == '-' ||
           peek() == '.')
      label += get();
    // A trailing '.' terminates the statement, not the label.
    while (!label.empty() && label.back() == '.') {
      label.pop_back();
      unget_dot();
    }
    if (!valid_blank_label(label)) fail_at(start, "invalid blank node label");
    return BlankNode(label);
  }

  // prefix ':' local, both possibly empty; trailing dots are left unread.
  std::string read_prefixed_name() {
    std::string name;
    while (is_name_char(peek())) name += get();
    if (!consume(':')) fail("expected ':' in prefixed name");
    name += ':';
    while (is_name_char(peek()) || peek() == '.') name += get();
    while (name.back() == '.') {
      name.pop_back();
      unget_dot();
    }
    return name;
  }

  static constexpr bool is_name_char(char c) {
    return is_alnum(c) || c == '_' || c == '-';
  }

 private:
  static constexpr char to_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  }

  // Only ever called right after reading a '.' on the same line.
  void unget_dot() {
    --pos_;
    --column_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace semq::detail
