#pragma once

#include <algorithm>
#include <ranges>
#include <string>
#include <string_view>
#include <vector>

#include "semq/detail/scanner.hpp"
#include "semq/error.hpp"
#include "semq/rdf.hpp"

namespace semq {

namespace detail {

inline Term read_nt_subject(Scanner& in) {
  switch (in.peek()) {
    case '<': return in.read_iriref();
    case '_': return in.read_blank_node();
    case '"': in.fail("literal in subject position", Errc::LiteralSubject);
    default: in.fail("expected subject");
  }
}

inline Term read_nt_predicate(Scanner& in) {
  if (in.peek() == '<') return in.read_iriref();
  if (in.at_end() || in.peek() == '.') in.fail("expected predicate");
  in.fail("predicate must be an IRI", Errc::NonIriPredicate);
}

// Literal suffix shared by both readers; the datatype reader differs.
template <typename ReadDatatype>
Term read_literal(Scanner& in, ReadDatatype&& read_datatype) {
  std::string lexical = in.read_quoted();
  if (in.consume('@')) return Literal::tagged(std::move(lexical), in.read_language_tag());
  if (in.peek() == '^' && in.peek(1) == '^') {
    in.get();
    in.get();
    return Literal::typed(std::move(lexical), read_datatype());
  }
  return Literal(std::move(lexical));
}

inline Term read_nt_object(Scanner& in) {
  switch (in.peek()) {
    case '<': return in.read_iriref();
    case '_': return in.read_blank_node();
    case '"': return read_literal(in, [&] { return in.read_iriref(); });
    default: in.fail("expected object");
  }
}

}  // namespace detail

/// Parses an N-Triples document. One triple per non-blank, non-comment line,
/// in document order, duplicates kept. Stops at the first malformed line.
inline std::vector<Triple> parse_ntriples(std::string_view input) {
  std::vector<Triple> triples;
  std::size_t line_no = 0;
  while (!input.empty()) {
    ++line_no;
    const auto eol = input.find('\n');
    std::string_view line = input.substr(0, eol);
    input = eol == std::string_view::npos ? std::string_view{} : input.substr(eol + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    detail::Scanner in(line, line_no);
    in.skip_space(false, false);
    if (in.at_end() || in.peek() == '#') continue;

    Term s = detail::read_nt_subject(in);
    in.skip_space(false, false);
    Term p = detail::read_nt_predicate(in);
    in.skip_space(false, false);
    Term o = detail::read_nt_object(in);
    in.skip_space(false, false);
    in.expect('.', "'.' at end of triple");
    in.skip_space(false, true);
    if (!in.at_end()) in.fail("unexpected content after triple");
    triples.emplace_back(std::move(s), std::move(p), std::move(o));
  }
  return triples;
}

namespace detail {

class TurtleReader {
 public:
  explicit TurtleReader(std::string_view text) : in_(text) {}

  std::vector<Triple> run() {
    for (;;) {
      skip();
      if (in_.at_end()) break;
      if (in_.peek() == '@') {
        const auto at = in_.mark();
        in_.get();
        if (!in_.consume_keyword("prefix")) Scanner::fail_at(at, "unsupported directive");
        read_prefix_body();
        skip();
        in_.expect('.', "'.' after @prefix");
      } else if (in_.consume_keyword("prefix")) {
        read_prefix_body();
      } else {
        read_statement();
      }
    }
    return std::move(triples_);
  }

 private:
  void skip() { in_.skip_space(true, true); }

  void read_prefix_body() {
    skip();
    std::string prefix;
    while (Scanner::is_name_char(in_.peek())) prefix += in_.get();
    in_.expect(':', "':' after prefix name");
    skip();
    prefixes_.bind(std::move(prefix), in_.read_iriref());
  }

  Iri read_qname() {
    const auto at = in_.mark();
    const std::string qname = in_.read_prefixed_name();
    try {
      return expand_qname(prefixes_, qname);
    } catch (const Error& e) {
      Scanner::fail_at(at, e.what(), e.code());
    }
  }

  Iri read_iri() { return in_.peek() == '<' ? in_.read_iriref() : read_qname(); }

  bool at_name_start() const {
    return Scanner::is_name_char(in_.peek()) || in_.peek() == ':';
  }

  Term read_subject() {
    if (in_.peek() == '_' && in_.peek(1) == ':') return in_.read_blank_node();
    if (in_.peek() == '"') in_.fail("literal in subject position", Errc::LiteralSubject);
    if (in_.peek() == '<' || at_name_start()) return read_iri();
    in_.fail("expected subject");
  }

  Term read_predicate() {
    if (in_.peek() == 'a' && !Scanner::is_name_char(in_.peek(1)) && in_.peek(1) != ':') {
      in_.get();
      return rdf_type();
    }
    const bool blank = in_.peek() == '_' && in_.peek(1) == ':';
    if (!blank && (in_.peek() == '<' || at_name_start())) return read_iri();
    if (blank || in_.peek() == '"')
      in_.fail("predicate must be an IRI", Errc::NonIriPredicate);
    in_.fail("expected predicate");
  }

  Term read_object() {
    if (in_.peek() == '"') return read_literal(in_, [&] { return read_iri(); });
    if (in_.peek() == '_' && in_.peek(1) == ':') return in_.read_blank_node();
    if (in_.peek() == '<' || at_name_start()) return read_iri();
    in_.fail("expected object");
  }

  void read_statement() {
    Term subject = read_subject();
    for (;;) {
      skip();
      Term predicate = read_predicate();
      for (;;) {
        skip();
        triples_.emplace_back(subject, predicate, read_object());
        skip();
        if (!in_.consume(',')) break;
      }
      if (!in_.consume(';')) break;
      skip();
      // A dangling ';' before '.' is allowed.
      if (in_.peek() == '.') break;
    }
    skip();
    in_.expect('.', "'.' at end of statement");
  }

  Scanner in_;
  PrefixMap prefixes_;
  std::vector<Triple> triples_;
};

}  // namespace detail

/// Parses the Turtle subset: @prefix / PREFIX, prefixed names, `a`, the ';'
/// and ',' abbreviations, IRIs, blank node labels and quoted literals.
inline std::vector<Triple> parse_turtle_subset(std::string_view input) {
  return detail::TurtleReader(input).run();
}

/// Canonical N-Triples: one LF-terminated line per distinct triple, sorted
/// by the rendered (subject, predicate, object) texts.
template <std::ranges::input_range R>
  requires std::convertible_to<std::ranges::range_reference_t<R>, const Triple&>
std::string serialize_ntriples(const R& triples) {
  std::vector<const Triple*> sorted;
  for (const Triple& t : triples) sorted.push_back(&t);
  std::sort(sorted.begin(), sorted.end(),
            [](const Triple* a, const Triple* b) { return *a < *b; });
  sorted.erase(std::unique(sorted.begin(), sorted.end(),
                           [](const Triple* a, const Triple* b) { return *a == *b; }),
               sorted.end());
  std::string out;
  for (const Triple* t : sorted) {
    out += t->str();
    out += '\n';
  }
  return out;
}

}  // namespace semq
