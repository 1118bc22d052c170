#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "semq/error.hpp"

namespace semq {

namespace vocab {
inline constexpr std::string_view rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view rdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view owl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view xsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view foaf = "http://xmlns.com/foaf/0.1/";
}  // namespace vocab

namespace detail {

constexpr bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}
constexpr bool is_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
constexpr bool is_digit(char c) { return c >= '0' && c <= '9'; }
constexpr bool is_alnum(char c) { return is_alpha(c) || is_digit(c); }

// Characters the N-Triples IRIREF production cannot carry.
constexpr bool is_forbidden_in_iri(char c) {
  const auto u = static_cast<unsigned char>(c);
  if (u < 0x20) return true;
  switch (c) {
    case '<': case '>': case '"': case '{': case '}':
    case '|': case '^': case '`': case '\\':
      return true;
    default:
      return false;
  }
}

inline bool valid_scheme(std::string_view scheme) {
  if (scheme.empty() || !is_alpha(scheme.front())) return false;
  return std::all_of(scheme.begin(), scheme.end(), [](char c) {
    return is_alnum(c) || c == '+' || c == '-' || c == '.';
  });
}

inline bool valid_language_tag(std::string_view tag) {
  if (tag.empty()) return false;
  std::size_t part_len = 0;
  bool first_part = true;
  for (char c : tag) {
    if (c == '-') {
      if (part_len == 0) return false;
      part_len = 0;
      first_part = false;
    } else if (first_part ? is_alpha(c) : is_alnum(c)) {
      ++part_len;
    } else {
      return false;
    }
  }
  return part_len > 0;
}

inline bool valid_blank_label(std::string_view label) {
  if (label.empty() || label.front() == '-' || label.front() == '.' ||
      label.back() == '.')
    return false;
  return std::all_of(label.begin(), label.end(), [](char c) {
    return is_alnum(c) || c == '_' || c == '-' || c == '.';
  });
}

inline void append_escaped(std::string& out, std::string_view text) {
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
}

inline void hash_combine(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace detail

/// An absolute IRI, validated shallowly and stored verbatim.
class Iri {
 public:
  const std::string& value() const noexcept { return value_; }

  friend bool operator==(const Iri&, const Iri&) = default;
  friend auto operator<=>(const Iri&, const Iri&) = default;

 private:
  explicit Iri(std::string value) : value_(std::move(value)) {}
  friend Iri make_iri(std::string_view text);

  std::string value_;
};

inline Iri make_iri(std::string_view text) {
  if (text.empty()) throw Error(Errc::EmptyIri, "IRI is empty");
  if (std::any_of(text.begin(), text.end(), detail::is_ascii_space))
    throw Error(Errc::WhitespaceInIri,
                "IRI contains whitespace: '" + std::string(text) + "'");
  if (std::any_of(text.begin(), text.end(), detail::is_forbidden_in_iri))
    throw Error(Errc::IllegalIriCharacter,
                "IRI contains a forbidden character: '" + std::string(text) +
                    "'");
  const auto colon = text.find(':');
  if (colon == std::string_view::npos ||
      !detail::valid_scheme(text.substr(0, colon)))
    throw Error(Errc::MissingScheme,
                "IRI has no scheme: '" + std::string(text) + "'");
  return Iri(std::string(text));
}

/// A literal compares by (lexical, datatype, language) with no value-space
/// interpretation.
class Literal {
 public:
  explicit Literal(std::string lexical) : lexical_(std::move(lexical)) {}

  static Literal typed(std::string lexical, Iri datatype) {
    Literal lit(std::move(lexical));
    lit.datatype_ = std::move(datatype);
    return lit;
  }

  static Literal tagged(std::string lexical, std::string language) {
    if (!detail::valid_language_tag(language))
      throw Error(Errc::InvalidLanguageTag,
                  "invalid language tag '" + language + "'");
    Literal lit(std::move(lexical));
    lit.language_ = std::move(language);
    return lit;
  }

  const std::string& lexical() const noexcept { return lexical_; }
  const std::optional<Iri>& datatype() const noexcept { return datatype_; }
  const std::optional<std::string>& language() const noexcept {
    return language_;
  }

  friend bool operator==(const Literal&, const Literal&) = default;

 private:
  std::string lexical_;
  std::optional<Iri> datatype_;
  std::optional<std::string> language_;
};

class BlankNode {
 public:
  explicit BlankNode(std::string label) : label_(std::move(label)) {
    if (!detail::valid_blank_label(label_))
      throw Error(Errc::InvalidBlankLabel,
                  "invalid blank node label '" + label_ + "'");
  }

  const std::string& label() const noexcept { return label_; }

  friend bool operator==(const BlankNode&, const BlankNode&) = default;

 private:
  std::string label_;
};

/// Renders a term in N-Triples syntax.
inline std::string to_ntriples(const Iri& iri) { return "<" + iri.value() + ">"; }
inline std::string to_ntriples(const BlankNode& b) { return "_:" + b.label(); }
inline std::string to_ntriples(const Literal& lit) {
  std::string out = "\"";
  detail::append_escaped(out, lit.lexical());
  out += '"';
  if (lit.language()) {
    out += '@';
    out += *lit.language();
  } else if (lit.datatype()) {
    out += "^^";
    out += to_ntriples(*lit.datatype());
  }
  return out;
}

/// One RDF term. The N-Triples rendering is computed once and serves as the
/// identity: it is injective, so comparing renderings is component-wise
/// equality, and its byte order is the canonical sort order.
class Term {
 public:
  enum class Kind { iri, literal, blank };

  Term(Iri iri) : key_(to_ntriples(iri)), value_(std::move(iri)) {}
  Term(Literal lit) : key_(to_ntriples(lit)), value_(std::move(lit)) {}
  Term(BlankNode b) : key_(to_ntriples(b)), value_(std::move(b)) {}

  Kind kind() const noexcept { return static_cast<Kind>(value_.index()); }
  bool is_iri() const noexcept { return kind() == Kind::iri; }
  bool is_literal() const noexcept { return kind() == Kind::literal; }
  bool is_blank() const noexcept { return kind() == Kind::blank; }

  const Iri& iri() const { return std::get<Iri>(value_); }
  const Literal& literal() const { return std::get<Literal>(value_); }
  const BlankNode& blank() const { return std::get<BlankNode>(value_); }

  const std::string& str() const noexcept { return key_; }

  friend bool operator==(const Term& a, const Term& b) noexcept {
    return a.key_ == b.key_;
  }
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) noexcept {
    return a.key_ <=> b.key_;
  }

 private:
  std::string key_;
  std::variant<Iri, Literal, BlankNode> value_;
};

constexpr std::string_view to_string(Term::Kind kind) {
  switch (kind) {
    case Term::Kind::iri: return "iri";
    case Term::Kind::literal: return "literal";
    case Term::Kind::blank: return "blank";
  }
  return "";
}

class Triple {
 public:
  Triple(Term subject, Term predicate, Term object)
      : subject_(std::move(subject)),
        predicate_(std::move(predicate)),
        object_(std::move(object)) {
    if (subject_.is_literal())
      throw Error(Errc::LiteralSubject,
                  "literal in subject position: " + subject_.str());
    if (!predicate_.is_iri())
      throw Error(Errc::NonIriPredicate,
                  "predicate must be an IRI: " + predicate_.str());
  }

  const Term& subject() const noexcept { return subject_; }
  const Term& predicate() const noexcept { return predicate_; }
  const Term& object() const noexcept { return object_; }

  std::string str() const {
    return subject_.str() + " " + predicate_.str() + " " + object_.str() + " .";
  }

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;

 private:
  Term subject_;
  Term predicate_;
  Term object_;
};

inline Triple make_triple(Term s, Term p, Term o) {
  return Triple(std::move(s), std::move(p), std::move(o));
}

/// Namespace prefix bindings; binding an existing prefix replaces it.
class PrefixMap {
 public:
  void bind(std::string prefix, Iri ns) {
    bindings_.insert_or_assign(std::move(prefix), std::move(ns));
  }

  const Iri* find(std::string_view prefix) const {
    auto it = bindings_.find(std::string(prefix));
    return it == bindings_.end() ? nullptr : &it->second;
  }

  const std::map<std::string, Iri>& bindings() const noexcept {
    return bindings_;
  }
  bool empty() const noexcept { return bindings_.empty(); }

 private:
  std::map<std::string, Iri> bindings_;
};

inline Iri expand_qname(const PrefixMap& prefixes, std::string_view qname) {
  const auto colon = qname.find(':');
  if (colon == std::string_view::npos ||
      qname.find(':', colon + 1) != std::string_view::npos)
    throw Error(Errc::MalformedQName,
                "malformed qualified name '" + std::string(qname) + "'");
  const auto prefix = qname.substr(0, colon);
  const Iri* ns = prefixes.find(prefix);
  if (ns == nullptr)
    throw Error(Errc::UnknownPrefix,
                "unknown prefix '" + std::string(prefix) + "'");
  return make_iri(ns->value() + std::string(qname.substr(colon + 1)));
}

inline Iri rdf_type() { return make_iri(std::string(vocab::rdf) + "type"); }

}  // namespace semq

template <>
struct std::hash<semq::Term> {
  std::size_t operator()(const semq::Term& t) const noexcept {
    return std::hash<std::string>{}(t.str());
  }
};

template <>
struct std::hash<semq::Triple> {
  std::size_t operator()(const semq::Triple& t) const noexcept {
    std::size_t seed = std::hash<semq::Term>{}(t.subject());
    semq::detail::hash_combine(seed, std::hash<semq::Term>{}(t.predicate()));
    semq::detail::hash_combine(seed, std::hash<semq::Term>{}(t.object()));
    return seed;
  }
};
