#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "semq/detail/scanner.hpp"
#include "semq/error.hpp"
#include "semq/rdf.hpp"
#include "semq/serialization.hpp"
#include "semq/store.hpp"

namespace semq {

struct Variable {
  std::string name;  // without the leading '?'

  friend bool operator==(const Variable&, const Variable&) = default;
};

using PatternTerm = std::variant<Variable, Term>;

struct QueryPattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;

  /// Variables in subject, predicate, object order (repeats kept).
  std::vector<std::string> variables() const {
    std::vector<std::string> out;
    for (const PatternTerm* t : {&subject, &predicate, &object}) {
      if (const auto* v = std::get_if<Variable>(t)) out.push_back(v->name);
    }
    return out;
  }

  /// Constants only; variables become wildcards.
  TriplePattern constants() const {
    auto constant = [](const PatternTerm& t) -> std::optional<Term> {
      if (const auto* term = std::get_if<Term>(&t)) return *term;
      return std::nullopt;
    };
    return {constant(subject), constant(predicate), constant(object)};
  }
};

/// SELECT query over a basic graph pattern.
struct Query {
  PrefixMap prefixes;
  std::vector<std::string> projection;
  std::vector<QueryPattern> bgp;

  /// Throws EmptyProjection or ProjectedVariableUnused.
  void validate() const {
    if (projection.empty()) throw Error(Errc::EmptyProjection, "SELECT lists no variables");
    std::set<std::string> used;
    for (const auto& p : bgp) {
      for (auto& v : p.variables()) used.insert(std::move(v));
    }
    for (const auto& v : projection) {
      if (!used.contains(v))
        throw Error(Errc::ProjectedVariableUnused, "?" + v + " does not occur in the WHERE clause");
    }
  }
};

namespace detail {

inline bool valid_variable_name(std::string_view name) {
  if (name.empty() || !is_alpha(name.front())) return false;
  return std::all_of(name.begin(), name.end(), [](char c) { return is_alnum(c) || c == '_'; });
}

class QueryReader {
 public:
  explicit QueryReader(std::string_view text) : in_(text) {}

  Query run() {
    skip();
    while (in_.consume_keyword("PREFIX")) {
      skip();
      std::string prefix;
      while (Scanner::is_name_char(in_.peek())) prefix += in_.get();
      in_.expect(':', "':' after prefix name");
      skip();
      query_.prefixes.bind(std::move(prefix), in_.read_iriref());
      skip();
    }
    if (!in_.consume_keyword("SELECT")) in_.fail("expected SELECT");
    skip();
    in_.consume_keyword("DISTINCT");  // rows are always distinct
    skip();

    std::vector<std::pair<std::string, Scanner::Mark>> projected;
    while (in_.peek() == '?' || in_.peek() == '$') {
      const auto at = in_.mark();
      std::string name = read_variable();
      if (std::none_of(projected.begin(), projected.end(),
                       [&](const auto& p) { return p.first == name; }))
        projected.emplace_back(std::move(name), at);
      skip();
    }
    if (projected.empty()) in_.fail("SELECT lists no variables", Errc::EmptyProjection);

    in_.consume_keyword("WHERE");
    skip();
    in_.expect('{', "'{'");
    skip();
    while (!in_.consume('}')) {
      read_triples_same_subject();
      skip();
      if (in_.consume('.')) {
        skip();
        continue;
      }
      skip();
      if (in_.peek() != '}') in_.fail("expected '.' or '}'");
    }
    skip();
    if (!in_.at_end()) in_.fail("unexpected content after query");

    for (auto& [name, at] : projected) {
      query_.projection.push_back(name);
      bool used = false;
      for (const auto& p : query_.bgp) {
        for (const auto& v : p.variables()) used = used || v == name;
      }
      if (!used)
        Scanner::fail_at(at, "?" + name + " does not occur in the WHERE clause",
                         Errc::ProjectedVariableUnused);
    }
    return std::move(query_);
  }

 private:
  void skip() { in_.skip_space(true, true); }

  std::string read_variable() {
    const auto at = in_.mark();
    in_.get();  // '?' or '$'
    std::string name;
    while (is_alnum(in_.peek()) || in_.peek() == '_') name += in_.get();
    if (!valid_variable_name(name)) Scanner::fail_at(at, "invalid variable name");
    return name;
  }

  Iri read_iri() {
    if (in_.peek() == '<') return in_.read_iriref();
    const auto at = in_.mark();
    const std::string qname = in_.read_prefixed_name();
    try {
      return expand_qname(query_.prefixes, qname);
    } catch (const Error& e) {
      Scanner::fail_at(at, e.what(), e.code());
    }
  }

  bool at_variable() const { return in_.peek() == '?' || in_.peek() == '$'; }
  bool at_name() const { return Scanner::is_name_char(in_.peek()) || in_.peek() == ':'; }

  void reject_blank() {
    if (in_.peek() == '_' && in_.peek(1) == ':')
      in_.fail("blank nodes are not supported in queries");
  }

  PatternTerm read_subject() {
    reject_blank();
    if (at_variable()) return Variable{read_variable()};
    if (in_.peek() == '"') in_.fail("literal in subject position", Errc::LiteralSubject);
    if (in_.peek() == '<' || at_name()) return Term(read_iri());
    in_.fail("expected subject");
  }

  PatternTerm read_predicate() {
    reject_blank();
    if (at_variable()) return Variable{read_variable()};
    if (in_.peek() == 'a' && !Scanner::is_name_char(in_.peek(1)) && in_.peek(1) != ':') {
      in_.get();
      return Term(rdf_type());
    }
    if (in_.peek() == '<' || at_name()) return Term(read_iri());
    if (in_.peek() == '"') in_.fail("predicate must be an IRI", Errc::NonIriPredicate);
    in_.fail("expected predicate");
  }

  PatternTerm read_object() {
    reject_blank();
    if (at_variable()) return Variable{read_variable()};
    if (in_.peek() == '"') return read_literal(in_, [&] { return read_iri(); });
    if (in_.peek() == '<' || at_name()) return Term(read_iri());
    in_.fail("expected object");
  }

  void read_triples_same_subject() {
    PatternTerm subject = read_subject();
    for (;;) {
      skip();
      PatternTerm predicate = read_predicate();
      for (;;) {
        skip();
        query_.bgp.push_back({subject, predicate, read_object()});
        skip();
        if (!in_.consume(',')) break;
      }
      if (!in_.consume(';')) break;
      skip();
      if (in_.peek() == '.' || in_.peek() == '}') break;
    }
  }

  Scanner in_;
  Query query_;
};

}  // namespace detail

/// Parses PREFIX declarations, a SELECT projection and one basic graph
/// pattern. Patterns keep source order.
inline Query parse_query(std::string_view text) { return detail::QueryReader(text).run(); }

/// Orders patterns by ascending match-count estimate from the store indexes,
/// counting constants only; equal estimates keep source order.
inline std::vector<QueryPattern> plan_bgp(const Query& q, const Store& store) {
  std::vector<std::size_t> estimate;
  estimate.reserve(q.bgp.size());
  for (const auto& p : q.bgp) estimate.push_back(store.count(p.constants()));
  std::vector<std::size_t> order(q.bgp.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return estimate[a] < estimate[b]; });
  std::vector<QueryPattern> out;
  out.reserve(order.size());
  for (std::size_t i : order) out.push_back(q.bgp[i]);
  return out;
}

using Solution = std::map<std::string, Term>;

struct SolutionSequence {
  std::vector<std::string> variables;
  std::vector<Solution> rows;  // distinct, ordered by rendered values
};

enum class JoinOrder { planned, source };

namespace detail {

// Extends `binding` so that pattern matches t; false on a conflicting
// repeated variable.
inline bool unify(const QueryPattern& pattern, const Triple& t, Solution& binding) {
  const std::pair<const PatternTerm*, const Term*> slots[] = {
      {&pattern.subject, &t.subject()},
      {&pattern.predicate, &t.predicate()},
      {&pattern.object, &t.object()}};
  for (const auto& [slot, value] : slots) {
    const auto* var = std::get_if<Variable>(slot);
    if (var == nullptr) continue;
    auto [it, inserted] = binding.try_emplace(var->name, *value);
    if (!inserted && it->second != *value) return false;
  }
  return true;
}

inline TriplePattern substitute(const QueryPattern& pattern, const Solution& binding) {
  auto bind = [&](const PatternTerm& t) -> std::optional<Term> {
    if (const auto* term = std::get_if<Term>(&t)) return *term;
    auto it = binding.find(std::get<Variable>(t).name);
    if (it == binding.end()) return std::nullopt;
    return it->second;
  };
  return {bind(pattern.subject), bind(pattern.predicate), bind(pattern.object)};
}

}  // namespace detail

/// Left-deep index nested-loop join. Each partial solution is substituted
/// into the next pattern and extended by the store's matches.
inline SolutionSequence evaluate(const Query& q, const Store& store,
                                 JoinOrder order = JoinOrder::planned) {
  q.validate();
  const std::vector<QueryPattern> patterns = order == JoinOrder::planned ? plan_bgp(q, store) : q.bgp;

  std::vector<Solution> partial{Solution{}};
  for (const auto& pattern : patterns) {
    std::vector<Solution> next;
    for (const auto& binding : partial) {
      const TriplePattern bound = detail::substitute(pattern, binding);
      // A variable bound to a literal can't sit in subject or predicate
      // position; such a substitution simply has no matches.
      if ((bound.subject && bound.subject->is_literal()) ||
          (bound.predicate && !bound.predicate->is_iri()))
        continue;
      for (const Triple& t : store.match(bound)) {
        Solution extended = binding;
        if (detail::unify(pattern, t, extended)) next.push_back(std::move(extended));
      }
    }
    partial = std::move(next);
    if (partial.empty()) break;
  }

  std::set<std::vector<Term>> projected;
  for (const auto& binding : partial) {
    std::vector<Term> row;
    row.reserve(q.projection.size());
    for (const auto& v : q.projection) row.push_back(binding.at(v));
    projected.insert(std::move(row));
  }
  SolutionSequence out{q.projection, {}};
  for (const auto& row : projected) {
    Solution s;
    for (std::size_t i = 0; i < row.size(); ++i) s.emplace(q.projection[i], row[i]);
    out.rows.push_back(std::move(s));
  }
  return out;
}

enum class ResultFormat { table, json, csv };

namespace detail {

inline std::string csv_field(const Term& t) {
  std::string text = t.is_iri()       ? t.iri().value()
                     : t.is_literal() ? t.literal().lexical()
                                      : "_:" + t.blank().label();
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

inline nlohmann::ordered_json term_json(const Term& t) {
  nlohmann::ordered_json j;
  j["type"] = std::string(to_string(t.kind()));
  switch (t.kind()) {
    case Term::Kind::iri: j["value"] = t.iri().value(); break;
    case Term::Kind::blank: j["value"] = t.blank().label(); break;
    case Term::Kind::literal:
      j["value"] = t.literal().lexical();
      if (t.literal().datatype()) j["datatype"] = t.literal().datatype()->value();
      if (t.literal().language()) j["xml:lang"] = *t.literal().language();
      break;
  }
  return j;
}

}  // namespace detail

/// Deterministic rendering. `table` pads N-Triples cells into columns,
/// `csv` writes plain values with RFC 4180 quoting, `json` follows
/// {"vars": [...], "rows": [{var: {"type", "value"}}]}.
inline std::string format_solutions(const SolutionSequence& s, ResultFormat format) {
  switch (format) {
    case ResultFormat::json: {
      nlohmann::ordered_json out;
      out["vars"] = s.variables;
      out["rows"] = nlohmann::ordered_json::array();
      for (const auto& row : s.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (const auto& v : s.variables) r[v] = detail::term_json(row.at(v));
        out["rows"].push_back(std::move(r));
      }
      return out.dump(2) + "\n";
    }
    case ResultFormat::csv: {
      std::string out;
      for (std::size_t i = 0; i < s.variables.size(); ++i)
        out += (i ? "," : "") + s.variables[i];
      out += '\n';
      for (const auto& row : s.rows) {
        for (std::size_t i = 0; i < s.variables.size(); ++i)
          out += (i ? "," : "") + detail::csv_field(row.at(s.variables[i]));
        out += '\n';
      }
      return out;
    }
    case ResultFormat::table: break;
  }
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header;
  for (const auto& v : s.variables) header.push_back("?" + v);
  cells.push_back(std::move(header));
  for (const auto& row : s.rows) {
    std::vector<std::string> line;
    for (const auto& v : s.variables) line.push_back(row.at(v).str());
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(s.variables.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::string out;
  for (const auto& line : cells) {
    std::string text;
    for (std::size_t i = 0; i < line.size(); ++i) {
      text += line[i];
      if (i + 1 < line.size()) text += std::string(width[i] - line[i].size() + 2, ' ');
    }
    out += text + "\n";
  }
  return out;
}

}  // namespace semq
