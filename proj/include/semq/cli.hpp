#pragma once

#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "semq/keyword_search.hpp"
#include "semq/ontology.hpp"
#include "semq/serialization.hpp"
#include "semq/sparql.hpp"
#include "semq/store.hpp"

namespace semq::cli {

/// Process exit codes.
enum Exit : int { ok = 0, data_error = 1, usage_error = 2 };

namespace detail {

// File-level failure, reported as "path: message" or "path:line:col: ...".
struct InputError {
  std::string message;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{path + ": cannot open file"};
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

template <typename F>
auto with_location(const std::string& path, F&& parse) {
  try {
    return parse();
  } catch (const Error& e) {
    throw InputError{path + (e.diagnostic() ? ":" : ": ") + e.what()};
  }
}

/// Loads .ttl files with the Turtle reader, everything else as N-Triples.
inline void load_graph(Store& store, const std::string& path) {
  const std::string text = read_file(path);
  auto triples = with_location(path, [&] {
    return ends_with(path, ".ttl") ? parse_turtle_subset(text) : parse_ntriples(text);
  });
  for (const Triple& t : triples) store.insert(t);
}

inline ResultFormat parse_format(const std::string& name) {
  if (name == "json") return ResultFormat::json;
  if (name == "csv") return ResultFormat::csv;
  return ResultFormat::table;
}

inline void print_load_summary(const Store& store, ResultFormat format, std::ostream& out) {
  std::set<Term> subjects, predicates, objects;
  for (const Triple& t : store) {
    subjects.insert(t.subject());
    predicates.insert(t.predicate());
    objects.insert(t.object());
  }
  switch (format) {
    case ResultFormat::json: {
      nlohmann::ordered_json j;
      j["triples"] = store.size();
      j["subjects"] = subjects.size();
      j["predicates"] = predicates.size();
      j["objects"] = objects.size();
      out << j.dump(2) << "\n";
      break;
    }
    case ResultFormat::csv:
      out << "triples,subjects,predicates,objects\n"
          << store.size() << ',' << subjects.size() << ',' << predicates.size() << ','
          << objects.size() << "\n";
      break;
    case ResultFormat::table:
      out << "triples     " << store.size() << "\n"
          << "subjects    " << subjects.size() << "\n"
          << "predicates  " << predicates.size() << "\n"
          << "objects     " << objects.size() << "\n";
      break;
  }
}

inline void print_search(const SearchResult& r, ResultFormat format, std::ostream& out) {
  if (format == ResultFormat::json) {
    out << to_json(r).dump(2) << "\n";
    return;
  }
  if (format == ResultFormat::csv) {
    out << "rank,keyword,count\n";
    for (const auto& e : r.expansion) out << e.rank << ',' << e.keyword << ',' << e.count << "\n";
    return;
  }
  auto join = [](const std::set<std::string>& items) {
    std::string s;
    for (const auto& i : items) s += (s.empty() ? "" : " ") + i;
    return s;
  };
  out << "query:       " << join(r.query) << "\n"
      << "candidates:  " << r.candidates.size() << (r.candidates.empty() ? "" : "  ")
      << join(r.candidates) << "\n"
      << "pool size:   " << r.pool.size() << "\n"
      << "expansion:\n";
  for (const auto& e : r.expansion)
    out << "  " << e.rank << ". " << e.keyword << " (" << e.count << ")\n";
  out << "documents:\n";
  for (const auto& d : r.ranked_documents) out << "  " << d.id << "  " << d.score << "\n";
  if (r.retained_estimate) out << "retained estimate: " << *r.retained_estimate << "\n";
}

inline void print_class_tree(const Ontology& ont, const Iri& c, int depth, std::ostream& out) {
  const std::string name = c == Ontology::root() ? "owl:Thing" : local_name(c);
  out << std::string(2 * depth + 2, ' ') << name << " ("
      << instances_of(ont, c, false).size() << " asserted, "
      << instances_of(ont, c, true).size() << " inferred)\n";
  for (const Iri& child : ont.children(c)) print_class_tree(ont, child, depth + 1, out);
}

inline void print_ontology(const Ontology& ont, std::ostream& out) {
  out << "ontology <" << ont.iri().value() << ">\n";
  out << "classes: " << ont.classes().size() + 1 << "\n";
  print_class_tree(ont, Ontology::root(), 0, out);
  for (auto kind : {PropertyKind::object, PropertyKind::datatype}) {
    std::size_t n = 0;
    for (const auto& [name, p] : ont.properties()) n += p.kind == kind;
    out << (kind == PropertyKind::object ? "object" : "datatype") << " properties: " << n << "\n";
    for (const auto& [name, p] : ont.properties()) {
      if (p.kind == kind) out << "  " << local_name(name) << "  domain " << local_name(p.domain) << "\n";
    }
  }
  out << "individuals: " << ont.individuals().size() << "\n";
  for (const auto& [name, ind] : ont.individuals())
    out << "  " << local_name(name) << "  a " << local_name(ind.asserted_class) << "\n";
}

}  // namespace detail

/// Runs one command line. Results go to `out`, diagnostics to `err`.
/// Returns 0 on success (including empty results), 1 for data or parse
/// errors, 2 for usage errors.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semantic query toolkit: RDF graphs, SPARQL, ontology and keyword search", "semq"};
  app.fallthrough();
  app.require_subcommand(1);

  std::optional<std::string> format_name;
  app.add_option("--format", format_name, "Output format")
      ->check(CLI::IsMember({"table", "json", "csv"}));

  auto* load = app.add_subcommand("load", "Load graphs and print a summary");
  std::vector<std::string> load_paths;
  load->add_option("paths", load_paths, "Graph files (.nt, or .ttl)")->required();

  auto* sparql = app.add_subcommand("sparql", "Run a SELECT query against graphs");
  std::optional<std::string> query_text, query_file;
  std::vector<std::string> graph_paths;
  auto* query_opt = sparql->add_option("-q,--query", query_text, "Inline query text");
  sparql->add_option("-f,--query-file", query_file, "Query file (.rq)")->excludes(query_opt);
  sparql->add_option("graphs", graph_paths, "Graph files (.nt, or .ttl)");

  auto* search_cmd = app.add_subcommand("search", "Keyword co-occurrence search");
  std::string search_query;
  bool use_fixture = false;
  std::optional<std::string> corpus_path;
  SearchOptions options;
  search_cmd->add_option("query", search_query, "Query keywords")->required();
  auto* fixture_flag = search_cmd->add_flag("--fixture", use_fixture, "Use the built-in example keysets");
  search_cmd->add_option("--corpus", corpus_path, "Line-delimited JSON corpus")->excludes(fixture_flag);
  auto* total_opt = search_cmd->add_option("--total-pages", options.total_pages, "Total result count");
  auto* fraction_opt = search_cmd->add_option("--discard-fraction", options.discard_fraction,
                                              "Share of pages to discard")
                           ->check(CLI::Range(0.0, 1.0));
  total_opt->needs(fraction_opt);
  fraction_opt->needs(total_opt);
  search_cmd->add_option("--top-k", options.top_k, "Keep the first K ranked documents");

  auto* ontology_cmd = app.add_subcommand("ontology", "Inspect an ontology");
  std::string action;
  std::optional<std::string> ontology_path;
  bool ontology_fixture = false, with_instances = false;
  ontology_cmd->add_option("action", action, "show | dot | triples")
      ->required()
      ->check(CLI::IsMember({"show", "dot", "triples"}));
  auto* ont_fixture_flag =
      ontology_cmd->add_flag("--fixture", ontology_fixture, "Use the Indian-universities ontology");
  ontology_cmd->add_option("path", ontology_path, "Ontology graph (.nt, or .ttl)")->excludes(ont_fixture_flag);
  ontology_cmd->add_flag("--instances", with_instances, "Include individuals in DOT output");

  std::vector<const char*> argv{"semq"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (search_cmd->parsed() && !use_fixture && !corpus_path)
      throw CLI::RequiredError("search needs --fixture or --corpus");
    if (sparql->parsed() && !query_text && !query_file)
      throw CLI::RequiredError("sparql needs --query or --query-file");
    if (ontology_cmd->parsed() && !ontology_fixture && !ontology_path)
      throw CLI::RequiredError("ontology needs --fixture or a path");
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return Exit::ok;
    }
    err << "semq: " << e.what() << "\n";
    return Exit::usage_error;
  }

  auto format_or = [&](ResultFormat fallback) {
    return format_name ? detail::parse_format(*format_name) : fallback;
  };

  try {
    if (load->parsed()) {
      Store store;
      for (const auto& p : load_paths) detail::load_graph(store, p);
      detail::print_load_summary(store, format_or(ResultFormat::table), out);
    } else if (sparql->parsed()) {
      const std::string text = query_file ? detail::read_file(*query_file) : *query_text;
      const std::string origin = query_file ? *query_file : "query";
      const Query q = detail::with_location(origin, [&] { return parse_query(text); });
      Store store;
      for (const auto& p : graph_paths) detail::load_graph(store, p);
      out << format_solutions(evaluate(q, store), format_or(ResultFormat::table));
    } else if (search_cmd->parsed()) {
      const Corpus corpus = use_fixture ? example_corpus()
                                        : detail::with_location(*corpus_path, [&] {
                                            return read_corpus_jsonl(detail::read_file(*corpus_path));
                                          });
      detail::print_search(search(search_query, corpus, options), format_or(ResultFormat::json), out);
    } else if (ontology_cmd->parsed()) {
      Ontology ont = load_universities_fixture();
      if (!ontology_fixture) {
        Store store;
        detail::load_graph(store, *ontology_path);
        ont = detail::with_location(*ontology_path, [&] { return ontology_from_triples(store); });
      }
      if (action == "show") {
        detail::print_ontology(ont, out);
      } else if (action == "dot") {
        out << export_dot(ont, {with_instances});
      } else {
        out << serialize_ntriples(to_triples(ont));
      }
    }
  } catch (const detail::InputError& e) {
    err << "semq: " << e.message << "\n";
    return Exit::data_error;
  } catch (const Error& e) {
    err << "semq: " << e.what() << "\n";
    return Exit::data_error;
  }
  return Exit::ok;
}

}  // namespace semq::cli
