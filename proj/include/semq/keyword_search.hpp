#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "semq/error.hpp"
#include "semq/ontology.hpp"

namespace semq {

/// Lowercases and trims each entry, drops empties, deduplicates. No stemming.
template <typename R>
std::set<std::string> normalize_keywords(const R& raw) {
  std::set<std::string> out;
  for (std::string_view word : raw) {
    while (!word.empty() && detail::is_ascii_space(word.front())) word.remove_prefix(1);
    while (!word.empty() && detail::is_ascii_space(word.back())) word.remove_suffix(1);
    if (word.empty()) continue;
    std::string lowered(word);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(), [](unsigned char c) {
      return static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
    });
    out.insert(std::move(lowered));
  }
  return out;
}

inline std::set<std::string> normalize_keywords(std::initializer_list<std::string_view> raw) {
  return normalize_keywords(std::vector<std::string_view>(raw));
}

/// Splits on every non-alphanumeric character, then normalizes.
inline std::set<std::string> tokenize(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || !detail::is_alnum(text[i])) {
      if (i > start) words.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return normalize_keywords(words);
}

/// Splits a free-text query on whitespace and commas, then normalizes.
inline std::set<std::string> query_keywords(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',' || detail::is_ascii_space(text[i])) {
      if (i > start) words.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return normalize_keywords(words);
}

struct KeywordSet {
  std::string id;
  std::set<std::string> keywords;

  template <typename R>
  static KeywordSet from_raw(std::string id, const R& raw) {
    return {std::move(id), normalize_keywords(raw)};
  }
};

/// Keyword sets by document id, plus the inverted keyword -> ids index.
class Corpus {
 public:
  void add(KeywordSet set) {
    if (keysets_.contains(set.id))
      throw Error(Errc::DuplicateDocument, "duplicate document id '" + set.id + "'");
    for (const std::string& k : set.keywords) inverted_[k].insert(set.id);
    auto id = set.id;
    keysets_.emplace(std::move(id), std::move(set));
  }

  const std::map<std::string, KeywordSet>& keysets() const noexcept { return keysets_; }
  const std::map<std::string, std::set<std::string>>& inverted() const noexcept {
    return inverted_;
  }
  const std::set<std::string>& keywords_of(const std::string& id) const {
    return keysets_.at(id).keywords;
  }
  std::size_t size() const noexcept { return keysets_.size(); }
  bool empty() const noexcept { return keysets_.empty(); }

  /// The inverted index is exactly the transpose of the keysets.
  bool audit() const {
    std::map<std::string, std::set<std::string>> expected;
    for (const auto& [id, set] : keysets_) {
      for (const std::string& k : set.keywords) expected[k].insert(id);
    }
    return expected == inverted_;
  }

 private:
  std::map<std::string, KeywordSet> keysets_;
  std::map<std::string, std::set<std::string>> inverted_;
};

/// The five keyword sets of the "Indian Universities" example, ids
/// search1..search5.
inline Corpus example_corpus() {
  Corpus corpus;
  using list = std::initializer_list<std::string_view>;
  corpus.add(KeywordSet::from_raw("search1", list{"Indian", "Courses", "AIU", "Universities",
                                                  "UGC", "Top", "Colleges", "States"}));
  corpus.add(KeywordSet::from_raw(
      "search2", list{"Indian", "UGC", "AIU", "List", "Exams", "Top", "Universities"}));
  corpus.add(KeywordSet::from_raw(
      "search3", list{"Universities", "UGC", "Colleges", "Top", "Indian", "Ranking"}));
  corpus.add(KeywordSet::from_raw(
      "search4", list{"Indian", "States", "AIU", "Universities", "Questions", "Ranking "}));
  corpus.add(KeywordSet::from_raw(
      "search5", list{"Indian", "Courses", "Ranking", "UGC", "States", "Universities"}));
  return corpus;
}

/// Ids whose keyset shares at least one keyword with the query.
inline std::set<std::string> collect_candidates(const std::set<std::string>& query,
                                                const Corpus& corpus) {
  std::set<std::string> out;
  for (const std::string& k : query) {
    auto it = corpus.inverted().find(k);
    if (it != corpus.inverted().end()) out.insert(it->second.begin(), it->second.end());
  }
  return out;
}

/// Union of the candidates' keysets.
inline std::set<std::string> union_pool(const std::set<std::string>& candidates,
                                        const Corpus& corpus) {
  std::set<std::string> pool;
  for (const std::string& id : candidates) {
    const auto& keywords = corpus.keywords_of(id);
    pool.insert(keywords.begin(), keywords.end());
  }
  return pool;
}

/// Number of candidate keysets holding a keyword; std::nullopt marks a
/// query keyword, which is excluded from ranking.
using Occurrence = std::optional<std::size_t>;
using OccurrenceTable = std::map<std::string, Occurrence>;

inline OccurrenceTable occurrence_counts(const std::set<std::string>& pool,
                                         const std::set<std::string>& candidates,
                                         const std::set<std::string>& query,
                                         const Corpus& corpus) {
  OccurrenceTable table;
  for (const std::string& k : pool) {
    if (query.contains(k)) {
      table.emplace(k, std::nullopt);
      continue;
    }
    std::size_t n = 0;
    auto it = corpus.inverted().find(k);
    if (it != corpus.inverted().end()) {
      for (const std::string& id : it->second) n += candidates.contains(id);
    }
    table.emplace(k, n);
  }
  return table;
}

struct ExpansionEntry {
  std::string keyword;
  std::size_t count = 0;
  std::size_t rank = 0;  // 1-based, distinct even within a tie

  friend bool operator==(const ExpansionEntry&, const ExpansionEntry&) = default;
};

using RankedExpansion = std::vector<ExpansionEntry>;

/// Drops excluded entries; orders by count descending, then keyword.
inline RankedExpansion rank_expansion(const OccurrenceTable& table) {
  RankedExpansion out;
  for (const auto& [keyword, count] : table) {
    if (count) out.push_back({keyword, *count, 0});
  }
  std::stable_sort(out.begin(), out.end(), [](const ExpansionEntry& a, const ExpansionEntry& b) {
    return a.count > b.count;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
  return out;
}

/// Pages left after discarding `fraction` of `total_pages`, rounded half-up.
inline std::uint64_t apply_discard(std::uint64_t total_pages, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw Error(Errc::FractionOutOfRange,
                "discard fraction must lie in [0, 1], got " + std::to_string(fraction));
  const long double kept =
      static_cast<long double>(total_pages) * (1.0L - static_cast<long double>(fraction));
  return static_cast<std::uint64_t>(std::floor(kept + 0.5L));
}

struct ScoredDocument {
  std::string id;
  std::size_t score = 0;

  friend bool operator==(const ScoredDocument&, const ScoredDocument&) = default;
};

/// Score is the summed count of the expansion keywords a document holds;
/// ordered by score descending, then id.
inline std::vector<ScoredDocument> rerank_documents(const std::set<std::string>& candidates,
                                                    const RankedExpansion& expansion,
                                                    const Corpus& corpus) {
  std::map<std::string, std::size_t> weight;
  for (const auto& e : expansion) weight.emplace(e.keyword, e.count);
  std::vector<ScoredDocument> out;
  for (const std::string& id : candidates) {
    std::size_t score = 0;
    for (const std::string& k : corpus.keywords_of(id)) {
      auto it = weight.find(k);
      if (it != weight.end()) score += it->second;
    }
    out.push_back({id, score});
  }
  // Candidates arrive sorted by id, so a stable sort keeps the id tie order.
  std::stable_sort(out.begin(), out.end(), [](const ScoredDocument& a, const ScoredDocument& b) {
    return a.score > b.score;
  });
  return out;
}

/// Informational only: share of candidates whose expansion keywords all sit
/// in the lowest-count tier.
inline double bottom_tier_fraction(const std::set<std::string>& candidates,
                                   const RankedExpansion& expansion, const Corpus& corpus) {
  if (candidates.empty() || expansion.empty()) return 0.0;
  const std::size_t lowest = expansion.back().count;
  std::map<std::string, std::size_t> weight;
  for (const auto& e : expansion) weight.emplace(e.keyword, e.count);
  std::size_t bottom_only = 0;
  for (const std::string& id : candidates) {
    bool any = false;
    bool all_bottom = true;
    for (const std::string& k : corpus.keywords_of(id)) {
      auto it = weight.find(k);
      if (it == weight.end()) continue;
      any = true;
      all_bottom = all_bottom && it->second == lowest;
    }
    bottom_only += any && all_bottom;
  }
  return static_cast<double>(bottom_only) / static_cast<double>(candidates.size());
}

struct SearchOptions {
  std::optional<std::uint64_t> total_pages;
  std::optional<double> discard_fraction;
  std::optional<std::size_t> top_k;
};

struct SearchResult {
  std::set<std::string> query;
  std::set<std::string> candidates;
  std::set<std::string> pool;
  OccurrenceTable occurrences;
  RankedExpansion expansion;
  std::vector<ScoredDocument> ranked_documents;
  std::optional<std::uint64_t> retained_estimate;
};

/// The full pipeline: candidates by intersection, union pool, occurrence
/// counts with query keywords excluded, priority ranking, document
/// re-ranking, and the optional discard estimate.
inline SearchResult search(std::string_view query_text, const Corpus& corpus,
                           const SearchOptions& options = {}) {
  SearchResult r;
  r.query = query_keywords(query_text);
  r.candidates = collect_candidates(r.query, corpus);
  r.pool = union_pool(r.candidates, corpus);
  r.occurrences = occurrence_counts(r.pool, r.candidates, r.query, corpus);
  r.expansion = rank_expansion(r.occurrences);
  r.ranked_documents = rerank_documents(r.candidates, r.expansion, corpus);
  if (options.top_k && r.ranked_documents.size() > *options.top_k)
    r.ranked_documents.resize(*options.top_k);
  if (options.total_pages && options.discard_fraction)
    r.retained_estimate = apply_discard(*options.total_pages, *options.discard_fraction);
  return r;
}

/// One keyset per individual: tokens of its local name and of every literal
/// property value. Ids are the individuals' IRIs.
inline Corpus keysets_from_ontology(const Ontology& ont) {
  Corpus corpus;
  for (const auto& [name, ind] : ont.individuals()) {
    KeywordSet set{name.value(), tokenize(local_name(name))};
    for (const auto& [property, value] : ind.property_values) {
      if (!value.is_literal()) continue;
      auto tokens = tokenize(value.literal().lexical());
      set.keywords.insert(tokens.begin(), tokens.end());
    }
    corpus.add(std::move(set));
  }
  return corpus;
}

inline nlohmann::ordered_json to_json(const SearchResult& r) {
  using nlohmann::ordered_json;
  ordered_json out;
  out["query"] = r.query;
  out["candidates"] = r.candidates;
  out["pool_size"] = r.pool.size();
  ordered_json expansion = ordered_json::array();
  for (const auto& e : r.expansion)
    expansion.push_back({{"keyword", e.keyword}, {"count", e.count}, {"rank", e.rank}});
  out["expansion"] = std::move(expansion);
  ordered_json documents = ordered_json::array();
  for (const auto& d : r.ranked_documents) documents.push_back({{"id", d.id}, {"score", d.score}});
  out["documents"] = std::move(documents);
  out["retained_estimate"] = r.retained_estimate ? ordered_json(*r.retained_estimate) : ordered_json();
  return out;
}

/// Reads line-delimited {"id": ..., "keywords": [...]} records. Blank lines
/// are skipped; errors carry the 1-based line number.
inline Corpus read_corpus_jsonl(std::string_view text) {
  Corpus corpus;
  std::size_t line_no = 0;
  auto fail = [&](Errc code, const std::string& message) {
    throw Error(code, ParseDiagnostic{line_no, 1, message, ParseDiagnostic::Severity::error});
  };
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (std::all_of(line.begin(), line.end(), detail::is_ascii_space)) continue;

    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      fail(Errc::Syntax, std::string("invalid JSON: ") + e.what());
    }
    if (!record.is_object() || !record.contains("id") || !record["id"].is_string())
      fail(Errc::Syntax, "record needs a string \"id\"");
    if (!record.contains("keywords") || !record["keywords"].is_array())
      fail(Errc::Syntax, "record needs a \"keywords\" array");
    std::vector<std::string> raw;
    for (const auto& k : record["keywords"]) {
      if (!k.is_string()) fail(Errc::Syntax, "keywords must be strings");
      raw.push_back(k.get<std::string>());
    }
    try {
      corpus.add(KeywordSet::from_raw(record["id"].get<std::string>(), raw));
    } catch (const Error& e) {
      fail(e.code(), e.what());
    }
  }
  return corpus;
}

inline std::string write_corpus_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& [id, set] : corpus.keysets()) {
    nlohmann::ordered_json record;
    record["id"] = id;
    record["keywords"] = set.keywords;
    out += record.dump();
    out += '\n';
  }
  return out;
}

}  // namespace semq
