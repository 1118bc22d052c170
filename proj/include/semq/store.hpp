#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <ranges>
#include <set>
#include <vector>

#include "semq/rdf.hpp"

namespace semq {

/// A triple with optional wildcards; an unset position matches anything.
struct TriplePattern {
  std::optional<Term> subject;
  std::optional<Term> predicate;
  std::optional<Term> object;

  bool matches(const Triple& t) const {
    return (!subject || *subject == t.subject()) &&
           (!predicate || *predicate == t.predicate()) &&
           (!object || *object == t.object());
  }
};

/// In-memory deduplicated triple store.
///
/// Triples live once in the SPO-ordered set; the POS and OSP indexes hold
/// pointers into it. Every wildcard shape is answered by one ordered range
/// scan over whichever index has the bound positions as a key prefix.
///
/// Thread safety: any number of concurrent readers, or one writer.
class Store {
 public:
  enum class Index { spo, pos, osp };

  Store() = default;
  Store(const Store& other) { *this = other; }
  Store& operator=(const Store& other) {
    if (this != &other) {
      clear();
      for (const Triple& t : other.spo_) insert(t);
    }
    return *this;
  }
  Store(Store&&) noexcept = default;
  Store& operator=(Store&&) noexcept = default;

  template <std::ranges::input_range R>
    requires std::convertible_to<std::ranges::range_reference_t<const R&>, const Triple&>
  explicit Store(const R& triples) {
    for (const Triple& t : triples) insert(t);
  }

  /// Returns false iff the triple was already present.
  bool insert(const Triple& t) {
    auto [it, inserted] = spo_.insert(t);
    if (inserted) {
      pos_.insert(&*it);
      osp_.insert(&*it);
    }
    return inserted;
  }

  /// Returns false iff the triple was absent.
  bool erase(const Triple& t) {
    auto it = spo_.find(t);
    if (it == spo_.end()) return false;
    pos_.erase(&*it);
    osp_.erase(&*it);
    spo_.erase(it);
    return true;
  }

  void clear() {
    pos_.clear();
    osp_.clear();
    spo_.clear();
  }

  std::size_t size() const noexcept { return spo_.size(); }
  bool empty() const noexcept { return spo_.empty(); }
  bool contains(const Triple& t) const { return spo_.contains(t); }

  /// All triples in canonical (S, P, O) order.
  const auto& triples() const noexcept { return spo_; }
  auto begin() const { return spo_.begin(); }
  auto end() const { return spo_.end(); }

  /// The index whose key order starts with exactly the bound positions.
  static Index choose_index(const TriplePattern& p) {
    const bool s = p.subject.has_value();
    const bool pr = p.predicate.has_value();
    const bool o = p.object.has_value();
    if (s) return (!pr && o) ? Index::osp : Index::spo;
    if (pr) return Index::pos;
    return o ? Index::osp : Index::spo;
  }

  /// Matching triples in canonical order.
  std::vector<Triple> match(const TriplePattern& pattern) const {
    return match_using(pattern, choose_index(pattern));
  }

  /// Answers the pattern through a specific index: range scan over the
  /// longest bound key prefix, then filter on the remaining positions.
  std::vector<Triple> match_using(const TriplePattern& pattern, Index index) const {
    std::vector<Triple> out;
    auto collect = [&](const auto& set) {
      const Prefix prefix = make_prefix(pattern, index);
      auto [first, last] = set.equal_range(prefix);
      for (auto it = first; it != last; ++it) {
        const Triple& t = deref(*it);
        if (pattern.matches(t)) out.push_back(t);
      }
    };
    switch (index) {
      case Index::spo: collect(spo_); break;
      case Index::pos: collect(pos_); break;
      case Index::osp: collect(osp_); break;
    }
    if (index != Index::spo) std::sort(out.begin(), out.end());
    return out;
  }

  /// Exact number of matches, counted over the chosen index range.
  std::size_t count(const TriplePattern& pattern) const {
    const Index index = choose_index(pattern);
    const Prefix prefix = make_prefix(pattern, index);
    auto distance = [&](const auto& set) {
      auto [first, last] = set.equal_range(prefix);
      return static_cast<std::size_t>(std::distance(first, last));
    };
    switch (index) {
      case Index::spo: return distance(spo_);
      case Index::pos: return distance(pos_);
      case Index::osp: return distance(osp_);
    }
    return 0;
  }

  /// Checks that every index holds exactly the stored triples.
  bool audit() const {
    if (pos_.size() != spo_.size() || osp_.size() != spo_.size()) return false;
    auto points_into_spo = [this](const auto& index) {
      return std::all_of(index.begin(), index.end(), [this](const Triple* t) {
        auto it = spo_.find(*t);
        return it != spo_.end() && &*it == t;
      });
    };
    if (!points_into_spo(pos_) || !points_into_spo(osp_)) return false;
    for (const Triple& t : spo_) {
      if (!pos_.contains(&t) || !osp_.contains(&t)) return false;
    }
    return true;
  }

 private:
  using Order = std::array<int, 3>;
  static constexpr Order kSpo{0, 1, 2};
  static constexpr Order kPos{1, 2, 0};
  static constexpr Order kOsp{2, 0, 1};

  static constexpr const Order& order_of(Index index) {
    switch (index) {
      case Index::pos: return kPos;
      case Index::osp: return kOsp;
      default: return kSpo;
    }
  }

  static const Term& component(const Triple& t, int i) {
    return i == 0 ? t.subject() : i == 1 ? t.predicate() : t.object();
  }

  static const Triple& deref(const Triple& t) { return t; }
  static const Triple& deref(const Triple* t) { return *t; }

  // Leading key components, in index order.
  struct Prefix {
    std::array<const Term*, 3> terms{};
    std::size_t length = 0;
  };

  static Prefix make_prefix(const TriplePattern& p, Index index) {
    const std::array<const std::optional<Term>*, 3> slots{&p.subject, &p.predicate,
                                                         &p.object};
    Prefix prefix;
    for (int i : order_of(index)) {
      if (!slots[i]->has_value()) break;
      prefix.terms[prefix.length++] = &**slots[i];
    }
    return prefix;
  }

  template <Order const& kOrder>
  struct KeyLess {
    using is_transparent = void;

    template <typename A, typename B>
    bool operator()(const A& a, const B& b) const {
      return compare(a, b) < 0;
    }

   private:
    static int compare(const Triple& a, const Triple& b) {
      for (int i : kOrder) {
        const auto c = component(a, i) <=> component(b, i);
        if (c != 0) return c < 0 ? -1 : 1;
      }
      return 0;
    }
    static int compare(const Triple* a, const Triple* b) { return compare(*a, *b); }
    static int compare(const Triple& a, const Prefix& p) {
      for (std::size_t k = 0; k < p.length; ++k) {
        const auto c = component(a, kOrder[k]) <=> *p.terms[k];
        if (c != 0) return c < 0 ? -1 : 1;
      }
      return 0;
    }
    static int compare(const Triple* a, const Prefix& p) { return compare(*a, p); }
    static int compare(const Prefix& p, const Triple& a) { return -compare(a, p); }
    static int compare(const Prefix& p, const Triple* a) { return -compare(*a, p); }
  };

  std::set<Triple, KeyLess<kSpo>> spo_;
  std::set<const Triple*, KeyLess<kPos>> pos_;
  std::set<const Triple*, KeyLess<kOsp>> osp_;
};

}  // namespace semq
