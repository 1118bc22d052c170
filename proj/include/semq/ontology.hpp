#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semq/error.hpp"
#include "semq/rdf.hpp"
#include "semq/store.hpp"

namespace semq {

struct OntClass {
  Iri name;
  std::optional<Iri> parent;  // unset: direct child of the root
};

enum class PropertyKind { object, datatype };

struct OntProperty {
  Iri name;
  PropertyKind kind;
  Iri domain;
  // Recorded for export; not enforced.
  std::optional<Iri> range;
};

struct Individual {
  Iri name;
  Iri asserted_class;
  std::vector<std::pair<Iri, Term>> property_values;
};

/// Classes in a single-parent tree under owl:Thing, properties with
/// domains, and individuals. Mutators validate fully before changing
/// anything, so a failed call leaves the ontology untouched.
class Ontology {
 public:
  explicit Ontology(Iri iri) : iri_(std::move(iri)) {}

  static const Iri& root() {
    static const Iri thing = make_iri(std::string(vocab::owl) + "Thing");
    return thing;
  }

  const Iri& iri() const noexcept { return iri_; }
  const std::map<Iri, OntClass>& classes() const noexcept { return classes_; }
  const std::map<Iri, OntProperty>& properties() const noexcept { return properties_; }
  const std::map<Iri, Individual>& individuals() const noexcept { return individuals_; }

  bool has_class(const Iri& c) const { return c == root() || classes_.contains(c); }

  Ontology& define_class(const Iri& name, std::optional<Iri> parent = {}) {
    if (parent && *parent == name)
      throw Error(Errc::CycleWouldForm, "class " + name.value() + " cannot be its own parent");
    if (has_class(name))
      throw Error(Errc::DuplicateClass, "class already declared: " + name.value());
    if (parent && !has_class(*parent))
      throw Error(Errc::UnknownParent, "unknown parent class: " + parent->value());
    if (parent && *parent == root()) parent.reset();
    children_[parent.value_or(root())].insert(name);
    classes_.emplace(name, OntClass{name, std::move(parent)});
    return *this;
  }

  Ontology& define_property(OntProperty p) {
    if (properties_.contains(p.name))
      throw Error(Errc::DuplicateProperty, "property already declared: " + p.name.value());
    if (!has_class(p.domain))
      throw Error(Errc::UnknownDomainClass,
                  "domain of " + p.name.value() + " is not a declared class: " + p.domain.value());
    auto name = p.name;
    properties_.emplace(std::move(name), std::move(p));
    return *this;
  }

  Ontology& assert_individual(Individual ind) {
    if (individuals_.contains(ind.name))
      throw Error(Errc::DuplicateIndividual, "individual already asserted: " + ind.name.value());
    if (!has_class(ind.asserted_class))
      throw Error(Errc::UnknownClass, "unknown class: " + ind.asserted_class.value());
    for (const auto& [property, value] : ind.property_values) {
      auto it = properties_.find(property);
      if (it == properties_.end())
        throw Error(Errc::UnknownProperty, "unknown property: " + property.value());
      if (!is_subclass_of(ind.asserted_class, it->second.domain))
        throw Error(Errc::DomainViolation,
                    "property " + property.value() + " has domain " + it->second.domain.value() +
                        ", which does not include " + ind.asserted_class.value());
    }
    auto name = ind.name;
    individuals_.emplace(std::move(name), std::move(ind));
    return *this;
  }

  /// Parent of a declared class; the root for top-level classes.
  Iri parent_of(const Iri& c) const {
    require_class(c);
    if (c == root()) return root();
    return classes_.at(c).parent.value_or(root());
  }

  /// Direct children, ordered by IRI.
  std::vector<Iri> children(const Iri& c) const {
    require_class(c);
    auto it = children_.find(c);
    if (it == children_.end()) return {};
    return {it->second.begin(), it->second.end()};
  }

  /// Reflexive-transitive subclass test.
  bool is_subclass_of(const Iri& c, const Iri& ancestor) const {
    if (ancestor == root()) return has_class(c);
    for (const Iri* cur = &c;;) {
      if (*cur == ancestor) return true;
      auto it = classes_.find(*cur);
      if (it == classes_.end() || !it->second.parent) return false;
      cur = &*it->second.parent;
    }
  }

  /// Referential integrity: every parent, domain, asserted class and
  /// property value resolves, and domains hold.
  bool audit() const {
    for (const auto& [name, cls] : classes_) {
      if (cls.parent && !classes_.contains(*cls.parent)) return false;
    }
    for (const auto& [name, p] : properties_) {
      if (!has_class(p.domain)) return false;
    }
    for (const auto& [name, ind] : individuals_) {
      if (!has_class(ind.asserted_class)) return false;
      for (const auto& [property, value] : ind.property_values) {
        auto it = properties_.find(property);
        if (it == properties_.end() || !is_subclass_of(ind.asserted_class, it->second.domain))
          return false;
      }
    }
    return true;
  }

  void require_class(const Iri& c) const {
    if (!has_class(c)) throw Error(Errc::UnknownClass, "unknown class: " + c.value());
  }

 private:
  Iri iri_;
  std::map<Iri, OntClass> classes_;
  std::map<Iri, std::set<Iri>> children_;
  std::map<Iri, OntProperty> properties_;
  std::map<Iri, Individual> individuals_;
};

/// Strict descendants of c.
inline std::set<Iri> subclasses_transitive(const Ontology& ont, const Iri& c) {
  std::set<Iri> out;
  std::deque<Iri> frontier{c};
  ont.require_class(c);
  while (!frontier.empty()) {
    for (Iri& child : ont.children(frontier.front())) {
      if (out.insert(child).second) frontier.push_back(std::move(child));
    }
    frontier.pop_front();
  }
  return out;
}

/// Individuals asserted to c, or with `inferred` also to any subclass of c.
inline std::set<Iri> instances_of(const Ontology& ont, const Iri& c, bool inferred) {
  ont.require_class(c);
  std::set<Iri> out;
  for (const auto& [name, ind] : ont.individuals()) {
    if (inferred ? ont.is_subclass_of(ind.asserted_class, c) : ind.asserted_class == c)
      out.insert(name);
  }
  return out;
}

namespace detail {

inline Iri vocab_iri(std::string_view ns, std::string_view local) {
  return make_iri(std::string(ns) + std::string(local));
}

}  // namespace detail

/// Class, subclass, property declaration, type and property-value triples.
inline std::vector<Triple> to_triples(const Ontology& ont) {
  using detail::vocab_iri;
  const Iri type = rdf_type();
  const Iri sub_class_of = vocab_iri(vocab::rdfs, "subClassOf");
  const Iri domain = vocab_iri(vocab::rdfs, "domain");
  const Iri range = vocab_iri(vocab::rdfs, "range");

  std::vector<Triple> out;
  out.emplace_back(ont.iri(), type, vocab_iri(vocab::owl, "Ontology"));
  for (const auto& [name, cls] : ont.classes()) {
    out.emplace_back(name, type, vocab_iri(vocab::owl, "Class"));
    out.emplace_back(name, sub_class_of, cls.parent.value_or(Ontology::root()));
  }
  for (const auto& [name, p] : ont.properties()) {
    out.emplace_back(name, type,
                     vocab_iri(vocab::owl, p.kind == PropertyKind::object ? "ObjectProperty"
                                                                           : "DatatypeProperty"));
    out.emplace_back(name, domain, p.domain);
    if (p.range) out.emplace_back(name, range, *p.range);
  }
  for (const auto& [name, ind] : ont.individuals()) {
    out.emplace_back(name, type, ind.asserted_class);
    for (const auto& [property, value] : ind.property_values)
      out.emplace_back(name, property, value);
  }
  return out;
}

/// Rebuilds an ontology from triples shaped like to_triples output. Triples
/// about resources that are neither ontology, class, property nor
/// individual are ignored.
inline Ontology ontology_from_triples(const Store& store) {
  using detail::vocab_iri;
  const Term type = rdf_type();
  const Term sub_class_of = vocab_iri(vocab::rdfs, "subClassOf");
  const Term domain = vocab_iri(vocab::rdfs, "domain");
  const Term range = vocab_iri(vocab::rdfs, "range");

  auto subjects_of_type = [&](std::string_view owl_local) {
    std::vector<Iri> out;
    for (const Triple& t : store.match({std::nullopt, type, vocab_iri(vocab::owl, owl_local)})) {
      if (t.subject().is_iri()) out.push_back(t.subject().iri());
    }
    return out;
  };
  auto single_iri = [&](const Iri& subject, const Term& predicate, Errc many) -> std::optional<Iri> {
    std::optional<Iri> found;
    for (const Triple& t : store.match({Term(subject), predicate, std::nullopt})) {
      if (!t.object().is_iri()) continue;
      if (found && *found != t.object().iri())
        throw Error(many, subject.value() + " has more than one " + predicate.str());
      found = t.object().iri();
    }
    return found;
  };

  const auto ontology_iris = subjects_of_type("Ontology");
  Ontology ont(ontology_iris.empty() ? make_iri("urn:semq:ontology") : ontology_iris.front());

  // Classes, parents first.
  std::map<Iri, std::optional<Iri>> pending;
  for (const Iri& c : subjects_of_type("Class")) {
    if (c != Ontology::root()) pending.emplace(c, single_iri(c, sub_class_of, Errc::MultipleParents));
  }
  while (!pending.empty()) {
    bool progressed = false;
    for (auto it = pending.begin(); it != pending.end();) {
      if (!it->second || ont.has_class(*it->second)) {
        ont.define_class(it->first, it->second);
        it = pending.erase(it);
        progressed = true;
      } else {
        ++it;
      }
    }
    if (!progressed) {
      const auto& [name, parent] = *pending.begin();
      if (pending.contains(*parent))
        throw Error(Errc::CycleWouldForm, "subclass cycle through " + name.value());
      throw Error(Errc::UnknownParent, "unknown parent class: " + parent->value());
    }
  }

  for (auto kind : {PropertyKind::object, PropertyKind::datatype}) {
    for (const Iri& p : subjects_of_type(kind == PropertyKind::object ? "ObjectProperty"
                                                                       : "DatatypeProperty")) {
      auto dom = single_iri(p, domain, Errc::UnknownDomainClass);
      if (!dom) throw Error(Errc::UnknownDomainClass, "property without domain: " + p.value());
      ont.define_property({p, kind, *dom, single_iri(p, range, Errc::DuplicateProperty)});
    }
  }

  // Individuals: IRI subjects typed with exactly one declared class.
  std::map<Iri, Iri> typed;
  for (const Triple& t : store.match({std::nullopt, type, std::nullopt})) {
    if (!t.subject().is_iri() || !t.object().is_iri() || !ont.has_class(t.object().iri())) continue;
    const Iri& name = t.subject().iri();
    if (ont.has_class(name) || ont.properties().contains(name)) continue;
    auto [it, inserted] = typed.emplace(name, t.object().iri());
    if (!inserted && it->second != t.object().iri())
      throw Error(Errc::MultipleTypes, name.value() + " is asserted to more than one class");
  }
  for (const auto& [name, cls] : typed) {
    Individual ind{name, cls, {}};
    for (const Triple& t : store.match({Term(name), std::nullopt, std::nullopt})) {
      if (t.predicate() == type) continue;
      ind.property_values.emplace_back(t.predicate().iri(), t.object());
    }
    ont.assert_individual(std::move(ind));
  }
  return ont;
}

/// Fragment or last path segment of an IRI; the whole IRI if neither exists.
inline std::string local_name(const Iri& iri) {
  const std::string& v = iri.value();
  const auto cut = v.find_last_of("#/");
  if (cut == std::string::npos || cut + 1 == v.size()) return v;
  return v.substr(cut + 1);
}

struct DotOptions {
  bool include_instances = false;
};

/// Graphviz digraph of the class tree rooted at "owl:Thing", edges from
/// parent to child. Instances hang off their asserted class with dashed
/// edges when requested.
inline std::string export_dot(const Ontology& ont, const DotOptions& options = {}) {
  std::map<std::string, int> label_uses;
  for (const auto& [name, cls] : ont.classes()) ++label_uses[local_name(name)];
  if (options.include_instances) {
    for (const auto& [name, ind] : ont.individuals()) ++label_uses[local_name(name)];
  }
  auto node_id = [&](const Iri& iri) {
    std::string label = iri == Ontology::root() ? "owl:Thing" : local_name(iri);
    if (iri != Ontology::root() && (label_uses[label] > 1 || label == "owl:Thing")) label = iri.value();
    std::string quoted = "\"";
    for (char c : label) {
      if (c == '"' || c == '\\') quoted += '\\';
      quoted += c;
    }
    return quoted + "\"";
  };

  std::string out = "digraph ontology {\n  rankdir=TB;\n  node [shape=box];\n";
  out += "  " + node_id(Ontology::root()) + ";\n";
  for (const auto& [name, cls] : ont.classes()) out += "  " + node_id(name) + ";\n";

  std::deque<Iri> frontier{Ontology::root()};
  while (!frontier.empty()) {
    const Iri parent = frontier.front();
    frontier.pop_front();
    for (Iri& child : ont.children(parent)) {
      out += "  " + node_id(parent) + " -> " + node_id(child) + ";\n";
      frontier.push_back(std::move(child));
    }
  }
  if (options.include_instances) {
    for (const auto& [name, ind] : ont.individuals()) {
      out += "  " + node_id(name) + " [shape=ellipse];\n";
      out += "  " + node_id(ind.asserted_class) + " -> " + node_id(name) + " [style=dashed];\n";
    }
  }
  out += "}\n";
  return out;
}

/// The Indian-universities ontology: Universities (with subclass Colleges),
/// Courses and States, five object and five datatype properties, and the
/// nineteen individuals of the instance grid, each carrying its name.
inline Ontology load_universities_fixture() {
  const std::string ns = "http://www.indianuniversities/ourontology1.owl#";
  auto iri = [&](std::string_view local) {
    std::string v = ns;
    for (char c : local) v += c == ' ' ? '_' : c;
    return make_iri(v);
  };

  Ontology ont(make_iri("http://www.indianuniversities/ourontology1.owl"));
  const Iri universities = iri("Universities");
  const Iri colleges = iri("Colleges");
  const Iri courses = iri("Courses");
  const Iri states = iri("States");
  ont.define_class(universities)
      .define_class(colleges, universities)
      .define_class(courses)
      .define_class(states);

  ont.define_property({iri("hasChiefMinister"), PropertyKind::object, states, std::nullopt})
      .define_property({iri("hasColleges"), PropertyKind::object, universities, colleges})
      .define_property({iri("hasCourses"), PropertyKind::object, universities, courses})
      .define_property({iri("hasPrincipal"), PropertyKind::object, colleges, std::nullopt})
      .define_property({iri("hasViceChancellor"), PropertyKind::object, universities, std::nullopt});

  const Iri xsd_string = make_iri(std::string(vocab::xsd) + "string");
  ont.define_property({iri("hasUniversityName"), PropertyKind::datatype, universities, xsd_string})
      .define_property({iri("hasCollegeName"), PropertyKind::datatype, colleges, xsd_string})
      .define_property({iri("hasCourseName"), PropertyKind::datatype, courses, xsd_string})
      .define_property({iri("hasStateName"), PropertyKind::datatype, states, xsd_string})
      .define_property({iri("hasPhoneNumber"), PropertyKind::datatype, universities, xsd_string});

  auto add_all = [&](const Iri& cls, std::string_view name_property,
                     std::initializer_list<std::string_view> names) {
    for (std::string_view name : names) {
      ont.assert_individual({iri(name), cls, {{iri(name_property), Literal(std::string(name))}}});
    }
  };
  add_all(universities, "hasUniversityName", {"IP University", "Delhi University", "IIT"});
  add_all(colleges, "hasCollegeName",
          {"BVCOE", "DCE", "IIT Chennai", "IIT Delhi", "IIT Mumbai", "NSIT", "MAIT"});
  add_all(courses, "hasCourseName", {"BTECH", "MTECH", "MBA", "MCA", "MEDICAL"});
  add_all(states, "hasStateName", {"New Delhi", "Mumbai", "Chennai", "Kolkata"});
  return ont;
}

}  // namespace semq
