#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace semq {

enum class Errc {
  // rdf-core
  EmptyIri,
  WhitespaceInIri,
  MissingScheme,
  IllegalIriCharacter,
  InvalidLanguageTag,
  InvalidBlankLabel,
  UnknownPrefix,
  MalformedQName,
  LiteralSubject,
  NonIriPredicate,
  // parsers
  Syntax,
  // ontology
  DuplicateClass,
  UnknownParent,
  CycleWouldForm,
  UnknownDomainClass,
  DuplicateProperty,
  DuplicateIndividual,
  UnknownClass,
  UnknownProperty,
  DomainViolation,
  MultipleParents,
  MultipleTypes,
  // sparql
  EmptyProjection,
  ProjectedVariableUnused,
  // keyword search
  FractionOutOfRange,
  DuplicateDocument,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::EmptyIri: return "EmptyIri";
    case Errc::WhitespaceInIri: return "WhitespaceInIri";
    case Errc::MissingScheme: return "MissingScheme";
    case Errc::IllegalIriCharacter: return "IllegalIriCharacter";
    case Errc::InvalidLanguageTag: return "InvalidLanguageTag";
    case Errc::InvalidBlankLabel: return "InvalidBlankLabel";
    case Errc::UnknownPrefix: return "UnknownPrefix";
    case Errc::MalformedQName: return "MalformedQName";
    case Errc::LiteralSubject: return "LiteralSubject";
    case Errc::NonIriPredicate: return "NonIriPredicate";
    case Errc::Syntax: return "Syntax";
    case Errc::DuplicateClass: return "DuplicateClass";
    case Errc::UnknownParent: return "UnknownParent";
    case Errc::CycleWouldForm: return "CycleWouldForm";
    case Errc::UnknownDomainClass: return "UnknownDomainClass";
    case Errc::DuplicateProperty: return "DuplicateProperty";
    case Errc::DuplicateIndividual: return "DuplicateIndividual";
    case Errc::UnknownClass: return "UnknownClass";
    case Errc::UnknownProperty: return "UnknownProperty";
    case Errc::DomainViolation: return "DomainViolation";
    case Errc::MultipleParents: return "MultipleParents";
    case Errc::MultipleTypes: return "MultipleTypes";
    case Errc::EmptyProjection: return "EmptyProjection";
    case Errc::ProjectedVariableUnused: return "ProjectedVariableUnused";
    case Errc::FractionOutOfRange: return "FractionOutOfRange";
    case Errc::DuplicateDocument: return "DuplicateDocument";
  }
  return "Unknown";
}

/// Location of a parse failure. Line and column are 1-based; a position one
/// past the last character denotes end-of-input.
struct ParseDiagnostic {
  enum class Severity { error };

  std::size_t line = 1;
  std::size_t column = 1;
  std::string message;
  Severity severity = Severity::error;

  std::string str() const {
    return std::to_string(line) + ":" + std::to_string(column) + ": error: " +
           message;
  }
};

/// The single exception type thrown by the library. Parse failures carry a
/// diagnostic; everything else carries only the code and a message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Error(Errc code, ParseDiagnostic diagnostic)
      : std::runtime_error(diagnostic.str()),
        code_(code),
        diagnostic_(std::move(diagnostic)) {}

  Errc code() const noexcept { return code_; }
  const std::optional<ParseDiagnostic>& diagnostic() const noexcept {
    return diagnostic_;
  }

 private:
  Errc code_;
  std::optional<ParseDiagnostic> diagnostic_;
};

}  // namespace semq
