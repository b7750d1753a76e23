#ifndef CPLOGIC_PARSER_HPP
#define CPLOGIC_PARSER_HPP

#include <string>
#include <string_view>
#include <vector>

#include "cplogic/errors.hpp"
#include "cplogic/law.hpp"

namespace cplogic {

/// Location and message of a rejected input. Lines and columns are 1-based.
struct SourceDiagnostic {
  int line = 1;
  int column = 1;
  std::string message;

  std::string to_string() const {
    return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  }
};

class ParseError : public DomainError {
 public:
  explicit ParseError(SourceDiagnostic d)
      : DomainError(d.to_string()), diagnostic(std::move(d)) {}
  SourceDiagnostic diagnostic;
};

/// One story step: apply `law_id` choosing `outcome` (1-based disjunct
/// index, or kOutcomeNone for the implicit empty disjunct).
struct Step {
  int law_id = 0;
  int outcome = kOutcomeNone;

  auto operator<=>(const Step&) const = default;
};

// Theory text. Grammar (whitespace-insensitive, '%' comments to end of line):
//   theory   = { law } ;
//   law      = [ "#" label ] head "<-" [ body ] "." ;
//   head     = [ disjunct { "|" disjunct } ] ;
//   disjunct = atom [ ":" prob ] ;            omitted prob means 1
//   body     = literal { "," literal } ;
//   literal  = [ "~" ] atom ;
//   atom     = ident [ "(" ident { "," ident } ")" ] ;
//   prob     = decimal | integer "/" integer ;
CPTheory parse_theory(std::string_view text);

/// Canonical listing; parse_theory(format_theory(t)) == t.
std::string format_theory(const CPTheory& theory);

std::string format_law(const CPLaw& law);

/// Story text: whitespace-separated "lawref:outcome" steps, where lawref is
/// a law id or label and outcome is a 1-based disjunct index or "none".
/// Steps are resolved against `theory` but not replayed; semantic
/// validation is Story::validate's job.
std::vector<Step> parse_story_steps(std::string_view text, const CPTheory& theory);

std::string format_steps(const std::vector<Step>& steps);

/// One literal, e.g. "Breaks" or "~Throws(Suzy)".
Literal parse_literal(std::string_view text);

/// Comma-separated conjunction of literals.
std::vector<Literal> parse_literals(std::string_view text);

}  // namespace cplogic

#endif
