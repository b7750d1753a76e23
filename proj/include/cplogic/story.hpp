#ifndef CPLOGIC_STORY_HPP
#define CPLOGIC_STORY_HPP

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "cplogic/law.hpp"
#include "cplogic/parser.hpp"

namespace cplogic {

/// A branch of a probability tree: an ordered record of which laws were
/// applied with which outcomes. Construction validates the record by
/// replay: every step's law must be applicable at its position, no law is
/// applied twice, and no law may remain applicable at the end.
class Story {
 public:
  static Story validate(CPTheory theory, std::vector<Step> steps);

  const CPTheory& theory() const { return theory_; }
  const std::vector<Step>& steps() const { return steps_; }

  /// True atoms of the final state.
  AtomBits leaf() const { return leaf_; }
  std::set<Atom> leaf_atoms() const;
  bool leaf_has(const Atom& a) const;

  bool applied(int law_id) const;
  /// Chosen outcome of an applied law; nullopt when the law never fired.
  std::optional<int> outcome_of(int law_id) const;
  /// 1-based position of the law's step; nullopt when not applied.
  std::optional<int> step_of(int law_id) const;

  /// Applied law ids mapped to their outcomes.
  std::map<int, int> profile() const;
  std::set<int> applied_ids() const;

  /// States along the branch; replay_states()[k] is the state after k
  /// steps, so front() is the root and back() the leaf.
  const std::vector<AtomBits>& truth_prefix() const { return truths_; }

  bool operator==(const Story& o) const {
    return steps_ == o.steps_ && theory_ == o.theory_;
  }

 private:
  Story() = default;

  CPTheory theory_;
  std::vector<Step> steps_;
  std::vector<AtomBits> truths_;  // truth set after each prefix, size steps+1
  AtomBits leaf_ = 0;
};

Story parse_story(std::string_view text, const CPTheory& theory);
std::string format_story(const Story& story);

/// 1-based index of the step that made `effect` true.
int effect_position(const Story& story, const Atom& effect);

/// True iff the law was applied at or before the step at which `effect`
/// became true. The producing step itself counts.
bool applied_before(const Story& story, int law_id, const Atom& effect);

/// True iff the law's chosen atom was already true when the law was
/// applied (the application had no effect). Requires an applied law with
/// a nonempty outcome.
bool effect_pretrue(const Story& story, int law_id);

/// For a law not applied before `effect`: true iff some branch sharing
/// the story's prefix up to and including the effect step applies the
/// law. Searched by exhaustive enumeration from the prefix.
bool could_have_applied(const Story& story, int law_id, const Atom& effect);

/// Alternative outcomes of an applied law: the other head disjuncts plus
/// the implicit empty disjunct when the remainder is positive.
std::set<int> sibling_outcomes(const Story& story, int law_id);

// Literal-effect generalizations of the temporal predicates. A positive
// effect occurs at the step making it true; a negative effect counts as
// occurring at the step after which its atom became impossible (0 when it
// is impossible from the root).
int event_position(const Story& story, const Literal& effect);
bool applied_before(const Story& story, int law_id, const Literal& effect);
bool could_have_applied(const Story& story, int law_id, const Literal& effect);

/// The question under analysis: did `cause` bring about `effect` in this
/// story? Both must hold in the story's leaf (a negative cause/effect
/// holds when its atom is absent).
struct Context {
  Story story;
  Literal cause;
  Literal effect;

  static Context create(Story story, Literal cause, Literal effect);

  const CPTheory& theory() const { return story.theory(); }
};

}  // namespace cplogic

#endif
