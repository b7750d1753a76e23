#include "cplogic/story.hpp"

#include <algorithm>

#include "cplogic/errors.hpp"
#include "cplogic/semantics.hpp"

namespace cplogic {

Story Story::validate(CPTheory theory, std::vector<Step> steps) {
  Story story;
  NodeState state = initial_state(theory);
  story.truths_.push_back(state.true_atoms);
  for (size_t i = 0; i < steps.size(); ++i) {
    const Step& step = steps[i];
    int index = -1;
    for (size_t j = 0; j < theory.laws().size(); ++j)
      if (theory.laws()[j].id == step.law_id) index = static_cast<int>(j);
    if (index < 0)
      throw DomainError("story references unknown law id " + std::to_string(step.law_id));
    if (has_bit(state.applied, index))
      throw DomainError("law " + std::to_string(step.law_id) + " applied twice");
    if (!has_bit(applicable_laws(theory, state), index))
      throw DomainError("law " + std::to_string(step.law_id) + " is not applicable at step " +
                        std::to_string(i + 1));
    state = apply_law(theory, state, index, step.outcome);
    story.truths_.push_back(state.true_atoms);
  }
  if (LawBits rest = applicable_laws(theory, state)) {
    for (size_t j = 0; j < theory.laws().size(); ++j)
      if (has_bit(rest, j))
        throw DomainError("story ends while law " + std::to_string(theory.laws()[j].id) +
                          " is still applicable");
  }
  story.leaf_ = state.true_atoms;
  story.steps_ = std::move(steps);
  story.theory_ = std::move(theory);
  return story;
}

std::set<Atom> Story::leaf_atoms() const {
  std::set<Atom> out;
  for (int i = 0; i < theory_.atom_count(); ++i)
    if (has_bit(leaf_, i)) out.insert(theory_.atom_at(i));
  return out;
}

bool Story::leaf_has(const Atom& a) const {
  auto id = theory_.atom_id(a);
  return id && has_bit(leaf_, *id);
}

bool Story::applied(int law_id) const { return step_of(law_id).has_value(); }

std::optional<int> Story::outcome_of(int law_id) const {
  for (const auto& step : steps_)
    if (step.law_id == law_id) return step.outcome;
  return std::nullopt;
}

std::optional<int> Story::step_of(int law_id) const {
  for (size_t i = 0; i < steps_.size(); ++i)
    if (steps_[i].law_id == law_id) return static_cast<int>(i) + 1;
  return std::nullopt;
}

std::map<int, int> Story::profile() const {
  std::map<int, int> out;
  for (const auto& step : steps_) out[step.law_id] = step.outcome;
  return out;
}

std::set<int> Story::applied_ids() const {
  std::set<int> out;
  for (const auto& step : steps_) out.insert(step.law_id);
  return out;
}

Story parse_story(std::string_view text, const CPTheory& theory) {
  return Story::validate(theory, parse_story_steps(text, theory));
}

std::string format_story(const Story& story) { return format_steps(story.steps()) + "\n"; }

int effect_position(const Story& story, const Atom& effect) {
  AtomId id = story.theory().atom_id_checked(effect);
  if (!has_bit(story.leaf(), id))
    throw DomainError("effect " + effect.to_string() + " does not hold in the story's leaf");
  const auto& truths = story.truth_prefix();
  for (size_t k = 1; k < truths.size(); ++k)
    if (has_bit(truths[k], id)) return static_cast<int>(k);
  throw DomainError("effect " + effect.to_string() + " true at the root");  // unreachable
}

namespace {

// Position at which a never-occurring effect became settled: the first
// prefix after which the atom can no longer become true (0 when it is
// impossible from the root). Lets the temporal predicates extend to
// negative effects.
int settled_position(const Story& story, AtomId id) {
  const CPTheory& t = story.theory();
  LawBits applied = 0;
  if (!has_bit(possible_atoms(t, story.truth_prefix()[0], applied), id)) return 0;
  for (size_t k = 0; k < story.steps().size(); ++k) {
    int index = -1;
    for (size_t j = 0; j < t.laws().size(); ++j)
      if (t.laws()[j].id == story.steps()[k].law_id) index = static_cast<int>(j);
    applied |= bit(index);
    if (!has_bit(possible_atoms(t, story.truth_prefix()[k + 1], applied), id))
      return static_cast<int>(k) + 1;
  }
  throw DomainError("atom " + t.atom_at(id).to_string() + " still possible at the leaf");
}

int event_position(const Story& story, const Literal& effect) {
  if (effect.positive) return effect_position(story, effect.atom);
  return settled_position(story, story.theory().atom_id_checked(effect.atom));
}

}  // namespace

bool applied_before(const Story& story, int law_id, const Atom& effect) {
  auto step = story.step_of(law_id);
  if (!step) return false;
  return *step <= effect_position(story, effect);
}

bool effect_pretrue(const Story& story, int law_id) {
  auto step = story.step_of(law_id);
  if (!step) throw DomainError("law " + std::to_string(law_id) + " was not applied in the story");
  auto outcome = story.outcome_of(law_id);
  if (*outcome == kOutcomeNone)
    throw DomainError("law " + std::to_string(law_id) + " was applied with the empty outcome");
  const CPLaw& law = story.theory().law_checked(law_id);
  AtomId produced = story.theory().atom_id_checked(law.head[*outcome - 1].atom);
  return has_bit(story.truth_prefix()[*step - 1], produced);
}

bool could_have_applied(const Story& story, int law_id, const Atom& effect) {
  int position = effect_position(story, effect);
  if (auto step = story.step_of(law_id); step && *step <= position)
    throw DomainError("law " + std::to_string(law_id) + " was applied before the effect");
  std::vector<Step> prefix(story.steps().begin(), story.steps().begin() + position);
  for (const auto& branch : enumerate_branches_from(story.theory(), prefix))
    if (branch.story.applied(law_id)) return true;
  return false;
}

std::set<int> sibling_outcomes(const Story& story, int law_id) {
  auto chosen = story.outcome_of(law_id);
  if (!chosen) throw DomainError("law " + std::to_string(law_id) + " was not applied in the story");
  const CPLaw& law = story.theory().law_checked(law_id);
  std::set<int> out;
  for (int k = 1; k <= static_cast<int>(law.head.size()); ++k)
    if (k != *chosen) out.insert(k);
  if (!law.head_remainder().is_zero() && *chosen != kOutcomeNone) out.insert(kOutcomeNone);
  return out;
}

Context Context::create(Story story, Literal cause, Literal effect) {
  auto holds = [&](const Literal& l) {
    auto id = story.theory().atom_id(l.atom);
    if (!id) throw DomainError("unknown atom " + l.atom.to_string());
    return has_bit(story.leaf(), *id) == l.positive;
  };
  if (!holds(cause))
    throw DomainError("cause " + cause.to_string() + " does not hold in the story's leaf");
  if (!holds(effect))
    throw DomainError("effect " + effect.to_string() + " does not hold in the story's leaf");
  return Context{std::move(story), std::move(cause), std::move(effect)};
}

}  // namespace cplogic
