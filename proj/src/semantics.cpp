#include "cplogic/semantics.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <random>

#include "cplogic/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cplogic {

namespace {

// Per-law bitmask view of a theory, precomputed once per evaluation.
struct LawInfo {
  int id = 0;
  AtomBits pos_mask = 0;
  AtomBits neg_mask = 0;
  std::vector<AtomId> head_atoms;     // per disjunct
  std::vector<Rational> head_probs;   // per disjunct
  Rational remainder;
  bool deterministic = false;
  bool empty_head = false;
};

struct TheoryView {
  const CPTheory* theory = nullptr;
  std::vector<LawInfo> laws;
  AtomBits all_atoms = 0;

  explicit TheoryView(const CPTheory& t) : theory(&t), all_atoms(t.all_atoms_mask()) {
    laws.reserve(t.laws().size());
    for (const auto& law : t.laws()) {
      LawInfo info;
      info.id = law.id;
      for (const auto& l : law.body) {
        AtomBits b = bit(t.atom_id_checked(l.atom));
        (l.positive ? info.pos_mask : info.neg_mask) |= b;
      }
      for (const auto& d : law.head) {
        info.head_atoms.push_back(t.atom_id_checked(d.atom));
        info.head_probs.push_back(d.prob);
      }
      info.remainder = law.head_remainder();
      info.deterministic = law.deterministic();
      info.empty_head = law.head.empty();
      laws.push_back(std::move(info));
    }
  }

  int size() const { return static_cast<int>(laws.size()); }
};

// Possible: true now, or reachable through a chain of not-yet-applied
// laws whose positive bodies are possible and whose negated atoms are not
// forced. Forced: true now, or guaranteed by a not-yet-applied
// deterministic law whose positive body is forced and whose negated atoms
// are already impossible. Both fixpoints run stratum by stratum; negated
// body atoms sit strictly below their heads, so their possible/forced
// status is final by the time it is consulted.
AtomBits possible_atoms_impl(const TheoryView& view, AtomBits true_atoms, LawBits applied) {
  const CPTheory& t = *view.theory;
  AtomBits possible = true_atoms;
  AtomBits forced = true_atoms;
  for (int stratum = 0; stratum < std::max(1, t.strata_count()); ++stratum) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int i = 0; i < view.size(); ++i) {
        if (has_bit(applied, i)) continue;
        const LawInfo& law = view.laws[i];
        if (law.empty_head) continue;
        if ((law.pos_mask & ~possible) == 0 && (law.neg_mask & forced) == 0) {
          for (AtomId a : law.head_atoms) {
            if (t.stratum(a) == stratum && !has_bit(possible, a)) {
              possible |= bit(a);
              changed = true;
            }
          }
        }
        if (law.deterministic && (law.pos_mask & ~forced) == 0 &&
            (law.neg_mask & possible) == 0) {
          AtomId a = law.head_atoms[0];
          if (t.stratum(a) == stratum && !has_bit(forced, a)) {
            forced |= bit(a);
            changed = true;
          }
        }
      }
    }
  }
  return possible;
}

LawBits applicable_laws_impl(const TheoryView& view, const NodeState& state) {
  LawBits out = 0;
  for (int i = 0; i < view.size(); ++i) {
    if (has_bit(state.applied, i)) continue;
    const LawInfo& law = view.laws[i];
    if (law.empty_head) continue;
    if ((law.pos_mask & ~state.true_atoms) == 0 && (law.neg_mask & ~state.impossible) == 0)
      out |= bit(i);
  }
  return out;
}

NodeState make_state(const TheoryView& view, AtomBits true_atoms, LawBits applied) {
  NodeState s;
  s.true_atoms = true_atoms;
  s.applied = applied;
  s.impossible = view.all_atoms & ~possible_atoms_impl(view, true_atoms, applied);
  return s;
}

NodeState child_state(const TheoryView& view, const NodeState& state, int law_index, int outcome) {
  const LawInfo& law = view.laws[law_index];
  AtomBits truths = state.true_atoms;
  if (outcome != kOutcomeNone) truths |= bit(law.head_atoms[outcome - 1]);
  return make_state(view, truths, state.applied | bit(law_index));
}

// Outcomes of a law application as (outcome index, probability) pairs,
// disjuncts first, the implicit empty disjunct last.
std::vector<std::pair<int, Rational>> law_outcomes(const LawInfo& law) {
  std::vector<std::pair<int, Rational>> out;
  for (size_t k = 0; k < law.head_probs.size(); ++k)
    out.emplace_back(static_cast<int>(k) + 1, law.head_probs[k]);
  if (!law.remainder.is_zero()) out.emplace_back(kOutcomeNone, law.remainder);
  return out;
}

struct BudgetCounter {
  std::atomic<std::uint64_t> visited{0};
  std::uint64_t limit = 0;

  // Returns false once the budget is exhausted (parallel paths bail out
  // on the flag and the caller rethrows after the region joins).
  bool tick() { return visited.fetch_add(1, std::memory_order_relaxed) < limit; }

  void check_serial() {
    if (!tick()) throw BudgetError("probability tree exceeds node budget of " + std::to_string(limit));
  }

  void throw_if_exceeded() const {
    if (visited.load() > limit)
      throw BudgetError("probability tree exceeds node budget of " + std::to_string(limit));
  }
};

int pick_law(const Schedule& schedule, const TheoryView& view, LawBits applicable) {
  if (!schedule.preference.empty()) {
    for (int id : schedule.preference) {
      for (int i = 0; i < view.size(); ++i)
        if (view.laws[i].id == id && has_bit(applicable, i)) return i;
    }
  }
  for (int i = 0; i < view.size(); ++i)
    if (has_bit(applicable, i)) return i;
  return -1;
}

// ---- serial reference kernels ----

Rational fold_marginal_serial(const TheoryView& view, const Schedule& schedule,
                              const NodeState& state, AtomBits want, AtomBits avoid,
                              BudgetCounter& budget) {
  budget.check_serial();
  LawBits applicable = applicable_laws_impl(view, state);
  if (applicable == 0) {
    bool sat = (want & ~state.true_atoms) == 0 && (avoid & state.true_atoms) == 0;
    return sat ? Rational(1) : Rational(0);
  }
  int law = pick_law(schedule, view, applicable);
  Rational acc;
  for (const auto& [outcome, prob] : law_outcomes(view.laws[law]))
    acc += prob * fold_marginal_serial(view, schedule, child_state(view, state, law, outcome),
                                       want, avoid, budget);
  return acc;
}

void fold_distribution_serial(const TheoryView& view, const Schedule& schedule,
                              const NodeState& state, const Rational& weight,
                              Distribution& out, BudgetCounter& budget) {
  budget.check_serial();
  LawBits applicable = applicable_laws_impl(view, state);
  if (applicable == 0) {
    out.add(state.true_atoms, weight);
    return;
  }
  int law = pick_law(schedule, view, applicable);
  for (const auto& [outcome, prob] : law_outcomes(view.laws[law]))
    fold_distribution_serial(view, schedule, child_state(view, state, law, outcome),
                             weight * prob, out, budget);
}

// ---- OpenMP kernels ----
//
// Subtrees are independent; tasks fan out near the root and fold their
// results in fixed child order. Sums of exact rationals are associative,
// so the result is bit-identical to the serial reference.

constexpr int kTaskDepth = 5;

Rational fold_marginal_parallel(const TheoryView& view, const Schedule& schedule,
                                const NodeState& state, AtomBits want, AtomBits avoid,
                                BudgetCounter& budget, int depth) {
  if (!budget.tick()) return Rational(0);
  LawBits applicable = applicable_laws_impl(view, state);
  if (applicable == 0) {
    bool sat = (want & ~state.true_atoms) == 0 && (avoid & state.true_atoms) == 0;
    return sat ? Rational(1) : Rational(0);
  }
  int law = pick_law(schedule, view, applicable);
  auto outcomes = law_outcomes(view.laws[law]);
  std::vector<Rational> sub(outcomes.size());
  if (depth < kTaskDepth && outcomes.size() > 1) {
    for (size_t i = 0; i < outcomes.size(); ++i) {
#pragma omp task default(none) shared(view, schedule, sub, outcomes, budget) \
    firstprivate(i, state, law, want, avoid, depth)
      sub[i] = fold_marginal_parallel(view, schedule,
                                      child_state(view, state, law, outcomes[i].first),
                                      want, avoid, budget, depth + 1);
    }
#pragma omp taskwait
  } else {
    for (size_t i = 0; i < outcomes.size(); ++i)
      sub[i] = fold_marginal_parallel(view, schedule,
                                      child_state(view, state, law, outcomes[i].first),
                                      want, avoid, budget, depth + 1);
  }
  Rational acc;
  for (size_t i = 0; i < outcomes.size(); ++i) acc += outcomes[i].second * sub[i];
  return acc;
}

Distribution fold_distribution_parallel(const TheoryView& view, const Schedule& schedule,
                                        const NodeState& state, const Rational& weight,
                                        BudgetCounter& budget, int depth) {
  Distribution out;
  if (!budget.tick()) return out;
  LawBits applicable = applicable_laws_impl(view, state);
  if (applicable == 0) {
    out.add(state.true_atoms, weight);
    return out;
  }
  int law = pick_law(schedule, view, applicable);
  auto outcomes = law_outcomes(view.laws[law]);
  std::vector<Distribution> sub(outcomes.size());
  if (depth < kTaskDepth && outcomes.size() > 1) {
    for (size_t i = 0; i < outcomes.size(); ++i) {
#pragma omp task default(none) shared(view, schedule, sub, outcomes, budget) \
    firstprivate(i, state, law, weight, depth)
      sub[i] = fold_distribution_parallel(view, schedule,
                                          child_state(view, state, law, outcomes[i].first),
                                          weight * outcomes[i].second, budget, depth + 1);
    }
#pragma omp taskwait
  } else {
    for (size_t i = 0; i < outcomes.size(); ++i)
      sub[i] = fold_distribution_parallel(view, schedule,
                                          child_state(view, state, law, outcomes[i].first),
                                          weight * outcomes[i].second, budget, depth + 1);
  }
  for (const auto& d : sub) out.merge(d);
  return out;
}

void query_masks(const CPTheory& theory, const std::vector<Literal>& query, AtomBits& want,
                 AtomBits& avoid) {
  want = avoid = 0;
  for (const auto& l : query) {
    AtomBits b = bit(theory.atom_id_checked(l.atom));
    (l.positive ? want : avoid) |= b;
  }
}

}  // namespace

Schedule Schedule::reverse(const CPTheory& theory) {
  Schedule s;
  for (const auto& law : theory.laws()) s.preference.push_back(law.id);
  std::reverse(s.preference.begin(), s.preference.end());
  return s;
}

Schedule Schedule::shuffled(const CPTheory& theory, unsigned seed) {
  Schedule s;
  for (const auto& law : theory.laws()) s.preference.push_back(law.id);
  std::mt19937 rng(seed);
  std::shuffle(s.preference.begin(), s.preference.end(), rng);
  return s;
}

int Schedule::pick(const CPTheory& theory, LawBits applicable) const {
  TheoryView view(theory);
  return pick_law(*this, view, applicable);
}

NodeState initial_state(const CPTheory& theory) {
  TheoryView view(theory);
  return make_state(view, 0, 0);
}

AtomBits possible_atoms(const CPTheory& theory, AtomBits true_atoms, LawBits applied) {
  TheoryView view(theory);
  return possible_atoms_impl(view, true_atoms, applied);
}

LawBits applicable_laws(const CPTheory& theory, const NodeState& state) {
  TheoryView view(theory);
  return applicable_laws_impl(view, state);
}

NodeState apply_law(const CPTheory& theory, const NodeState& state, int law_index, int outcome) {
  TheoryView view(theory);
  const auto& law = theory.laws().at(law_index);
  if (has_bit(state.applied, law_index))
    throw DomainError("law " + std::to_string(law.id) + " already applied");
  if (outcome != kOutcomeNone &&
      (outcome < 1 || outcome > static_cast<int>(law.head.size())))
    throw DomainError("outcome index out of range for law " + std::to_string(law.id));
  if (outcome == kOutcomeNone && law.head_remainder().is_zero())
    throw DomainError("law " + std::to_string(law.id) + " has no empty disjunct");
  return child_state(view, state, law_index, outcome);
}

void Distribution::add(AtomBits leaf, const Rational& p) { weights_[leaf] += p; }

void Distribution::merge(const Distribution& other) {
  for (const auto& [leaf, p] : other.weights_) weights_[leaf] += p;
}

Rational Distribution::total() const {
  Rational sum;
  for (const auto& [leaf, p] : weights_) sum += p;
  return sum;
}

std::string Distribution::to_string(const CPTheory& theory) const {
  std::string out;
  for (const auto& [leaf, p] : weights_)
    out += theory.atom_set_to_string(leaf) + " : " + p.to_string() + "\n";
  return out;
}

Distribution distribution(const CPTheory& theory, const Schedule& schedule,
                          const EvalOptions& options) {
  TheoryView view(theory);
  BudgetCounter budget;
  budget.limit = options.node_budget;
  NodeState root = make_state(view, 0, 0);
  if (options.parallel) {
    Distribution out;
#pragma omp parallel default(none) shared(view, schedule, root, budget, out)
#pragma omp single
    out = fold_distribution_parallel(view, schedule, root, Rational(1), budget, 0);
    budget.throw_if_exceeded();
    return out;
  }
  Distribution out;
  fold_distribution_serial(view, schedule, root, Rational(1), out, budget);
  return out;
}

Rational marginal(const CPTheory& theory, const std::vector<Literal>& query,
                  const EvalOptions& options) {
  TheoryView view(theory);
  AtomBits want, avoid;
  query_masks(theory, query, want, avoid);
  BudgetCounter budget;
  budget.limit = options.node_budget;
  NodeState root = make_state(view, 0, 0);
  if (options.parallel) {
    Rational out;
#pragma omp parallel default(none) shared(view, root, budget, out) firstprivate(want, avoid)
#pragma omp single
    out = fold_marginal_parallel(view, Schedule{}, root, want, avoid, budget, 0);
    budget.throw_if_exceeded();
    return out;
  }
  return fold_marginal_serial(view, Schedule{}, root, want, avoid, budget);
}

namespace {

void enumerate_impl(const TheoryView& view, const Schedule& schedule, const NodeState& state,
                    std::vector<Step>& steps, const Rational& weight,
                    std::vector<std::pair<std::vector<Step>, Rational>>& out,
                    BudgetCounter& budget) {
  budget.check_serial();
  LawBits applicable = applicable_laws_impl(view, state);
  if (applicable == 0) {
    out.emplace_back(steps, weight);
    return;
  }
  int law = pick_law(schedule, view, applicable);
  for (const auto& [outcome, prob] : law_outcomes(view.laws[law])) {
    steps.push_back(Step{view.laws[law].id, outcome});
    enumerate_impl(view, schedule, child_state(view, state, law, outcome), steps, weight * prob,
                   out, budget);
    steps.pop_back();
  }
}

}  // namespace

std::vector<Branch> enumerate_branches(const CPTheory& theory, const Schedule& schedule,
                                       const EvalOptions& options) {
  TheoryView view(theory);
  BudgetCounter budget;
  budget.limit = options.node_budget;
  std::vector<std::pair<std::vector<Step>, Rational>> raw;
  std::vector<Step> steps;
  enumerate_impl(view, schedule, make_state(view, 0, 0), steps, Rational(1), raw, budget);
  std::vector<Branch> out;
  out.reserve(raw.size());
  for (auto& [s, p] : raw) out.push_back(Branch{Story::validate(theory, std::move(s)), p});
  return out;
}

std::vector<Branch> enumerate_branches_from(const CPTheory& theory,
                                            const std::vector<Step>& prefix,
                                            const EvalOptions& options) {
  TheoryView view(theory);
  BudgetCounter budget;
  budget.limit = options.node_budget;
  NodeState state = make_state(view, 0, 0);
  Rational weight(1);
  for (const auto& step : prefix) {
    int index = -1;
    for (int i = 0; i < view.size(); ++i)
      if (view.laws[i].id == step.law_id) index = i;
    if (index < 0) throw DomainError("prefix references unknown law id " + std::to_string(step.law_id));
    if (!has_bit(applicable_laws_impl(view, state), index))
      throw DomainError("law " + std::to_string(step.law_id) + " is not applicable at its prefix step");
    for (const auto& [outcome, prob] : law_outcomes(view.laws[index]))
      if (outcome == step.outcome) weight *= prob;
    state = child_state(view, state, index, step.outcome);
  }
  std::vector<std::pair<std::vector<Step>, Rational>> raw;
  std::vector<Step> steps = prefix;
  enumerate_impl(view, Schedule{}, state, steps, weight, raw, budget);
  std::vector<Branch> out;
  out.reserve(raw.size());
  for (auto& [s, p] : raw) out.push_back(Branch{Story::validate(theory, std::move(s)), p});
  return out;
}

namespace {

std::size_t build_tree_impl(const TheoryView& view, const Schedule& schedule,
                            const NodeState& state, ProbabilityTree& tree,
                            BudgetCounter& budget) {
  budget.check_serial();
  std::size_t index = tree.nodes.size();
  tree.nodes.push_back(ProbabilityTree::Node{state, -1, {}});
  LawBits applicable = applicable_laws_impl(view, state);
  if (applicable == 0) {
    ++tree.leaf_count;
    return index;
  }
  int law = pick_law(schedule, view, applicable);
  tree.nodes[index].law_id = view.laws[law].id;
  for (const auto& [outcome, prob] : law_outcomes(view.laws[law])) {
    std::size_t child = build_tree_impl(view, schedule, child_state(view, state, law, outcome),
                                        tree, budget);
    tree.nodes[index].edges.push_back(ProbabilityTree::Edge{outcome, prob, child});
  }
  return index;
}

void render_tree(const ProbabilityTree& tree, const CPTheory& theory, std::size_t index,
                 const std::string& indent, std::string& out) {
  const auto& node = tree.nodes[index];
  out += theory.atom_set_to_string(node.state.true_atoms);
  out += "\n";
  for (const auto& edge : node.edges) {
    const CPLaw& law = theory.law_checked(node.law_id);
    std::string label = edge.outcome == kOutcomeNone
                            ? "none"
                            : law.head[edge.outcome - 1].atom.to_string();
    out += indent + "+- law " + std::to_string(node.law_id) + " -> " + label + "  p=" +
           edge.prob.to_string() + "  ";
    render_tree(tree, theory, edge.child, indent + "|  ", out);
  }
}

}  // namespace

ProbabilityTree build_tree(const CPTheory& theory, const Schedule& schedule,
                           const EvalOptions& options) {
  TheoryView view(theory);
  BudgetCounter budget;
  budget.limit = options.node_budget;
  ProbabilityTree tree;
  build_tree_impl(view, schedule, make_state(view, 0, 0), tree, budget);
  return tree;
}

std::string ProbabilityTree::to_string(const CPTheory& theory) const {
  std::string out;
  if (!nodes.empty()) render_tree(*this, theory, 0, "", out);
  return out;
}

}  // namespace cplogic
