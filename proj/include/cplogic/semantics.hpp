#ifndef CPLOGIC_SEMANTICS_HPP
#define CPLOGIC_SEMANTICS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cplogic/law.hpp"
#include "cplogic/parser.hpp"
#include "cplogic/rational.hpp"
#include "cplogic/story.hpp"

namespace cplogic {

struct EvalOptions {
  /// Hard cap on probability-tree nodes visited per evaluation. Trees are
  /// exponential in the worst case; exceeding the cap raises BudgetError.
  std::uint64_t node_budget = 1'000'000;

  /// Evaluate independent subtrees with OpenMP tasks. Results are exact
  /// rationals, so the parallel fold returns bit-identical values to the
  /// serial reference path.
  bool parallel = false;
};

/// Law application order. Among the applicable laws of a node, the
/// canonical schedule picks the lowest id; an explicit preference list
/// picks the earliest listed law (unlisted laws rank after all listed
/// ones, lowest id first). The induced leaf distribution is
/// schedule-invariant; schedules only shape the tree.
struct Schedule {
  std::vector<int> preference;  // law ids, most preferred first

  static Schedule canonical() { return {}; }
  static Schedule reverse(const CPTheory& theory);
  static Schedule shuffled(const CPTheory& theory, unsigned seed);

  /// Picks a law index from a nonempty applicable set.
  int pick(const CPTheory& theory, LawBits applicable) const;
};

/// A node of the probability tree: which atoms have become true, which
/// laws have been applied, and (cached) which atoms can no longer become
/// true in any continuation. Bits are indexed by the owning theory's atom
/// table / law list positions.
struct NodeState {
  AtomBits true_atoms = 0;
  LawBits applied = 0;
  AtomBits impossible = 0;

  bool operator==(const NodeState&) const = default;
};

NodeState initial_state(const CPTheory& theory);

/// Atoms that are true or may still become true in some continuation:
/// the least fixpoint that grows true_atoms through not-yet-applied laws
/// whose positive body atoms are in the set and whose negated body atoms
/// are not forced to become true, evaluated stratum by stratum.
AtomBits possible_atoms(const CPTheory& theory, AtomBits true_atoms, LawBits applied);

/// Laws that may be applied now: not yet applied, nonempty head, every
/// positive body atom true, every negated body atom impossible.
LawBits applicable_laws(const CPTheory& theory, const NodeState& state);

/// Child state after applying the law (by index) with the given outcome
/// (1-based disjunct index or kOutcomeNone). The law is recorded as
/// applied even when the chosen atom was already true.
NodeState apply_law(const CPTheory& theory, const NodeState& state, int law_index, int outcome);

/// Probability distribution over leaf truth-value sets, aggregated over
/// leaves with equal true-atom sets. Values are exact and sum to one.
class Distribution {
 public:
  void add(AtomBits leaf, const Rational& p);
  void merge(const Distribution& other);

  const std::map<AtomBits, Rational>& weights() const { return weights_; }
  Rational total() const;

  bool operator==(const Distribution&) const = default;

  std::string to_string(const CPTheory& theory) const;

 private:
  std::map<AtomBits, Rational> weights_;
};

Distribution distribution(const CPTheory& theory, const Schedule& schedule = {},
                          const EvalOptions& options = {});

/// Probability that a leaf satisfies the conjunction: every positive
/// literal's atom in the leaf, every negated literal's atom absent.
Rational marginal(const CPTheory& theory, const std::vector<Literal>& query,
                  const EvalOptions& options = {});

struct Branch {
  Story story;
  Rational probability;
};

/// All root-to-leaf branches as validated stories with exact
/// probabilities, in schedule order.
std::vector<Branch> enumerate_branches(const CPTheory& theory, const Schedule& schedule = {},
                                       const EvalOptions& options = {});

/// Branches extending a fixed step prefix (the prefix is replayed and
/// must be applicable step by step); continuations follow the canonical
/// schedule. Returned steps include the prefix.
std::vector<Branch> enumerate_branches_from(const CPTheory& theory,
                                            const std::vector<Step>& prefix,
                                            const EvalOptions& options = {});

/// Materialized probability tree, for rendering and structural tests.
struct ProbabilityTree {
  struct Edge {
    int outcome = kOutcomeNone;
    Rational prob;
    std::size_t child = 0;
  };
  struct Node {
    NodeState state;
    int law_id = -1;  // law expanded at this node; -1 at leaves
    std::vector<Edge> edges;
  };

  std::vector<Node> nodes;  // nodes[0] is the root
  std::size_t leaf_count = 0;

  std::string to_string(const CPTheory& theory) const;
};

ProbabilityTree build_tree(const CPTheory& theory, const Schedule& schedule = {},
                           const EvalOptions& options = {});

}  // namespace cplogic

#endif
