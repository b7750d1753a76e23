#ifndef CPLOGIC_LAW_HPP
#define CPLOGIC_LAW_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cplogic/atom.hpp"
#include "cplogic/rational.hpp"

namespace cplogic {

/// Index of an atom in a theory's atom table.
using AtomId = int;

/// Bitmask over a theory's atom table / law list. Theories are capped at
/// 64 atoms and 64 laws; validation rejects anything larger.
using AtomBits = std::uint64_t;
using LawBits = std::uint64_t;

inline constexpr int kMaxAtoms = 64;
inline constexpr int kMaxLaws = 64;

inline AtomBits bit(int i) { return AtomBits{1} << i; }
inline bool has_bit(std::uint64_t m, int i) { return (m >> i) & 1; }

/// One head alternative: an atom annotated with the probability of being
/// the chosen effect when the law is applied.
struct Disjunct {
  Atom atom;
  Rational prob;

  bool operator==(const Disjunct&) const = default;
};

/// Outcome of a law application: 1-based disjunct index, or 0 when the
/// implicit empty disjunct was chosen.
inline constexpr int kOutcomeNone = 0;

/// A causal law "Head <- Body". The head lists the possible effects with
/// their probabilities; when they sum to less than one, the remainder is
/// the implicit empty disjunct (the law fires without effect). The body is
/// a conjunction of ground literals. An empty head is legal and makes the
/// law ineffective; the scheduler never applies it.
struct CPLaw {
  int id = 0;                 // positional identity, stable across transforms
  std::string label;          // optional; "" when absent
  std::vector<Disjunct> head;
  std::vector<Literal> body;

  Rational head_remainder() const {
    Rational sum;
    for (const auto& d : head) sum += d.prob;
    return Rational(1) - sum;
  }

  bool deterministic() const {
    return head.size() == 1 && head[0].prob.is_one();
  }

  /// Number of ways the application can resolve: the explicit disjuncts
  /// plus the implicit empty disjunct when the remainder is positive.
  int alternative_count() const {
    return static_cast<int>(head.size()) + (head_remainder().is_zero() ? 0 : 1);
  }

  bool operator==(const CPLaw&) const = default;

  /// True when the two laws have the same head and body (ignoring id and
  /// label). Used for structural theory comparison.
  bool same_rule(const CPLaw& o) const { return head == o.head && body == o.body; }
};

/// A validated, immutable CP-theory: an ordered list of laws plus an atom
/// table assigning a stable AtomId to every atom the theory has ever
/// mentioned. Transforms inherit the table, so leaf sets of the original
/// and any derived theory live in the same index space.
///
/// Validation enforces: strictly increasing positive law ids; per-law head
/// probabilities in (0,1] summing to at most 1; no duplicate head atom or
/// body literal; unique nonempty labels; stratified negation. The
/// stratification assigns each atom a level such that every head atom sits
/// at a level >= its positive body atoms and strictly above its negated
/// body atoms; theories without such an assignment are rejected.
class CPTheory {
 public:
  CPTheory() = default;  // the empty theory

  /// Validates and builds. Ids are taken from the laws as given.
  static CPTheory create(std::vector<CPLaw> laws);

  /// Validates `laws` against this theory's (inherited) atom table. Laws
  /// may mention only known atoms; the table is carried over unchanged.
  CPTheory with_laws(std::vector<CPLaw> laws) const;

  const std::vector<CPLaw>& laws() const { return laws_; }
  bool empty() const { return laws_.empty(); }

  const CPLaw* law_by_id(int id) const;
  const CPLaw& law_checked(int id) const;
  const CPLaw* law_by_label(const std::string& label) const;

  int atom_count() const { return static_cast<int>(atoms_.size()); }
  const Atom& atom_at(AtomId id) const { return atoms_[id]; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::optional<AtomId> atom_id(const Atom& a) const;
  AtomId atom_id_checked(const Atom& a) const;

  int stratum(AtomId id) const { return strata_[id]; }
  int strata_count() const { return strata_count_; }

  AtomBits all_atoms_mask() const {
    return atoms_.empty() ? 0 : (atoms_.size() == kMaxAtoms ? ~AtomBits{0} : (bit(static_cast<int>(atoms_.size())) - 1));
  }

  /// Renders a bitmask as a sorted brace set, e.g. "{Breaks,Throws(Suzy)}".
  std::string atom_set_to_string(AtomBits bits) const;

  bool operator==(const CPTheory& o) const {
    return laws_ == o.laws_ && atoms_ == o.atoms_;
  }

  /// Law-by-law structural equality: same ids, heads and bodies (labels
  /// and atom-table bookkeeping ignored).
  bool same_rules(const CPTheory& o) const;

 private:
  CPTheory(std::vector<CPLaw> laws, std::vector<Atom> atoms);
  void validate_and_index();

  std::vector<CPLaw> laws_;
  std::vector<Atom> atoms_;
  std::vector<int> strata_;
  int strata_count_ = 0;
};

}  // namespace cplogic

#endif
