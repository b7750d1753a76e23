#include "cplogic/law.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cplogic/errors.hpp"

namespace cplogic {

CPTheory::CPTheory(std::vector<CPLaw> laws, std::vector<Atom> atoms)
    : laws_(std::move(laws)), atoms_(std::move(atoms)) {
  validate_and_index();
}

CPTheory CPTheory::create(std::vector<CPLaw> laws) {
  std::vector<Atom> atoms;
  std::set<Atom> seen;
  auto note = [&](const Atom& a) {
    if (seen.insert(a).second) atoms.push_back(a);
  };
  for (const auto& law : laws) {
    for (const auto& d : law.head) note(d.atom);
    for (const auto& l : law.body) note(l.atom);
  }
  return CPTheory(std::move(laws), std::move(atoms));
}

CPTheory CPTheory::with_laws(std::vector<CPLaw> laws) const {
  for (const auto& law : laws) {
    for (const auto& d : law.head)
      if (!atom_id(d.atom)) throw DomainError("law mentions atom outside the theory's table: " + d.atom.to_string());
    for (const auto& l : law.body)
      if (!atom_id(l.atom)) throw DomainError("law mentions atom outside the theory's table: " + l.atom.to_string());
  }
  return CPTheory(std::move(laws), atoms_);
}

void CPTheory::validate_and_index() {
  if (static_cast<int>(laws_.size()) > kMaxLaws)
    throw BudgetError("theory has more than " + std::to_string(kMaxLaws) + " laws");
  if (static_cast<int>(atoms_.size()) > kMaxAtoms)
    throw BudgetError("theory has more than " + std::to_string(kMaxAtoms) + " atoms");

  int prev_id = 0;
  std::set<std::string> labels;
  for (const auto& law : laws_) {
    if (law.id <= prev_id)
      throw DomainError("law ids must be positive and strictly increasing (law " +
                        std::to_string(law.id) + ")");
    prev_id = law.id;
    if (!law.label.empty() && !labels.insert(law.label).second)
      throw DomainError("duplicate law label '" + law.label + "'");

    Rational sum;
    std::set<Atom> head_atoms;
    for (const auto& d : law.head) {
      if (d.prob <= Rational(0) || d.prob > Rational(1))
        throw DomainError("law " + std::to_string(law.id) +
                          ": disjunct probability must be in (0,1], got " + d.prob.to_string());
      if (!head_atoms.insert(d.atom).second)
        throw DomainError("law " + std::to_string(law.id) + ": atom " + d.atom.to_string() +
                          " occurs twice in the head");
      sum += d.prob;
    }
    if (sum > Rational(1))
      throw DomainError("law " + std::to_string(law.id) + ": head probabilities sum to " +
                        sum.to_string() + " > 1");
    std::set<Literal> body_lits;
    for (const auto& l : law.body)
      if (!body_lits.insert(l).second)
        throw DomainError("law " + std::to_string(law.id) + ": literal " + l.to_string() +
                          " occurs twice in the body");
  }

  // Stratification: least level assignment under
  //   level(head) >= level(positive body atom)
  //   level(head) >  level(negated body atom)
  // computed by fixpoint relaxation; a level exceeding the atom count
  // certifies a cycle through negation.
  const int n = atom_count();
  strata_.assign(n, 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& law : laws_) {
      int body_floor = 0;
      for (const auto& l : law.body) {
        int lvl = strata_[atom_id_checked(l.atom)] + (l.positive ? 0 : 1);
        body_floor = std::max(body_floor, lvl);
      }
      for (const auto& d : law.head) {
        int& h = strata_[atom_id_checked(d.atom)];
        if (h < body_floor) {
          h = body_floor;
          if (h > n)
            throw DomainError("negation is not stratified (cycle through negation reaching " +
                              d.atom.to_string() + ")");
          changed = true;
        }
      }
    }
  }
  strata_count_ = 0;
  for (int s : strata_) strata_count_ = std::max(strata_count_, s + 1);
}

const CPLaw* CPTheory::law_by_id(int id) const {
  for (const auto& law : laws_)
    if (law.id == id) return &law;
  return nullptr;
}

const CPLaw& CPTheory::law_checked(int id) const {
  if (const CPLaw* law = law_by_id(id)) return *law;
  throw DomainError("unknown law id " + std::to_string(id));
}

const CPLaw* CPTheory::law_by_label(const std::string& label) const {
  if (label.empty()) return nullptr;
  for (const auto& law : laws_)
    if (law.label == label) return &law;
  return nullptr;
}

std::optional<AtomId> CPTheory::atom_id(const Atom& a) const {
  for (size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i] == a) return static_cast<AtomId>(i);
  return std::nullopt;
}

AtomId CPTheory::atom_id_checked(const Atom& a) const {
  if (auto id = atom_id(a)) return *id;
  throw DomainError("unknown atom " + a.to_string());
}

std::string CPTheory::atom_set_to_string(AtomBits bits) const {
  std::vector<std::string> names;
  for (int i = 0; i < atom_count(); ++i)
    if (has_bit(bits, i)) names.push_back(atoms_[i].to_string());
  std::sort(names.begin(), names.end());
  std::string out = "{";
  for (size_t i = 0; i < names.size(); ++i) {
    if (i) out += ",";
    out += names[i];
  }
  return out + "}";
}

bool CPTheory::same_rules(const CPTheory& o) const {
  if (laws_.size() != o.laws_.size()) return false;
  for (size_t i = 0; i < laws_.size(); ++i)
    if (laws_[i].id != o.laws_[i].id || !laws_[i].same_rule(o.laws_[i])) return false;
  return true;
}

}  // namespace cplogic
