#ifndef CPLOGIC_ATOM_HPP
#define CPLOGIC_ATOM_HPP

#include <compare>
#include <string>
#include <vector>

namespace cplogic {

/// A ground atom: an identifier with zero or more constant arguments,
/// e.g. Breaks or Throws(Suzy).
struct Atom {
  std::string name;
  std::vector<std::string> args;

  auto operator<=>(const Atom&) const = default;

  std::string to_string() const {
    if (args.empty()) return name;
    std::string out = name + "(";
    for (size_t i = 0; i < args.size(); ++i) {
      if (i) out += ",";
      out += args[i];
    }
    return out + ")";
  }
};

inline Atom atom(std::string name) { return Atom{std::move(name), {}}; }
inline Atom atom(std::string name, std::vector<std::string> args) {
  return Atom{std::move(name), std::move(args)};
}

/// A possibly negated atom. Negation is written "~" in the concrete syntax.
struct Literal {
  Atom atom;
  bool positive = true;

  auto operator<=>(const Literal&) const = default;

  std::string to_string() const {
    return positive ? atom.to_string() : "~" + atom.to_string();
  }
};

inline Literal pos(Atom a) { return Literal{std::move(a), true}; }
inline Literal neg(Atom a) { return Literal{std::move(a), false}; }

}  // namespace cplogic

#endif
