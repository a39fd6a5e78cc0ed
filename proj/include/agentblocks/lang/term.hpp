#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace agentblocks::lang {

/// A logic term: atom, string, number, variable, list or structure.
///
/// Terms are plain values. A structure always has at least one argument;
/// `Term::structure("f", {})` yields the atom `f`.
class Term {
 public:
  enum class Kind { kAtom, kString, kNumber, kVariable, kList, kStructure };

  Term() = default;

  static Term atom(std::string name);
  static Term string(std::string text);
  static Term number(double value);
  static Term variable(std::string name);
  static Term list(std::vector<Term> items);
  static Term structure(std::string functor, std::vector<Term> args);

  Kind kind() const { return kind_; }
  bool is_atom() const { return kind_ == Kind::kAtom; }
  bool is_string() const { return kind_ == Kind::kString; }
  bool is_number() const { return kind_ == Kind::kNumber; }
  bool is_variable() const { return kind_ == Kind::kVariable; }
  bool is_list() const { return kind_ == Kind::kList; }
  bool is_structure() const { return kind_ == Kind::kStructure; }
  // Atom or structure: usable as a literal.
  bool is_callable() const { return is_atom() || is_structure(); }

  // Atom name, variable name or structure functor.
  const std::string& name() const { return text_; }
  // Text of a string term.
  const std::string& text() const { return text_; }
  double number() const { return number_; }
  // List items or structure arguments.
  const std::vector<Term>& children() const { return children_; }

  bool is_ground() const;
  bool contains_variable(std::string_view name) const;
  // Appends variable names in first-occurrence order, without duplicates.
  void collect_variables(std::vector<std::string>& out) const;

  friend bool operator==(const Term& a, const Term& b);
  // Total order: kind, then value, then children lexicographically.
  friend bool operator<(const Term& a, const Term& b);

 private:
  Kind kind_ = Kind::kAtom;
  std::string text_;
  double number_ = 0.0;
  std::vector<Term> children_;
};

std::size_t hash_value(const Term& t);

// Lexical rules shared by the parser, the block validator and the printer.
bool is_atom_name(std::string_view s);
bool is_variable_name(std::string_view s);
bool is_reserved_word(std::string_view s);

}  // namespace agentblocks::lang

template <>
struct std::hash<agentblocks::lang::Term> {
  std::size_t operator()(const agentblocks::lang::Term& t) const noexcept {
    return agentblocks::lang::hash_value(t);
  }
};
