#include "agentblocks/lang/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace agentblocks::lang {

Term Term::atom(std::string name) {
  Term t;
  t.kind_ = Kind::kAtom;
  t.text_ = std::move(name);
  return t;
}

Term Term::string(std::string text) {
  Term t;
  t.kind_ = Kind::kString;
  t.text_ = std::move(text);
  return t;
}

Term Term::number(double value) {
  Term t;
  t.kind_ = Kind::kNumber;
  t.number_ = value;
  return t;
}

Term Term::variable(std::string name) {
  Term t;
  t.kind_ = Kind::kVariable;
  t.text_ = std::move(name);
  return t;
}

Term Term::list(std::vector<Term> items) {
  Term t;
  t.kind_ = Kind::kList;
  t.children_ = std::move(items);
  return t;
}

Term Term::structure(std::string functor, std::vector<Term> args) {
  if (args.empty()) return atom(std::move(functor));
  Term t;
  t.kind_ = Kind::kStructure;
  t.text_ = std::move(functor);
  t.children_ = std::move(args);
  return t;
}

bool Term::is_ground() const {
  if (kind_ == Kind::kVariable) return false;
  return std::all_of(children_.begin(), children_.end(),
                     [](const Term& c) { return c.is_ground(); });
}

bool Term::contains_variable(std::string_view name) const {
  if (kind_ == Kind::kVariable) return text_ == name;
  return std::any_of(children_.begin(), children_.end(),
                     [&](const Term& c) { return c.contains_variable(name); });
}

void Term::collect_variables(std::vector<std::string>& out) const {
  if (kind_ == Kind::kVariable) {
    if (std::find(out.begin(), out.end(), text_) == out.end()) out.push_back(text_);
    return;
  }
  for (const Term& c : children_) c.collect_variables(out);
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Term::Kind::kNumber:
      return a.number_ == b.number_;
    case Term::Kind::kList:
      return a.children_ == b.children_;
    case Term::Kind::kStructure:
      return a.text_ == b.text_ && a.children_ == b.children_;
    default:
      return a.text_ == b.text_;
  }
}

bool operator<(const Term& a, const Term& b) {
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
  if (a.kind_ == Term::Kind::kNumber) return a.number_ < b.number_;
  if (a.text_ != b.text_) return a.text_ < b.text_;
  return std::lexicographical_compare(a.children_.begin(), a.children_.end(), b.children_.begin(),
                                      b.children_.end());
}

std::size_t hash_value(const Term& t) {
  std::size_t h = static_cast<std::size_t>(t.kind()) * 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  if (t.is_number()) {
    // +0.0 and -0.0 compare equal and must hash equal.
    mix(t.number() == 0.0 ? 0 : std::hash<double>{}(t.number()));
  } else {
    mix(std::hash<std::string>{}(t.name()));
  }
  for (const Term& c : t.children()) mix(hash_value(c));
  return h;
}

namespace {
bool is_ident_tail(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}
}  // namespace

bool is_reserved_word(std::string_view s) { return s == "not"; }

bool is_atom_name(std::string_view s) {
  return !s.empty() && s[0] >= 'a' && s[0] <= 'z' && is_ident_tail(s.substr(1)) &&
         !is_reserved_word(s);
}

bool is_variable_name(std::string_view s) {
  return !s.empty() && ((s[0] >= 'A' && s[0] <= 'Z') || s[0] == '_') && is_ident_tail(s.substr(1));
}

}  // namespace agentblocks::lang
