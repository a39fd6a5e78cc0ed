#include "agentblocks/blocks/compiler.hpp"

#include <cmath>
#include <cstdlib>
#include <set>

#include "agentblocks/lang/term.hpp"
#include "agentblocks/wot/uri.hpp"

namespace agentblocks::blocks {

using lang::ArithExpr;
using lang::ArithOp;
using lang::BodyStep;
using lang::Literal;
using lang::LogicExpr;
using lang::Operand;
using lang::Plan;
using lang::RelOp;
using lang::Term;
using CT = ConnectionType;

CompileError::CompileError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error([&] {
        std::string msg = "block program has " + std::to_string(diagnostics.size()) + " diagnostic(s)";
        if (!diagnostics.empty())
          msg += "; first: " + std::string(to_string(diagnostics[0].code)) + " at '" + diagnostics[0].block_id +
                 "': " + diagnostics[0].message;
        return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

namespace {

constexpr int kMaxVariadic = 64;
const std::set<std::string> kMethods = {"GET", "PUT", "POST", "PATCH", "DELETE"};

std::optional<double> parse_number(const FieldValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return std::isfinite(*d) ? std::optional(*d) : std::nullopt;
  if (const auto* s = std::get_if<std::string>(&v)) {
    if (s->empty()) return std::nullopt;
    char* end = nullptr;
    const double d = std::strtod(s->c_str(), &end);
    if (end != s->c_str() + s->size() || !std::isfinite(d)) return std::nullopt;
    return d;
  }
  return std::nullopt;
}

std::optional<int> parse_count(const std::string& s) {
  if (s.empty() || s.size() > 3) return std::nullopt;
  int n = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    n = n * 10 + (c - '0');
  }
  if (n > kMaxVariadic) return std::nullopt;
  return n;
}

class Compiler {
 public:
  Compiler(const BlockProgram& bp, const BlockCatalog& catalog)
      : bp_(bp), catalog_(catalog), visited_(bp.blocks.size(), false) {}

  CompileResult run() {
    check_ids();
    lang::AgentProgram program;
    program.name = bp_.agent_name;
    for (BlockIndex top : bp_.top_blocks) {
      std::optional<BlockIndex> cur = top;
      while (cur) {
        const BlockType* t = enter(*cur, CT::kTopLevel);
        if (!t) break;
        compile_top(*cur, *t, program);
        cur = bp_.at(*cur).next;
      }
    }
    CompileResult r;
    r.diagnostics = std::move(diags_);
    if (r.diagnostics.empty()) r.program = std::move(program);
    return r;
  }

 private:
  const Block& block(BlockIndex i) const { return bp_.at(i); }

  void error(DiagnosticCode code, BlockIndex i, std::string message) {
    diags_.push_back({code, block(i).id, std::move(message), Diagnostic::Severity::kError});
  }

  void check_ids() {
    std::set<std::string> seen;
    for (BlockIndex i = 0; i < bp_.blocks.size(); ++i)
      if (!seen.insert(block(i).id).second)
        error(DiagnosticCode::kDuplicateBlockId, i, "block id '" + block(i).id + "' is not unique");
  }

  // Resolves the block's type, checks the connection and its declared slots.
  // Returns null when the block cannot be compiled at all.
  const BlockType* enter(BlockIndex i, CT expected) {
    const Block& b = block(i);
    if (visited_.at(i)) {
      error(DiagnosticCode::kBlockReused, i, "block is connected in more than one place");
      return nullptr;
    }
    visited_[i] = true;
    const BlockType* t = catalog_.find(b.type);
    if (!t) {
      error(DiagnosticCode::kUnknownBlockType, i, "unknown block type '" + b.type + "'");
      return nullptr;
    }
    if (!t->outputs_to(expected)) {
      error(DiagnosticCode::kTypeMismatch, i,
            "'" + b.type + "' block cannot connect to a " + std::string(to_string(expected)) + " slot");
      return nullptr;
    }
    check_shape(i, *t);
    if (b.next && !t->chains())
      error(DiagnosticCode::kTypeMismatch, *b.next, "'" + b.type + "' block cannot be followed by another block");
    return t;
  }

  void check_shape(BlockIndex i, const BlockType& t) {
    const Block& b = block(i);
    for (const FieldSpec& f : t.fields) {
      const auto it = b.fields.find(f.name);
      if (it == b.fields.end()) {
        error(DiagnosticCode::kMissingField, i, "missing field " + f.name);
        continue;
      }
      if (auto problem = field_problem(f, it->second))
        error(DiagnosticCode::kInvalidFieldValue, i, "field " + f.name + ": " + *problem);
    }
    for (const auto& [name, v] : b.fields)
      if (!t.field(name)) error(DiagnosticCode::kUnknownField, i, "unknown field " + name);

    for (const MutationSpec& m : t.mutation)
      if (!b.mutation.count(m.key) && !m.default_value)
        error(DiagnosticCode::kInvalidMutation, i, "missing mutation key " + m.key);
    for (const auto& [key, v] : b.mutation) {
      bool declared = false;
      for (const MutationSpec& m : t.mutation) declared |= m.key == key;
      if (!declared) error(DiagnosticCode::kInvalidMutation, i, "unexpected mutation key " + key);
    }
    if (t.affordance) check_affordance_mutation(i, t);

    std::vector<InputSpec> slots = t.inputs;
    if (t.variadic != Variadic::kNone) {
      const std::string key = t.variadic == Variadic::kArgs ? "argCount" : "pairCount";
      const auto count = parse_count(mutation(i, t, key));
      if (!count) {
        error(DiagnosticCode::kInvalidMutation, i, key + " must be an integer between 0 and " + std::to_string(kMaxVariadic));
      } else {
        for (int k = 0; k < *count; ++k) {
          if (t.variadic == Variadic::kArgs) {
            slots.push_back({"ARG" + std::to_string(k), CT::kValue, true, false, false});
          } else {
            slots.push_back({"KEY" + std::to_string(k), CT::kValue, true, false, false});
            slots.push_back({"VALUE" + std::to_string(k), CT::kValue, true, false, false});
          }
        }
      }
    }
    for (const InputSpec& s : slots)
      if (s.required && !b.inputs.count(s.name)) error(DiagnosticCode::kMissingInput, i, "missing input " + s.name);
    for (const auto& [name, child] : b.inputs) {
      bool known = false;
      for (const InputSpec& s : slots) known |= s.name == name;
      if (!known && t.open_payload_fields && name.size() > kPayloadFieldPrefix.size() &&
          std::string_view(name).substr(0, kPayloadFieldPrefix.size()) == kPayloadFieldPrefix)
        known = true;
      if (!known) error(DiagnosticCode::kUnknownInput, i, "unknown input " + name);
    }
  }

  void check_affordance_mutation(BlockIndex i, const BlockType& t) {
    const Block& b = block(i);
    if (const auto it = b.mutation.find("affordanceKind"); it != b.mutation.end() && it->second != t.affordance->kind)
      error(DiagnosticCode::kInvalidMutation, i,
            "affordanceKind '" + it->second + "' does not match block kind " + t.affordance->kind);
    if (const auto it = b.mutation.find("href"); it != b.mutation.end() && !wot::is_absolute_http_uri(it->second))
      error(DiagnosticCode::kInvalidMutation, i, "href '" + it->second + "' is not an absolute http(s) URI");
    if (const auto it = b.mutation.find("httpMethod"); it != b.mutation.end() && !kMethods.count(it->second))
      error(DiagnosticCode::kInvalidMutation, i, "unsupported httpMethod '" + it->second + "'");
  }

  static std::optional<std::string> field_problem(const FieldSpec& f, const FieldValue& v) {
    const auto* s = std::get_if<std::string>(&v);
    switch (f.kind) {
      case FieldKind::kAtomName:
        if (!s || !lang::is_atom_name(*s)) return "not a valid atom name";
        return std::nullopt;
      case FieldKind::kVariableName:
        if (!s || !lang::is_variable_name(*s)) return "not a valid variable name";
        return std::nullopt;
      case FieldKind::kText:
        if (!s) return "expected text";
        return std::nullopt;
      case FieldKind::kNumber:
        if (!parse_number(v)) return "expected a finite number";
        return std::nullopt;
      case FieldKind::kChoice:
        if (s)
          for (const auto& c : f.choices)
            if (c == *s) return std::nullopt;
        return "expected one of the declared choices";
    }
    return std::nullopt;
  }

  std::string mutation(BlockIndex i, const BlockType& t, const std::string& key) const {
    const Block& b = block(i);
    if (const auto it = b.mutation.find(key); it != b.mutation.end()) return it->second;
    for (const MutationSpec& m : t.mutation)
      if (m.key == key && m.default_value) return *m.default_value;
    return {};
  }

  std::optional<std::string> text(BlockIndex i, const std::string& name) const {
    const Block& b = block(i);
    const auto it = b.fields.find(name);
    if (it == b.fields.end()) return std::nullopt;
    if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
    return std::nullopt;
  }

  // Field value only when it passed validation.
  std::optional<std::string> valid_text(BlockIndex i, const BlockType& t, const std::string& name) const {
    const auto* spec = t.field(name);
    const auto it = block(i).fields.find(name);
    if (!spec || it == block(i).fields.end() || field_problem(*spec, it->second)) return std::nullopt;
    return text(i, name);
  }

  std::optional<BlockIndex> child(BlockIndex i, const std::string& name) const {
    const Block& b = block(i);
    const auto it = b.inputs.find(name);
    if (it == b.inputs.end()) return std::nullopt;
    return it->second;
  }

  void record_variable(const std::string& name, BlockIndex i) {
    if (var_sites_ && !var_sites_->count(name)) var_sites_->emplace(name, block(i).id);
  }

  // ---- values ----

  std::optional<Term> term_input(BlockIndex parent, const std::string& name) {
    const auto c = child(parent, name);
    return c ? term(*c) : std::nullopt;
  }

  std::optional<Term> term(BlockIndex i) {
    const BlockType* t = enter(i, CT::kValue);
    if (!t) return std::nullopt;
    const std::string& id = t->id;
    if (id == "atom") {
      auto l = atom_literal(i, *t);
      return l ? std::optional(l->to_term()) : std::nullopt;
    }
    if (id == "string") {
      const auto s = valid_text(i, *t, "TEXT");
      return s ? std::optional(Term::string(*s)) : std::nullopt;
    }
    if (id == "number") {
      const auto it = block(i).fields.find("NUM");
      if (it == block(i).fields.end()) return std::nullopt;
      const auto d = parse_number(it->second);
      return d ? std::optional(Term::number(*d)) : std::nullopt;
    }
    if (id == "boolean") {
      const auto s = valid_text(i, *t, "BOOL");
      return s ? std::optional(Term::atom(*s == "TRUE" ? "true" : "false")) : std::nullopt;
    }
    if (id == "variable") {
      const auto s = valid_text(i, *t, "VAR");
      if (!s) return std::nullopt;
      record_variable(*s, i);
      return Term::variable(*s);
    }
    if (id == "empty_list" || id == "list_cons") {
      std::vector<Term> items;
      if (!list_items(i, *t, items)) return std::nullopt;
      return Term::list(std::move(items));
    }
    if (id == "arith_binop") {
      error(DiagnosticCode::kArithmeticOutsideComparison, i, "arithmetic is only allowed inside a comparison");
      return std::nullopt;
    }
    error(DiagnosticCode::kTypeMismatch, i, "'" + id + "' block is not a value");
    return std::nullopt;
  }

  // Flattens a cons chain; the tail must itself be a list block.
  bool list_items(BlockIndex i, const BlockType& t, std::vector<Term>& items) {
    BlockIndex cur = i;
    const BlockType* ct = &t;
    while (ct->id == "list_cons") {
      bool ok = true;
      if (auto h = term_input(cur, "HEAD")) items.push_back(std::move(*h));
      else ok = false;
      const auto tail = child(cur, "TAIL");
      if (!tail) return false;
      const std::string& tail_type = block(*tail).type;
      if (tail_type != "list_cons" && tail_type != "empty_list") {
        if (enter(*tail, CT::kValue))
          error(DiagnosticCode::kTypeMismatch, *tail, "list tail must be a list block");
        return false;
      }
      ct = enter(*tail, CT::kValue);
      if (!ct || !ok) return false;
      cur = *tail;
    }
    return true;
  }

  std::optional<Literal> atom_literal(BlockIndex i, const BlockType& t) {
    const auto name = valid_text(i, t, "NAME");
    const auto count = parse_count(mutation(i, t, "argCount"));
    if (!count) return std::nullopt;
    std::vector<Term> args;
    bool ok = name.has_value();
    for (int k = 0; k < *count; ++k) {
      if (auto a = term_input(i, "ARG" + std::to_string(k))) args.push_back(std::move(*a));
      else ok = false;
    }
    if (!ok) return std::nullopt;
    return Literal(*name, std::move(args));
  }

  std::optional<Literal> literal_input(BlockIndex parent, const std::string& name) {
    const auto c = child(parent, name);
    if (!c) return std::nullopt;
    if (block(*c).type != "atom") {
      if (enter(*c, CT::kValue))
        error(DiagnosticCode::kTypeMismatch, *c, "input " + name + " expects a literal (atom block)");
      return std::nullopt;
    }
    const BlockType* t = enter(*c, CT::kValue);
    return t ? atom_literal(*c, *t) : std::nullopt;
  }

  std::optional<Term> variable_input(BlockIndex parent, const std::string& name) {
    const auto c = child(parent, name);
    if (!c) return std::nullopt;
    if (block(*c).type != "variable") {
      if (enter(*c, CT::kValue))
        error(DiagnosticCode::kTypeMismatch, *c, "input " + name + " expects a variable block");
      return std::nullopt;
    }
    return term(*c);
  }

  // ---- logic ----

  std::optional<LogicExpr> logic_input(BlockIndex parent, const std::string& name) {
    const auto c = child(parent, name);
    return c ? logic(*c) : std::nullopt;
  }

  std::optional<LogicExpr> logic(BlockIndex i) {
    const BlockType* t = enter(i, CT::kLogicValue);
    if (!t) return std::nullopt;
    const std::string& id = t->id;
    if (id == "atom") {
      auto l = atom_literal(i, *t);
      return l ? std::optional(LogicExpr::literal(std::move(*l))) : std::nullopt;
    }
    if (id == "boolean") {
      const auto s = valid_text(i, *t, "BOOL");
      return s ? std::optional(LogicExpr::literal(Literal(*s == "TRUE" ? "true" : "false"))) : std::nullopt;
    }
    if (id == "and" || id == "or") {
      auto a = logic_input(i, "A");
      auto b = logic_input(i, "B");
      if (!a || !b) return std::nullopt;
      return id == "and" ? LogicExpr::conjunction(std::move(*a), std::move(*b))
                         : LogicExpr::disjunction(std::move(*a), std::move(*b));
    }
    if (id == "not") {
      const auto c = child(i, "A");
      if (!c) return std::nullopt;
      if (block(*c).type == "atom") {
        const BlockType* at = enter(*c, CT::kLogicValue);
        auto l = at ? atom_literal(*c, *at) : std::nullopt;
        if (!l) return std::nullopt;
        l->negated = true;
        return LogicExpr::literal(std::move(*l));
      }
      auto inner = logic(*c);
      return inner ? std::optional(LogicExpr::negation(std::move(*inner))) : std::nullopt;
    }
    if (id == "compare") {
      static const std::map<std::string, RelOp> kOps = {{"EQ", RelOp::kEq},      {"NEQ", RelOp::kNotEq},
                                                        {"LT", RelOp::kLess},    {"LTE", RelOp::kLessEq},
                                                        {"GT", RelOp::kGreater}, {"GTE", RelOp::kGreaterEq},
                                                        {"UNIFY", RelOp::kUnify}};
      const auto op = valid_text(i, *t, "OP");
      auto a = operand_input(i, "A");
      auto b = operand_input(i, "B");
      if (!op || !a || !b) return std::nullopt;
      return LogicExpr::relation(kOps.at(*op), std::move(*a), std::move(*b));
    }
    error(DiagnosticCode::kTypeMismatch, i, "'" + id + "' block is not a condition");
    return std::nullopt;
  }

  std::optional<Operand> operand_input(BlockIndex parent, const std::string& name) {
    const auto c = child(parent, name);
    if (!c) return std::nullopt;
    if (block(*c).type == "arith_binop") {
      auto e = arith(*c);
      return e ? std::optional<Operand>(std::move(*e)) : std::nullopt;
    }
    auto t = term(*c);
    return t ? std::optional<Operand>(std::move(*t)) : std::nullopt;
  }

  std::optional<ArithExpr> arith_input(BlockIndex parent, const std::string& name) {
    const auto c = child(parent, name);
    return c ? arith(*c) : std::nullopt;
  }

  std::optional<ArithExpr> arith(BlockIndex i) {
    const BlockType* t = enter(i, CT::kValue);
    if (!t) return std::nullopt;
    if (t->id == "number") {
      const auto it = block(i).fields.find("NUM");
      const auto d = it == block(i).fields.end() ? std::nullopt : parse_number(it->second);
      return d ? std::optional(ArithExpr::constant(*d)) : std::nullopt;
    }
    if (t->id == "variable") {
      const auto s = valid_text(i, *t, "VAR");
      if (!s) return std::nullopt;
      record_variable(*s, i);
      return ArithExpr::variable(*s);
    }
    if (t->id == "arith_binop") {
      static const std::map<std::string, ArithOp> kOps = {
          {"ADD", ArithOp::kAdd}, {"SUB", ArithOp::kSub}, {"MUL", ArithOp::kMul}, {"DIV", ArithOp::kDiv}};
      const auto op = valid_text(i, *t, "OP");
      auto a = arith_input(i, "A");
      auto b = arith_input(i, "B");
      if (!op || !a || !b) return std::nullopt;
      return ArithExpr::binary(kOps.at(*op), std::move(*a), std::move(*b));
    }
    error(DiagnosticCode::kTypeMismatch, i, "arithmetic operands must be number, variable or arithmetic blocks");
    return std::nullopt;
  }

  // ---- statements ----

  bool statements(std::optional<BlockIndex> cur, std::vector<BodyStep>& out) {
    bool ok = true;
    while (cur) {
      const BlockType* t = enter(*cur, CT::kStatement);
      if (!t) return false;
      ok &= statement(*cur, *t, out);
      cur = block(*cur).next;
    }
    return ok;
  }

  bool statement(BlockIndex i, const BlockType& t, std::vector<BodyStep>& out) {
    const std::string& id = t.id;
    if (t.affordance) return affordance(i, t, out);
    if (id == "add_belief" || id == "remove_belief") {
      auto l = literal_input(i, "BELIEF");
      if (!l) return false;
      out.push_back(id == "add_belief" ? BodyStep::add_belief(std::move(*l)) : BodyStep::remove_belief(std::move(*l)));
      return true;
    }
    if (id == "achieve_subgoal") {
      auto l = literal_input(i, "GOAL");
      if (!l) return false;
      out.push_back(BodyStep::achieve(std::move(*l)));
      return true;
    }
    if (id == "print" || id == "wait_ms") {
      auto v = term_input(i, id == "print" ? "MESSAGE" : "MS");
      if (!v) return false;
      out.push_back(BodyStep::internal(id == "print" ? "print" : "wait", {std::move(*v)}));
      return true;
    }
    if (id == "json_get") {
      auto doc = term_input(i, "DOC");
      auto path = term_input(i, "PATH");
      auto v = variable_input(i, "OUT");
      if (!doc || !path || !v) return false;
      out.push_back(BodyStep::internal("json_get", {std::move(*doc), std::move(*path), std::move(*v)}));
      return true;
    }
    if (id == "json_build") {
      const auto count = parse_count(mutation(i, t, "pairCount"));
      if (!count) return false;
      std::vector<Term> args;
      bool ok = true;
      for (int k = 0; k < *count; ++k) {
        auto key = term_input(i, "KEY" + std::to_string(k));
        auto val = term_input(i, "VALUE" + std::to_string(k));
        if (key && val) {
          args.push_back(std::move(*key));
          args.push_back(std::move(*val));
        } else {
          ok = false;
        }
      }
      auto v = variable_input(i, "OUT");
      if (!ok || !v) return false;
      args.push_back(std::move(*v));
      out.push_back(BodyStep::internal("json_build", std::move(args)));
      return true;
    }
    if (id == "send_tell" || id == "send_achieve") {
      auto receiver = term_input(i, "RECEIVER");
      auto content = literal_input(i, id == "send_tell" ? "BELIEF" : "GOAL");
      if (!receiver || !content) return false;
      out.push_back(BodyStep::internal(
          "send", {std::move(*receiver), Term::atom(id == "send_tell" ? "tell" : "achieve"), content->to_term()}));
      return true;
    }
    error(DiagnosticCode::kTypeMismatch, i, "'" + id + "' block is not a statement");
    return false;
  }

  bool affordance(BlockIndex i, const BlockType& t, std::vector<BodyStep>& out) {
    const Block& b = block(i);
    const auto href = b.mutation.find("href");
    const auto method = b.mutation.find("httpMethod");
    if (href == b.mutation.end() || method == b.mutation.end() || !wot::is_absolute_http_uri(href->second) ||
        !kMethods.count(method->second))
      return false;
    const std::string& kind = t.affordance->kind;
    std::vector<Term> args = {Term::string(href->second), Term::string(method->second)};

    if (kind == "readproperty") {
      auto v = variable_input(i, "OUT");
      if (!v) return false;
      args.push_back(std::move(*v));
    } else if (kind == "writeproperty") {
      auto v = term_input(i, "VALUE");
      if (!v) return false;
      args.push_back(std::move(*v));
    } else {
      std::vector<std::pair<std::string, BlockIndex>> fields;
      for (const auto& [name, c] : b.inputs)
        if (name.size() > kPayloadFieldPrefix.size() &&
            std::string_view(name).substr(0, kPayloadFieldPrefix.size()) == kPayloadFieldPrefix)
          fields.emplace_back(name.substr(kPayloadFieldPrefix.size()), c);
      const bool object = t.affordance->payload == PayloadShape::kObject || !fields.empty();
      bool ok = true;
      if (object && b.inputs.count("INPUT")) {
        error(DiagnosticCode::kTypeMismatch, i, "an action takes either INPUT or FIELD_ inputs, not both");
        return false;
      }
      if (object) {
        // Input names are map-ordered, so keys come out sorted.
        std::vector<Term> pairs;
        for (const auto& [key, c] : fields) {
          auto v = term(c);
          if (!v) {
            ok = false;
            continue;
          }
          pairs.push_back(Term::string(key));
          pairs.push_back(std::move(*v));
        }
        const Term payload = Term::variable(fresh_payload_variable());
        pairs.push_back(payload);
        if (ok) out.push_back(BodyStep::internal("json_build", std::move(pairs)));
        args.push_back(payload);
      } else if (b.inputs.count("INPUT")) {
        auto v = term_input(i, "INPUT");
        if (!v) return false;
        args.push_back(std::move(*v));
      } else {
        args.push_back(Term::atom("null"));
      }
      if (b.inputs.count("OUT")) {
        auto v = variable_input(i, "OUT");
        if (!v) return false;
        args.push_back(std::move(*v));
      }
      if (!ok) return false;
    }
    out.push_back(BodyStep::environment("wot:" + kind, std::move(args)));
    return true;
  }

  std::string fresh_payload_variable() {
    for (;;) {
      std::string name = "Payload_" + std::to_string(++payload_counter_);
      if (!plan_variables_.count(name)) {
        plan_variables_.insert(name);
        return name;
      }
    }
  }

  void collect_variable_names(BlockIndex i, int depth) {
    if (depth > 4096 || i >= bp_.blocks.size()) return;
    const Block& b = block(i);
    if (b.type == "variable")
      if (const auto s = text(i, "VAR")) plan_variables_.insert(*s);
    for (const auto& [name, c] : b.inputs) collect_variable_names(c, depth + 1);
    if (b.next) collect_variable_names(*b.next, depth + 1);
  }

  // ---- top level ----

  void compile_top(BlockIndex i, const BlockType& t, lang::AgentProgram& program) {
    const std::string& id = t.id;
    if (id == "initial_belief") {
      auto l = literal_input(i, "BELIEF");
      if (!l) return;
      if (!l->is_ground()) {
        error(DiagnosticCode::kNonGroundBelief, i, "initial belief must not contain variables");
        return;
      }
      program.initial_beliefs.push_back(std::move(*l));
    } else if (id == "initial_goal") {
      if (auto l = literal_input(i, "GOAL")) program.initial_goals.push_back(std::move(*l));
    } else if (id == "rule") {
      auto head = literal_input(i, "HEAD");
      auto body = logic_input(i, "CONDITION");
      if (head && body) program.rules.push_back(lang::Rule{std::move(*head), std::move(*body), {}});
    } else if (id == "plan") {
      if (auto p = plan(i, t)) program.plans.push_back(std::move(*p));
    } else {
      error(DiagnosticCode::kTypeMismatch, i, "'" + id + "' block cannot be placed at top level");
    }
  }

  std::optional<Plan> plan(BlockIndex i, const BlockType& t) {
    Plan p;
    const auto trigger = valid_text(i, t, "TRIGGER");
    bool ok = trigger.has_value();
    if (trigger) {
      p.trigger.kind = *trigger == "believes"          ? lang::TriggerKind::kBeliefAdded
                       : *trigger == "stops_believing" ? lang::TriggerKind::kBeliefRemoved
                                                       : lang::TriggerKind::kGoalAdded;
    }
    if (auto l = literal_input(i, "EVENT")) p.trigger.pattern = std::move(*l);
    else ok = false;
    if (child(i, "CONTEXT")) {
      if (auto c = logic_input(i, "CONTEXT")) p.context = std::move(*c);
      else ok = false;
    }
    plan_variables_.clear();
    payload_counter_ = 0;
    collect_variable_names(i, 0);
    std::map<std::string, std::string> sites;
    var_sites_ = &sites;
    ok &= statements(child(i, "BODY"), p.body);
    var_sites_ = nullptr;
    if (!ok) return std::nullopt;
    const auto unbound = lang::unbound_body_variables(p);
    for (const auto& v : unbound) {
      const auto it = sites.find(v);
      diags_.push_back({DiagnosticCode::kUnboundVariable, it != sites.end() ? it->second : block(i).id,
                        "variable " + v + " is used in the plan body before it is bound", Diagnostic::Severity::kError});
    }
    if (!unbound.empty()) return std::nullopt;
    return p;
  }

  const BlockProgram& bp_;
  const BlockCatalog& catalog_;
  std::vector<bool> visited_;
  std::vector<Diagnostic> diags_;
  std::map<std::string, std::string>* var_sites_ = nullptr;
  std::set<std::string> plan_variables_;
  int payload_counter_ = 0;
};

}  // namespace

CompileResult try_compile(const BlockProgram& bp, const BlockCatalog& catalog) { return Compiler(bp, catalog).run(); }

std::vector<Diagnostic> validate(const BlockProgram& bp, const BlockCatalog& catalog) {
  return try_compile(bp, catalog).diagnostics;
}

lang::AgentProgram compile(const BlockProgram& bp, const BlockCatalog& catalog) {
  CompileResult r = try_compile(bp, catalog);
  if (!r.program) throw CompileError(std::move(r.diagnostics));
  return std::move(*r.program);
}

}  // namespace agentblocks::blocks
