#include "agentblocks/blocks/catalog.hpp"

#include <stdexcept>

namespace agentblocks::blocks {

using CT = ConnectionType;

std::string_view to_string(ConnectionType t) {
  switch (t) {
    case CT::kValue: return "Value";
    case CT::kLogicValue: return "LogicValue";
    case CT::kStatement: return "Statement";
    case CT::kTopLevel: return "TopLevel";
  }
  return "Value";
}

std::string_view to_string(DiagnosticCode c) {
  switch (c) {
    case DiagnosticCode::kUnknownBlockType: return "UnknownBlockType";
    case DiagnosticCode::kUnknownField: return "UnknownField";
    case DiagnosticCode::kMissingField: return "MissingField";
    case DiagnosticCode::kInvalidFieldValue: return "InvalidFieldValue";
    case DiagnosticCode::kUnknownInput: return "UnknownInput";
    case DiagnosticCode::kMissingInput: return "MissingInput";
    case DiagnosticCode::kTypeMismatch: return "TypeMismatch";
    case DiagnosticCode::kInvalidMutation: return "InvalidMutation";
    case DiagnosticCode::kUnboundVariable: return "UnboundVariable";
    case DiagnosticCode::kNonGroundBelief: return "NonGroundBelief";
    case DiagnosticCode::kDuplicateBlockId: return "DuplicateBlockId";
    case DiagnosticCode::kArithmeticOutsideComparison: return "ArithmeticOutsideComparison";
    case DiagnosticCode::kBlockReused: return "BlockReused";
    case DiagnosticCode::kAffordanceOmitted: return "AffordanceOmitted";
  }
  return "TypeMismatch";
}

bool BlockType::outputs_to(ConnectionType t) const {
  for (ConnectionType o : outputs)
    if (o == t) return true;
  return false;
}

const InputSpec* BlockType::input(std::string_view name) const {
  for (const auto& i : inputs)
    if (i.name == name) return &i;
  return nullptr;
}

const FieldSpec* BlockType::field(std::string_view name) const {
  for (const auto& f : fields)
    if (f.name == name) return &f;
  return nullptr;
}

namespace {

InputSpec value(std::string name, bool required = true) { return {std::move(name), CT::kValue, required, false, false}; }
InputSpec literal(std::string name) { return {std::move(name), CT::kValue, true, true, false}; }
InputSpec variable(std::string name, bool required = true) {
  return {std::move(name), CT::kValue, required, false, true};
}
InputSpec logic(std::string name, bool required = true) { return {std::move(name), CT::kLogicValue, required, false, false}; }
InputSpec statements(std::string name) { return {std::move(name), CT::kStatement, false, false, false}; }

BlockType type(std::string id, std::string label, std::vector<CT> outputs, std::vector<FieldSpec> fields = {},
               std::vector<InputSpec> inputs = {}) {
  BlockType t;
  t.id = std::move(id);
  t.label = std::move(label);
  t.outputs = std::move(outputs);
  t.fields = std::move(fields);
  t.inputs = std::move(inputs);
  return t;
}

const std::vector<MutationSpec> kAffordanceMutation = {{"href", {}}, {"httpMethod", {}}, {"affordanceKind", {}}, {"thingId", {}}};

BlockType affordance_shell(const std::string& kind, std::string id, std::string label) {
  BlockType t = type(std::move(id), std::move(label), {CT::kStatement});
  t.mutation = kAffordanceMutation;
  if (kind == "readproperty") {
    t.inputs = {variable("OUT")};
  } else if (kind == "writeproperty") {
    t.inputs = {value("VALUE")};
  } else {
    t.inputs = {variable("OUT", false)};
  }
  return t;
}

BlockCatalog build_standard() {
  BlockCatalog c;
  const FieldSpec name{"NAME", FieldKind::kAtomName, {}};

  BlockType atom = type("atom", "%{NAME}", {CT::kValue, CT::kLogicValue}, {name});
  atom.variadic = Variadic::kArgs;
  atom.mutation = {{"argCount", "0"}};
  c.add_category({"Values",
                  "#5b80a5",
                  {atom,
                   type("string", "\"%{TEXT}\"", {CT::kValue}, {{"TEXT", FieldKind::kText, {}}}),
                   type("number", "%{NUM}", {CT::kValue}, {{"NUM", FieldKind::kNumber, {}}}),
                   type("boolean", "%{BOOL}", {CT::kValue, CT::kLogicValue},
                        {{"BOOL", FieldKind::kChoice, {"TRUE", "FALSE"}}}),
                   type("variable", "%{VAR}", {CT::kValue}, {{"VAR", FieldKind::kVariableName, {}}}),
                   type("empty_list", "empty list", {CT::kValue}),
                   type("list_cons", "%{HEAD} followed by %{TAIL}", {CT::kValue}, {}, {value("HEAD"), value("TAIL")})},
                  false});

  c.add_category({"Operations",
                  "#5b67a5",
                  {type("arith_binop", "%{A} %{OP} %{B}", {CT::kValue},
                        {{"OP", FieldKind::kChoice, {"ADD", "SUB", "MUL", "DIV"}}}, {value("A"), value("B")}),
                   type("compare", "%{A} %{OP} %{B}", {CT::kLogicValue},
                        {{"OP", FieldKind::kChoice, {"EQ", "NEQ", "LT", "LTE", "GT", "GTE", "UNIFY"}}},
                        {value("A"), value("B")}),
                   type("and", "%{A} and %{B}", {CT::kLogicValue}, {}, {logic("A"), logic("B")}),
                   type("or", "%{A} or %{B}", {CT::kLogicValue}, {}, {logic("A"), logic("B")}),
                   type("not", "it is not the case that %{A}", {CT::kLogicValue}, {}, {logic("A")})},
                  false});

  c.add_category({"Initialization",
                  "#5ba55b",
                  {type("initial_belief", "you believe that %{BELIEF}", {CT::kTopLevel}, {}, {literal("BELIEF")}),
                   type("initial_goal", "your goal is to %{GOAL}", {CT::kTopLevel}, {}, {literal("GOAL")}),
                   type("rule", "%{HEAD} holds when %{CONDITION}", {CT::kTopLevel}, {},
                        {literal("HEAD"), logic("CONDITION")})},
                  false});

  c.add_category({"PlanDefinition",
                  "#a5745b",
                  {type("plan", "when you %{TRIGGER} %{EVENT} and %{CONTEXT} then %{BODY}", {CT::kTopLevel},
                        {{"TRIGGER", FieldKind::kChoice, {"believes", "stops_believing", "wants"}}},
                        {literal("EVENT"), logic("CONTEXT", false), statements("BODY")})},
                  false});

  BlockType build = type("json_build", "build a JSON object of the pairs into %{OUT}", {CT::kStatement}, {},
                         {variable("OUT")});
  build.variadic = Variadic::kPairs;
  build.mutation = {{"pairCount", "0"}};
  c.add_category({"AgentActions",
                  "#a55b80",
                  {type("add_belief", "start believing %{BELIEF}", {CT::kStatement}, {}, {literal("BELIEF")}),
                   type("remove_belief", "stop believing %{BELIEF}", {CT::kStatement}, {}, {literal("BELIEF")}),
                   type("achieve_subgoal", "achieve %{GOAL}", {CT::kStatement}, {}, {literal("GOAL")}),
                   type("print", "say %{MESSAGE}", {CT::kStatement}, {}, {value("MESSAGE")}),
                   type("wait_ms", "wait %{MS} milliseconds", {CT::kStatement}, {}, {value("MS")}),
                   type("json_get", "take %{PATH} from %{DOC} into %{OUT}", {CT::kStatement}, {},
                        {value("DOC"), value("PATH"), variable("OUT")}),
                   build},
                  false});

  c.add_category({"Communication",
                  "#a5a55b",
                  {type("send_tell", "tell %{RECEIVER} that %{BELIEF}", {CT::kStatement}, {},
                        {value("RECEIVER"), literal("BELIEF")}),
                   type("send_achieve", "ask %{RECEIVER} to achieve %{GOAL}", {CT::kStatement}, {},
                        {value("RECEIVER"), literal("GOAL")})},
                  false});
  return c;
}

BlockType generic_affordance(const std::string& kind) {
  BlockType t = affordance_shell(kind, "wot:" + kind, kind + " (from mutation)");
  if (kind == "invokeaction") {
    t.inputs.push_back(value("INPUT", false));
    t.open_payload_fields = true;
  }
  AffordanceInfo info;
  info.kind = kind;
  t.affordance = info;
  return t;
}

}  // namespace

const BlockCatalog& BlockCatalog::standard() {
  static const BlockCatalog catalog = build_standard();
  return catalog;
}

void BlockCatalog::add_category(BlockCategory c) {
  for (std::size_t t = 0; t < c.types.size(); ++t) {
    const std::string& id = c.types[t].id;
    if (index_.count(id)) throw std::invalid_argument("block type '" + id + "' already registered");
    for (std::size_t u = 0; u < t; ++u)
      if (c.types[u].id == id) throw std::invalid_argument("block type '" + id + "' repeated in category");
  }
  const std::size_t ci = categories_.size();
  for (std::size_t t = 0; t < c.types.size(); ++t) index_.emplace(c.types[t].id, std::make_pair(ci, t));
  categories_.push_back(std::move(c));
}

const BlockType* BlockCatalog::find(std::string_view id) const {
  if (const auto it = index_.find(id); it != index_.end())
    return &categories_[it->second.first].types[it->second.second];
  static const BlockType kRead = generic_affordance("readproperty");
  static const BlockType kWrite = generic_affordance("writeproperty");
  static const BlockType kInvoke = generic_affordance("invokeaction");
  auto starts = [&](std::string_view p) { return id.substr(0, p.size()) == p; };
  if (starts("wot:readproperty:")) return &kRead;
  if (starts("wot:writeproperty:")) return &kWrite;
  if (starts("wot:invokeaction:")) return &kInvoke;
  return nullptr;
}

nlohmann::json to_json(const std::vector<Diagnostic>& diagnostics) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& d : diagnostics)
    out.push_back({{"code", to_string(d.code)},
                   {"blockId", d.block_id},
                   {"message", d.message},
                   {"severity", d.severity == Diagnostic::Severity::kError ? "error" : "warning"}});
  return out;
}

std::string affordance_type_id(std::string_view kind, std::string_view thing_id, std::string_view name) {
  return "wot:" + std::string(kind) + ":" + std::string(thing_id) + "/" + std::string(name);
}

ThingCategory blocks_from_td(const wot::ThingDescription& td) {
  ThingCategory out;
  out.category.name = td.title;
  out.category.colour = "#7a7a7a";
  out.category.dynamic = true;

  auto make = [&](const std::string& kind, const std::string& name, const wot::ResolvedForm& form,
                  std::string label) {
    BlockType t = affordance_shell(kind, affordance_type_id(kind, td.id, name), std::move(label));
    AffordanceInfo info;
    info.kind = kind;
    info.thing_id = td.id;
    info.name = name;
    info.mutation_defaults = {
        {"href", form.href}, {"httpMethod", form.method}, {"affordanceKind", kind}, {"thingId", td.id}};
    t.affordance = std::move(info);
    return t;
  };
  auto warn = [&](const std::string& name, const std::string& msg) {
    out.warnings.push_back({DiagnosticCode::kAffordanceOmitted, name, msg, Diagnostic::Severity::kWarning});
  };

  for (const auto& p : td.properties) {
    if (const auto form = p.form_for("readproperty")) {
      BlockType t = make("readproperty", p.name, *form, "read " + p.name + " of " + td.title + " into %{OUT}");
      t.affordance->schema = p.schema;
      out.category.types.push_back(std::move(t));
    } else {
      warn(p.name, "property '" + p.name + "' has no read form; read block omitted");
    }
    if (p.writable) {
      BlockType t = make("writeproperty", p.name, *p.form_for("writeproperty"),
                         "set " + p.name + " of " + td.title + " to %{VALUE}");
      t.affordance->payload = PayloadShape::kScalar;
      t.affordance->schema = p.schema;
      out.category.types.push_back(std::move(t));
    }
  }
  for (const auto& a : td.actions) {
    const auto form = a.form_for("invokeaction");
    if (!form) {
      warn(a.name, "action '" + a.name + "' has no invoke form; block omitted");
      continue;
    }
    BlockType t = make("invokeaction", a.name, *form, "ask " + td.title + " to " + a.name);
    if (a.input && a.input->type == wot::SchemaType::kObject) {
      t.affordance->payload = PayloadShape::kObject;
      // OUT keeps the last slot; fields precede it in declaration order.
      std::vector<InputSpec> fields;
      for (const auto& [field, ftype] : a.input->fields) {
        fields.push_back(value(std::string(kPayloadFieldPrefix) + field, false));
        t.label += " with " + field + " %{" + std::string(kPayloadFieldPrefix) + field + "}";
      }
      t.inputs.insert(t.inputs.begin(), fields.begin(), fields.end());
    } else if (a.input) {
      t.affordance->payload = PayloadShape::kScalar;
      t.inputs.insert(t.inputs.begin(), value("INPUT"));
      t.label += " with %{INPUT}";
    }
    t.label += ", result into %{OUT}";
    t.affordance->schema = a.input;
    out.category.types.push_back(std::move(t));
  }
  for (const auto& o : td.omitted) warn(o.name, o.kind + " '" + o.name + "' omitted: " + o.reason);
  return out;
}

nlohmann::json to_json(const BlockType& t) {
  nlohmann::json j;
  j["type"] = t.id;
  j["label"] = t.label;
  nlohmann::json outs = nlohmann::json::array();
  for (auto o : t.outputs) outs.push_back(to_string(o));
  j["outputs"] = outs;
  nlohmann::json fields = nlohmann::json::array();
  for (const auto& f : t.fields) {
    static const char* kKinds[] = {"atomName", "variableName", "text", "number", "choice"};
    nlohmann::json fj = {{"name", f.name}, {"kind", kKinds[static_cast<int>(f.kind)]}};
    if (!f.choices.empty()) fj["choices"] = f.choices;
    fields.push_back(fj);
  }
  j["fields"] = fields;
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& i : t.inputs) {
    nlohmann::json ij = {{"name", i.name}, {"accepts", to_string(i.accepts)}, {"required", i.required}};
    if (i.literal_only) ij["only"] = "atom";
    if (i.variable_only) ij["only"] = "variable";
    inputs.push_back(ij);
  }
  j["inputs"] = inputs;
  if (t.variadic != Variadic::kNone) j["variadic"] = t.variadic == Variadic::kArgs ? "args" : "pairs";
  if (!t.mutation.empty()) {
    nlohmann::json m = nlohmann::json::object();
    for (const auto& s : t.mutation) m[s.key] = s.default_value ? nlohmann::json(*s.default_value) : nlohmann::json();
    j["mutation"] = m;
  }
  if (t.affordance) {
    j["mutation"] = t.affordance->mutation_defaults;
    if (t.affordance->schema) j["schema"] = to_string(t.affordance->schema->type);
  }
  return j;
}

nlohmann::json to_json(const BlockCatalog& catalog) {
  nlohmann::json cats = nlohmann::json::array();
  for (const auto& c : catalog.categories()) {
    nlohmann::json types = nlohmann::json::array();
    for (const auto& t : c.types) types.push_back(to_json(t));
    cats.push_back({{"name", c.name}, {"colour", c.colour}, {"dynamic", c.dynamic}, {"blocks", types}});
  }
  return {{"categories", cats}};
}

}  // namespace agentblocks::blocks
