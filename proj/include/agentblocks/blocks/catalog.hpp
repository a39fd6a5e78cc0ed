#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agentblocks/wot/td.hpp"
#include "json.hpp"

namespace agentblocks::blocks {

enum class ConnectionType { kValue, kLogicValue, kStatement, kTopLevel };

std::string_view to_string(ConnectionType t);

enum class FieldKind { kAtomName, kVariableName, kText, kNumber, kChoice };

struct FieldSpec {
  std::string name;
  FieldKind kind = FieldKind::kText;
  std::vector<std::string> choices;  // kChoice only
};

struct InputSpec {
  std::string name;
  ConnectionType accepts = ConnectionType::kValue;
  bool required = true;
  bool literal_only = false;   // the connected block must be an atom
  bool variable_only = false;  // the connected block must be a variable
};

struct MutationSpec {
  std::string key;
  std::optional<std::string> default_value;  // absent keys take this value
};

// ARG0..ARG{argCount-1} for literals; KEY0/VALUE0.. for JSON object building.
enum class Variadic { kNone, kArgs, kPairs };

enum class PayloadShape { kNone, kScalar, kObject };

// Present on blocks generated from Thing Description affordances.
struct AffordanceInfo {
  std::string kind;  // readproperty, writeproperty or invokeaction
  std::string thing_id;
  std::string name;
  PayloadShape payload = PayloadShape::kNone;
  std::optional<wot::DataSchema> schema;
  std::map<std::string, std::string> mutation_defaults;
};

struct BlockType {
  std::string id;
  std::string label;  // editor text; %{NAME} marks where a slot renders
  std::vector<ConnectionType> outputs;
  std::vector<FieldSpec> fields;
  std::vector<InputSpec> inputs;
  std::vector<MutationSpec> mutation;
  Variadic variadic = Variadic::kNone;
  // Accepts any FIELD_<name> inputs (generic affordance blocks).
  bool open_payload_fields = false;
  std::optional<AffordanceInfo> affordance;

  bool outputs_to(ConnectionType t) const;
  bool chains() const { return outputs_to(ConnectionType::kStatement) || outputs_to(ConnectionType::kTopLevel); }
  const InputSpec* input(std::string_view name) const;
  const FieldSpec* field(std::string_view name) const;
};

inline constexpr std::string_view kPayloadFieldPrefix = "FIELD_";

struct BlockCategory {
  std::string name;
  std::string colour;
  std::vector<BlockType> types;
  bool dynamic = false;  // generated from a Thing Description
};

class BlockCatalog {
 public:
  // The six static categories.
  static const BlockCatalog& standard();

  // Throws std::invalid_argument when a type id is already registered.
  void add_category(BlockCategory c);

  // Unregistered `wot:<kind>:...` ids resolve to a generic affordance type
  // that takes everything from the block's mutation.
  const BlockType* find(std::string_view id) const;

  const std::vector<BlockCategory>& categories() const { return categories_; }

 private:
  std::vector<BlockCategory> categories_;
  std::map<std::string, std::pair<std::size_t, std::size_t>, std::less<>> index_;
};

enum class DiagnosticCode {
  kUnknownBlockType,
  kUnknownField,
  kMissingField,
  kInvalidFieldValue,
  kUnknownInput,
  kMissingInput,
  kTypeMismatch,
  kInvalidMutation,
  kUnboundVariable,
  kNonGroundBelief,
  kDuplicateBlockId,
  kArithmeticOutsideComparison,
  kBlockReused,
  kAffordanceOmitted,
};

std::string_view to_string(DiagnosticCode c);

struct Diagnostic {
  enum class Severity { kError, kWarning };
  DiagnosticCode code = DiagnosticCode::kTypeMismatch;
  std::string block_id;
  std::string message;
  Severity severity = Severity::kError;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

nlohmann::json to_json(const std::vector<Diagnostic>& diagnostics);

struct ThingCategory {
  BlockCategory category;
  std::vector<Diagnostic> warnings;
};

std::string affordance_type_id(std::string_view kind, std::string_view thing_id, std::string_view name);

// One read block per readable property, one write block per writable
// property, one invoke block per action. Category name is the thing title.
ThingCategory blocks_from_td(const wot::ThingDescription& td);

nlohmann::json to_json(const BlockType& t);
nlohmann::json to_json(const BlockCatalog& catalog);

}  // namespace agentblocks::blocks
