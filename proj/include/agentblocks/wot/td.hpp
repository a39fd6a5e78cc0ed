#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace agentblocks::wot {

using Json = nlohmann::json;

enum class SchemaType { kUnspecified, kObject, kArray, kString, kNumber, kInteger, kBoolean, kNull };

std::string_view to_string(SchemaType t);

// Shape only: the top-level type plus, for objects, the named field types.
struct DataSchema {
  SchemaType type = SchemaType::kUnspecified;
  std::vector<std::pair<std::string, SchemaType>> fields;  // document order
  std::vector<std::string> required;
};

// True when the value's JSON type matches the declared shape. Unspecified
// shapes accept anything; integers satisfy number.
bool conforms(const DataSchema& schema, const Json& value);
bool conforms(SchemaType type, const Json& value);

struct Form {
  std::string href;  // absolute after base resolution
  std::optional<std::string> method;
  std::string content_type = "application/json";
  std::vector<std::string> ops;
};

struct ResolvedForm {
  std::string href;
  std::string method;
  std::string content_type;
};

std::string default_method(std::string_view op);

struct PropertyAffordance {
  std::string name;
  std::vector<Form> forms;
  bool read_only = false;
  bool write_only = false;
  bool writable = false;  // not readOnly and some form supports writeproperty
  DataSchema schema;

  std::optional<ResolvedForm> form_for(std::string_view op) const;
};

struct ActionAffordance {
  std::string name;
  std::vector<Form> forms;
  std::optional<DataSchema> input;
  std::optional<DataSchema> output;

  std::optional<ResolvedForm> form_for(std::string_view op = "invokeaction") const;
};

struct EventAffordance {
  std::string name;
  std::vector<Form> forms;
};

struct OmittedAffordance {
  std::string kind;  // property, action or event
  std::string name;
  std::string reason;
};

struct ThingDescription {
  std::string id;
  std::string title;
  std::optional<std::string> base;
  std::vector<PropertyAffordance> properties;
  std::vector<ActionAffordance> actions;
  std::vector<EventAffordance> events;
  std::vector<std::string> security_schemes;
  // False when any declared security scheme other than nosec applies.
  bool invocable = true;
  std::vector<OmittedAffordance> omitted;

  const PropertyAffordance* find_property(std::string_view name) const;
  const ActionAffordance* find_action(std::string_view name) const;
};

struct TdDiagnostic {
  enum class Severity { kError, kWarning };
  Severity severity = Severity::kError;
  std::string path;  // JSON pointer into the document
  std::string message;
};

struct TdParseResult {
  std::optional<ThingDescription> td;
  std::vector<TdDiagnostic> diagnostics;

  bool ok() const { return td.has_value(); }
  std::vector<TdDiagnostic> errors() const;
  std::vector<TdDiagnostic> warnings() const;
};

// Total: never throws, whatever the input.
TdParseResult parse_td(std::string_view text);
TdParseResult parse_td_json(const nlohmann::ordered_json& doc);

Json diagnostics_to_json(const std::vector<TdDiagnostic>& diagnostics);

}  // namespace agentblocks::wot
