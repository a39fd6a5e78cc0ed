#pragma once

#include <optional>
#include <string_view>

#include "json.hpp"

#include "agentblocks/lang/term.hpp"

namespace agentblocks::runtime {

using Json = nlohmann::json;
using lang::Term;

// true/false/null become atoms, numbers Num, strings Str, arrays List.
// Objects are never reified: they become a Str holding their JSON text, so
// they stay addressable through json_get.
Term json_to_term(const Json& j);

// Inverse mapping for ground data terms. Atoms other than true/false/null
// map to strings. Variables and structures have no JSON form.
std::optional<Json> term_to_json(const Term& t);

// Like term_to_json, but a Str whose text is a JSON object or array is
// embedded as that value rather than as a string.
std::optional<Json> payload_to_json(const Term& t);

// Dot-separated path; numeric segments index arrays. An empty path selects
// the whole document.
std::optional<Json> json_path_get(const Json& doc, std::string_view path);

}  // namespace agentblocks::runtime
