#include "agentblocks/runtime/term_json.hpp"

#include <cmath>
#include <string>

namespace agentblocks::runtime {

Term json_to_term(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null: return Term::atom("null");
    case Json::value_t::boolean: return Term::atom(j.get<bool>() ? "true" : "false");
    case Json::value_t::number_integer:
    case Json::value_t::number_unsigned:
    case Json::value_t::number_float: return Term::number(j.get<double>());
    case Json::value_t::string: return Term::string(j.get<std::string>());
    case Json::value_t::array: {
      std::vector<Term> items;
      items.reserve(j.size());
      for (const auto& e : j) items.push_back(json_to_term(e));
      return Term::list(std::move(items));
    }
    default: return Term::string(j.dump());
  }
}

std::optional<Json> term_to_json(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::kAtom:
      if (t.name() == "true") return Json(true);
      if (t.name() == "false") return Json(false);
      if (t.name() == "null") return Json(nullptr);
      return Json(t.name());
    case Term::Kind::kString: return Json(t.text());
    case Term::Kind::kNumber: {
      const double v = t.number();
      // Integral values travel as JSON integers so that 1 stays 1, not 1.0.
      if (std::isfinite(v) && std::trunc(v) == v && std::fabs(v) < 9007199254740992.0)
        return Json(static_cast<std::int64_t>(v));
      if (!std::isfinite(v)) return std::nullopt;
      return Json(v);
    }
    case Term::Kind::kList: {
      Json arr = Json::array();
      for (const auto& e : t.children()) {
        auto j = payload_to_json(e);
        if (!j) return std::nullopt;
        arr.push_back(std::move(*j));
      }
      return arr;
    }
    default: return std::nullopt;
  }
}

std::optional<Json> payload_to_json(const Term& t) {
  if (t.is_string()) {
    Json parsed = Json::parse(t.text(), nullptr, false);
    if (!parsed.is_discarded() && (parsed.is_object() || parsed.is_array())) return parsed;
  }
  return term_to_json(t);
}

std::optional<Json> json_path_get(const Json& doc, std::string_view path) {
  const Json* cur = &doc;
  if (path.empty()) return *cur;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t dot = path.find('.', start);
    const std::string seg(path.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
    if (cur->is_object()) {
      auto it = cur->find(seg);
      if (it == cur->end()) return std::nullopt;
      cur = &*it;
    } else if (cur->is_array()) {
      if (seg.empty() || seg.size() > 9 || seg.find_first_not_of("0123456789") != std::string::npos)
        return std::nullopt;
      const std::size_t idx = std::stoul(seg);
      if (idx >= cur->size()) return std::nullopt;
      cur = &(*cur)[idx];
    } else {
      return std::nullopt;
    }
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return *cur;
}

}  // namespace agentblocks::runtime
