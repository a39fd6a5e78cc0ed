#include "agentblocks/wot/td.hpp"

#include <algorithm>
#include <cmath>

#include "agentblocks/wot/uri.hpp"

namespace agentblocks::wot {

using OJson = nlohmann::ordered_json;

std::string_view to_string(SchemaType t) {
  switch (t) {
    case SchemaType::kUnspecified: return "unspecified";
    case SchemaType::kObject: return "object";
    case SchemaType::kArray: return "array";
    case SchemaType::kString: return "string";
    case SchemaType::kNumber: return "number";
    case SchemaType::kInteger: return "integer";
    case SchemaType::kBoolean: return "boolean";
    case SchemaType::kNull: return "null";
  }
  return "unspecified";
}

bool conforms(SchemaType type, const Json& v) {
  switch (type) {
    case SchemaType::kUnspecified: return true;
    case SchemaType::kObject: return v.is_object();
    case SchemaType::kArray: return v.is_array();
    case SchemaType::kString: return v.is_string();
    case SchemaType::kNumber: return v.is_number();
    case SchemaType::kInteger:
      return v.is_number_integer() || v.is_number_unsigned() ||
             (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>());
    case SchemaType::kBoolean: return v.is_boolean();
    case SchemaType::kNull: return v.is_null();
  }
  return false;
}

bool conforms(const DataSchema& schema, const Json& value) {
  if (!conforms(schema.type, value)) return false;
  if (schema.type != SchemaType::kObject) return true;
  for (const auto& [name, type] : schema.fields) {
    const auto it = value.find(name);
    if (it == value.end()) {
      if (std::find(schema.required.begin(), schema.required.end(), name) != schema.required.end()) return false;
      continue;
    }
    if (!conforms(type, *it)) return false;
  }
  return true;
}

std::string default_method(std::string_view op) {
  if (op == "writeproperty") return "PUT";
  if (op == "invokeaction") return "POST";
  return "GET";
}

namespace {

std::optional<ResolvedForm> resolve_form(const std::vector<Form>& forms, std::string_view op) {
  for (const Form& f : forms) {
    if (std::find(f.ops.begin(), f.ops.end(), op) == f.ops.end()) continue;
    return ResolvedForm{f.href, f.method.value_or(default_method(op)), f.content_type};
  }
  return std::nullopt;
}

SchemaType schema_type(const OJson& j) {
  const auto it = j.find("type");
  if (it == j.end() || !it->is_string()) return SchemaType::kUnspecified;
  const std::string t = it->get<std::string>();
  if (t == "object") return SchemaType::kObject;
  if (t == "array") return SchemaType::kArray;
  if (t == "string") return SchemaType::kString;
  if (t == "number") return SchemaType::kNumber;
  if (t == "integer") return SchemaType::kInteger;
  if (t == "boolean") return SchemaType::kBoolean;
  if (t == "null") return SchemaType::kNull;
  return SchemaType::kUnspecified;
}

DataSchema parse_schema(const OJson& j) {
  DataSchema s;
  if (!j.is_object()) return s;
  s.type = schema_type(j);
  if (s.type == SchemaType::kObject) {
    if (const auto props = j.find("properties"); props != j.end() && props->is_object())
      for (const auto& [k, v] : props->items()) s.fields.emplace_back(k, v.is_object() ? schema_type(v) : SchemaType::kUnspecified);
    if (const auto req = j.find("required"); req != j.end() && req->is_array())
      for (const auto& r : *req)
        if (r.is_string()) s.required.push_back(r.get<std::string>());
  }
  return s;
}

bool flag(const OJson& j, const char* key) {
  const auto it = j.find(key);
  return it != j.end() && it->is_boolean() && it->get<bool>();
}

std::string pointer_token(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

class TdParser {
 public:
  TdParseResult run(const OJson& doc) {
    if (!doc.is_object()) return fail("", "document is not a JSON object");
    const auto title = doc.find("title");
    if (title == doc.end() || !title->is_string() || title->get<std::string>().empty())
      return fail("/title", "missing title");
    const auto id = doc.find("id");
    if (id == doc.end() || !id->is_string() || id->get<std::string>().empty()) return fail("/id", "missing id");
    td_.title = title->get<std::string>();
    td_.id = id->get<std::string>();

    if (const auto base = doc.find("base"); base != doc.end()) {
      if (base->is_string() && parse_uri_reference(base->get<std::string>()) &&
          !parse_uri_reference(base->get<std::string>())->scheme.empty())
        td_.base = base->get<std::string>();
      else
        warn("/base", "base is not an absolute URI; ignored");
    }
    parse_security(doc);

    for_each_affordance(doc, "properties", [&](const std::string& name, const OJson& a, const std::string& path) {
      PropertyAffordance p;
      p.name = name;
      p.read_only = flag(a, "readOnly");
      p.write_only = flag(a, "writeOnly");
      p.schema = parse_schema(a);
      std::vector<std::string> defaults;
      if (!p.write_only) defaults.push_back("readproperty");
      if (!p.read_only) defaults.push_back("writeproperty");
      p.forms = parse_forms(a, path, defaults);
      if (p.forms.empty()) return omit("property", name, path);
      p.writable = !p.read_only && p.form_for("writeproperty").has_value();
      td_.properties.push_back(std::move(p));
    });
    for_each_affordance(doc, "actions", [&](const std::string& name, const OJson& a, const std::string& path) {
      ActionAffordance act;
      act.name = name;
      if (const auto in = a.find("input"); in != a.end() && in->is_object()) act.input = parse_schema(*in);
      if (const auto out = a.find("output"); out != a.end() && out->is_object()) act.output = parse_schema(*out);
      act.forms = parse_forms(a, path, {"invokeaction"});
      if (act.forms.empty()) return omit("action", name, path);
      td_.actions.push_back(std::move(act));
    });
    for_each_affordance(doc, "events", [&](const std::string& name, const OJson& a, const std::string& path) {
      EventAffordance ev;
      ev.name = name;
      ev.forms = parse_forms(a, path, {"subscribeevent"});
      if (ev.forms.empty()) return omit("event", name, path);
      td_.events.push_back(std::move(ev));
    });

    TdParseResult r;
    r.td = std::move(td_);
    r.diagnostics = std::move(diags_);
    return r;
  }

 private:
  TdParseResult fail(const std::string& path, const std::string& msg) {
    diags_.push_back({TdDiagnostic::Severity::kError, path, msg});
    TdParseResult r;
    r.diagnostics = std::move(diags_);
    return r;
  }

  void warn(const std::string& path, const std::string& msg) {
    diags_.push_back({TdDiagnostic::Severity::kWarning, path, msg});
  }

  void omit(const std::string& kind, const std::string& name, const std::string& path) {
    td_.omitted.push_back({kind, name, "no usable form"});
    warn(path, kind + " '" + name + "' has no usable form; omitted");
  }

  template <typename F>
  void for_each_affordance(const OJson& doc, const char* member, F&& f) {
    const auto it = doc.find(member);
    if (it == doc.end()) return;
    const std::string base = std::string("/") + member;
    if (!it->is_object()) {
      warn(base, std::string(member) + " is not an object; ignored");
      return;
    }
    for (const auto& [name, a] : it->items()) {
      const std::string path = base + "/" + pointer_token(name);
      if (!a.is_object()) {
        warn(path, "affordance is not an object; ignored");
        continue;
      }
      f(name, a, path);
    }
  }

  std::vector<Form> parse_forms(const OJson& a, const std::string& path, const std::vector<std::string>& default_ops) {
    std::vector<Form> out;
    const auto forms = a.find("forms");
    if (forms == a.end() || !forms->is_array()) return out;
    for (std::size_t i = 0; i < forms->size(); ++i) {
      const OJson& f = (*forms)[i];
      const std::string fpath = path + "/forms/" + std::to_string(i);
      if (!f.is_object()) {
        warn(fpath, "form is not an object; ignored");
        continue;
      }
      const auto href = f.find("href");
      if (href == f.end() || !href->is_string()) {
        warn(fpath, "form has no href; ignored");
        continue;
      }
      std::optional<std::string> abs;
      const std::string raw = href->get<std::string>();
      if (is_absolute_http_uri(raw)) abs = raw;
      else if (td_.base) abs = resolve_uri(*td_.base, raw);
      if (!abs || !is_absolute_http_uri(*abs)) {
        warn(fpath, "href '" + raw + "' does not resolve to an http(s) URI; ignored");
        continue;
      }
      Form form;
      form.href = *abs;
      if (const auto m = f.find("htv:methodName"); m != f.end() && m->is_string()) form.method = m->get<std::string>();
      if (const auto ct = f.find("contentType"); ct != f.end() && ct->is_string())
        form.content_type = ct->get<std::string>();
      if (const auto op = f.find("op"); op != f.end()) {
        if (op->is_string()) form.ops.push_back(op->get<std::string>());
        else if (op->is_array())
          for (const auto& o : *op)
            if (o.is_string()) form.ops.push_back(o.get<std::string>());
      }
      if (form.ops.empty()) form.ops = default_ops;
      out.push_back(std::move(form));
    }
    return out;
  }

  void parse_security(const OJson& doc) {
    std::vector<std::string> refs;
    if (const auto sec = doc.find("security"); sec != doc.end()) {
      if (sec->is_string()) refs.push_back(sec->get<std::string>());
      else if (sec->is_array())
        for (const auto& s : *sec)
          if (s.is_string()) refs.push_back(s.get<std::string>());
    }
    const auto defs = doc.find("securityDefinitions");
    for (const auto& ref : refs) {
      std::string scheme;
      if (defs != doc.end() && defs->is_object()) {
        const auto d = defs->find(ref);
        if (d != defs->end() && d->is_object() && d->contains("scheme") && (*d)["scheme"].is_string())
          scheme = (*d)["scheme"].get<std::string>();
      }
      if (scheme.empty()) {
        warn("/security", "security definition '" + ref + "' not found; runtime invocation disabled");
        td_.invocable = false;
        continue;
      }
      td_.security_schemes.push_back(scheme);
      if (scheme != "nosec") {
        warn("/securityDefinitions/" + pointer_token(ref),
             "security scheme '" + scheme + "' is not supported; runtime invocation disabled");
        td_.invocable = false;
      }
    }
  }

  ThingDescription td_;
  std::vector<TdDiagnostic> diags_;
};

}  // namespace

std::optional<ResolvedForm> PropertyAffordance::form_for(std::string_view op) const { return resolve_form(forms, op); }

std::optional<ResolvedForm> ActionAffordance::form_for(std::string_view op) const { return resolve_form(forms, op); }

const PropertyAffordance* ThingDescription::find_property(std::string_view name) const {
  for (const auto& p : properties)
    if (p.name == name) return &p;
  return nullptr;
}

const ActionAffordance* ThingDescription::find_action(std::string_view name) const {
  for (const auto& a : actions)
    if (a.name == name) return &a;
  return nullptr;
}

std::vector<TdDiagnostic> TdParseResult::errors() const {
  std::vector<TdDiagnostic> out;
  for (const auto& d : diagnostics)
    if (d.severity == TdDiagnostic::Severity::kError) out.push_back(d);
  return out;
}

std::vector<TdDiagnostic> TdParseResult::warnings() const {
  std::vector<TdDiagnostic> out;
  for (const auto& d : diagnostics)
    if (d.severity == TdDiagnostic::Severity::kWarning) out.push_back(d);
  return out;
}

TdParseResult parse_td(std::string_view text) {
  OJson doc = OJson::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded()) {
    TdParseResult r;
    r.diagnostics.push_back({TdDiagnostic::Severity::kError, "", "document is not valid JSON"});
    return r;
  }
  return parse_td_json(doc);
}

TdParseResult parse_td_json(const OJson& doc) {
  try {
    return TdParser().run(doc);
  } catch (const std::exception& e) {
    TdParseResult r;
    r.diagnostics.push_back({TdDiagnostic::Severity::kError, "", std::string("unreadable document: ") + e.what()});
    return r;
  }
}

Json diagnostics_to_json(const std::vector<TdDiagnostic>& diagnostics) {
  Json out = Json::array();
  for (const auto& d : diagnostics)
    out.push_back({{"severity", d.severity == TdDiagnostic::Severity::kError ? "error" : "warning"},
                   {"path", d.path},
                   {"message", d.message}});
  return out;
}

}  // namespace agentblocks::wot
