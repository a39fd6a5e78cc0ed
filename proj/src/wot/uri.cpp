#include "agentblocks/wot/uri.hpp"

#include <cctype>
#include <vector>

namespace agentblocks::wot {

namespace {

bool valid_scheme(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') return false;
  return true;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string remove_dot_segments(std::string_view in) {
  std::string input(in);
  std::vector<std::string> out;
  bool absolute = !input.empty() && input[0] == '/';
  std::size_t pos = absolute ? 1 : 0;
  bool trailing = false;
  while (pos <= input.size()) {
    std::size_t slash = input.find('/', pos);
    const bool last = slash == std::string::npos;
    if (last) slash = input.size();
    const std::string seg = input.substr(pos, slash - pos);
    trailing = false;
    if (seg == ".") {
      trailing = true;
    } else if (seg == "..") {
      if (!out.empty()) out.pop_back();
      trailing = true;
    } else {
      out.push_back(seg);
    }
    if (last) break;
    pos = slash + 1;
  }
  std::string result = absolute ? "/" : "";
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i) result += '/';
    result += out[i];
  }
  if (trailing && !out.empty()) result += '/';
  return result;
}

std::string merge(const UriParts& base, const std::string& ref_path) {
  if (base.authority && base.path.empty()) return "/" + ref_path;
  const auto slash = base.path.rfind('/');
  if (slash == std::string::npos) return ref_path;
  return base.path.substr(0, slash + 1) + ref_path;
}

bool unreserved(unsigned char c) { return std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~'; }

}  // namespace

std::optional<UriParts> parse_uri_reference(std::string_view s) {
  for (unsigned char c : s)
    if (c <= 0x20 || c == 0x7f) return std::nullopt;
  UriParts u;
  std::string_view rest = s;
  if (const auto hash = rest.find('#'); hash != std::string_view::npos) {
    u.fragment = std::string(rest.substr(hash + 1));
    rest = rest.substr(0, hash);
  }
  if (const auto q = rest.find('?'); q != std::string_view::npos) {
    u.query = std::string(rest.substr(q + 1));
    rest = rest.substr(0, q);
  }
  if (const auto colon = rest.find(':'); colon != std::string_view::npos) {
    const auto first_slash = rest.find('/');
    if (first_slash == std::string_view::npos || colon < first_slash) {
      if (!valid_scheme(rest.substr(0, colon))) return std::nullopt;
      u.scheme = lower(rest.substr(0, colon));
      rest = rest.substr(colon + 1);
    }
  }
  if (rest.substr(0, 2) == "//") {
    rest = rest.substr(2);
    const auto end = rest.find('/');
    u.authority = std::string(rest.substr(0, end));
    rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
  }
  u.path = std::string(rest);
  return u;
}

std::string to_string(const UriParts& u) {
  std::string out;
  if (!u.scheme.empty()) out += u.scheme + ":";
  if (u.authority) out += "//" + *u.authority;
  out += u.path;
  if (u.query) out += "?" + *u.query;
  if (u.fragment) out += "#" + *u.fragment;
  return out;
}

std::optional<std::string> resolve_uri(std::string_view base_text, std::string_view reference) {
  const auto base = parse_uri_reference(base_text);
  const auto ref = parse_uri_reference(reference);
  if (!base || !ref || base->scheme.empty()) return std::nullopt;
  UriParts t;
  if (!ref->scheme.empty()) {
    t = *ref;
    t.path = remove_dot_segments(ref->path);
  } else {
    t.scheme = base->scheme;
    if (ref->authority) {
      t.authority = ref->authority;
      t.path = remove_dot_segments(ref->path);
      t.query = ref->query;
    } else {
      t.authority = base->authority;
      if (ref->path.empty()) {
        t.path = base->path;
        t.query = ref->query ? ref->query : base->query;
      } else {
        t.path = remove_dot_segments(ref->path[0] == '/' ? ref->path : merge(*base, ref->path));
        t.query = ref->query;
      }
    }
    t.fragment = ref->fragment;
  }
  return to_string(t);
}

bool is_absolute_http_uri(std::string_view s) { return split_http_uri(s).has_value(); }

std::optional<HttpEndpoint> split_http_uri(std::string_view s) {
  const auto u = parse_uri_reference(s);
  if (!u || (u->scheme != "http" && u->scheme != "https") || !u->authority || u->authority->empty())
    return std::nullopt;
  std::string host = *u->authority;
  if (host.find('@') != std::string::npos) return std::nullopt;
  HttpEndpoint e;
  e.origin = u->scheme + "://" + host;
  e.path_and_query = u->path.empty() ? "/" : u->path;
  if (u->query) e.path_and_query += "?" + *u->query;
  return e;
}

std::string percent_encode(std::string_view s) {
  static const char* kHex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (unreserved(c)) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  return out;
}

std::optional<std::string> percent_decode(std::string_view s) {
  auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '%') {
      out += s[i];
      continue;
    }
    if (i + 2 >= s.size()) return std::nullopt;
    const int hi = hex(s[i + 1]);
    const int lo = hex(s[i + 2]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out += static_cast<char>(hi * 16 + lo);
    i += 2;
  }
  return out;
}

}  // namespace agentblocks::wot
