#include <gtest/gtest.h>
#include <httplib.h>

#include <random>
#include <thread>

#include "agentblocks/wot/client.hpp"
#include "agentblocks/wot/td.hpp"
#include "agentblocks/wot/uri.hpp"
#include "support/mock_lamp.hpp"

namespace agentblocks::wot {
namespace {

using testing::MockLamp;

ThingDescription lamp_td(const MockLamp& lamp) {
  auto r = parse_td(lamp.td());
  EXPECT_TRUE(r.ok());
  return *r.td;
}

// Reference resolution examples from the URI standard, normal and abnormal.
TEST(Uri, ResolvesStandardExamples) {
  const std::string base = "http://a/b/c/d;p?q";
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"g:h", "g:h"},          {"g", "http://a/b/c/g"},       {"./g", "http://a/b/c/g"},
      {"g/", "http://a/b/c/g/"}, {"/g", "http://a/g"},          {"//g", "http://g"},
      {"?y", "http://a/b/c/d;p?y"}, {"g?y", "http://a/b/c/g?y"}, {"#s", "http://a/b/c/d;p?q#s"},
      {"g#s", "http://a/b/c/g#s"}, {";x", "http://a/b/c/;x"},    {"", "http://a/b/c/d;p?q"},
      {".", "http://a/b/c/"},   {"./", "http://a/b/c/"},        {"..", "http://a/b/"},
      {"../g", "http://a/b/g"}, {"../..", "http://a/"},         {"../../g", "http://a/g"},
      {"../../../g", "http://a/g"}, {"/./g", "http://a/g"},     {"/../g", "http://a/g"},
      {"g.", "http://a/b/c/g."}, {"g..", "http://a/b/c/g.."},   {"./../g", "http://a/b/g"},
      {"g/./h", "http://a/b/c/g/h"}, {"g/../h", "http://a/b/c/h"}, {"g;x=1/../y", "http://a/b/c/y"},
  };
  for (const auto& [ref, want] : cases) EXPECT_EQ(resolve_uri(base, ref).value_or("<none>"), want) << ref;
}

TEST(Uri, HttpEndpointsAndPercentCoding) {
  auto ep = split_http_uri("http://h:8080/a/b?x=1#frag");
  ASSERT_TRUE(ep);
  EXPECT_EQ(ep->origin, "http://h:8080");
  EXPECT_EQ(ep->path_and_query, "/a/b?x=1");
  EXPECT_FALSE(split_http_uri("ftp://h/a"));
  EXPECT_FALSE(is_absolute_http_uri("/on"));
  EXPECT_EQ(percent_encode("urn:dev:lamp 1"), "urn%3Adev%3Alamp%201");
  EXPECT_EQ(percent_decode("urn%3Adev%3Alamp%201").value_or(""), "urn:dev:lamp 1");
  EXPECT_FALSE(percent_decode("bad%2"));
}

TEST(ParseTd, LampHasOnePropertyAndOneAction) {
  const std::string doc = R"({"title":"lamp","id":"urn:lamp",
    "properties":{"on":{"type":"boolean","forms":[{"href":"http://h/on","htv:methodName":"GET"}]}},
    "actions":{"toggle":{"forms":[{"href":"http://h/toggle","htv:methodName":"POST"}]}}})";
  const auto r = parse_td(doc);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.td->properties.size(), 1u);
  EXPECT_EQ(r.td->actions.size(), 1u);
  EXPECT_EQ(r.td->properties[0].form_for("readproperty")->href, "http://h/on");
  EXPECT_EQ(r.td->actions[0].form_for()->method, "POST");
}

TEST(ParseTd, BaseRelativeHrefsAndMethodDefaults) {
  const auto r = parse_td(R"({"title":"t","id":"urn:t","base":"http://h",
    "properties":{"on":{"forms":[{"href":"/on"}]}},"actions":{"go":{"forms":[{"href":"go"}]}}})");
  ASSERT_TRUE(r.ok());
  const auto& on = r.td->properties[0];
  EXPECT_EQ(on.form_for("readproperty")->href, "http://h/on");
  EXPECT_EQ(on.form_for("readproperty")->method, "GET");
  EXPECT_EQ(on.form_for("writeproperty")->method, "PUT");
  EXPECT_TRUE(on.writable);
  EXPECT_EQ(r.td->actions[0].form_for()->href, "http://h/go");
  EXPECT_EQ(r.td->actions[0].form_for()->method, "POST");
  EXPECT_EQ(r.td->actions[0].form_for()->content_type, "application/json");
}

TEST(ParseTd, HardErrors) {
  EXPECT_FALSE(parse_td("not json").ok());
  EXPECT_FALSE(parse_td("[1, 2]").ok());
  const auto no_title = parse_td(R"({"id":"urn:x"})");
  ASSERT_FALSE(no_title.ok());
  EXPECT_EQ(no_title.errors().at(0).path, "/title");
  EXPECT_FALSE(parse_td(R"({"title":"x"})").ok());
}

TEST(ParseTd, UnusableFormsAndSecurityBecomeWarnings) {
  const auto r = parse_td(R"({"title":"t","id":"urn:t","unknownMember":42,
    "securityDefinitions":{"b":{"scheme":"basic"}},"security":"b",
    "properties":{"p":{"forms":[{"href":"relative/only"}]},"q":{"readOnly":true,"forms":[{"href":"http://h/q"}]}},
    "events":{"e":{"forms":[{"href":"http://h/e"}]}}})");
  ASSERT_TRUE(r.ok());
  EXPECT_FALSE(r.td->invocable);
  ASSERT_EQ(r.td->properties.size(), 1u);
  EXPECT_FALSE(r.td->properties[0].writable);
  EXPECT_EQ(r.td->events.size(), 1u);
  ASSERT_EQ(r.td->omitted.size(), 1u);
  EXPECT_EQ(r.td->omitted[0].name, "p");
  EXPECT_GE(r.warnings().size(), 2u);
}

nlohmann::ordered_json random_json(std::mt19937& rng, int depth) {
  static const std::vector<std::string> keys = {"title", "id", "base", "properties", "actions", "events", "forms",
                                                "href", "type", "readOnly", "writeOnly", "security",
                                                "securityDefinitions", "scheme", "input", "htv:methodName", "op",
                                                "contentType", "x"};
  const int kind = std::uniform_int_distribution<int>(0, depth <= 0 ? 4 : 6)(rng);
  switch (kind) {
    case 0: return nullptr;
    case 1: return std::uniform_int_distribution<int>(0, 1)(rng) == 1;
    case 2: return std::uniform_int_distribution<int>(-5, 5)(rng);
    case 3: return keys[std::uniform_int_distribution<std::size_t>(0, keys.size() - 1)(rng)];
    case 4: return "http://h/" + std::to_string(rng() % 7);
    case 5: {
      auto a = nlohmann::ordered_json::array();
      for (int i = std::uniform_int_distribution<int>(0, 3)(rng); i > 0; --i) a.push_back(random_json(rng, depth - 1));
      return a;
    }
    default: {
      auto o = nlohmann::ordered_json::object();
      for (int i = std::uniform_int_distribution<int>(0, 4)(rng); i > 0; --i)
        o[keys[std::uniform_int_distribution<std::size_t>(0, keys.size() - 1)(rng)]] = random_json(rng, depth - 1);
      return o;
    }
  }
}

TEST(ParseTd, TotalOverArbitraryJson) {
  std::mt19937 rng(11);
  int parsed = 0;
  for (int i = 0; i < 3000; ++i) {
    auto doc = random_json(rng, 5);
    if (i % 2 == 0 && doc.is_object()) {
      doc["title"] = "t";
      doc["id"] = "urn:t";
    }
    TdParseResult r;
    ASSERT_NO_THROW(r = parse_td_json(doc)) << doc.dump();
    ASSERT_NO_THROW(r = parse_td(doc.dump()));
    ASSERT_TRUE(r.ok() || !r.errors().empty());
    if (r.ok()) {
      ++parsed;
      for (const auto& p : r.td->properties)
        for (const auto& f : p.forms) ASSERT_TRUE(is_absolute_http_uri(f.href));
    }
  }
  EXPECT_GT(parsed, 150);
}

TEST(Client, ReadWriteInvokeAgainstMockLamp) {
  MockLamp lamp(true);
  const auto td = lamp_td(lamp);
  WotClient client;
  EXPECT_EQ(client.read_property(td, "on"), Json({{"value", true}}));
  EXPECT_FALSE(client.write_property(td, "on", false));
  EXPECT_EQ(client.read_property(td, "on"), Json({{"value", false}}));
  EXPECT_FALSE(client.invoke_action(td, "toggle"));
  EXPECT_TRUE(lamp.on());

  const auto log = lamp.requests();
  ASSERT_EQ(log.size(), 4u);
  EXPECT_EQ(log[1].method, "PUT");
  EXPECT_EQ(log[1].path, "/lamp/properties/on");
  EXPECT_EQ(log[1].content_type, "application/json");
  EXPECT_EQ(log[1].body, "false");
  EXPECT_EQ(log[3].method, "POST");
  EXPECT_EQ(log[3].path, "/lamp/actions/toggle");
  EXPECT_EQ(log[3].content_type, "");
  for (const auto& r : log) EXPECT_EQ(r.accept, "application/json");
}

TEST(Client, ErrorsRaisedBeforeAnyRequest) {
  MockLamp lamp;
  const auto td = lamp_td(lamp);
  WotClient client;
  try {
    client.read_property(td, "brightness");
    FAIL();
  } catch (const AffordanceError& e) {
    EXPECT_EQ(e.kind(), AffordanceError::Kind::kUnknownAffordance);
  }
  try {
    client.write_property(td, "on", "yes");
    FAIL();
  } catch (const AffordanceError& e) {
    EXPECT_EQ(e.kind(), AffordanceError::Kind::kSchemaMismatch);
  }
  EXPECT_THROW(client.invoke_action(td, "explode"), AffordanceError);
  EXPECT_TRUE(lamp.requests().empty());
}

TEST(Client, HttpAndBodyErrors) {
  MockLamp lamp;
  WotClient client;
  try {
    client.call("GET", lamp.href("/fail"), std::nullopt);
    FAIL();
  } catch (const AffordanceError& e) {
    EXPECT_EQ(e.kind(), AffordanceError::Kind::kHttpStatus);
    EXPECT_EQ(e.status(), 500);
    EXPECT_NE(e.body().find("fire"), std::string::npos);
  }
  try {
    client.call("GET", lamp.href("/notjson"), std::nullopt);
    FAIL();
  } catch (const AffordanceError& e) {
    EXPECT_EQ(e.kind(), AffordanceError::Kind::kBadResponse);
  }
  EXPECT_EQ(client.call("GET", lamp.href("/plain"), std::nullopt, "text/plain"), Json("hello"));
}

TEST(Client, UnreachableAndTimeout) {
  const int free_port = testing::unused_port();
  WotClient client(ClientOptions{std::chrono::milliseconds(2000), 1});
  const auto start = std::chrono::steady_clock::now();
  try {
    client.call("GET", "http://127.0.0.1:" + std::to_string(free_port) + "/x", std::nullopt);
    FAIL();
  } catch (const AffordanceError& e) {
    EXPECT_EQ(e.kind(), AffordanceError::Kind::kNetwork);
  }
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(1));
  MockLamp lamp;
  WotClient quick(ClientOptions{std::chrono::milliseconds(200), 1});
  EXPECT_THROW(quick.call("GET", lamp.href("/slow"), std::nullopt), AffordanceError);
}

TEST(Client, CancelAllAbortsInFlightCalls) {
  MockLamp lamp;
  WotClient client;
  std::optional<AffordanceError::Kind> kind;
  const auto start = std::chrono::steady_clock::now();
  std::thread t([&] {
    try {
      client.call("GET", lamp.href("/slow"), std::nullopt);
    } catch (const AffordanceError& e) {
      kind = e.kind();
    }
  });
  std::this_thread::sleep_for(std::chrono::milliseconds(200));
  client.cancel_all();
  t.join();
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(3));
  ASSERT_TRUE(kind);
  EXPECT_EQ(*kind, AffordanceError::Kind::kCancelled);
  EXPECT_THROW(client.call("GET", lamp.href("/plain"), std::nullopt, "text/plain"), AffordanceError);
}

// Minimal repository exposing only the listing routes the client relies on.
class FakeRepo {
 public:
  FakeRepo() {
    server_.Get(R"(/workspaces/([^/]+)/things)", [this](const httplib::Request& req, httplib::Response& res) {
      auto it = workspaces_.find(req.matches[1]);
      if (it == workspaces_.end()) {
        res.status = 404;
        return;
      }
      res.set_content(it->second, "application/json");
    });
    server_.Get(R"(/workspaces/([^/]+)/things/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
      auto it = things_.find(req.matches[2]);
      if (it == things_.end()) {
        res.status = 404;
        return;
      }
      res.set_content(it->second, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeRepo() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::map<std::string, std::string> workspaces_;
  std::map<std::string, std::string> things_;

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

TEST(FetchWorkspace, ListingsAndPartialFailures) {
  FakeRepo repo;
  const std::string a = R"({"title":"a","id":"urn:a","properties":{"p":{"forms":[{"href":"http://h/p"}]}}})";
  const std::string b = R"({"title":"b","id":"urn:b"})";
  repo.workspaces_["two"] = "[" + a + "," + b + "]";
  repo.workspaces_["empty"] = "[]";
  repo.workspaces_["mixed"] = "[" + a + R"(,{"id":"urn:broken"},)" + b + "]";
  repo.workspaces_["byid"] = R"(["urn:a"])";
  repo.things_["urn:a"] = a;

  auto two = fetch_workspace_tds(repo.url(), "two");
  ASSERT_EQ(two.things.size(), 2u);
  EXPECT_EQ(two.things[1].title, "b");
  EXPECT_TRUE(two.warnings.empty());
  EXPECT_TRUE(fetch_workspace_tds(repo.url(), "empty").things.empty());
  auto mixed = fetch_workspace_tds(repo.url(), "mixed");
  EXPECT_EQ(mixed.things.size(), 2u);
  EXPECT_EQ(mixed.warnings.size(), 1u);
  EXPECT_EQ(fetch_workspace_tds(repo.url(), "byid").things.at(0).id, "urn:a");

  try {
    fetch_workspace_tds(repo.url(), "nope");
    FAIL();
  } catch (const RepositoryError& e) {
    EXPECT_EQ(e.status(), 404);
  }
}

TEST(FetchWorkspace, UnreachableRepository) {
  const int free_port = testing::unused_port();
  try {
    fetch_workspace_tds("http://127.0.0.1:" + std::to_string(free_port), "ws");
    FAIL();
  } catch (const RepositoryError& e) {
    EXPECT_EQ(e.status(), 0);
  }
}

}  // namespace
}  // namespace agentblocks::wot
