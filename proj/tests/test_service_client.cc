#include <doctest.h>

#include <memory>

#include "fake_service.h"
#include "sportsnews/error.h"
#include "sportsnews/service_client.h"

using namespace sportsnews;
using fake::json;

namespace {

std::shared_ptr<ServiceClient> Client(const fake::Server &s) {
  return std::make_shared<ServiceClient>(ServiceAddress::Parse(s.address()),
                                         std::chrono::milliseconds(2000));
}

}  // namespace

TEST_CASE("address parsing") {
  ServiceAddress a = ServiceAddress::Parse("localhost:8765");
  CHECK(a.host == "localhost");
  CHECK(a.port == 8765);
  CHECK(ServiceAddress::Parse(":99").host == "127.0.0.1");
  CHECK(ServiceAddress::Parse(":99").ToString() == "127.0.0.1:99");
  CHECK_THROWS_AS(ServiceAddress::Parse("nohost"), Error);
  CHECK_THROWS_AS(ServiceAddress::Parse("h:0"), Error);
  CHECK_THROWS_AS(ServiceAddress::Parse("h:abc"), Error);
}

TEST_CASE("request wire format") {
  std::vector<json> seen;
  fake::Server server([&](const json &req) {
    seen.push_back(req);
    return fake::Echo(req);
  });
  auto client = Client(server);
  std::vector<TextPair> pairs{{"a", "b"}};
  client->SemanticSimilarity(pairs);
  std::vector<std::string> texts{"x", "y"};
  client->Perplexity(texts);
  client->Importance(texts);
  client->Rewrite(texts);
  REQUIRE(seen.size() == 4);
  CHECK(seen[0]["op"] == "semantic_similarity");
  CHECK(seen[0]["payload"].dump() == R"({"pairs":[["a","b"]]})");
  CHECK(seen[1]["op"] == "perplexity");
  CHECK(seen[1]["payload"] == json{{"texts", {"x", "y"}}});
  CHECK(seen[2]["op"] == "importance");
  CHECK(seen[2]["payload"] == json{{"windows", {"x", "y"}}});
  CHECK(seen[3]["op"] == "rewrite");
  CHECK(seen[3]["payload"] == json{{"sources", {"x", "y"}}});
  for (const json &r : seen) {
    CHECK(r.size() == 3);
    CHECK(r["id"].is_string());
  }
  CHECK(seen[0]["id"] != seen[1]["id"]);
  CHECK(server.connections() == 1);
}

TEST_CASE("echo answers all four ops in order") {
  fake::Server server(fake::Echo);
  auto client = Client(server);
  std::vector<TextPair> pairs{{"a", "a"}, {"a", "b"}, {"c", "c"}};
  CHECK(client->SemanticSimilarity(pairs) == std::vector<double>{1, 0, 1});
  std::vector<std::string> texts{"one", "three", "x"};
  CHECK(client->Perplexity(texts) == std::vector<double>{4, 6, 2});
  CHECK(client->Importance(texts) == std::vector<double>{0.75, 0.75, 0.75});
  auto rw = client->Rewrite(texts);
  REQUIRE(rw.size() == 3);
  CHECK(*rw[0] == "one");
  CHECK(*rw[2] == "x");
  CHECK(client->Perplexity({}).empty());
  CHECK(server.requests() == 4);
}

TEST_CASE("remote scorers") {
  fake::Server server([](const json &req) -> std::optional<std::string> {
    if (req["op"] == "semantic_similarity") return fake::Values(req, {1.5, -0.5, 0.25});
    return fake::Values(req, {0.0});
  });
  auto client = Client(server);
  RemoteSemanticScorer sem(client);
  std::vector<TextPair> pairs{{"a", "b"}, {"c", "d"}, {"e", "f"}};
  CHECK(sem.ScorePairs(pairs) == std::vector<double>{1.0, 0.0, 0.25});
  RemoteFluencyScorer flu(client);
  CHECK_THROWS_WITH_AS(flu.Perplexity("x"), doctest::Contains("ProtocolError"), Error);
}

TEST_CASE("service unavailable") {
  auto client = std::make_shared<ServiceClient>(
      ServiceAddress{"127.0.0.1", fake::DeadPort()}, std::chrono::milliseconds(500));
  std::vector<std::string> texts{"a"};
  try {
    client->Perplexity(texts);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kServiceUnavailable);
    CHECK(IsServiceError(e.code()));
  }
}

TEST_CASE("protocol violations") {
  std::string mode;
  fake::Server server([&](const json &req) -> std::optional<std::string> {
    if (mode == "arity") return fake::Values(req, {1.0});
    if (mode == "id") return json{{"id", "nope"}, {"values", {1.0, 2.0}}}.dump();
    if (mode == "both") return json{{"id", req["id"]}, {"values", {1.0, 2.0}}, {"error", {}}}.dump();
    if (mode == "garbage") return std::string("not json");
    if (mode == "type") return fake::Values(req, {"a", "b"});
    if (mode == "error") return fake::ErrorReply(req, "model_missing", "no model");
    if (mode == "drop") return std::nullopt;
    return fake::Echo(req);
  });
  auto client = Client(server);
  std::vector<std::string> texts{"a", "b"};
  for (std::string m : {"arity", "id", "both", "garbage", "type", "error"}) {
    CAPTURE(m);
    mode = m;
    try {
      client->Perplexity(texts);
      FAIL("expected an error");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::kProtocolError);
    }
  }
  mode = "error";
  CHECK_THROWS_WITH(client->Importance(texts), doctest::Contains("model_missing"));

  mode = "drop";
  try {
    client->Perplexity(texts);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kServiceUnavailable);
  }
  // The client reconnects after a failure.
  mode = "";
  CHECK(client->Perplexity(texts) == std::vector<double>{2, 2});
}

TEST_CASE("structured error keeps the connection") {
  bool fail = true;
  fake::Server server([&](const json &req) -> std::optional<std::string> {
    if (fail) return fake::ErrorReply(req, "bad_request", "nope");
    return fake::Echo(req);
  });
  auto client = Client(server);
  std::vector<std::string> texts{"abc"};
  CHECK_THROWS_AS(client->Perplexity(texts), Error);
  fail = false;
  CHECK(client->Perplexity(texts) == std::vector<double>{4});
  CHECK(server.connections() == 1);
}

TEST_CASE("concurrent callers share one client") {
  fake::Server server(fake::Echo);
  auto client = Client(server);
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      for (int k = 0; k < 20; ++k) {
        std::vector<std::string> texts{std::string(t + k, 'x')};
        if (client->Perplexity(texts)[0] == 1.0 + t + k) ++ok;
      }
    });
  }
  for (auto &th : threads) th.join();
  CHECK(ok == 160);
}
