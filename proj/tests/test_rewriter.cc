#include <doctest.h>

#include <fstream>

#include "fake_service.h"
#include "sportsnews/corpus.h"
#include "sportsnews/error.h"
#include "sportsnews/labeling.h"
#include "sportsnews/rewriter.h"

using namespace sportsnews;
using fake::json;

TEST_CASE("template rewrite") {
  TemplateRules rules;
  CHECK(TemplateRewrite("15' What a strike!!!", rules) == "In the 15th minute, a strike.");
  CHECK(TemplateRewrite("Wow, the keeper saves!", rules) == "the keeper saves.");
  CHECK(TemplateRewrite("Corner kick taken short", rules) == "Corner kick taken short");
  CHECK(TemplateRewrite("1' Kick off", rules) == "In the 1st minute, Kick off");
  CHECK(TemplateRewrite("22' x", rules) == "In the 22nd minute, x");
  CHECK(TemplateRewrite("113' x", rules) == "In the 113th minute, x");
  CHECK(TemplateRewrite("45+2' Late drama", rules) == "In the 45th minute, Late drama");
  CHECK(TemplateRewrite("23' 梅西破门！！", rules) == "第23分钟，梅西破门。");
  CHECK(TemplateRewrite("  spaced    out   ", rules) == "spaced out");
}

TEST_CASE("ordinals") {
  CHECK(OrdinalSuffix(1) == "st");
  CHECK(OrdinalSuffix(2) == "nd");
  CHECK(OrdinalSuffix(3) == "rd");
  CHECK(OrdinalSuffix(4) == "th");
  CHECK(OrdinalSuffix(11) == "th");
  CHECK(OrdinalSuffix(12) == "th");
  CHECK(OrdinalSuffix(13) == "th");
  CHECK(OrdinalSuffix(21) == "st");
  CHECK(OrdinalSuffix(111) == "th");
  CHECK(OrdinalSuffix(102) == "nd");
}

TEST_CASE("never empty") {
  TemplateRules rules;
  rules.substitutions.push_back({"Goal", ""});
  CHECK(TemplateRewrite("Goal", rules) == "Goal");
  CHECK(TemplateRewrite("9' Goal", rules) == "9' Goal");
  CHECK_FALSE(TemplateRewrite("!!!", rules).empty());
}

TEST_CASE("idempotent on the fixture corpus") {
  TemplateRules rules;
  std::vector<std::string> sources = {"Wow, 12' run", "What a What a goal!", "哇，天哪，好球！",
                                      "3' Wow, 4' twice"};
  for (const std::string &f : {"pipeline_games.jsonl", "stats_games.jsonl"}) {
    for (const GameRecord &g : ReadCorpusFile(std::string(FIXTURE_DIR) + "/" + f)) {
      for (const auto &c : g.commentary) sources.push_back(FormatRewriteSource(c));
    }
  }
  for (const std::string &s : sources) {
    const std::string once = TemplateRewrite(s, rules);
    CAPTURE(s);
    CHECK(TemplateRewrite(once, rules) == once);
    CHECK_FALSE(once.empty());
  }
}

TEST_CASE("rules file") {
  const std::string path = "rewrite_rules_test.json";
  {
    std::ofstream out(path);
    out << R"({"minute_template": "At {minute}: ", "substitutions": [["Boom", "Goal"]],
               "strip_exclamations": false})";
  }
  TemplateRules rules = TemplateRules::Load(path);
  CHECK(TemplateRewrite("7' Boom!", rules) == "At 7: Goal!");
  std::remove(path.c_str());
  CHECK_THROWS_AS(TemplateRules::Load("missing.json"), Error);
}

TEST_CASE("requests and selected rewrites") {
  GameRecord g;
  g.game_id = "g";
  g.commentary = {{10, "0-0", "What a shot!"}, {std::nullopt, "0-0", "Half time"},
                  {50, "1-0", "Goal"}};
  std::vector<RewriteRequest> req = MakeRewriteRequests(g, {0, 1});
  REQUIRE(req.size() == 2);
  CHECK(req[0].source == "10' What a shot!");
  CHECK(req[1].source == "Half time");
  CHECK(req[1].commentary_index == 1);
  CHECK_THROWS_AS(MakeRewriteRequests(g, {3}), Error);

  TemplateRewriter rw;
  std::vector<RewrittenCandidate> c = RewriteSelected(g, {0, 2}, {0.9, 0.1, 0.7}, rw);
  REQUIRE(c.size() == 2);
  CHECK(c[0].text == "In the 10th minute, a shot.");
  CHECK(c[0].info == 0.9);
  CHECK(c[0].source_minute == 10);
  CHECK(c[1].commentary_index == 2);
  CHECK(c[1].info == 0.7);
  CHECK_FALSE(c[1].fluency.has_value());
}

TEST_CASE("remote rewriter against echo") {
  fake::Server server(fake::Echo);
  auto client = std::make_shared<ServiceClient>(ServiceAddress::Parse(server.address()));
  RemoteRewriter rw(client, false);
  std::vector<RewriteRequest> batch = {{"1' a", "g", 0}, {"2' b", "g", 1}, {"c", "g", 2}};
  CHECK(rw.Rewrite(batch) == std::vector<std::string>{"1' a", "2' b", "c"});
}

TEST_CASE("remote rewriter fallback") {
  std::vector<RewriteRequest> batch = {{"15' What a strike!!!", "g", 0}, {"b", "g", 1}};
  TemplateRewriter local;
  const std::vector<std::string> expected = local.Rewrite(batch);

  auto dead = std::make_shared<ServiceClient>(ServiceAddress{"127.0.0.1", fake::DeadPort()},
                                              std::chrono::milliseconds(500));
  CHECK(RemoteRewriter(dead, true).Rewrite(batch) == expected);
  try {
    RemoteRewriter(dead, false).Rewrite(batch);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kServiceUnavailable);
  }

  // One item fails on the service side.
  fake::Server partial([](const json &req) -> std::optional<std::string> {
    return fake::Values(req, {nullptr, "remote b"});
  });
  auto client = std::make_shared<ServiceClient>(ServiceAddress::Parse(partial.address()));
  CHECK(RemoteRewriter(client, true).Rewrite(batch) ==
        std::vector<std::string>{expected[0], "remote b"});
  try {
    RemoteRewriter(client, false).Rewrite(batch);
    FAIL("expected an error");
  } catch (const ItemFailure &e) {
    CHECK(e.index() == 0);
  }

  // Protocol errors are not masked by the fallback.
  fake::Server wrong([](const json &req) -> std::optional<std::string> {
    return fake::Values(req, {"only one"});
  });
  auto wrong_client = std::make_shared<ServiceClient>(ServiceAddress::Parse(wrong.address()));
  CHECK_THROWS_WITH_AS(RemoteRewriter(wrong_client, true).Rewrite(batch),
                       doctest::Contains("ProtocolError"), Error);
}
