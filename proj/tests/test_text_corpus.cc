#include <doctest.h>

#include <sstream>

#include "sportsnews/corpus.h"
#include "sportsnews/error.h"
#include "sportsnews/text.h"

using namespace sportsnews;

namespace {

// Independent counters for the stats fixture.
std::size_t CountLeadBytes(const std::string &s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

std::size_t NaiveWords(const std::string &s) {
  std::size_t n = 0;
  bool in_word = false;
  for (std::size_t i = 0; i < s.size();) {
    unsigned char c = s[i];
    if (c >= 0x80) {
      n += 1;  // every multibyte char in the fixture is a CJK ideograph
      in_word = false;
      i += (c >= 0xF0) ? 4 : (c >= 0xE0) ? 3 : 2;
      continue;
    }
    bool alnum = std::isalnum(c);
    if (alnum && !in_word) ++n;
    in_word = alnum;
    ++i;
  }
  return n;
}

GameRecord TwoByOne() {
  return ParseGameLine(
      R"({"game_id":"x","commentary":[{"minute":1,"score":"0-0","text":"a"},)"
      R"({"minute":2,"score":"","text":"b"}],"news":[{"text":"n","minute":null}]})",
      1);
}

}  // namespace

TEST_CASE("utf8 helpers") {
  CHECK(CountCodepoints("abc") == 3);
  CHECK(CountCodepoints("双方战平") == 4);
  CHECK(SplitCodepoints("a双b") == std::vector<std::string>{"a", "双", "b"});
  CHECK(Trim("　 hi \t") == "hi");
  CHECK(ToLowerAscii("GoAL É") == "goal É");
  CHECK(EncodeUtf8(U'战') == "战");
}

TEST_CASE("tokenization") {
  CHECK(Tokenize("Ab c", Tokenization::kChar) == Tokens{"a", "b", "c"});
  CHECK(Tokenize("Kane's goal, 2-1!", Tokenization::kWord) ==
        Tokens{"kane", "s", "goal", "2", "1"});
  CHECK(Tokenize("梅西破门 goal", Tokenization::kWord) ==
        Tokens{"梅", "西", "破", "门", "goal"});
  CHECK(Tokenize("", Tokenization::kChar).empty());
  CHECK(ParseTokenization("word") == Tokenization::kWord);
  CHECK_THROWS_AS(ParseTokenization("bpe"), Error);
}

TEST_CASE("parse one game") {
  GameRecord g = TwoByOne();
  CHECK(g.commentary.size() == 2);
  CHECK(g.news.size() == 1);
  CHECK(g.commentary[0].minute == 1);
  CHECK_FALSE(g.news[0].minute.has_value());
}

TEST_CASE("parse errors") {
  std::istringstream empty("");
  CHECK_THROWS_WITH_AS(ParseGames(empty), doctest::Contains("EmptyCorpus"), Error);

  std::istringstream blank("\n  \n");
  CHECK_THROWS_AS(ParseGames(blank), Error);

  std::istringstream missing(
      R"({"game_id":"a","commentary":[{"minute":1,"score":"","text":"x"}],"news":[]})"
      "\n"
      R"({"game_id":"b","commentary":[{"minute":1,"score":""}],"news":[]})"
      "\n");
  try {
    ParseGames(missing);
    FAIL("expected MalformedRecord");
  } catch (const MalformedRecord &e) {
    CHECK(e.line() == 2);
    CHECK(e.code() == ErrorCode::kMalformedRecord);
  }

  std::istringstream garbage("{not json\n");
  CHECK_THROWS_AS(ParseGames(garbage), MalformedRecord);
}

TEST_CASE("record invariants") {
  GameRecord g = TwoByOne();
  CHECK_FALSE(CheckGame(g).has_value());
  GameRecord bad = g;
  bad.commentary[0].minute = 5;  // decreasing
  CHECK(CheckGame(bad).has_value());
  bad = g;
  bad.commentary[1].text = "   ";
  CHECK(CheckGame(bad).has_value());
  bad = g;
  bad.commentary[1].minute = 201;
  CHECK(CheckGame(bad).has_value());
  CHECK_FALSE(CheckGame(bad, 300).has_value());
  bad = g;
  bad.commentary.clear();
  CHECK(CheckGame(bad).has_value());
  bad = g;
  bad.news.clear();
  CHECK_FALSE(CheckGame(bad).has_value());
  bad = g;
  bad.news[0].minute = -1;
  CHECK_THROWS_AS(ValidateGame(bad), Error);
}

TEST_CASE("serialize round trip") {
  std::vector<GameRecord> games = ReadCorpusFile(FIXTURE_DIR "/pipeline_games.jsonl");
  games.push_back(ReadCorpusFile(FIXTURE_DIR "/stats_games.jsonl")[1]);
  for (const GameRecord &g : games) {
    const std::string line = SerializeGame(g);
    GameRecord back = ParseGameLine(line, 1);
    CHECK(back == g);
    CHECK(SerializeGame(back) == line);
  }
  CHECK(SerializeGame(TwoByOne()) ==
        R"({"game_id":"x","commentary":[{"minute":1,"score":"0-0","text":"a"},)"
        R"({"minute":2,"score":"","text":"b"}],"news":[{"text":"n","minute":null}]})");
}

TEST_CASE("stats arithmetic mean") {
  GameRecord a = TwoByOne(), b = TwoByOne();
  a.news[0].text = "0123456789";
  b.news[0].text = "01234567890123456789";
  CHECK(ComputeStats({a, b}).avg_chars_news == doctest::Approx(15.0));
  CHECK_THROWS_AS(ComputeStats({}), Error);
}

TEST_CASE("stats fixture against a recount") {
  const std::vector<GameRecord> games = ReadCorpusFile(FIXTURE_DIR "/stats_games.jsonl");
  REQUIRE(games.size() == 3);
  double cc = 0, cn = 0, wc = 0, wn = 0, sc = 0, sn = 0;
  for (const GameRecord &g : games) {
    for (const auto &e : g.commentary) {
      cc += CountLeadBytes(e.text);
      wc += NaiveWords(e.text);
    }
    for (const auto &s : g.news) {
      cn += CountLeadBytes(s.text);
      wn += NaiveWords(s.text);
    }
    sc += g.commentary.size();
    sn += g.news.size();
  }
  const CorpusStats s = ComputeStats(games);
  CHECK(s.avg_chars_commentary == doctest::Approx(cc / 3));
  CHECK(s.avg_chars_news == doctest::Approx(cn / 3));
  CHECK(s.avg_words_commentary == doctest::Approx(wc / 3));
  CHECK(s.avg_words_news == doctest::Approx(wn / 3));
  CHECK(s.avg_sents_commentary == doctest::Approx(sc / 3));
  CHECK(s.avg_sents_news == doctest::Approx(sn / 3));
  // Hand counts.
  CHECK(s.avg_chars_commentary == doctest::Approx(19.0));
  CHECK(s.avg_chars_news == doctest::Approx(49.0 / 3));
  CHECK(s.avg_words_commentary == doctest::Approx(16.0 / 3));
  CHECK(s.avg_words_news == doctest::Approx(13.0 / 3));

  CHECK(FormatStats(s) ==
        "avg_chars_commentary\t19.00\navg_chars_news\t16.33\n"
        "avg_words_commentary\t5.33\navg_words_news\t4.33\n"
        "avg_sents_commentary\t2.00\navg_sents_news\t1.33\n");
}

TEST_CASE("stats over a partition combine by weight") {
  std::vector<GameRecord> games = ReadCorpusFile(FIXTURE_DIR "/pipeline_games.jsonl");
  const CorpusStats all = ComputeStats(games);
  std::vector<GameRecord> left(games.begin(), games.begin() + 2);
  std::vector<GameRecord> right(games.begin() + 2, games.end());
  const CorpusStats l = ComputeStats(left), r = ComputeStats(right);
  CHECK(all.avg_chars_news ==
        doctest::Approx((l.avg_chars_news * 2 + r.avg_chars_news * 3) / 5));
  CHECK(all.avg_words_commentary ==
        doctest::Approx((l.avg_words_commentary * 2 + r.avg_words_commentary * 3) / 5));
}

TEST_CASE("custom word counter") {
  const std::vector<GameRecord> games = ReadCorpusFile(FIXTURE_DIR "/stats_games.jsonl");
  const CorpusStats s = ComputeStats(games, [](std::string_view) { return std::size_t{1}; });
  CHECK(s.avg_words_commentary == doctest::Approx(2.0));
}
