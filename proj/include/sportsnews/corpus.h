#ifndef SPORTSNEWS_CORPUS_H_
#define SPORTSNEWS_CORPUS_H_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sportsnews {

// Largest minute accepted by the corpus reader; covers extra time.
inline constexpr int kDefaultMaxMinute = 200;

// One live-commentary record: timeline minute, running score, text.
struct CommentaryEvent {
  std::optional<int> minute;
  std::string score;
  std::string text;

  bool operator==(const CommentaryEvent &) const = default;
};

struct NewsSentence {
  std::string text;
  std::optional<int> minute;

  bool operator==(const NewsSentence &) const = default;
};

// A commentary document together with its news article.
struct GameRecord {
  std::string game_id;
  std::vector<CommentaryEvent> commentary;
  std::vector<NewsSentence> news;

  bool operator==(const GameRecord &) const = default;

  // Reference article: news sentences concatenated in order.
  std::string NewsText(std::string_view sep = "") const;
};

// Describes the first violated record invariant, if any.
std::optional<std::string> CheckGame(const GameRecord &game,
                                     int max_minute = kDefaultMaxMinute);
// Throws Error(kMalformedRecord) when CheckGame reports a problem.
void ValidateGame(const GameRecord &game, int max_minute = kDefaultMaxMinute);

// One game per line. Blank lines are ignored. Throws MalformedRecord with the
// 1-based line number of the first bad line, or Error(kEmptyCorpus).
std::vector<GameRecord> ParseGames(std::istream &in,
                                   int max_minute = kDefaultMaxMinute);
GameRecord ParseGameLine(std::string_view line, std::size_t line_number,
                         int max_minute = kDefaultMaxMinute);

// Single-line encoding with field order game_id, commentary, news.
std::string SerializeGame(const GameRecord &game);
void WriteGames(std::ostream &out, const std::vector<GameRecord> &games);

std::vector<GameRecord> ReadCorpusFile(const std::string &path);
void WriteCorpusFile(const std::string &path,
                     const std::vector<GameRecord> &games);

struct CorpusStats {
  double avg_chars_commentary = 0;
  double avg_chars_news = 0;
  double avg_words_commentary = 0;
  double avg_words_news = 0;
  double avg_sents_commentary = 0;
  double avg_sents_news = 0;
};

using WordCounter = std::function<std::size_t(std::string_view)>;

// Per-game totals averaged over games. Characters are code points; words use
// `count_words` (defaults to CountWords); each record is one sentence.
CorpusStats ComputeStats(const std::vector<GameRecord> &corpus,
                         const WordCounter &count_words = {});

// `name<TAB>value` lines, two decimals.
std::string FormatStats(const CorpusStats &stats);

}  // namespace sportsnews

#endif  // SPORTSNEWS_CORPUS_H_
