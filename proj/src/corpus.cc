#include "sportsnews/corpus.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "sportsnews/error.h"
#include "sportsnews/text.h"

namespace sportsnews {

using json = nlohmann::ordered_json;

std::string GameRecord::NewsText(std::string_view sep) const {
  std::string out;
  for (std::size_t i = 0; i < news.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(news[i].text);
  }
  return out;
}

std::optional<std::string> CheckGame(const GameRecord &game, int max_minute) {
  if (game.commentary.empty()) return "commentary is empty";
  std::optional<int> last_minute;
  for (std::size_t j = 0; j < game.commentary.size(); ++j) {
    const CommentaryEvent &ev = game.commentary[j];
    const std::string where = "commentary[" + std::to_string(j) + "]";
    if (TrimView(ev.text).empty()) return where + ".text is empty";
    if (ev.minute) {
      if (*ev.minute < 0 || *ev.minute > max_minute) {
        return where + ".minute out of range";
      }
      if (last_minute && *ev.minute < *last_minute) {
        return where + ".minute decreases";
      }
      last_minute = ev.minute;
    }
  }
  for (std::size_t i = 0; i < game.news.size(); ++i) {
    const NewsSentence &s = game.news[i];
    const std::string where = "news[" + std::to_string(i) + "]";
    if (TrimView(s.text).empty()) return where + ".text is empty";
    if (s.minute && *s.minute < 0) return where + ".minute is negative";
  }
  return std::nullopt;
}

void ValidateGame(const GameRecord &game, int max_minute) {
  if (auto problem = CheckGame(game, max_minute)) {
    throw Error(ErrorCode::kMalformedRecord,
                "game '" + game.game_id + "': " + *problem);
  }
}

namespace {

std::optional<int> ReadMinute(const json &obj, const std::string &where) {
  auto it = obj.find("minute");
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer()) {
    throw std::runtime_error(where + ".minute must be an integer or null");
  }
  return it->get<int>();
}

std::string ReadString(const json &obj, const char *field,
                       const std::string &where, bool required) {
  auto it = obj.find(field);
  if (it == obj.end()) {
    if (required) {
      throw std::runtime_error(where + " is missing `" + field + "`");
    }
    return {};
  }
  if (!it->is_string()) {
    throw std::runtime_error(where + "." + field + " must be a string");
  }
  return it->get<std::string>();
}

const json &ReadArray(const json &obj, const char *field) {
  auto it = obj.find(field);
  if (it == obj.end() || !it->is_array()) {
    throw std::runtime_error(std::string("`") + field +
                             "` must be an array");
  }
  return *it;
}

}  // namespace

GameRecord ParseGameLine(std::string_view line, std::size_t line_number,
                         int max_minute) {
  GameRecord game;
  try {
    json obj = json::parse(line);
    if (!obj.is_object()) throw std::runtime_error("record is not an object");
    game.game_id = ReadString(obj, "game_id", "record", true);
    std::size_t j = 0;
    for (const json &ev : ReadArray(obj, "commentary")) {
      std::string where = "commentary[" + std::to_string(j++) + "]";
      if (!ev.is_object()) throw std::runtime_error(where + " is not an object");
      CommentaryEvent event;
      event.minute = ReadMinute(ev, where);
      event.score = ReadString(ev, "score", where, false);
      event.text = ReadString(ev, "text", where, true);
      game.commentary.push_back(std::move(event));
    }
    std::size_t i = 0;
    for (const json &s : ReadArray(obj, "news")) {
      std::string where = "news[" + std::to_string(i++) + "]";
      if (!s.is_object()) throw std::runtime_error(where + " is not an object");
      NewsSentence sentence;
      sentence.text = ReadString(s, "text", where, true);
      sentence.minute = ReadMinute(s, where);
      game.news.push_back(std::move(sentence));
    }
    if (auto problem = CheckGame(game, max_minute)) {
      throw std::runtime_error(*problem);
    }
  } catch (const std::exception &e) {
    throw MalformedRecord(line_number, e.what());
  }
  return game;
}

std::vector<GameRecord> ParseGames(std::istream &in, int max_minute) {
  std::vector<GameRecord> games;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (TrimView(line).empty()) continue;
    games.push_back(ParseGameLine(line, line_number, max_minute));
  }
  if (games.empty()) throw Error(ErrorCode::kEmptyCorpus, "no game records");
  return games;
}

std::string SerializeGame(const GameRecord &game) {
  json obj;
  obj["game_id"] = game.game_id;
  json commentary = json::array();
  for (const CommentaryEvent &ev : game.commentary) {
    json e;
    e["minute"] = ev.minute ? json(*ev.minute) : json(nullptr);
    e["score"] = ev.score;
    e["text"] = ev.text;
    commentary.push_back(std::move(e));
  }
  obj["commentary"] = std::move(commentary);
  json news = json::array();
  for (const NewsSentence &s : game.news) {
    json e;
    e["text"] = s.text;
    e["minute"] = s.minute ? json(*s.minute) : json(nullptr);
    news.push_back(std::move(e));
  }
  obj["news"] = std::move(news);
  return obj.dump();
}

void WriteGames(std::ostream &out, const std::vector<GameRecord> &games) {
  for (const GameRecord &g : games) out << SerializeGame(g) << '\n';
}

std::vector<GameRecord> ReadCorpusFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return ParseGames(in);
}

void WriteCorpusFile(const std::string &path,
                     const std::vector<GameRecord> &games) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  WriteGames(out, games);
}

CorpusStats ComputeStats(const std::vector<GameRecord> &corpus,
                         const WordCounter &count_words) {
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "no games");
  const WordCounter words = count_words ? count_words : WordCounter(CountWords);
  double chars_c = 0, chars_n = 0, words_c = 0, words_n = 0, sents_c = 0,
         sents_n = 0;
  for (const GameRecord &g : corpus) {
    for (const CommentaryEvent &ev : g.commentary) {
      chars_c += static_cast<double>(CountCodepoints(ev.text));
      words_c += static_cast<double>(words(ev.text));
    }
    for (const NewsSentence &s : g.news) {
      chars_n += static_cast<double>(CountCodepoints(s.text));
      words_n += static_cast<double>(words(s.text));
    }
    sents_c += static_cast<double>(g.commentary.size());
    sents_n += static_cast<double>(g.news.size());
  }
  const double n = static_cast<double>(corpus.size());
  return CorpusStats{chars_c / n, chars_n / n, words_c / n,
                     words_n / n, sents_c / n, sents_n / n};
}

std::string FormatStats(const CorpusStats &stats) {
  std::ostringstream out;
  auto line = [&](const char *name, double v) {
    out << name << '\t' << FormatFixed(v, 2) << '\n';
  };
  line("avg_chars_commentary", stats.avg_chars_commentary);
  line("avg_chars_news", stats.avg_chars_news);
  line("avg_words_commentary", stats.avg_words_commentary);
  line("avg_words_news", stats.avg_words_news);
  line("avg_sents_commentary", stats.avg_sents_commentary);
  line("avg_sents_news", stats.avg_sents_news);
  return out.str();
}

}  // namespace sportsnews
