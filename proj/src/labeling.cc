#include "sportsnews/labeling.h"

#include <algorithm>
#include <map>
#include <regex>

#include <json.hpp>

#include "sportsnews/error.h"
#include "sportsnews/text.h"

namespace sportsnews {

using json = nlohmann::ordered_json;

namespace {

int CjkDigit(char32_t cp) {
  switch (cp) {
    case U'零': case U'〇': return 0;
    case U'一': return 1;
    case U'二': case U'两': return 2;
    case U'三': return 3;
    case U'四': return 4;
    case U'五': return 5;
    case U'六': return 6;
    case U'七': return 7;
    case U'八': return 8;
    case U'九': return 9;
    default: return -1;
  }
}

bool IsCjkNumeral(char32_t cp) {
  return CjkDigit(cp) >= 0 || cp == U'十' || cp == U'百';
}

int DigitValue(char32_t cp) {
  if (cp >= U'0' && cp <= U'9') return static_cast<int>(cp - U'0');
  if (cp >= U'０' && cp <= U'９') return static_cast<int>(cp - U'０');
  return -1;
}

struct MinuteMatch {
  std::size_t position;
  int minute;
};

// 第N分 / N分钟 with Arabic, fullwidth or CJK numerals.
std::optional<MinuteMatch> FindCjkMinute(std::string_view text) {
  const std::u32string cps = DecodeUtf8(text);
  std::vector<std::size_t> offsets;
  offsets.reserve(cps.size() + 1);
  {
    std::size_t off = 0;
    for (char32_t cp : cps) {
      offsets.push_back(off);
      off += EncodeUtf8(cp).size();
    }
    offsets.push_back(off);
  }
  for (std::size_t i = 0; i < cps.size(); ++i) {
    std::size_t start = i;
    bool ordinal = cps[i] == U'第';
    std::size_t j = ordinal ? i + 1 : i;
    if (j > i && j >= cps.size()) continue;
    // Only start a bare number at a number boundary.
    if (!ordinal && i > 0 &&
        (DigitValue(cps[i - 1]) >= 0 || IsCjkNumeral(cps[i - 1]))) {
      continue;
    }
    std::optional<int> value;
    std::size_t k = j;
    if (k < cps.size() && DigitValue(cps[k]) >= 0) {
      int v = 0;
      while (k < cps.size() && DigitValue(cps[k]) >= 0 && k - j < 3) {
        v = v * 10 + DigitValue(cps[k]);
        ++k;
      }
      if (k < cps.size() && DigitValue(cps[k]) >= 0) continue;
      value = v;
    } else if (k < cps.size() && IsCjkNumeral(cps[k])) {
      while (k < cps.size() && IsCjkNumeral(cps[k])) ++k;
      value = ParseCjkNumber(std::u32string_view(cps).substr(j, k - j));
    }
    if (!value) continue;
    // Stoppage time: 第90+2分钟.
    if (k + 1 < cps.size() && cps[k] == U'+' && DigitValue(cps[k + 1]) >= 0) {
      ++k;
      while (k < cps.size() && DigitValue(cps[k]) >= 0) ++k;
    }
    if (k >= cps.size() || cps[k] != U'分') continue;
    if (!ordinal && !(k + 1 < cps.size() && cps[k + 1] == U'钟')) continue;
    return MinuteMatch{offsets[start], *value};
  }
  return std::nullopt;
}

std::optional<MinuteMatch> FindEnglishMinute(std::string_view text) {
  static const std::regex kPatterns[] = {
      std::regex(R"(\bin the (\d{1,3})(?:st|nd|rd|th)?(?:\+\d{1,2})? minutes?\b)",
                 std::regex::ECMAScript | std::regex::icase),
      std::regex(R"(\b(\d{1,3})(?:st|nd|rd|th)(?:\+\d{1,2})? minutes?\b)",
                 std::regex::ECMAScript | std::regex::icase),
      std::regex(R"(\bminute (\d{1,3})\b)",
                 std::regex::ECMAScript | std::regex::icase),
      std::regex("\\b(\\d{1,3})(?:\\+\\d{1,2})?(?:'|\xE2\x80\x99)",
                 std::regex::ECMAScript),
  };
  std::optional<MinuteMatch> best;
  const std::string s(text);
  for (const std::regex &re : kPatterns) {
    std::smatch m;
    if (std::regex_search(s, m, re)) {
      MinuteMatch match{static_cast<std::size_t>(m.position(0)),
                        std::stoi(m[1].str())};
      if (!best || match.position < best->position) best = match;
    }
  }
  return best;
}

}  // namespace

std::optional<int> ParseCjkNumber(std::u32string_view digits) {
  if (digits.empty()) return std::nullopt;
  int total = 0;
  int current = 0;
  for (char32_t cp : digits) {
    int d = CjkDigit(cp);
    if (d >= 0) {
      current = current * 10 + d;
    } else if (cp == U'十') {
      total += (current == 0 ? 1 : current) * 10;
      current = 0;
    } else if (cp == U'百') {
      total += (current == 0 ? 1 : current) * 100;
      current = 0;
    } else {
      return std::nullopt;
    }
  }
  return total + current;
}

std::optional<int> ExtractMinute(std::string_view text) {
  auto cjk = FindCjkMinute(text);
  auto en = FindEnglishMinute(text);
  if (cjk && en) return cjk->position <= en->position ? cjk->minute : en->minute;
  if (cjk) return cjk->minute;
  if (en) return en->minute;
  return std::nullopt;
}

std::optional<int> NewsMinute(const NewsSentence &sentence) {
  return sentence.minute ? sentence.minute : ExtractMinute(sentence.text);
}

void WindowConfig::Validate() const {
  if (span_minutes < 0) {
    throw Error(ErrorCode::kInvalidConfig, "span_minutes must be >= 0");
  }
}

std::vector<std::size_t> CandidateWindow(const GameRecord &game, int h,
                                         const WindowConfig &cfg) {
  cfg.Validate();
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < game.commentary.size(); ++j) {
    const auto &minute = game.commentary[j].minute;
    if (minute && *minute >= h && *minute <= h + cfg.span_minutes) {
      out.push_back(j);
    }
  }
  return out;
}

const char *SkipReasonName(SkipReason reason) {
  switch (reason) {
    case SkipReason::kNoMinute: return "no_minute";
    case SkipReason::kEmptyWindow: return "empty_window";
    case SkipReason::kBelowThreshold: return "below_threshold";
  }
  return "unknown";
}

namespace {

SkipReason ParseSkipReason(std::string_view name) {
  if (name == "no_minute") return SkipReason::kNoMinute;
  if (name == "empty_window") return SkipReason::kEmptyWindow;
  if (name == "below_threshold") return SkipReason::kBelowThreshold;
  throw std::runtime_error("unknown skip reason '" + std::string(name) + "'");
}

}  // namespace

AlignmentResult AlignGame(const GameRecord &game, const WindowConfig &window,
                          const SimilarityConfig &similarity,
                          const SemanticScorer &semantic,
                          const AlignOptions &options) {
  window.Validate();
  similarity.Validate();
  AlignmentResult result;
  result.game_id = game.game_id;

  struct Pending {
    std::size_t news_index;
    int h;
    std::vector<std::size_t> candidates;
    std::size_t first_pair;  // offset into the batched scores
  };
  std::vector<Pending> pending;
  std::vector<TextPair> batch;
  for (std::size_t i = 0; i < game.news.size(); ++i) {
    std::optional<int> h = NewsMinute(game.news[i]);
    if (!h) {
      result.skipped.push_back({i, SkipReason::kNoMinute});
      continue;
    }
    std::vector<std::size_t> candidates = CandidateWindow(game, *h, window);
    if (candidates.empty()) {
      result.skipped.push_back({i, SkipReason::kEmptyWindow});
      continue;
    }
    pending.push_back({i, *h, candidates, batch.size()});
    for (std::size_t j : candidates) {
      batch.emplace_back(game.news[i].text, game.commentary[j].text);
    }
  }
  std::vector<double> semantic_scores =
      batch.empty() ? std::vector<double>{} : semantic.ScorePairs(batch);
  if (semantic_scores.size() != batch.size()) {
    throw Error(ErrorCode::kProtocolError,
                "semantic scorer returned " +
                    std::to_string(semantic_scores.size()) + " values for " +
                    std::to_string(batch.size()) + " pairs");
  }

  for (const Pending &p : pending) {
    const NewsSentence &news = game.news[p.news_index];
    std::optional<AlignmentPair> best;
    int best_minute = 0;
    for (std::size_t k = 0; k < p.candidates.size(); ++k) {
      const std::size_t j = p.candidates[k];
      const double sim = CombineSimilarity(
          semantic_scores[p.first_pair + k],
          LexicalOverlap(news.text, game.commentary[j].text, similarity),
          similarity.lambda);
      const int minute = *game.commentary[j].minute;
      bool better = !best || sim > best->similarity ||
                    (sim == best->similarity &&
                     (minute < best_minute ||
                      (minute == best_minute && j < best->commentary_index)));
      if (better) {
        best = AlignmentPair{p.news_index, j, sim, p.h, p.h + window.span_minutes};
        best_minute = minute;
      }
    }
    if (options.min_similarity && best->similarity < *options.min_similarity) {
      result.skipped.push_back({p.news_index, SkipReason::kBelowThreshold});
      continue;
    }
    result.pairs.push_back(*best);
  }
  std::sort(result.skipped.begin(), result.skipped.end(),
            [](const SkippedNews &a, const SkippedNews &b) {
              return a.news_index < b.news_index;
            });
  return result;
}

double DuplicationRate(const std::vector<AlignmentPair> &pairs) {
  if (pairs.empty()) return 0.0;
  std::map<std::size_t, int> uses;
  for (const AlignmentPair &p : pairs) ++uses[p.commentary_index];
  std::size_t shared = 0;
  for (const AlignmentPair &p : pairs) {
    if (uses[p.commentary_index] > 1) ++shared;
  }
  return static_cast<double>(shared) / static_cast<double>(pairs.size());
}

std::string SerializeAlignment(const AlignmentResult &result) {
  json obj;
  obj["game_id"] = result.game_id;
  json pairs = json::array();
  for (const AlignmentPair &p : result.pairs) {
    json e;
    e["news_index"] = p.news_index;
    e["commentary_index"] = p.commentary_index;
    e["similarity"] = p.similarity;
    e["window"] = {p.window_low, p.window_high};
    pairs.push_back(std::move(e));
  }
  obj["pairs"] = std::move(pairs);
  json skipped = json::array();
  for (const SkippedNews &s : result.skipped) {
    skipped.push_back({{"news_index", s.news_index},
                       {"reason", SkipReasonName(s.reason)}});
  }
  obj["skipped"] = std::move(skipped);
  return obj.dump();
}

AlignmentResult ParseAlignment(std::string_view line) {
  AlignmentResult result;
  try {
    json obj = json::parse(line);
    result.game_id = obj.at("game_id").get<std::string>();
    for (const json &e : obj.at("pairs")) {
      AlignmentPair p;
      p.news_index = e.at("news_index").get<std::size_t>();
      p.commentary_index = e.at("commentary_index").get<std::size_t>();
      p.similarity = e.at("similarity").get<double>();
      p.window_low = e.at("window").at(0).get<int>();
      p.window_high = e.at("window").at(1).get<int>();
      result.pairs.push_back(p);
    }
    for (const json &e : obj.at("skipped")) {
      result.skipped.push_back({e.at("news_index").get<std::size_t>(),
                                ParseSkipReason(e.at("reason").get<std::string>())});
    }
  } catch (const std::exception &e) {
    throw Error(ErrorCode::kMalformedRecord,
                std::string("alignment record: ") + e.what());
  }
  return result;
}

SelectorLabelSet BuildSelectorLabels(const GameRecord &game,
                                     const std::vector<AlignmentPair> &pairs) {
  SelectorLabelSet set;
  set.game_id = game.game_id;
  for (std::size_t j = 0; j < game.commentary.size(); ++j) {
    set.labels.push_back({j, false});
  }
  for (const AlignmentPair &p : pairs) {
    if (p.commentary_index >= game.commentary.size() ||
        p.news_index >= game.news.size()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "pair (" + std::to_string(p.news_index) + ", " +
                      std::to_string(p.commentary_index) +
                      ") outside game '" + game.game_id + "'");
    }
    set.labels[p.commentary_index].positive = true;
  }
  return set;
}

std::string FormatRewriteSource(const CommentaryEvent &event) {
  if (!event.minute) return event.text;
  return std::to_string(*event.minute) + "' " + event.text;
}

std::vector<RewritePair> EmitRewritePairs(
    const GameRecord &game, const std::vector<AlignmentPair> &pairs) {
  std::vector<AlignmentPair> ordered = pairs;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const AlignmentPair &a, const AlignmentPair &b) {
                     return a.news_index < b.news_index;
                   });
  std::vector<RewritePair> out;
  out.reserve(ordered.size());
  for (const AlignmentPair &p : ordered) {
    if (p.commentary_index >= game.commentary.size() ||
        p.news_index >= game.news.size()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "pair (" + std::to_string(p.news_index) + ", " +
                      std::to_string(p.commentary_index) +
                      ") outside game '" + game.game_id + "'");
    }
    out.push_back({FormatRewriteSource(game.commentary[p.commentary_index]),
                   game.news[p.news_index].text});
  }
  return out;
}

std::string SerializeRewritePair(const RewritePair &pair) {
  json obj;
  obj["source"] = pair.source;
  obj["target"] = pair.target;
  return obj.dump();
}

}  // namespace sportsnews
