// Seeded generators for synthetic games shared by the unit and acceptance
// tests.
#ifndef SPORTSNEWS_TESTS_SYNTHETIC_H_
#define SPORTSNEWS_TESTS_SYNTHETIC_H_

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sportsnews/corpus.h"
#include "sportsnews/rewriter.h"

namespace synth {

inline std::string Word(std::mt19937_64 &rng, int len) {
  static const char kLetters[] = "bcdfghjklmnpqrstvwxz";
  std::uniform_int_distribution<int> pick(0, 19);
  std::string w;
  for (int i = 0; i < len; ++i) w.push_back(kLetters[pick(rng)]);
  return w;
}

inline std::string Sentence(std::mt19937_64 &rng, int words) {
  std::string s;
  for (int i = 0; i < words; ++i) {
    if (i) s += ' ';
    s += Word(rng, 5);
  }
  return s;
}

inline std::string Ordinal(int n) { return std::to_string(n) + sportsnews::OrdinalSuffix(n); }

struct PlantedGame {
  sportsnews::GameRecord game;
  std::vector<std::pair<std::size_t, std::size_t>> planted;  // (news, commentary)
};

// Commentary of random nonsense words; each news sentence quotes one
// commentary sentence (its beacon) and names a minute h with the source in
// [h, h + 3].
inline PlantedGame MakePlantedGame(std::mt19937_64 &rng, const std::string &id) {
  PlantedGame out;
  out.game.game_id = id;
  std::uniform_int_distribution<int> count(12, 30), step(0, 2), back(0, 3), words(4, 9);
  const int m = count(rng);
  int minute = 1;
  for (int j = 0; j < m; ++j) {
    minute += step(rng);
    out.game.commentary.push_back({minute, "0-0", Sentence(rng, words(rng))});
  }
  std::vector<std::size_t> idx(m);
  for (int j = 0; j < m; ++j) idx[j] = j;
  std::shuffle(idx.begin(), idx.end(), rng);
  const int n = std::min(m, 2 + static_cast<int>(rng() % 5));
  std::vector<std::size_t> chosen(idx.begin(), idx.begin() + n);
  std::sort(chosen.begin(), chosen.end());
  for (std::size_t j : chosen) {
    const int cm = *out.game.commentary[j].minute;
    const int h = std::max(0, cm - back(rng));
    std::string text = "In the " + Ordinal(h) + " minute, " + out.game.commentary[j].text + ".";
    out.planted.emplace_back(out.game.news.size(), j);
    out.game.news.push_back({text, std::nullopt});
  }
  return out;
}

// Games whose important commentary carries words from a small "event"
// vocabulary; the rest draws only from a disjoint filler vocabulary.
struct LabeledGames {
  std::vector<sportsnews::GameRecord> games;
  std::vector<std::vector<bool>> labels;  // per game, per commentary
  std::size_t windows = 0;
};

inline LabeledGames MakeSelectorGames(std::mt19937_64 &rng, std::size_t windows,
                                      const std::string &prefix) {
  static const std::vector<std::string> kEvent = {
      "goal", "scores", "penalty", "redcard", "header", "equaliser", "winner",
      "volley", "freekick", "booked", "sentoff", "strike"};
  static const std::vector<std::string> kFiller = [] {
    std::vector<std::string> v;
    std::mt19937_64 r(99);
    for (int i = 0; i < 80; ++i) v.push_back(Word(r, 6));
    return v;
  }();
  LabeledGames out;
  std::uniform_int_distribution<int> len(3, 7), size(8, 16);
  std::bernoulli_distribution positive(0.3);
  auto pick = [&](const std::vector<std::string> &v) { return v[rng() % v.size()]; };
  while (out.windows < windows) {
    sportsnews::GameRecord g;
    g.game_id = prefix + std::to_string(out.games.size());
    std::vector<bool> labels;
    const int m = std::min<int>(size(rng), static_cast<int>(windows - out.windows));
    for (int j = 0; j < m; ++j) {
      const bool pos = positive(rng);
      const int n = len(rng);
      std::vector<std::string> words;
      for (int k = 0; k < n; ++k) words.push_back(pick(kFiller));
      if (pos) {
        words[rng() % n] = pick(kEvent);
        if (rng() % 2) words[rng() % n] = pick(kEvent);
      }
      std::string text;
      for (const auto &w : words) text += (text.empty() ? "" : " ") + w;
      g.commentary.push_back({j + 1, "0-0", text});
      labels.push_back(pos);
    }
    out.windows += m;
    out.games.push_back(std::move(g));
    out.labels.push_back(std::move(labels));
  }
  return out;
}

}  // namespace synth

#endif  // SPORTSNEWS_TESTS_SYNTHETIC_H_
