#ifndef SPORTSNEWS_EVALUATION_H_
#define SPORTSNEWS_EVALUATION_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sportsnews/corpus.h"
#include "sportsnews/text.h"

namespace sportsnews {

struct GameEval {
  std::string game_id;
  double rouge1 = 0;  // F1 x 100
  double rouge2 = 0;
  double rougeL = 0;
};

struct EvalReport {
  double rouge1 = 0;  // corpus means of the per-game values
  double rouge2 = 0;
  double rougeL = 0;
  std::vector<GameEval> per_game;  // sorted by game_id
  Tokenization tokenization = Tokenization::kChar;

  // Settings line followed by one tab-separated row per game and the mean.
  std::string Format() const;
};

// Article-level ROUGE-1/2/L F1 between each generated article and its
// reference. Both maps must cover the same game ids; otherwise throws
// Error(kMissingReference) naming the first mismatching game.
EvalReport Evaluate(const std::map<std::string, std::string> &generated,
                    const std::map<std::string, std::string> &references,
                    Tokenization tokenization = Tokenization::kChar);

// Reference articles keyed by game_id, sentences joined with a space.
std::map<std::string, std::string> ReferenceArticles(
    const std::vector<GameRecord> &corpus);

struct SplitCounts {
  std::size_t train = 0;
  std::size_t valid = 0;
  std::size_t test = 0;
};

struct SplitManifest {
  std::uint64_t seed = 0;
  std::vector<std::string> train;
  std::vector<std::string> valid;
  std::vector<std::string> test;

  std::string ToJson() const;
};

// Floors valid/test from the ratios and gives the remainder to train.
SplitCounts CountsFromRatios(std::size_t total, double train, double valid,
                             double test);

// Seeded shuffle, then consecutive slices. Games beyond train+valid+test
// join train so the split stays exhaustive. Throws
// Error(kCountsExceedCorpus).
SplitManifest SplitCorpus(const std::vector<std::string> &game_ids,
                          const SplitCounts &counts, std::uint64_t seed);

}  // namespace sportsnews

#endif  // SPORTSNEWS_EVALUATION_H_
