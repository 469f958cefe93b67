#ifndef SPORTSNEWS_LABELING_H_
#define SPORTSNEWS_LABELING_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sportsnews/corpus.h"
#include "sportsnews/scorers.h"
#include "sportsnews/similarity.h"

namespace sportsnews {

// First minute mention in a news sentence: "第23分钟" / "第二十三分钟",
// "23分钟", "in the 23rd minute", "23rd minute", "minute 23", "23'" and
// "45+2'" (stoppage time maps to the base minute).
std::optional<int> ExtractMinute(std::string_view text);

// Parses a CJK numeral such as "二十三" or "一百零五".
std::optional<int> ParseCjkNumber(std::u32string_view digits);

// The stored minute if present, else the extracted one.
std::optional<int> NewsMinute(const NewsSentence &sentence);

// Candidate commentary events for a news minute h are those with minute in
// the closed interval [h, h + span_minutes].
struct WindowConfig {
  int span_minutes = 3;

  void Validate() const;
};

std::vector<std::size_t> CandidateWindow(const GameRecord &game, int h,
                                         const WindowConfig &cfg);

struct AlignmentPair {
  std::size_t news_index = 0;
  std::size_t commentary_index = 0;
  double similarity = 0;
  int window_low = 0;
  int window_high = 0;

  bool operator==(const AlignmentPair &) const = default;
};

enum class SkipReason { kNoMinute, kEmptyWindow, kBelowThreshold };

const char *SkipReasonName(SkipReason reason);

struct SkippedNews {
  std::size_t news_index = 0;
  SkipReason reason = SkipReason::kNoMinute;

  bool operator==(const SkippedNews &) const = default;
};

struct AlignmentResult {
  std::string game_id;
  std::vector<AlignmentPair> pairs;  // ordered by news_index
  std::vector<SkippedNews> skipped;  // ordered by news_index

  bool operator==(const AlignmentResult &) const = default;
};

struct AlignOptions {
  // Pairs scoring below this are dropped. Off by default.
  std::optional<double> min_similarity;
};

// Maps each news sentence to the commentary event in its window with the
// highest combined similarity. Ties go to the earliest minute, then the
// lowest index. All pairs of a game are scored in one batch.
AlignmentResult AlignGame(const GameRecord &game, const WindowConfig &window,
                          const SimilarityConfig &similarity,
                          const SemanticScorer &semantic,
                          const AlignOptions &options = {});

// Fraction of pairs whose commentary event is shared with another pair.
double DuplicationRate(const std::vector<AlignmentPair> &pairs);

std::string SerializeAlignment(const AlignmentResult &result);
AlignmentResult ParseAlignment(std::string_view line);

struct SelectorLabel {
  std::size_t commentary_index = 0;
  bool positive = false;

  bool operator==(const SelectorLabel &) const = default;
};

struct SelectorLabelSet {
  std::string game_id;
  std::vector<SelectorLabel> labels;  // one per commentary event, in order
};

SelectorLabelSet BuildSelectorLabels(const GameRecord &game,
                                     const std::vector<AlignmentPair> &pairs);

struct RewritePair {
  std::string source;
  std::string target;

  bool operator==(const RewritePair &) const = default;
};

// "{minute}' " followed by the commentary text; bare text without a minute.
std::string FormatRewriteSource(const CommentaryEvent &event);

std::vector<RewritePair> EmitRewritePairs(const GameRecord &game,
                                          const std::vector<AlignmentPair> &pairs);

std::string SerializeRewritePair(const RewritePair &pair);

}  // namespace sportsnews

#endif  // SPORTSNEWS_LABELING_H_
