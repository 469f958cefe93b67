#ifndef SPORTSNEWS_SELECTOR_H_
#define SPORTSNEWS_SELECTOR_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sportsnews/corpus.h"
#include "sportsnews/labeling.h"
#include "sportsnews/text.h"

namespace sportsnews {

inline constexpr std::size_t kDefaultContextCap = 512;
inline constexpr const char *kClsToken = "[CLS]";
inline constexpr const char *kSepToken = "[SEP]";

// Token window around one commentary event:
//   [CLS] s_a [SEP] ... [SEP] target [SEP] ... [SEP] s_b [SEP]
// Whole neighbouring sentences are added alternately before and after the
// target (before first) while the total stays within the cap.
struct ContextWindow {
  Tokens tokens;
  std::size_t target_begin = 0;  // token offsets of the target, [begin, end)
  std::size_t target_end = 0;
  std::size_t first_sentence = 0;  // commentary indices covered, inclusive
  std::size_t last_sentence = 0;
  std::size_t target_index = 0;
  std::size_t game_size = 0;
  // The target alone did not fit and was cut to cap - 2 tokens.
  bool truncated = false;

  std::string Text() const { return Join(tokens, " "); }
};

ContextWindow BuildContextWindow(const GameRecord &game,
                                 std::size_t target_index,
                                 std::size_t cap = kDefaultContextCap,
                                 Tokenization tokenization = Tokenization::kWord);

struct FeatureSpec {
  std::size_t hash_dims = std::size_t{1} << 18;
  int max_ngram = 2;
  bool context_features = true;
  std::size_t context_cap = kDefaultContextCap;
  Tokenization tokenization = Tokenization::kWord;

  std::size_t Dimensions() const;
};

// Sorted by index, no duplicate indices.
using SparseVector = std::vector<std::pair<std::size_t, double>>;

// Target n-grams and context unigrams are hashed and mean-pooled; a few dense
// positional features follow the hashed block.
SparseVector Featurize(const ContextWindow &window, const FeatureSpec &spec);

struct ImportanceModel {
  FeatureSpec spec;
  std::vector<std::pair<std::size_t, double>> weights;  // sorted by index
  double bias = 0;
  bool trained = false;

  double Logit(const SparseVector &features) const;
  double Score(const ContextWindow &window) const;

  void Save(std::ostream &out) const;
  static ImportanceModel Load(std::istream &in);
  void SaveFile(const std::string &path) const;
  static ImportanceModel LoadFile(const std::string &path);
};

struct TrainHyper {
  double learning_rate = 1.0;
  int epochs = 500;
  std::uint64_t seed = 13;
  double l2 = 1e-4;
  double positive_weight = 1.0;
  // Uniform init range for weights of observed features.
  double init_scale = 1e-3;
};

struct LabeledWindow {
  ContextWindow window;
  bool positive = false;
};

struct TrainReport {
  std::vector<double> loss;  // objective at the start of each epoch, then final
};

// Full-batch gradient descent on L2-regularised weighted cross-entropy with
// step halving, so the objective never increases between epochs.
// Throws Error(kDegenerateLabels) unless both classes are present.
ImportanceModel TrainSelector(const std::vector<LabeledWindow> &examples,
                              const FeatureSpec &spec, const TrainHyper &hyper,
                              TrainReport *report = nullptr);

// Windows for every commentary event of every game, labelled from the
// matching alignment (by game_id). Games without an alignment are skipped.
std::vector<LabeledWindow> BuildTrainingExamples(
    const std::vector<GameRecord> &games,
    const std::vector<AlignmentResult> &alignments, const FeatureSpec &spec);

// One probability per commentary event. Throws Error(kModelNotTrained).
std::vector<double> ScoreCommentaries(const GameRecord &game,
                                      const ImportanceModel &model);

struct SelectionPolicy {
  enum class Kind { kThreshold, kTopK };
  Kind kind = Kind::kThreshold;
  double threshold = 0.5;
  std::size_t top_k = 0;
};

// Indices in original order: score >= threshold, or the k best scores (ties
// to the lower index).
std::vector<std::size_t> Select(const std::vector<double> &scores,
                                const SelectionPolicy &policy);

// Area under the ROC curve; tied scores count one half.
double RocAuc(const std::vector<double> &scores, const std::vector<bool> &labels);

}  // namespace sportsnews

#endif  // SPORTSNEWS_SELECTOR_H_
