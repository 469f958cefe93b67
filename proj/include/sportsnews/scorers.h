#ifndef SPORTSNEWS_SCORERS_H_
#define SPORTSNEWS_SCORERS_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sportsnews {

using TextPair = std::pair<std::string, std::string>;

// Sentence-level semantic similarity in [0,1]. Implementations must be safe
// to call concurrently and must return one value per pair, in input order.
class SemanticScorer {
 public:
  virtual ~SemanticScorer() = default;

  virtual std::vector<double> ScorePairs(std::span<const TextPair> pairs) const = 0;

  double Score(std::string_view a, std::string_view b) const;
};

// Per-token perplexity of a sentence; finite and positive.
class FluencyScorer {
 public:
  virtual ~FluencyScorer() = default;

  virtual std::vector<double> Perplexities(
      std::span<const std::string> texts) const = 0;

  double Perplexity(std::string_view text) const;
};

struct HashedNgramProfile {
  int ngram_size = 2;
  std::size_t dims = std::size_t{1} << 20;
};

// Offline semantic scorer: cosine similarity of hashed character n-gram count
// vectors (whitespace removed, ASCII lowercased), clamped to [0,1]. Texts
// shorter than the n-gram size contribute a single gram.
class HashedNgramScorer : public SemanticScorer {
 public:
  explicit HashedNgramScorer(HashedNgramProfile profile = {});

  std::vector<double> ScorePairs(std::span<const TextPair> pairs) const override;

  // Throws Error(kEmptyText) when either side has no characters.
  double Similarity(std::string_view a, std::string_view b) const;

  const HashedNgramProfile &profile() const { return profile_; }

 private:
  // Sorted (bucket, count) pairs.
  std::vector<std::pair<std::size_t, double>> Vectorize(
      std::string_view text) const;

  HashedNgramProfile profile_;
};

}  // namespace sportsnews

#endif  // SPORTSNEWS_SCORERS_H_
