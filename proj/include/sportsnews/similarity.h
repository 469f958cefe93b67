#ifndef SPORTSNEWS_SIMILARITY_H_
#define SPORTSNEWS_SIMILARITY_H_

#include "sportsnews/corpus.h"
#include "sportsnews/rouge.h"
#include "sportsnews/scorers.h"
#include "sportsnews/text.h"

namespace sportsnews {

// Weighting of semantic similarity against lexical overlap when matching a
// news sentence to a commentary sentence.
struct SimilarityConfig {
  double lambda = 0.70;
  RougeVariant rouge_variant = RougeVariant::kRL;
  Tokenization tokenization = Tokenization::kChar;

  // Throws Error(kInvalidConfig) unless 0 <= lambda <= 1.
  void Validate() const;
};

// lambda * semantic + (1 - lambda) * rouge_f1
inline double CombineSimilarity(double semantic, double rouge_f1,
                                double lambda) {
  return lambda * semantic + (1.0 - lambda) * rouge_f1;
}

// ROUGE F1 of the configured variant between the two texts.
double LexicalOverlap(std::string_view news, std::string_view commentary,
                      const SimilarityConfig &cfg);

double CombinedSimilarity(const NewsSentence &news,
                          const CommentaryEvent &commentary,
                          const SimilarityConfig &cfg,
                          const SemanticScorer &semantic);

}  // namespace sportsnews

#endif  // SPORTSNEWS_SIMILARITY_H_
