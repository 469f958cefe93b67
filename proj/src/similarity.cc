#include "sportsnews/similarity.h"

#include "sportsnews/error.h"

namespace sportsnews {

void SimilarityConfig::Validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "similarity lambda must be in [0,1]");
  }
}

double LexicalOverlap(std::string_view news, std::string_view commentary,
                      const SimilarityConfig &cfg) {
  return Rouge(Tokenize(commentary, cfg.tokenization),
               Tokenize(news, cfg.tokenization), cfg.rouge_variant)
      .f1;
}

double CombinedSimilarity(const NewsSentence &news,
                          const CommentaryEvent &commentary,
                          const SimilarityConfig &cfg,
                          const SemanticScorer &semantic) {
  cfg.Validate();
  const double b = semantic.Score(news.text, commentary.text);
  return CombineSimilarity(b, LexicalOverlap(news.text, commentary.text, cfg),
                           cfg.lambda);
}

}  // namespace sportsnews
