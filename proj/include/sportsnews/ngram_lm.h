#ifndef SPORTSNEWS_NGRAM_LM_H_
#define SPORTSNEWS_NGRAM_LM_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sportsnews/scorers.h"
#include "sportsnews/text.h"

namespace sportsnews {

// Order-k add-alpha language model. N-grams never cross sentence boundaries,
// so the first k-1 tokens of a text are scored with the longest history
// available:
//   P(w | h) = (c(h w) + alpha) / (c(h) + alpha * V)
// where V is the training vocabulary size and c(h) the number of n-grams
// starting with h. Unknown tokens fall to the smoothing floor.
class NgramLm {
 public:
  NgramLm() = default;

  // Throws Error(kEmptyCorpus) if the corpus has no tokens,
  // Error(kInvalidConfig) for order < 1 or alpha <= 0.
  static NgramLm Train(const std::vector<Tokens> &corpus, int order,
                       double alpha);

  bool trained() const { return order_ > 0; }
  int order() const { return order_; }
  double alpha() const { return alpha_; }
  std::size_t vocab_size() const { return vocab_size_; }
  std::uint64_t total_tokens() const { return total_tokens_; }

  // Count of an n-gram of length 1..order; 0 when unseen.
  std::uint64_t Count(const Tokens &ngram) const;
  std::size_t NumDistinct(int n) const;

  double LogProb(std::span<const std::string> history,
                 const std::string &token) const;

  // exp of the mean negative log-probability per token. Throws
  // Error(kModelNotTrained) or Error(kEmptyText).
  double Perplexity(const Tokens &tokens) const;

  void Save(std::ostream &out) const;
  static NgramLm Load(std::istream &in);
  void SaveFile(const std::string &path) const;
  static NgramLm LoadFile(const std::string &path);

 private:
  static std::string Key(std::span<const std::string> tokens);
  void RebuildContexts();

  int order_ = 0;
  double alpha_ = 1.0;
  std::size_t vocab_size_ = 0;
  std::uint64_t total_tokens_ = 0;
  // counts_[n-1]: n-gram -> count.
  std::vector<std::unordered_map<std::string, std::uint64_t>> counts_;
  // contexts_[n-1]: (n-1)-gram history -> number of n-grams starting with it.
  std::vector<std::unordered_map<std::string, std::uint64_t>> contexts_;
};

// Fluency backend over an NgramLm with a fixed tokenization.
class LmFluencyScorer : public FluencyScorer {
 public:
  LmFluencyScorer(std::shared_ptr<const NgramLm> lm, Tokenization tokenization);

  std::vector<double> Perplexities(
      std::span<const std::string> texts) const override;

 private:
  std::shared_ptr<const NgramLm> lm_;
  Tokenization tokenization_;
};

}  // namespace sportsnews

#endif  // SPORTSNEWS_NGRAM_LM_H_
