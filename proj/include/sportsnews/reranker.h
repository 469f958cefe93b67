#ifndef SPORTSNEWS_RERANKER_H_
#define SPORTSNEWS_RERANKER_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sportsnews/corpus.h"
#include "sportsnews/rewriter.h"
#include "sportsnews/scorers.h"

namespace sportsnews {

enum class BudgetPolicy { kCorpusAverage, kFixed };

// Weights of the fluency-aware MMR objective
//   lambda1 * info + lambda2 * flu - lambda3 * max_sim
// and the article length budget in characters.
struct MmrConfig {
  double lambda1 = 0.6;
  double lambda2 = 0.2;
  double lambda3 = 0.2;
  // Perplexity normaliser; unset means the 95th percentile of the
  // candidate pool's perplexities.
  std::optional<double> eta;
  std::size_t budget = 0;
  BudgetPolicy budget_policy = BudgetPolicy::kCorpusAverage;

  void Validate() const;
};

// clamp(1 - perplexity / eta, 0, 1)
double Flu(double perplexity, double eta);

// Linear-interpolated quantile (0 <= q <= 1) of a non-empty sample.
double Quantile(std::vector<double> values, double q);

double MmrValue(double info, double flu, double max_sim, const MmrConfig &cfg);

// Score of `candidate` given the already selected sentences; the redundancy
// term is zero when nothing is selected. Requires candidate.fluency.
double MmrScore(const RewrittenCandidate &candidate,
                std::span<const RewrittenCandidate> selected,
                const MmrConfig &cfg, const SemanticScorer &sim);

// Computes perplexities for the pool and sets each candidate's fluency.
// Returns the eta used. No-op (returns 0) on an empty pool.
double FillFluency(std::vector<RewrittenCandidate> &candidates,
                   const FluencyScorer &fluency, const MmrConfig &cfg);

struct TraceStep {
  std::size_t chosen = 0;  // index into the input candidates
  double info = 0;
  double flu = 0;
  double max_sim = 0;
  double mmr = 0;

  bool operator==(const TraceStep &) const = default;
};

struct RankedNews {
  // Selected sentences in game order (by commentary_index).
  std::vector<RewrittenCandidate> sentences;
  std::size_t total_chars = 0;
  std::vector<TraceStep> trace;  // selection order

  std::string Text(std::string_view sep = " ") const;
};

// Greedy MMR: repeatedly takes the best-scoring remaining candidate (ties:
// higher info, then lower commentary_index, then earlier input position)
// and stops right after the pick that pushes the total length past the
// budget. Throws Error(kEmptyCandidates) for an empty pool.
RankedNews RerankGreedy(const std::vector<RewrittenCandidate> &candidates,
                        const MmrConfig &cfg, const SemanticScorer &sim);

// Fills fluency when missing, then reranks. An empty pool yields an empty
// article.
RankedNews RerankGame(std::vector<RewrittenCandidate> candidates,
                      const MmrConfig &cfg, const SemanticScorer &sim,
                      const FluencyScorer &fluency);

// Rounded mean character length of the news articles of games that have
// news. Throws Error(kNoReferenceNews).
std::size_t ComputeBudget(const std::vector<GameRecord> &corpus);

}  // namespace sportsnews

#endif  // SPORTSNEWS_RERANKER_H_
