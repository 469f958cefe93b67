// Step-wise brute-force MMR selection: every round rescores every remaining
// candidate against the whole selected set from scratch.
#ifndef SPORTSNEWS_TESTS_MMR_ORACLE_H_
#define SPORTSNEWS_TESTS_MMR_ORACLE_H_

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "sportsnews/reranker.h"
#include "sportsnews/scorers.h"
#include "sportsnews/text.h"

namespace oracle {

struct Step {
  std::size_t chosen;
  double max_sim;
  double mmr;
};

inline std::vector<Step> BruteForceMmr(const std::vector<sportsnews::RewrittenCandidate> &c,
                                       const sportsnews::MmrConfig &cfg,
                                       const sportsnews::SemanticScorer &sim) {
  std::vector<Step> steps;
  std::vector<std::size_t> selected;
  std::size_t total = 0;
  while (selected.size() < c.size() && (selected.empty() || total <= cfg.budget)) {
    int best = -1;
    double best_mmr = 0, best_sim = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (std::find(selected.begin(), selected.end(), i) != selected.end()) continue;
      double ms = 0;
      for (std::size_t s : selected) ms = std::max(ms, sim.Score(c[i].text, c[s].text));
      const double mmr = cfg.lambda1 * c[i].info + cfg.lambda2 * *c[i].fluency - cfg.lambda3 * ms;
      bool take = best < 0 || mmr > best_mmr;
      if (!take && mmr == best_mmr) {
        const auto &b = c[best];
        take = c[i].info > b.info ||
               (c[i].info == b.info && c[i].commentary_index < b.commentary_index);
      }
      if (take) {
        best = static_cast<int>(i);
        best_mmr = mmr;
        best_sim = ms;
      }
    }
    selected.push_back(best);
    steps.push_back({static_cast<std::size_t>(best), best_sim, best_mmr});
    total += sportsnews::CountCodepoints(c[best].text);
  }
  return steps;
}

// Random instance with a small vocabulary (so texts repeat) and coarse
// info/fluency grids (so ties occur).
inline std::vector<sportsnews::RewrittenCandidate> RandomCandidates(std::mt19937_64 &rng,
                                                                    std::size_t n) {
  static const std::vector<std::string> kTexts = {
      "Kane scores", "Kane scores", "the keeper saves", "a late header",
      "yellow card shown", "Kane scores again", "corner cleared", "the keeper saves well"};
  std::uniform_int_distribution<int> grid(0, 10);
  std::vector<sportsnews::RewrittenCandidate> out;
  for (std::size_t i = 0; i < n; ++i) {
    sportsnews::RewrittenCandidate c;
    c.text = kTexts[rng() % kTexts.size()];
    c.info = grid(rng) / 10.0;
    c.fluency = grid(rng) / 10.0;
    c.commentary_index = i * 3 + rng() % 3;
    out.push_back(c);
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

inline sportsnews::MmrConfig RandomMmrConfig(std::mt19937_64 &rng) {
  static const double kWeights[][3] = {{0.6, 0.2, 0.2}, {1, 0, 0}, {0, 1, 0},
                                       {0, 0, 1},       {0.5, 0.5, 0}, {0.2, 0.3, 0.5},
                                       {0.4, 0.2, 0.4}};
  const auto &w = kWeights[rng() % 7];
  sportsnews::MmrConfig cfg;
  cfg.lambda1 = w[0];
  cfg.lambda2 = w[1];
  cfg.lambda3 = w[2];
  cfg.budget = 10 + rng() % 80;
  return cfg;
}

}  // namespace oracle

#endif  // SPORTSNEWS_TESTS_MMR_ORACLE_H_
