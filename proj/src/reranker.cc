#include "sportsnews/reranker.h"

#include <algorithm>
#include <cmath>

#include "sportsnews/error.h"
#include "sportsnews/text.h"

namespace sportsnews {

void MmrConfig::Validate() const {
  if (lambda1 < 0 || lambda2 < 0 || lambda3 < 0) {
    throw Error(ErrorCode::kInvalidConfig, "MMR weights must be >= 0");
  }
  if (std::abs(lambda1 + lambda2 + lambda3 - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidConfig, "MMR weights must sum to 1");
  }
  if (eta && !(*eta > 0)) throw Error(ErrorCode::kInvalidConfig, "eta must be > 0");
  if (budget == 0) throw Error(ErrorCode::kInvalidConfig, "budget must be > 0");
}

double Flu(double perplexity, double eta) {
  if (!(eta > 0)) throw Error(ErrorCode::kInvalidConfig, "eta must be > 0");
  return std::clamp(1.0 - perplexity / eta, 0.0, 1.0);
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::kEmptyCandidates, "empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double MmrValue(double info, double flu, double max_sim, const MmrConfig &cfg) {
  return cfg.lambda1 * info + cfg.lambda2 * flu - cfg.lambda3 * max_sim;
}

double MmrScore(const RewrittenCandidate &candidate,
                std::span<const RewrittenCandidate> selected,
                const MmrConfig &cfg, const SemanticScorer &sim) {
  if (!candidate.fluency) {
    throw Error(ErrorCode::kInvalidConfig, "candidate fluency not computed");
  }
  double max_sim = 0;
  if (!selected.empty()) {
    std::vector<TextPair> pairs;
    pairs.reserve(selected.size());
    for (const RewrittenCandidate &s : selected) pairs.emplace_back(candidate.text, s.text);
    std::vector<double> sims = sim.ScorePairs(pairs);
    max_sim = *std::max_element(sims.begin(), sims.end());
  }
  return MmrValue(candidate.info, *candidate.fluency, max_sim, cfg);
}

double FillFluency(std::vector<RewrittenCandidate> &candidates,
                   const FluencyScorer &fluency, const MmrConfig &cfg) {
  if (candidates.empty()) return 0;
  std::vector<std::string> texts;
  texts.reserve(candidates.size());
  for (const RewrittenCandidate &c : candidates) texts.push_back(c.text);
  std::vector<double> ppl = fluency.Perplexities(texts);
  if (ppl.size() != candidates.size()) {
    throw Error(ErrorCode::kProtocolError, "fluency scorer changed the batch size");
  }
  const double eta = cfg.eta ? *cfg.eta : Quantile(ppl, 0.95);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    candidates[i].fluency = Flu(ppl[i], eta);
  }
  return eta;
}

std::string RankedNews::Text(std::string_view sep) const {
  std::string out;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(sentences[i].text);
  }
  return out;
}

RankedNews RerankGreedy(const std::vector<RewrittenCandidate> &candidates,
                        const MmrConfig &cfg, const SemanticScorer &sim) {
  cfg.Validate();
  if (candidates.empty()) throw Error(ErrorCode::kEmptyCandidates, "nothing to rerank");
  for (const RewrittenCandidate &c : candidates) {
    if (!c.fluency) throw Error(ErrorCode::kInvalidConfig, "candidate fluency not computed");
  }

  const std::size_t n = candidates.size();
  std::vector<bool> taken(n, false);
  std::vector<double> max_sim(n, 0.0);
  std::vector<std::size_t> order;
  RankedNews out;

  while (order.size() < n) {
    std::optional<std::size_t> best;
    double best_mmr = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const double mmr =
          MmrValue(candidates[i].info, *candidates[i].fluency, max_sim[i], cfg);
      bool better = false;
      if (!best || mmr > best_mmr) {
        better = true;
      } else if (mmr == best_mmr) {
        const RewrittenCandidate &b = candidates[*best];
        if (candidates[i].info != b.info) {
          better = candidates[i].info > b.info;
        } else {
          better = candidates[i].commentary_index < b.commentary_index;
        }
      }
      if (better) {
        best = i;
        best_mmr = mmr;
      }
    }
    const std::size_t pick = *best;
    taken[pick] = true;
    order.push_back(pick);
    out.trace.push_back({pick, candidates[pick].info, *candidates[pick].fluency,
                         max_sim[pick], best_mmr});
    out.total_chars += CountCodepoints(candidates[pick].text);
    if (out.total_chars > cfg.budget) break;

    std::vector<std::size_t> rest;
    std::vector<TextPair> pairs;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      rest.push_back(i);
      pairs.emplace_back(candidates[i].text, candidates[pick].text);
    }
    if (rest.empty()) break;
    std::vector<double> sims = sim.ScorePairs(pairs);
    if (sims.size() != rest.size()) {
      throw Error(ErrorCode::kProtocolError, "similarity scorer changed the batch size");
    }
    for (std::size_t k = 0; k < rest.size(); ++k) {
      max_sim[rest[k]] = std::max(max_sim[rest[k]], sims[k]);
    }
  }

  std::vector<std::size_t> chronological = order;
  std::stable_sort(chronological.begin(), chronological.end(),
                   [&](std::size_t a, std::size_t b) {
                     return candidates[a].commentary_index <
                            candidates[b].commentary_index;
                   });
  for (std::size_t i : chronological) out.sentences.push_back(candidates[i]);
  return out;
}

RankedNews RerankGame(std::vector<RewrittenCandidate> candidates,
                      const MmrConfig &cfg, const SemanticScorer &sim,
                      const FluencyScorer &fluency) {
  if (candidates.empty()) return {};
  const bool missing = std::any_of(candidates.begin(), candidates.end(),
                                   [](const RewrittenCandidate &c) { return !c.fluency; });
  if (missing) FillFluency(candidates, fluency, cfg);
  return RerankGreedy(candidates, cfg, sim);
}

std::size_t ComputeBudget(const std::vector<GameRecord> &corpus) {
  double total = 0;
  std::size_t games = 0;
  for (const GameRecord &g : corpus) {
    if (g.news.empty()) continue;
    for (const NewsSentence &s : g.news) total += static_cast<double>(CountCodepoints(s.text));
    ++games;
  }
  if (games == 0) throw Error(ErrorCode::kNoReferenceNews, "no game has news");
  return static_cast<std::size_t>(std::llround(total / static_cast<double>(games)));
}

}  // namespace sportsnews
