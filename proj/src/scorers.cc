#include "sportsnews/scorers.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "sportsnews/error.h"
#include "sportsnews/text.h"

namespace sportsnews {

double SemanticScorer::Score(std::string_view a, std::string_view b) const {
  TextPair pair{std::string(a), std::string(b)};
  return ScorePairs(std::span<const TextPair>(&pair, 1)).at(0);
}

double FluencyScorer::Perplexity(std::string_view text) const {
  std::string t(text);
  return Perplexities(std::span<const std::string>(&t, 1)).at(0);
}

HashedNgramScorer::HashedNgramScorer(HashedNgramProfile profile)
    : profile_(profile) {
  if (profile_.ngram_size < 1 || profile_.dims == 0) {
    throw Error(ErrorCode::kInvalidConfig, "bad hashed n-gram profile");
  }
}

std::vector<std::pair<std::size_t, double>> HashedNgramScorer::Vectorize(
    std::string_view text) const {
  Tokens chars = Tokenize(text, Tokenization::kChar);
  if (chars.empty()) throw Error(ErrorCode::kEmptyText, "empty text");
  const std::size_t n =
      std::min(chars.size(), static_cast<std::size_t>(profile_.ngram_size));
  std::map<std::size_t, double> buckets;
  for (std::size_t i = 0; i + n <= chars.size(); ++i) {
    std::string gram;
    for (std::size_t k = 0; k < n; ++k) gram += chars[i + k];
    buckets[Fnv1a64(gram) % profile_.dims] += 1.0;
  }
  return {buckets.begin(), buckets.end()};
}

double HashedNgramScorer::Similarity(std::string_view a,
                                     std::string_view b) const {
  auto va = Vectorize(a);
  auto vb = Vectorize(b);
  double dot = 0, na = 0, nb = 0;
  for (const auto &[k, v] : va) na += v * v;
  for (const auto &[k, v] : vb) nb += v * v;
  std::size_t i = 0, j = 0;
  while (i < va.size() && j < vb.size()) {
    if (va[i].first < vb[j].first) {
      ++i;
    } else if (vb[j].first < va[i].first) {
      ++j;
    } else {
      dot += va[i].second * vb[j].second;
      ++i;
      ++j;
    }
  }
  // Integer-valued norms keep sqrt(na*na) exact, so identical texts give 1.
  double cosine = dot / std::sqrt(na * nb);
  return std::clamp(cosine, 0.0, 1.0);
}

std::vector<double> HashedNgramScorer::ScorePairs(
    std::span<const TextPair> pairs) const {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const TextPair &p : pairs) out.push_back(Similarity(p.first, p.second));
  return out;
}

}  // namespace sportsnews
