#include "sportsnews/evaluation.h"

#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "sportsnews/error.h"
#include "sportsnews/rouge.h"

namespace sportsnews {

std::string EvalReport::Format() const {
  std::ostringstream out;
  out << "# article-level ROUGE F1 x100; tokenization=" << TokenizationName(tokenization)
      << "; ASCII lowercased; no stemming; no stopword removal;"
         " ROUGE-1/2 clipped n-gram counts; ROUGE-L sentence-free LCS\n";
  out << "game_id\trouge1\trouge2\trougeL\n";
  for (const GameEval &g : per_game) {
    out << g.game_id << '\t' << FormatFixed(g.rouge1, 2) << '\t'
        << FormatFixed(g.rouge2, 2) << '\t' << FormatFixed(g.rougeL, 2) << '\n';
  }
  out << "mean\t" << FormatFixed(rouge1, 2) << '\t' << FormatFixed(rouge2, 2)
      << '\t' << FormatFixed(rougeL, 2) << '\n';
  return out.str();
}

EvalReport Evaluate(const std::map<std::string, std::string> &generated,
                    const std::map<std::string, std::string> &references,
                    Tokenization tokenization) {
  for (const auto &[id, text] : generated) {
    if (!references.count(id)) {
      throw Error(ErrorCode::kMissingReference, "no reference for game '" + id + "'");
    }
  }
  for (const auto &[id, text] : references) {
    if (!generated.count(id)) {
      throw Error(ErrorCode::kMissingReference, "no generated article for game '" + id + "'");
    }
  }
  EvalReport report;
  report.tokenization = tokenization;
  for (const auto &[id, text] : generated) {
    const Tokens cand = Tokenize(text, tokenization);
    const Tokens ref = Tokenize(references.at(id), tokenization);
    GameEval g;
    g.game_id = id;
    g.rouge1 = 100.0 * RougeN(cand, ref, 1).f1;
    g.rouge2 = 100.0 * RougeN(cand, ref, 2).f1;
    g.rougeL = 100.0 * RougeL(cand, ref).f1;
    report.rouge1 += g.rouge1;
    report.rouge2 += g.rouge2;
    report.rougeL += g.rougeL;
    report.per_game.push_back(std::move(g));
  }
  if (!report.per_game.empty()) {
    const double n = static_cast<double>(report.per_game.size());
    report.rouge1 /= n;
    report.rouge2 /= n;
    report.rougeL /= n;
  }
  return report;
}

std::map<std::string, std::string> ReferenceArticles(
    const std::vector<GameRecord> &corpus) {
  std::map<std::string, std::string> refs;
  for (const GameRecord &g : corpus) refs[g.game_id] = g.NewsText(" ");
  return refs;
}

std::string SplitManifest::ToJson() const {
  nlohmann::ordered_json doc;
  doc["seed"] = seed;
  doc["train"] = train;
  doc["valid"] = valid;
  doc["test"] = test;
  return doc.dump();
}

SplitCounts CountsFromRatios(std::size_t total, double train, double valid,
                             double test) {
  if (train < 0 || valid < 0 || test < 0 || train + valid + test <= 0) {
    throw Error(ErrorCode::kInvalidConfig, "split ratios must be >= 0 and not all 0");
  }
  const double sum = train + valid + test;
  const double n = static_cast<double>(total);
  SplitCounts c;
  c.valid = static_cast<std::size_t>(std::floor(n * valid / sum));
  c.test = static_cast<std::size_t>(std::floor(n * test / sum));
  c.train = total - c.valid - c.test;
  return c;
}

SplitManifest SplitCorpus(const std::vector<std::string> &game_ids,
                          const SplitCounts &counts, std::uint64_t seed) {
  const std::size_t requested = counts.train + counts.valid + counts.test;
  if (requested > game_ids.size()) {
    throw Error(ErrorCode::kCountsExceedCorpus,
                std::to_string(requested) + " games requested from a corpus of " +
                    std::to_string(game_ids.size()));
  }
  std::vector<std::string> ids = game_ids;
  // Fisher-Yates with rejection sampling so the order only depends on the
  // mt19937_64 stream.
  std::mt19937_64 rng(seed);
  for (std::size_t i = ids.size(); i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do {
      r = rng();
    } while (r >= limit);
    std::swap(ids[i - 1], ids[r % bound]);
  }
  SplitManifest m;
  m.seed = seed;
  const std::size_t train = game_ids.size() - counts.valid - counts.test;
  m.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(train));
  m.valid.assign(ids.begin() + static_cast<std::ptrdiff_t>(train),
                 ids.begin() + static_cast<std::ptrdiff_t>(train + counts.valid));
  m.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(train + counts.valid), ids.end());
  return m;
}

}  // namespace sportsnews
