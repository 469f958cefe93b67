#include "sportsnews/rouge.h"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

#include "sportsnews/error.h"

namespace sportsnews {

const char *RougeVariantName(RougeVariant variant) {
  switch (variant) {
    case RougeVariant::kR1: return "R1";
    case RougeVariant::kR2: return "R2";
    case RougeVariant::kRL: return "RL";
  }
  return "RL";
}

RougeVariant ParseRougeVariant(std::string_view name) {
  if (name == "R1" || name == "rouge1") return RougeVariant::kR1;
  if (name == "R2" || name == "rouge2") return RougeVariant::kR2;
  if (name == "RL" || name == "rougeL") return RougeVariant::kRL;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown ROUGE variant '" + std::string(name) + "'");
}

namespace {

std::unordered_map<std::string, int> CountNgrams(const Tokens &tokens, int n) {
  std::unordered_map<std::string, int> counts;
  if (tokens.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int k = 1; k < n; ++k) {
      key.push_back('\x1f');
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

RougeScore FromCounts(double overlap, double candidate_total,
                      double reference_total) {
  if (candidate_total == 0 && reference_total == 0) return {1.0, 1.0, 1.0};
  if (candidate_total == 0 || reference_total == 0) return {};
  RougeScore s;
  s.precision = overlap / candidate_total;
  s.recall = overlap / reference_total;
  s.f1 = (s.precision + s.recall) > 0
             ? 2 * (s.precision * s.recall) / (s.precision + s.recall)
             : 0.0;
  return s;
}

}  // namespace

RougeScore RougeN(const Tokens &candidate, const Tokens &reference, int n) {
  if (n < 1) throw Error(ErrorCode::kInvalidConfig, "ROUGE-N needs n >= 1");
  auto cand = CountNgrams(candidate, n);
  auto ref = CountNgrams(reference, n);
  long overlap = 0, cand_total = 0, ref_total = 0;
  for (const auto &[gram, c] : cand) {
    cand_total += c;
    auto it = ref.find(gram);
    if (it != ref.end()) overlap += std::min(c, it->second);
  }
  for (const auto &[gram, c] : ref) ref_total += c;
  return FromCounts(static_cast<double>(overlap),
                    static_cast<double>(cand_total),
                    static_cast<double>(ref_total));
}

std::size_t LcsLength(const Tokens &a, const Tokens &b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeScore RougeL(const Tokens &candidate, const Tokens &reference) {
  return FromCounts(static_cast<double>(LcsLength(candidate, reference)),
                    static_cast<double>(candidate.size()),
                    static_cast<double>(reference.size()));
}

RougeScore Rouge(const Tokens &candidate, const Tokens &reference,
                 RougeVariant variant) {
  switch (variant) {
    case RougeVariant::kR1: return RougeN(candidate, reference, 1);
    case RougeVariant::kR2: return RougeN(candidate, reference, 2);
    case RougeVariant::kRL: return RougeL(candidate, reference);
  }
  return {};
}

}  // namespace sportsnews
