#ifndef SPORTSNEWS_ROUGE_H_
#define SPORTSNEWS_ROUGE_H_

#include <string_view>

#include "sportsnews/text.h"

namespace sportsnews {

struct RougeScore {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

enum class RougeVariant { kR1, kR2, kRL };

const char *RougeVariantName(RougeVariant variant);
RougeVariant ParseRougeVariant(std::string_view name);

// Clipped n-gram overlap. Precision is over candidate n-grams, recall over
// reference n-grams. When neither side has an n-gram the score is 1 on all
// three fields; when only one side is empty it is 0.
RougeScore RougeN(const Tokens &candidate, const Tokens &reference, int n);

// Longest-common-subsequence precision/recall/F1 with the same empty-side
// conventions as RougeN.
RougeScore RougeL(const Tokens &candidate, const Tokens &reference);

std::size_t LcsLength(const Tokens &a, const Tokens &b);

RougeScore Rouge(const Tokens &candidate, const Tokens &reference,
                 RougeVariant variant);

}  // namespace sportsnews

#endif  // SPORTSNEWS_ROUGE_H_
