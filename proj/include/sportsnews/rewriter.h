#ifndef SPORTSNEWS_REWRITER_H_
#define SPORTSNEWS_REWRITER_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sportsnews/corpus.h"
#include "sportsnews/service_client.h"

namespace sportsnews {

struct RewriteRequest {
  std::string source;  // minute-prefixed commentary text
  std::string game_id;
  std::size_t commentary_index = 0;
};

// A rewritten news sentence and its provenance. `info` is the selector score
// of the source commentary; `fluency` is filled in by the reranker.
struct RewrittenCandidate {
  std::string text;
  double info = 0;
  std::optional<double> fluency;
  std::size_t commentary_index = 0;
  std::optional<int> source_minute;

  bool operator==(const RewrittenCandidate &) const = default;
};

// Style rules of the template rewriter. Templates take {minute} and
// {ordinal} ("15th") placeholders.
struct TemplateRules {
  std::string minute_template = "In the {ordinal} minute, ";
  std::string minute_template_cjk = "第{minute}分钟，";
  bool strip_exclamations = true;
  // Applied in order, repeatedly until nothing changes.
  std::vector<std::pair<std::string, std::string>> substitutions = {
      {"What a ", "a "}, {"what a ", "a "}, {"Wow, ", ""}, {"wow, ", ""},
      {"哇，", ""},     {"天哪，", ""}};

  static TemplateRules Load(const std::string &path);
};

std::string OrdinalSuffix(int n);

// Deterministic colloquial-to-news restyling:
//   "15' What a strike!!!" -> "In the 15th minute, a strike."
// Never returns an empty string and is idempotent.
std::string TemplateRewrite(std::string_view source, const TemplateRules &rules);

// Order-preserving batch rewriting; one non-empty text per request.
class Rewriter {
 public:
  virtual ~Rewriter() = default;
  virtual std::vector<std::string> Rewrite(
      std::span<const RewriteRequest> batch) const = 0;
};

class TemplateRewriter : public Rewriter {
 public:
  explicit TemplateRewriter(TemplateRules rules = {});
  std::vector<std::string> Rewrite(
      std::span<const RewriteRequest> batch) const override;

 private:
  TemplateRules rules_;
};

// Sends batches to the service's `rewrite` op. With fallback enabled, an
// unreachable service or a failed item is rewritten by the template rules;
// without it those raise Error(kServiceUnavailable) or ItemFailure.
class RemoteRewriter : public Rewriter {
 public:
  RemoteRewriter(std::shared_ptr<ServiceClient> client, bool fallback,
                 TemplateRules rules = {});
  std::vector<std::string> Rewrite(
      std::span<const RewriteRequest> batch) const override;

 private:
  std::shared_ptr<ServiceClient> client_;
  bool fallback_;
  TemplateRules rules_;
};

// Requests for the selected commentary events of a game, in index order.
std::vector<RewriteRequest> MakeRewriteRequests(
    const GameRecord &game, const std::vector<std::size_t> &selected);

// Rewrites the selected events and attaches the selector scores as `info`.
std::vector<RewrittenCandidate> RewriteSelected(
    const GameRecord &game, const std::vector<std::size_t> &selected,
    const std::vector<double> &scores, const Rewriter &rewriter);

}  // namespace sportsnews

#endif  // SPORTSNEWS_REWRITER_H_
