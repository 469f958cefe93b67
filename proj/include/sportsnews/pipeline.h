#ifndef SPORTSNEWS_PIPELINE_H_
#define SPORTSNEWS_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sportsnews/corpus.h"
#include "sportsnews/labeling.h"
#include "sportsnews/ngram_lm.h"
#include "sportsnews/reranker.h"
#include "sportsnews/rewriter.h"
#include "sportsnews/scorers.h"
#include "sportsnews/selector.h"
#include "sportsnews/service_client.h"
#include "sportsnews/similarity.h"

namespace sportsnews {

enum class Backend { kBuiltin, kRemote };

struct LmConfig {
  int order = 3;
  double alpha = 0.1;
  Tokenization tokenization = Tokenization::kChar;
};

struct PipelineConfig {
  SimilarityConfig similarity;
  WindowConfig window;

  SelectionPolicy selection;
  Backend importance = Backend::kBuiltin;
  FeatureSpec features;
  TrainHyper train;

  Backend rewriter = Backend::kBuiltin;  // kBuiltin is the template rewriter
  bool rewriter_fallback = true;

  Backend semantic = Backend::kBuiltin;
  Backend fluency = Backend::kBuiltin;
  std::string service_address = "127.0.0.1:8765";
  int service_timeout_ms = 60000;

  LmConfig lm;
  MmrConfig mmr;

  std::string selector_model_path;
  std::string lm_path;
  std::string train_corpus_path;
  std::string rewrite_rules_path;
  std::string noise_rules_path;

  std::uint64_t seed = 13;
  int workers = 1;
  std::string article_separator = " ";

  // Validates nested configs except the budget, which may still be derived.
  void Validate() const;
};

// Structured config file; keys mirror the field names, grouped by stage.
// Missing keys keep their defaults, unknown keys are rejected.
PipelineConfig ParsePipelineConfig(std::string_view json_text);
PipelineConfig LoadPipelineConfig(const std::string &path);
std::string PipelineConfigToJson(const PipelineConfig &config);
std::string ConfigHash(const PipelineConfig &config);

// Shared, read-only state for a run.
struct PipelineResources {
  std::shared_ptr<ServiceClient> service;
  std::shared_ptr<const ImportanceModel> selector;
  std::shared_ptr<const SemanticScorer> semantic;
  std::shared_ptr<const FluencyScorer> fluency;
  std::shared_ptr<const Rewriter> rewriter;
  std::size_t budget = 0;
};

// Aligns the training games and fits the selector on the result.
ImportanceModel TrainSelectorFromCorpus(const std::vector<GameRecord> &train,
                                        const PipelineConfig &config,
                                        const SemanticScorer &semantic);

// LM over the reference news sentences of the training games.
NgramLm TrainFluencyLm(const std::vector<GameRecord> &train, const LmConfig &cfg);

// Which resources a stage needs; the rest are left unset.
struct ResourceNeeds {
  bool selector = true;
  bool fluency = true;
  bool budget = true;
};

// Loads models named in the config, training whatever is missing on
// `train` (required in that case). The budget comes from mmr.budget for the
// fixed policy and from `train` otherwise.
PipelineResources BuildResources(const PipelineConfig &config,
                                 const std::vector<GameRecord> *train,
                                 const ResourceNeeds &needs = {});

// Importance scores of every commentary event of a game.
std::vector<double> ScoreGame(const GameRecord &game, const PipelineConfig &config,
                              const PipelineResources &resources);

struct GameOutput {
  std::string game_id;
  RankedNews news;
  std::vector<std::string> warnings;
};

struct PipelineManifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  std::size_t games = 0;
  std::size_t selected = 0;
  std::size_t rewritten = 0;
  std::size_t reranked = 0;
  std::size_t service_failures = 0;
  std::vector<std::pair<std::string, std::string>> failures;  // game_id, error
  std::vector<std::pair<std::string, std::string>> warnings;

  std::string ToJson(const std::vector<GameOutput> &outputs) const;
};

struct PipelineRun {
  std::vector<GameOutput> outputs;  // input order, failed games omitted
  PipelineManifest manifest;
};

// select -> rewrite -> rerank for every game, game-parallel over
// config.workers threads. A failing game is reported, not fatal.
PipelineRun RunPipeline(const std::vector<GameRecord> &games,
                        const PipelineConfig &config,
                        const PipelineResources &resources);

// Rerank step shared by the pipeline and the staged CLI.
GameOutput RerankCandidates(const std::string &game_id,
                            std::vector<RewrittenCandidate> candidates,
                            const PipelineConfig &config,
                            const PipelineResources &resources);

// Runs fn(i) for i in [0, n) on up to `workers` threads. The first exception
// thrown (lowest i) is rethrown after all work finishes.
void ParallelFor(std::size_t n, int workers,
                 const std::function<void(std::size_t)> &fn);

// Stage record formats (one JSON object per line).
struct SelectionRecord {
  std::string game_id;
  std::vector<std::size_t> selected_indices;
  std::vector<double> scores;
};
std::string SerializeSelection(const SelectionRecord &record);
SelectionRecord ParseSelection(std::string_view line);

struct CandidateRecord {
  std::string game_id;
  std::vector<RewrittenCandidate> candidates;
};
std::string SerializeCandidates(const CandidateRecord &record);
CandidateRecord ParseCandidates(std::string_view line);

std::string SerializeGameOutput(const GameOutput &output,
                                std::string_view separator = " ");
// game_id and news_text of an output record.
std::pair<std::string, std::string> ParseGeneratedArticle(std::string_view line);

}  // namespace sportsnews

#endif  // SPORTSNEWS_PIPELINE_H_
