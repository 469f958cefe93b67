#include "sportsnews/pipeline.h"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sportsnews/error.h"
#include "sportsnews/text.h"

namespace sportsnews {

using json = nlohmann::ordered_json;

namespace {

const char *BackendName(Backend b) { return b == Backend::kBuiltin ? "builtin" : "remote"; }

Backend ParseBackend(const std::string &name, const char *what) {
  if (name == "builtin" || name == "template") return Backend::kBuiltin;
  if (name == "remote") return Backend::kRemote;
  throw Error(ErrorCode::kInvalidConfig,
              std::string("unknown ") + what + " backend '" + name + "'");
}

void RejectUnknown(const json &obj, const std::set<std::string> &known,
                   const std::string &where) {
  if (!obj.is_object()) {
    throw Error(ErrorCode::kInvalidConfig, where + " must be an object");
  }
  for (const auto &[key, value] : obj.items()) {
    if (!known.count(key)) {
      throw Error(ErrorCode::kInvalidConfig, "unknown config key '" + where + key + "'");
    }
  }
}

template <typename T>
void Read(const json &obj, const char *key, T &out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

void PipelineConfig::Validate() const {
  similarity.Validate();
  window.Validate();
  MmrConfig mmr_check = mmr;
  if (mmr_check.budget == 0) mmr_check.budget = 1;
  mmr_check.Validate();
  if (selection.kind == SelectionPolicy::Kind::kTopK && selection.top_k == 0) {
    throw Error(ErrorCode::kInvalidConfig, "selector.top_k must be > 0");
  }
  if (lm.order < 1 || !(lm.alpha > 0)) {
    throw Error(ErrorCode::kInvalidConfig, "lm.order must be >= 1 and lm.alpha > 0");
  }
  if (workers < 1) throw Error(ErrorCode::kInvalidConfig, "workers must be >= 1");
  if (features.hash_dims == 0 || features.max_ngram < 1 || features.context_cap < 3) {
    throw Error(ErrorCode::kInvalidConfig, "bad selector feature settings");
  }
}

PipelineConfig ParsePipelineConfig(std::string_view json_text) {
  PipelineConfig c;
  try {
    json doc = json::parse(json_text);
    RejectUnknown(doc,
                  {"similarity", "window", "selector", "rewriter", "scorers", "service",
                   "lm", "mmr", "paths", "seed", "workers", "article_separator"},
                  "");
    if (doc.contains("similarity")) {
      const json &s = doc["similarity"];
      RejectUnknown(s, {"lambda", "rouge_variant", "tokenization"}, "similarity.");
      Read(s, "lambda", c.similarity.lambda);
      if (s.contains("rouge_variant")) {
        c.similarity.rouge_variant = ParseRougeVariant(s["rouge_variant"].get<std::string>());
      }
      if (s.contains("tokenization")) {
        c.similarity.tokenization = ParseTokenization(s["tokenization"].get<std::string>());
      }
    }
    if (doc.contains("window")) {
      RejectUnknown(doc["window"], {"span_minutes"}, "window.");
      Read(doc["window"], "span_minutes", c.window.span_minutes);
    }
    if (doc.contains("selector")) {
      const json &s = doc["selector"];
      RejectUnknown(s,
                    {"policy", "threshold", "top_k", "backend", "hash_dims", "max_ngram",
                     "context_features", "context_cap", "tokenization", "epochs",
                     "learning_rate", "l2", "positive_weight", "init_scale"},
                    "selector.");
      if (s.contains("policy")) {
        const std::string p = s["policy"].get<std::string>();
        if (p == "threshold") {
          c.selection.kind = SelectionPolicy::Kind::kThreshold;
        } else if (p == "top_k") {
          c.selection.kind = SelectionPolicy::Kind::kTopK;
        } else {
          throw Error(ErrorCode::kInvalidConfig, "unknown selector.policy '" + p + "'");
        }
      }
      Read(s, "threshold", c.selection.threshold);
      Read(s, "top_k", c.selection.top_k);
      if (s.contains("backend")) c.importance = ParseBackend(s["backend"], "selector");
      Read(s, "hash_dims", c.features.hash_dims);
      Read(s, "max_ngram", c.features.max_ngram);
      Read(s, "context_features", c.features.context_features);
      Read(s, "context_cap", c.features.context_cap);
      if (s.contains("tokenization")) {
        c.features.tokenization = ParseTokenization(s["tokenization"].get<std::string>());
      }
      Read(s, "epochs", c.train.epochs);
      Read(s, "learning_rate", c.train.learning_rate);
      Read(s, "l2", c.train.l2);
      Read(s, "positive_weight", c.train.positive_weight);
      Read(s, "init_scale", c.train.init_scale);
    }
    if (doc.contains("rewriter")) {
      const json &r = doc["rewriter"];
      RejectUnknown(r, {"backend", "fallback"}, "rewriter.");
      if (r.contains("backend")) c.rewriter = ParseBackend(r["backend"], "rewriter");
      Read(r, "fallback", c.rewriter_fallback);
    }
    if (doc.contains("scorers")) {
      const json &s = doc["scorers"];
      RejectUnknown(s, {"semantic", "fluency"}, "scorers.");
      if (s.contains("semantic")) c.semantic = ParseBackend(s["semantic"], "semantic");
      if (s.contains("fluency")) c.fluency = ParseBackend(s["fluency"], "fluency");
    }
    if (doc.contains("service")) {
      const json &s = doc["service"];
      RejectUnknown(s, {"address", "timeout_ms"}, "service.");
      Read(s, "address", c.service_address);
      Read(s, "timeout_ms", c.service_timeout_ms);
    }
    if (doc.contains("lm")) {
      const json &l = doc["lm"];
      RejectUnknown(l, {"order", "alpha", "tokenization"}, "lm.");
      Read(l, "order", c.lm.order);
      Read(l, "alpha", c.lm.alpha);
      if (l.contains("tokenization")) {
        c.lm.tokenization = ParseTokenization(l["tokenization"].get<std::string>());
      }
    }
    if (doc.contains("mmr")) {
      const json &m = doc["mmr"];
      RejectUnknown(m, {"lambda1", "lambda2", "lambda3", "eta", "budget", "budget_policy"},
                    "mmr.");
      Read(m, "lambda1", c.mmr.lambda1);
      Read(m, "lambda2", c.mmr.lambda2);
      Read(m, "lambda3", c.mmr.lambda3);
      if (m.contains("eta")) {
        c.mmr.eta = m["eta"].is_null() ? std::nullopt
                                       : std::optional<double>(m["eta"].get<double>());
      }
      Read(m, "budget", c.mmr.budget);
      if (m.contains("budget_policy")) {
        const std::string p = m["budget_policy"].get<std::string>();
        if (p == "corpus_average") {
          c.mmr.budget_policy = BudgetPolicy::kCorpusAverage;
        } else if (p == "fixed") {
          c.mmr.budget_policy = BudgetPolicy::kFixed;
        } else {
          throw Error(ErrorCode::kInvalidConfig, "unknown mmr.budget_policy '" + p + "'");
        }
      }
    }
    if (doc.contains("paths")) {
      const json &p = doc["paths"];
      RejectUnknown(p, {"selector_model", "lm", "train_corpus", "rewrite_rules", "noise_rules"},
                    "paths.");
      Read(p, "selector_model", c.selector_model_path);
      Read(p, "lm", c.lm_path);
      Read(p, "train_corpus", c.train_corpus_path);
      Read(p, "rewrite_rules", c.rewrite_rules_path);
      Read(p, "noise_rules", c.noise_rules_path);
    }
    Read(doc, "seed", c.seed);
    Read(doc, "workers", c.workers);
    Read(doc, "article_separator", c.article_separator);
  } catch (const Error &) {
    throw;
  } catch (const std::exception &e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("config: ") + e.what());
  }
  c.Validate();
  return c;
}

PipelineConfig LoadPipelineConfig(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return ParsePipelineConfig(buf.str());
}

std::string PipelineConfigToJson(const PipelineConfig &c) {
  json doc;
  doc["similarity"] = {{"lambda", c.similarity.lambda},
                       {"rouge_variant", RougeVariantName(c.similarity.rouge_variant)},
                       {"tokenization", TokenizationName(c.similarity.tokenization)}};
  doc["window"] = {{"span_minutes", c.window.span_minutes}};
  doc["selector"] = {
      {"policy", c.selection.kind == SelectionPolicy::Kind::kTopK ? "top_k" : "threshold"},
      {"threshold", c.selection.threshold},
      {"top_k", c.selection.top_k},
      {"backend", BackendName(c.importance)},
      {"hash_dims", c.features.hash_dims},
      {"max_ngram", c.features.max_ngram},
      {"context_features", c.features.context_features},
      {"context_cap", c.features.context_cap},
      {"tokenization", TokenizationName(c.features.tokenization)},
      {"epochs", c.train.epochs},
      {"learning_rate", c.train.learning_rate},
      {"l2", c.train.l2},
      {"positive_weight", c.train.positive_weight},
      {"init_scale", c.train.init_scale}};
  doc["rewriter"] = {{"backend", c.rewriter == Backend::kBuiltin ? "template" : "remote"},
                     {"fallback", c.rewriter_fallback}};
  doc["scorers"] = {{"semantic", BackendName(c.semantic)},
                    {"fluency", BackendName(c.fluency)}};
  doc["service"] = {{"address", c.service_address}, {"timeout_ms", c.service_timeout_ms}};
  doc["lm"] = {{"order", c.lm.order},
               {"alpha", c.lm.alpha},
               {"tokenization", TokenizationName(c.lm.tokenization)}};
  doc["mmr"] = {{"lambda1", c.mmr.lambda1},
                {"lambda2", c.mmr.lambda2},
                {"lambda3", c.mmr.lambda3},
                {"eta", c.mmr.eta ? json(*c.mmr.eta) : json(nullptr)},
                {"budget", c.mmr.budget},
                {"budget_policy", c.mmr.budget_policy == BudgetPolicy::kFixed
                                      ? "fixed"
                                      : "corpus_average"}};
  doc["paths"] = {{"selector_model", c.selector_model_path},
                  {"lm", c.lm_path},
                  {"train_corpus", c.train_corpus_path},
                  {"rewrite_rules", c.rewrite_rules_path},
                  {"noise_rules", c.noise_rules_path}};
  doc["seed"] = c.seed;
  doc["workers"] = c.workers;
  doc["article_separator"] = c.article_separator;
  return doc.dump();
}

std::string ConfigHash(const PipelineConfig &config) {
  // Worker count does not change results.
  PipelineConfig canonical = config;
  canonical.workers = 1;
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(PipelineConfigToJson(canonical))));
  return buf;
}

ImportanceModel TrainSelectorFromCorpus(const std::vector<GameRecord> &train,
                                        const PipelineConfig &config,
                                        const SemanticScorer &semantic) {
  std::vector<AlignmentResult> alignments(train.size());
  ParallelFor(train.size(), config.workers, [&](std::size_t i) {
    alignments[i] = AlignGame(train[i], config.window, config.similarity, semantic);
  });
  TrainHyper hyper = config.train;
  hyper.seed = config.seed;
  return TrainSelector(BuildTrainingExamples(train, alignments, config.features),
                       config.features, hyper);
}

NgramLm TrainFluencyLm(const std::vector<GameRecord> &train, const LmConfig &cfg) {
  std::vector<Tokens> sentences;
  for (const GameRecord &g : train) {
    for (const NewsSentence &s : g.news) sentences.push_back(Tokenize(s.text, cfg.tokenization));
  }
  return NgramLm::Train(sentences, cfg.order, cfg.alpha);
}

namespace {

void RequireFile(const std::string &path, const char *what) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kIo, std::string(what) + " '" + path + "' does not exist");
  }
}

}  // namespace

PipelineResources BuildResources(const PipelineConfig &config,
                                 const std::vector<GameRecord> *train,
                                 const ResourceNeeds &needs) {
  config.Validate();
  PipelineResources r;
  const bool any_remote = config.semantic == Backend::kRemote ||
                          config.fluency == Backend::kRemote ||
                          config.importance == Backend::kRemote ||
                          config.rewriter == Backend::kRemote;
  if (any_remote) {
    r.service = std::make_shared<ServiceClient>(
        ServiceAddress::Parse(config.service_address),
        std::chrono::milliseconds(config.service_timeout_ms));
  }
  auto need_train = [&](const char *what) -> const std::vector<GameRecord> & {
    if (!train || train->empty()) {
      throw Error(ErrorCode::kInvalidConfig,
                  std::string("no ") + what + " given and no training corpus to build one");
    }
    return *train;
  };

  if (config.semantic == Backend::kRemote) {
    r.semantic = std::make_shared<RemoteSemanticScorer>(r.service);
  } else {
    r.semantic = std::make_shared<HashedNgramScorer>();
  }

  if (!needs.fluency) {
  } else if (config.fluency == Backend::kRemote) {
    r.fluency = std::make_shared<RemoteFluencyScorer>(r.service);
  } else {
    std::shared_ptr<const NgramLm> lm;
    if (!config.lm_path.empty()) {
      RequireFile(config.lm_path, "LM file");
      lm = std::make_shared<NgramLm>(NgramLm::LoadFile(config.lm_path));
    } else {
      lm = std::make_shared<NgramLm>(TrainFluencyLm(need_train("LM"), config.lm));
    }
    r.fluency = std::make_shared<LmFluencyScorer>(lm, config.lm.tokenization);
  }

  if (needs.selector && config.importance == Backend::kBuiltin) {
    if (!config.selector_model_path.empty()) {
      RequireFile(config.selector_model_path, "selector model");
      r.selector = std::make_shared<ImportanceModel>(
          ImportanceModel::LoadFile(config.selector_model_path));
    } else {
      r.selector = std::make_shared<ImportanceModel>(
          TrainSelectorFromCorpus(need_train("selector model"), config, *r.semantic));
    }
  }

  TemplateRules rules;
  if (!config.rewrite_rules_path.empty()) rules = TemplateRules::Load(config.rewrite_rules_path);
  if (config.rewriter == Backend::kRemote) {
    r.rewriter = std::make_shared<RemoteRewriter>(r.service, config.rewriter_fallback, rules);
  } else {
    r.rewriter = std::make_shared<TemplateRewriter>(rules);
  }

  if (!needs.budget) {
  } else if (config.mmr.budget_policy == BudgetPolicy::kFixed) {
    if (config.mmr.budget == 0) {
      throw Error(ErrorCode::kInvalidConfig, "fixed budget policy needs mmr.budget > 0");
    }
    r.budget = config.mmr.budget;
  } else {
    r.budget = ComputeBudget(need_train("budget"));
  }
  return r;
}

std::vector<double> ScoreGame(const GameRecord &game, const PipelineConfig &config,
                              const PipelineResources &resources) {
  if (config.importance == Backend::kBuiltin) {
    if (!resources.selector) throw Error(ErrorCode::kModelNotTrained, "no selector model");
    return ScoreCommentaries(game, *resources.selector);
  }
  std::vector<std::string> windows;
  windows.reserve(game.commentary.size());
  for (std::size_t j = 0; j < game.commentary.size(); ++j) {
    windows.push_back(BuildContextWindow(game, j, config.features.context_cap,
                                         config.features.tokenization)
                          .Text());
  }
  std::vector<double> scores = resources.service->Importance(windows);
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw Error(ErrorCode::kProtocolError, "importance score outside [0,1]");
    }
  }
  return scores;
}

GameOutput RerankCandidates(const std::string &game_id,
                            std::vector<RewrittenCandidate> candidates,
                            const PipelineConfig &config,
                            const PipelineResources &resources) {
  GameOutput out;
  out.game_id = game_id;
  if (candidates.empty()) {
    out.warnings.push_back("no commentary selected; article is empty");
    return out;
  }
  MmrConfig mmr = config.mmr;
  mmr.budget = resources.budget;
  out.news = RerankGame(std::move(candidates), mmr, *resources.semantic, *resources.fluency);
  return out;
}

void ParallelFor(std::size_t n, int workers,
                 const std::function<void(std::size_t)> &fn) {
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) run(i);
  } else {
    std::mutex mu;
    std::size_t next = 0;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i;
          {
            std::lock_guard<std::mutex> lock(mu);
            if (next >= n) return;
            i = next++;
          }
          run(i);
        }
      });
    }
    for (std::thread &t : pool) t.join();
  }
  for (const std::exception_ptr &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

PipelineRun RunPipeline(const std::vector<GameRecord> &games,
                        const PipelineConfig &config,
                        const PipelineResources &resources) {
  struct Slot {
    std::optional<GameOutput> output;
    std::string error;
    bool service_error = false;
    std::size_t selected = 0;
  };
  std::vector<Slot> slots(games.size());
  ParallelFor(games.size(), config.workers, [&](std::size_t i) {
    const GameRecord &game = games[i];
    Slot &slot = slots[i];
    try {
      const std::vector<double> scores = ScoreGame(game, config, resources);
      const std::vector<std::size_t> selected = Select(scores, config.selection);
      slot.selected = selected.size();
      std::vector<RewrittenCandidate> candidates =
          RewriteSelected(game, selected, scores, *resources.rewriter);
      slot.output = RerankCandidates(game.game_id, std::move(candidates), config, resources);
    } catch (const Error &e) {
      slot.error = e.what();
      slot.service_error = IsServiceError(e.code());
    } catch (const std::exception &e) {
      slot.error = e.what();
    }
  });

  PipelineRun run;
  PipelineManifest &m = run.manifest;
  m.config_hash = ConfigHash(config);
  m.seed = config.seed;
  m.budget = resources.budget;
  m.games = games.size();
  for (std::size_t i = 0; i < games.size(); ++i) {
    Slot &slot = slots[i];
    if (!slot.output) {
      m.failures.emplace_back(games[i].game_id, slot.error);
      if (slot.service_error) ++m.service_failures;
      continue;
    }
    m.selected += slot.selected;
    m.rewritten += slot.selected;
    m.reranked += slot.output->news.sentences.size();
    for (const std::string &w : slot.output->warnings) {
      m.warnings.emplace_back(games[i].game_id, w);
    }
    run.outputs.push_back(std::move(*slot.output));
  }
  return run;
}

std::string PipelineManifest::ToJson(const std::vector<GameOutput> &outputs) const {
  json doc;
  doc["config_hash"] = config_hash;
  doc["seed"] = seed;
  doc["budget"] = budget;
  doc["games"] = games;
  doc["succeeded"] = games - failures.size();
  doc["counts"] = {{"selected", selected}, {"rewritten", rewritten}, {"reranked", reranked}};
  json failed = json::array();
  for (const auto &[id, err] : failures) failed.push_back({{"game_id", id}, {"error", err}});
  doc["failed"] = std::move(failed);
  json warned = json::array();
  for (const auto &[id, w] : warnings) warned.push_back({{"game_id", id}, {"message", w}});
  doc["warnings"] = std::move(warned);
  json provenance = json::array();
  for (const GameOutput &o : outputs) {
    json idx = json::array();
    for (const RewrittenCandidate &c : o.news.sentences) idx.push_back(c.commentary_index);
    provenance.push_back({{"game_id", o.game_id}, {"commentary_indices", std::move(idx)}});
  }
  doc["provenance"] = std::move(provenance);
  return doc.dump();
}

std::string SerializeSelection(const SelectionRecord &record) {
  json obj;
  obj["game_id"] = record.game_id;
  obj["selected_indices"] = record.selected_indices;
  obj["scores"] = record.scores;
  return obj.dump();
}

SelectionRecord ParseSelection(std::string_view line) {
  SelectionRecord r;
  try {
    json obj = json::parse(line);
    r = {obj.at("game_id").get<std::string>(),
         obj.at("selected_indices").get<std::vector<std::size_t>>(),
         obj.at("scores").get<std::vector<double>>()};
  } catch (const std::exception &e) {
    throw Error(ErrorCode::kMalformedRecord, std::string("selection record: ") + e.what());
  }
  for (std::size_t i : r.selected_indices) {
    if (i >= r.scores.size()) {
      throw Error(ErrorCode::kMalformedRecord,
                  "selection record: index " + std::to_string(i) + " out of range");
    }
  }
  return r;
}

namespace {

json CandidateJson(const RewrittenCandidate &c) {
  json e;
  e["text"] = c.text;
  e["info"] = c.info;
  e["fluency"] = c.fluency ? json(*c.fluency) : json(nullptr);
  e["commentary_index"] = c.commentary_index;
  e["source_minute"] = c.source_minute ? json(*c.source_minute) : json(nullptr);
  return e;
}

}  // namespace

std::string SerializeCandidates(const CandidateRecord &record) {
  json obj;
  obj["game_id"] = record.game_id;
  json arr = json::array();
  for (const RewrittenCandidate &c : record.candidates) arr.push_back(CandidateJson(c));
  obj["candidates"] = std::move(arr);
  return obj.dump();
}

CandidateRecord ParseCandidates(std::string_view line) {
  CandidateRecord record;
  try {
    json obj = json::parse(line);
    record.game_id = obj.at("game_id").get<std::string>();
    for (const json &e : obj.at("candidates")) {
      RewrittenCandidate c;
      c.text = e.at("text").get<std::string>();
      c.info = e.at("info").get<double>();
      if (e.contains("fluency") && !e["fluency"].is_null()) c.fluency = e["fluency"].get<double>();
      c.commentary_index = e.at("commentary_index").get<std::size_t>();
      if (e.contains("source_minute") && !e["source_minute"].is_null()) {
        c.source_minute = e["source_minute"].get<int>();
      }
      if (TrimView(c.text).empty()) throw std::runtime_error("candidate text is empty");
      record.candidates.push_back(std::move(c));
    }
  } catch (const std::exception &e) {
    throw Error(ErrorCode::kMalformedRecord, std::string("candidate record: ") + e.what());
  }
  return record;
}

std::string SerializeGameOutput(const GameOutput &output, std::string_view separator) {
  json obj;
  obj["game_id"] = output.game_id;
  obj["news_text"] = output.news.Text(separator);
  json sentences = json::array();
  for (const RewrittenCandidate &c : output.news.sentences) sentences.push_back(CandidateJson(c));
  obj["sentences"] = std::move(sentences);
  obj["total_chars"] = output.news.total_chars;
  json trace = json::array();
  for (const TraceStep &t : output.news.trace) {
    trace.push_back({{"chosen", t.chosen},
                     {"info", t.info},
                     {"flu", t.flu},
                     {"max_sim", t.max_sim},
                     {"mmr", t.mmr}});
  }
  obj["trace"] = std::move(trace);
  obj["warnings"] = output.warnings;
  return obj.dump();
}

std::pair<std::string, std::string> ParseGeneratedArticle(std::string_view line) {
  try {
    json obj = json::parse(line);
    return {obj.at("game_id").get<std::string>(), obj.at("news_text").get<std::string>()};
  } catch (const std::exception &e) {
    throw Error(ErrorCode::kMalformedRecord, std::string("generated record: ") + e.what());
  }
}

}  // namespace sportsnews
