// sportsnews: command-line front end for the commentary-to-news pipeline.

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sportsnews/corpus.h"
#include "sportsnews/error.h"
#include "sportsnews/evaluation.h"
#include "sportsnews/labeling.h"
#include "sportsnews/noise.h"
#include "sportsnews/pipeline.h"
#include "sportsnews/text.h"

namespace fs = std::filesystem;
using namespace sportsnews;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitService = 3;

// Collects output lines and writes them in one go, via a temporary file
// renamed into place. "-" or an empty path means stdout.
class Output {
 public:
  explicit Output(std::string path) : path_(std::move(path)) {}

  void Line(const std::string &line) { buf_ << line << '\n'; }

  void Commit() {
    if (path_.empty() || path_ == "-") {
      std::cout << buf_.str() << std::flush;
      return;
    }
    const fs::path target(path_);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const std::string tmp = path_ + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp);
      out << buf_.str();
      if (!out) throw Error(ErrorCode::kIo, "write failed for " + tmp);
    }
    fs::rename(tmp, target);
  }

 private:
  std::string path_;
  std::ostringstream buf_;
};

std::vector<std::string> ReadLines(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!TrimView(line).empty()) lines.push_back(line);
  }
  return lines;
}

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
};

PipelineConfig MakeConfig(const Globals &g) {
  PipelineConfig c;
  if (!g.config_path.empty()) c = LoadPipelineConfig(g.config_path);
  if (g.seed) c.seed = *g.seed;
  if (g.workers) c.workers = *g.workers;
  c.Validate();
  return c;
}

std::optional<std::vector<GameRecord>> TrainCorpus(const PipelineConfig &c) {
  if (c.train_corpus_path.empty()) return std::nullopt;
  return ReadCorpusFile(c.train_corpus_path);
}

PipelineResources Resources(const PipelineConfig &c, const ResourceNeeds &needs) {
  const auto train = TrainCorpus(c);
  return BuildResources(c, train ? &*train : nullptr, needs);
}

void Warn(const std::string &game_id, const std::string &message) {
  std::cerr << "warning: " << game_id << ": " << message << '\n';
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Generate sports news from live commentary"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "Pipeline config file (JSON)");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber);

  // stats
  std::string stats_in;
  auto *stats = app.add_subcommand("stats", "Print corpus statistics");
  stats->add_option("corpus", stats_in)->required();

  // detect-noise
  std::string noise_in, noise_out, noise_rules;
  auto *detect = app.add_subcommand("detect-noise", "Flag noisy news sentences");
  detect->add_option("corpus", noise_in)->required();
  detect->add_option("-o,--output", noise_out, "Noise report file");
  detect->add_option("--rules", noise_rules, "Noise rule file (JSON)");

  // clean
  std::string clean_in, clean_out, clean_report;
  auto *clean = app.add_subcommand("clean", "Remove flagged news sentences");
  clean->add_option("corpus", clean_in)->required();
  clean->add_option("-o,--output", clean_out, "Cleaned corpus file");
  clean->add_option("--report", clean_report, "Noise report (detected if omitted)");
  clean->add_option("--rules", noise_rules, "Noise rule file (JSON)");

  // label
  std::string label_in, label_out, label_pairs;
  std::optional<double> label_min;
  auto *label = app.add_subcommand("label", "Align news sentences to commentary");
  label->add_option("corpus", label_in)->required();
  label->add_option("-o,--output", label_out, "Alignment records");
  label->add_option("--pairs", label_pairs, "Rewrite pair file");
  label->add_option("--min-similarity", label_min, "Drop matches below this value");

  // train-selector
  std::string ts_in, ts_out;
  auto *train_sel = app.add_subcommand("train-selector", "Train the importance selector");
  train_sel->add_option("corpus", ts_in)->required();
  train_sel->add_option("-o,--output", ts_out, "Model file")->required();

  // train-lm
  std::string tl_in, tl_out;
  auto *train_lm = app.add_subcommand("train-lm", "Train the fluency language model");
  train_lm->add_option("corpus", tl_in)->required();
  train_lm->add_option("-o,--output", tl_out, "LM file")->required();

  // select
  std::string sel_in, sel_out, sel_model;
  std::optional<double> sel_threshold;
  std::optional<std::size_t> sel_top_k;
  auto *select = app.add_subcommand("select", "Score and select commentary");
  select->add_option("corpus", sel_in)->required();
  select->add_option("-o,--output", sel_out, "Selection records");
  select->add_option("--model", sel_model, "Selector model file");
  select->add_option("--threshold", sel_threshold, "Score threshold");
  select->add_option("--top-k", sel_top_k, "Keep the k best instead of thresholding");

  // rewrite
  std::string rw_in, rw_out, rw_selection;
  auto *rewrite = app.add_subcommand("rewrite", "Rewrite selected commentary");
  rewrite->add_option("corpus", rw_in)->required();
  rewrite->add_option("--selection", rw_selection, "Selection records")->required();
  rewrite->add_option("-o,--output", rw_out, "Candidate records");

  // rerank
  std::string rr_in, rr_out, rr_lm;
  std::optional<std::size_t> rr_budget;
  std::optional<double> rr_l1, rr_l2, rr_l3, rr_eta;
  auto *rerank = app.add_subcommand("rerank", "Assemble articles from candidates");
  rerank->add_option("candidates", rr_in)->required();
  rerank->add_option("-o,--output", rr_out, "Article records");
  rerank->add_option("--lm", rr_lm, "LM file");
  rerank->add_option("--budget", rr_budget, "Character budget");
  rerank->add_option("--lambda1", rr_l1);
  rerank->add_option("--lambda2", rr_l2);
  rerank->add_option("--lambda3", rr_l3);
  rerank->add_option("--eta", rr_eta);

  // pipeline
  std::string pl_in, pl_out, pl_manifest;
  auto *pipeline = app.add_subcommand("pipeline", "Run select, rewrite and rerank");
  pipeline->add_option("corpus", pl_in)->required();
  pipeline->add_option("-o,--output", pl_out, "Article records");
  pipeline->add_option("--manifest", pl_manifest, "Run manifest file");
  pipeline->add_option("--model", sel_model, "Selector model file");
  pipeline->add_option("--lm", rr_lm, "LM file");

  // evaluate
  std::string ev_generated, ev_refs, ev_tok = "char";
  auto *evaluate = app.add_subcommand("evaluate", "ROUGE of generated articles");
  evaluate->add_option("generated", ev_generated)->required();
  evaluate->add_option("references", ev_refs, "Reference corpus")->required();
  evaluate->add_option("--tokenization", ev_tok)->check(CLI::IsMember({"char", "word"}));

  // split
  std::string sp_in, sp_dir;
  std::vector<std::size_t> sp_counts;
  std::vector<double> sp_ratios;
  auto *split = app.add_subcommand("split", "Split a corpus into train/valid/test");
  split->add_option("corpus", sp_in)->required();
  split->add_option("--out-dir", sp_dir, "Directory for split files")->required();
  auto *counts_opt = split->add_option("--counts", sp_counts, "train valid test")
                         ->expected(3)->delimiter(',');
  auto *ratios_opt = split->add_option("--ratios", sp_ratios, "train valid test")
                         ->expected(3)->delimiter(',');
  counts_opt->excludes(ratios_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (stats->parsed()) {
      std::cout << FormatStats(ComputeStats(ReadCorpusFile(stats_in)));
      return kExitOk;
    }

    if (detect->parsed() || clean->parsed()) {
      const std::string in = detect->parsed() ? noise_in : clean_in;
      PipelineConfig config = MakeConfig(g);
      if (noise_rules.empty()) noise_rules = config.noise_rules_path;
      const NoiseRules rules = noise_rules.empty() ? DefaultNoiseRules()
                                                   : LoadNoiseRules(noise_rules);
      const std::vector<GameRecord> games = ReadCorpusFile(in);
      std::map<std::string, NoiseReport> reports;
      if (clean->parsed() && !clean_report.empty()) {
        for (const std::string &line : ReadLines(clean_report)) {
          NoiseReport r = ParseNoiseReport(line);
          reports[r.game_id] = std::move(r);
        }
      } else {
        for (const GameRecord &game : games) reports[game.game_id] = DetectNoise(game, rules);
      }
      if (detect->parsed()) {
        Output out(noise_out);
        for (const GameRecord &game : games) out.Line(SerializeNoiseReport(reports[game.game_id]));
        out.Commit();
        return kExitOk;
      }
      Output out(clean_out);
      std::array<std::size_t, 3> removed{};
      std::size_t discarded = 0;
      for (const GameRecord &game : games) {
        auto it = reports.find(game.game_id);
        NoiseReport empty{game.game_id, {}};
        CleanResult r = CleanNews(game, it == reports.end() ? empty : it->second);
        for (std::size_t k = 0; k < 3; ++k) removed[k] += r.passes[k].size();
        if (r.discardable) {
          ++discarded;
          Warn(game.game_id, "no news left after cleaning; game dropped");
          continue;
        }
        out.Line(SerializeGame(r.game));
      }
      out.Commit();
      std::cerr << "removed other_game=" << removed[0] << " ad_or_hyperlink=" << removed[1]
                << " history=" << removed[2] << " discarded_games=" << discarded << '\n';
      return kExitOk;
    }

    if (label->parsed()) {
      PipelineConfig config = MakeConfig(g);
      const std::vector<GameRecord> games = ReadCorpusFile(label_in);
      PipelineResources res = BuildResources(config, nullptr, {false, false, false});
      std::vector<AlignmentResult> results(games.size());
      AlignOptions options;
      options.min_similarity = label_min;
      ParallelFor(games.size(), config.workers, [&](std::size_t i) {
        results[i] = AlignGame(games[i], config.window, config.similarity, *res.semantic, options);
      });
      Output out(label_out);
      Output pairs(label_pairs);
      std::vector<AlignmentPair> all;
      std::size_t skipped = 0;
      for (std::size_t i = 0; i < games.size(); ++i) {
        out.Line(SerializeAlignment(results[i]));
        for (const RewritePair &p : EmitRewritePairs(games[i], results[i].pairs)) {
          pairs.Line(SerializeRewritePair(p));
        }
        skipped += results[i].skipped.size();
        for (const AlignmentPair &p : results[i].pairs) all.push_back(p);
      }
      out.Commit();
      if (!label_pairs.empty()) pairs.Commit();
      std::cerr << "pairs=" << all.size() << " skipped=" << skipped
                << " duplication_rate=" << FormatFixed(DuplicationRate(all), 4) << '\n';
      return kExitOk;
    }

    if (train_sel->parsed()) {
      PipelineConfig config = MakeConfig(g);
      const std::vector<GameRecord> games = ReadCorpusFile(ts_in);
      PipelineResources res = BuildResources(config, nullptr, {false, false, false});
      ImportanceModel model = TrainSelectorFromCorpus(games, config, *res.semantic);
      model.SaveFile(ts_out);
      return kExitOk;
    }

    if (train_lm->parsed()) {
      PipelineConfig config = MakeConfig(g);
      TrainFluencyLm(ReadCorpusFile(tl_in), config.lm).SaveFile(tl_out);
      return kExitOk;
    }

    if (select->parsed()) {
      PipelineConfig config = MakeConfig(g);
      if (!sel_model.empty()) config.selector_model_path = sel_model;
      if (sel_threshold) {
        config.selection.kind = SelectionPolicy::Kind::kThreshold;
        config.selection.threshold = *sel_threshold;
      }
      if (sel_top_k) {
        config.selection.kind = SelectionPolicy::Kind::kTopK;
        config.selection.top_k = *sel_top_k;
      }
      config.Validate();
      const std::vector<GameRecord> games = ReadCorpusFile(sel_in);
      PipelineResources res = Resources(config, {true, false, false});
      std::vector<SelectionRecord> records(games.size());
      ParallelFor(games.size(), config.workers, [&](std::size_t i) {
        records[i].game_id = games[i].game_id;
        records[i].scores = ScoreGame(games[i], config, res);
        records[i].selected_indices = Select(records[i].scores, config.selection);
      });
      Output out(sel_out);
      for (const SelectionRecord &r : records) out.Line(SerializeSelection(r));
      out.Commit();
      return kExitOk;
    }

    if (rewrite->parsed()) {
      PipelineConfig config = MakeConfig(g);
      const std::vector<GameRecord> games = ReadCorpusFile(rw_in);
      std::map<std::string, const GameRecord *> by_id;
      for (const GameRecord &game : games) by_id[game.game_id] = &game;
      std::vector<SelectionRecord> selections;
      for (const std::string &line : ReadLines(rw_selection)) {
        selections.push_back(ParseSelection(line));
      }
      PipelineResources res = BuildResources(config, nullptr, {false, false, false});
      std::vector<CandidateRecord> records(selections.size());
      ParallelFor(selections.size(), config.workers, [&](std::size_t i) {
        const SelectionRecord &s = selections[i];
        auto it = by_id.find(s.game_id);
        if (it == by_id.end()) {
          throw Error(ErrorCode::kMissingReference, "game '" + s.game_id + "' not in corpus");
        }
        if (s.scores.size() != it->second->commentary.size()) {
          throw Error(ErrorCode::kMalformedRecord,
                      "score count does not match commentary of '" + s.game_id + "'");
        }
        records[i].game_id = s.game_id;
        records[i].candidates =
            RewriteSelected(*it->second, s.selected_indices, s.scores, *res.rewriter);
      });
      Output out(rw_out);
      for (const CandidateRecord &r : records) out.Line(SerializeCandidates(r));
      out.Commit();
      return kExitOk;
    }

    if (rerank->parsed()) {
      PipelineConfig config = MakeConfig(g);
      if (!rr_lm.empty()) config.lm_path = rr_lm;
      if (rr_budget) {
        config.mmr.budget = *rr_budget;
        config.mmr.budget_policy = BudgetPolicy::kFixed;
      }
      if (rr_l1) config.mmr.lambda1 = *rr_l1;
      if (rr_l2) config.mmr.lambda2 = *rr_l2;
      if (rr_l3) config.mmr.lambda3 = *rr_l3;
      if (rr_eta) config.mmr.eta = *rr_eta;
      config.Validate();
      std::vector<CandidateRecord> records;
      for (const std::string &line : ReadLines(rr_in)) records.push_back(ParseCandidates(line));
      PipelineResources res = Resources(config, {false, true, true});
      std::vector<GameOutput> outputs(records.size());
      ParallelFor(records.size(), config.workers, [&](std::size_t i) {
        outputs[i] = RerankCandidates(records[i].game_id, std::move(records[i].candidates),
                                      config, res);
      });
      Output out(rr_out);
      for (const GameOutput &o : outputs) {
        for (const std::string &w : o.warnings) Warn(o.game_id, w);
        out.Line(SerializeGameOutput(o, config.article_separator));
      }
      out.Commit();
      return kExitOk;
    }

    if (pipeline->parsed()) {
      PipelineConfig config = MakeConfig(g);
      if (!sel_model.empty()) config.selector_model_path = sel_model;
      if (!rr_lm.empty()) config.lm_path = rr_lm;
      const std::vector<GameRecord> games = ReadCorpusFile(pl_in);
      PipelineResources res = Resources(config, {});
      PipelineRun run = RunPipeline(games, config, res);
      Output out(pl_out);
      for (const GameOutput &o : run.outputs) out.Line(SerializeGameOutput(o, config.article_separator));
      out.Commit();
      if (!pl_manifest.empty()) {
        Output manifest(pl_manifest);
        manifest.Line(run.manifest.ToJson(run.outputs));
        manifest.Commit();
      }
      for (const auto &[id, w] : run.manifest.warnings) Warn(id, w);
      for (const auto &[id, err] : run.manifest.failures) {
        std::cerr << "error: " << id << ": " << err << '\n';
      }
      if (run.outputs.empty() && !games.empty()) {
        return run.manifest.service_failures > 0 ? kExitService : kExitData;
      }
      return kExitOk;
    }

    if (evaluate->parsed()) {
      std::map<std::string, std::string> generated;
      for (const std::string &line : ReadLines(ev_generated)) {
        auto [id, text] = ParseGeneratedArticle(line);
        if (!generated.emplace(id, text).second) {
          throw Error(ErrorCode::kMalformedRecord, "duplicate game_id '" + id + "'");
        }
      }
      const EvalReport report = Evaluate(generated, ReferenceArticles(ReadCorpusFile(ev_refs)),
                                         ParseTokenization(ev_tok));
      std::cout << report.Format();
      return kExitOk;
    }

    if (split->parsed()) {
      PipelineConfig config = MakeConfig(g);
      const std::vector<GameRecord> games = ReadCorpusFile(sp_in);
      SplitCounts counts;
      if (!sp_counts.empty()) {
        counts = {sp_counts[0], sp_counts[1], sp_counts[2]};
      } else if (!sp_ratios.empty()) {
        counts = CountsFromRatios(games.size(), sp_ratios[0], sp_ratios[1], sp_ratios[2]);
      } else {
        throw CLI::RequiredError("--counts or --ratios");
      }
      std::vector<std::string> ids;
      for (const GameRecord &game : games) ids.push_back(game.game_id);
      const SplitManifest manifest = SplitCorpus(ids, counts, config.seed);
      std::map<std::string, const GameRecord *> by_id;
      for (const GameRecord &game : games) by_id[game.game_id] = &game;
      auto write = [&](const std::string &name, const std::vector<std::string> &members) {
        Output out((fs::path(sp_dir) / (name + ".jsonl")).string());
        for (const std::string &id : members) out.Line(SerializeGame(*by_id.at(id)));
        out.Commit();
      };
      write("train", manifest.train);
      write("valid", manifest.valid);
      write("test", manifest.test);
      Output m((fs::path(sp_dir) / "manifest.json").string());
      m.Line(manifest.ToJson());
      m.Commit();
      return kExitOk;
    }
  } catch (const CLI::ParseError &e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    if (IsServiceError(e.code())) return kExitService;
    if (e.code() == ErrorCode::kInvalidConfig) return kExitUsage;
    return kExitData;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
