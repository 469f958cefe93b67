#include "sportsnews/selector.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <unordered_map>

#include <json.hpp>

#include "sportsnews/error.h"

namespace sportsnews {

namespace {

constexpr const char *kModelFormat = "sportsnews-selector";
constexpr int kModelVersion = 1;
constexpr std::size_t kDenseFeatures = 3;

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z))
double Softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

}  // namespace

ContextWindow BuildContextWindow(const GameRecord &game,
                                 std::size_t target_index, std::size_t cap,
                                 Tokenization tokenization) {
  if (target_index >= game.commentary.size()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "target " + std::to_string(target_index) + " outside game '" +
                    game.game_id + "'");
  }
  if (cap < 3) throw Error(ErrorCode::kInvalidConfig, "context cap must be >= 3");

  auto tokens_of = [&](std::size_t j) {
    return Tokenize(game.commentary[j].text, tokenization);
  };

  ContextWindow w;
  w.target_index = target_index;
  w.game_size = game.commentary.size();
  w.first_sentence = w.last_sentence = target_index;

  Tokens target = tokens_of(target_index);
  if (target.size() + 2 > cap) {
    target.resize(cap - 2);
    w.truncated = true;
  }
  std::size_t used = target.size() + 2;

  std::vector<Tokens> before;  // nearest first
  std::vector<Tokens> after;
  bool before_open = target_index > 0 && !w.truncated;
  bool after_open = target_index + 1 < game.commentary.size() && !w.truncated;
  bool before_turn = true;
  while (before_open || after_open) {
    const bool take_before = before_open && (before_turn || !after_open);
    if (take_before) {
      Tokens s = tokens_of(w.first_sentence - 1);
      if (used + s.size() + 1 <= cap) {
        used += s.size() + 1;
        before.push_back(std::move(s));
        --w.first_sentence;
        before_open = w.first_sentence > 0;
      } else {
        before_open = false;
      }
    } else {
      Tokens s = tokens_of(w.last_sentence + 1);
      if (used + s.size() + 1 <= cap) {
        used += s.size() + 1;
        after.push_back(std::move(s));
        ++w.last_sentence;
        after_open = w.last_sentence + 1 < game.commentary.size();
      } else {
        after_open = false;
      }
    }
    before_turn = !take_before;
  }

  w.tokens.reserve(used);
  w.tokens.push_back(kClsToken);
  for (auto it = before.rbegin(); it != before.rend(); ++it) {
    w.tokens.insert(w.tokens.end(), it->begin(), it->end());
    w.tokens.push_back(kSepToken);
  }
  w.target_begin = w.tokens.size();
  w.tokens.insert(w.tokens.end(), target.begin(), target.end());
  w.target_end = w.tokens.size();
  w.tokens.push_back(kSepToken);
  for (const Tokens &s : after) {
    w.tokens.insert(w.tokens.end(), s.begin(), s.end());
    w.tokens.push_back(kSepToken);
  }
  return w;
}

std::size_t FeatureSpec::Dimensions() const { return hash_dims + kDenseFeatures; }

SparseVector Featurize(const ContextWindow &window, const FeatureSpec &spec) {
  std::map<std::size_t, double> features;
  const std::size_t target_len = window.target_end - window.target_begin;
  if (target_len > 0) {
    const double pool = 1.0 / static_cast<double>(target_len);
    for (int n = 1; n <= spec.max_ngram; ++n) {
      if (target_len < static_cast<std::size_t>(n)) break;
      for (std::size_t i = window.target_begin; i + n <= window.target_end; ++i) {
        std::string gram = "t" + std::to_string(n) + ":";
        for (int k = 0; k < n; ++k) {
          if (k > 0) gram.push_back('\x1f');
          gram += window.tokens[i + k];
        }
        features[Fnv1a64(gram) % spec.hash_dims] += pool;
      }
    }
  }
  if (spec.context_features) {
    std::vector<const std::string *> context;
    for (std::size_t i = 0; i < window.tokens.size(); ++i) {
      if (i >= window.target_begin && i < window.target_end) continue;
      const std::string &tok = window.tokens[i];
      if (tok == kClsToken || tok == kSepToken) continue;
      context.push_back(&tok);
    }
    if (!context.empty()) {
      const double pool = 1.0 / static_cast<double>(context.size());
      for (const std::string *tok : context) {
        features[Fnv1a64("c:" + *tok) % spec.hash_dims] += pool;
      }
    }
  }
  const double rel_position =
      window.game_size > 1 ? static_cast<double>(window.target_index) /
                                 static_cast<double>(window.game_size - 1)
                           : 0.0;
  features[spec.hash_dims + 0] = rel_position;
  features[spec.hash_dims + 1] =
      std::log1p(static_cast<double>(target_len)) /
      std::log1p(static_cast<double>(spec.context_cap));
  features[spec.hash_dims + 2] = window.truncated ? 1.0 : 0.0;
  SparseVector out;
  out.reserve(features.size());
  for (const auto &[k, v] : features) {
    if (v != 0.0) out.emplace_back(k, v);
  }
  return out;
}

double ImportanceModel::Logit(const SparseVector &features) const {
  double z = bias;
  auto it = weights.begin();
  for (const auto &[k, v] : features) {
    it = std::lower_bound(it, weights.end(), k,
                          [](const std::pair<std::size_t, double> &w,
                             std::size_t key) { return w.first < key; });
    if (it == weights.end()) break;
    if (it->first == k) z += it->second * v;
  }
  return z;
}

double ImportanceModel::Score(const ContextWindow &window) const {
  if (!trained) throw Error(ErrorCode::kModelNotTrained, "selector not trained");
  // Keep scores inside the open interval even when the logit saturates.
  return std::clamp(Sigmoid(Logit(Featurize(window, spec))),
                    std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
}

void ImportanceModel::Save(std::ostream &out) const {
  if (!trained) throw Error(ErrorCode::kModelNotTrained, "selector not trained");
  nlohmann::ordered_json doc;
  doc["format"] = kModelFormat;
  doc["version"] = kModelVersion;
  doc["spec"] = {{"hash_dims", spec.hash_dims},
                 {"max_ngram", spec.max_ngram},
                 {"context_features", spec.context_features},
                 {"context_cap", spec.context_cap},
                 {"tokenization", TokenizationName(spec.tokenization)}};
  doc["bias"] = bias;
  nlohmann::ordered_json w = nlohmann::ordered_json::array();
  for (const auto &[k, v] : weights) w.push_back({k, v});
  doc["weights"] = std::move(w);
  out << doc.dump() << '\n';
}

ImportanceModel ImportanceModel::Load(std::istream &in) {
  ImportanceModel model;
  try {
    nlohmann::json doc = nlohmann::json::parse(in);
    if (doc.at("format").get<std::string>() != kModelFormat ||
        doc.at("version").get<int>() != kModelVersion) {
      throw std::runtime_error("unsupported selector model format/version");
    }
    const auto &s = doc.at("spec");
    model.spec.hash_dims = s.at("hash_dims").get<std::size_t>();
    model.spec.max_ngram = s.at("max_ngram").get<int>();
    model.spec.context_features = s.at("context_features").get<bool>();
    model.spec.context_cap = s.at("context_cap").get<std::size_t>();
    model.spec.tokenization =
        ParseTokenization(s.at("tokenization").get<std::string>());
    model.bias = doc.at("bias").get<double>();
    for (const auto &e : doc.at("weights")) {
      model.weights.emplace_back(e.at(0).get<std::size_t>(),
                                 e.at(1).get<double>());
    }
    if (!std::is_sorted(model.weights.begin(), model.weights.end())) {
      throw std::runtime_error("weights not sorted by index");
    }
  } catch (const Error &) {
    throw;
  } catch (const std::exception &e) {
    throw Error(ErrorCode::kMalformedRecord,
                std::string("selector model: ") + e.what());
  }
  model.trained = true;
  return model;
}

void ImportanceModel::SaveFile(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  Save(out);
}

ImportanceModel ImportanceModel::LoadFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return Load(in);
}

ImportanceModel TrainSelector(const std::vector<LabeledWindow> &examples,
                              const FeatureSpec &spec, const TrainHyper &hyper,
                              TrainReport *report) {
  const bool any_pos = std::any_of(examples.begin(), examples.end(),
                                   [](const LabeledWindow &e) { return e.positive; });
  const bool any_neg = std::any_of(examples.begin(), examples.end(),
                                   [](const LabeledWindow &e) { return !e.positive; });
  if (!any_pos || !any_neg) {
    throw Error(ErrorCode::kDegenerateLabels,
                "selector training needs positive and negative examples");
  }
  if (hyper.epochs < 0 || !(hyper.learning_rate > 0) || hyper.l2 < 0 ||
      !(hyper.positive_weight > 0)) {
    throw Error(ErrorCode::kInvalidConfig, "bad selector hyper-parameters");
  }

  // Compact the hashed space to the features seen in training.
  std::vector<SparseVector> global;
  global.reserve(examples.size());
  std::map<std::size_t, std::size_t> local_of;
  for (const LabeledWindow &e : examples) {
    global.push_back(Featurize(e.window, spec));
    for (const auto &[k, v] : global.back()) local_of.emplace(k, 0);
  }
  std::vector<std::size_t> global_of;
  global_of.reserve(local_of.size());
  for (auto &[k, local] : local_of) {
    local = global_of.size();
    global_of.push_back(k);
  }
  std::vector<SparseVector> x;
  x.reserve(global.size());
  for (const SparseVector &g : global) {
    SparseVector local;
    local.reserve(g.size());
    for (const auto &[k, v] : g) local.emplace_back(local_of.at(k), v);
    x.push_back(std::move(local));
  }
  std::vector<double> y, c;
  double c_total = 0;
  for (const LabeledWindow &e : examples) {
    y.push_back(e.positive ? 1.0 : 0.0);
    c.push_back(e.positive ? hyper.positive_weight : 1.0);
    c_total += c.back();
  }

  std::mt19937_64 rng(hyper.seed);
  std::vector<double> w(global_of.size());
  for (double &wi : w) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    wi = (2.0 * u - 1.0) * hyper.init_scale;
  }
  double b = 0.0;

  auto objective = [&](const std::vector<double> &wv, double bv) {
    double loss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double z = bv;
      for (const auto &[k, v] : x[i]) z += wv[k] * v;
      loss += c[i] * (y[i] > 0.5 ? Softplus(-z) : Softplus(z));
    }
    double reg = 0;
    for (double wi : wv) reg += wi * wi;
    return loss / c_total + 0.5 * hyper.l2 * reg;
  };

  double loss = objective(w, b);
  double lr = hyper.learning_rate;
  std::vector<double> gw(w.size()), w_next(w.size());
  if (report) report->loss.assign(1, loss);
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::fill(gw.begin(), gw.end(), 0.0);
    double gb = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double z = b;
      for (const auto &[k, v] : x[i]) z += w[k] * v;
      const double r = c[i] * (Sigmoid(z) - y[i]) / c_total;
      for (const auto &[k, v] : x[i]) gw[k] += r * v;
      gb += r;
    }
    for (std::size_t k = 0; k < w.size(); ++k) gw[k] += hyper.l2 * w[k];

    bool accepted = false;
    for (int halving = 0; halving < 40 && !accepted; ++halving) {
      for (std::size_t k = 0; k < w.size(); ++k) w_next[k] = w[k] - lr * gw[k];
      const double b_next = b - lr * gb;
      const double next_loss = objective(w_next, b_next);
      if (next_loss <= loss) {
        w.swap(w_next);
        b = b_next;
        loss = next_loss;
        accepted = true;
        lr *= 1.5;
      } else {
        lr *= 0.5;
      }
    }
    if (!accepted) break;
    if (report) report->loss.push_back(loss);
  }

  ImportanceModel model;
  model.spec = spec;
  model.bias = b;
  model.trained = true;
  model.weights.reserve(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    model.weights.emplace_back(global_of[k], w[k]);
  }
  return model;
}

std::vector<LabeledWindow> BuildTrainingExamples(
    const std::vector<GameRecord> &games,
    const std::vector<AlignmentResult> &alignments, const FeatureSpec &spec) {
  std::unordered_map<std::string, const AlignmentResult *> by_game;
  for (const AlignmentResult &a : alignments) by_game[a.game_id] = &a;
  std::vector<LabeledWindow> out;
  for (const GameRecord &g : games) {
    auto it = by_game.find(g.game_id);
    if (it == by_game.end()) continue;
    SelectorLabelSet labels = BuildSelectorLabels(g, it->second->pairs);
    for (const SelectorLabel &l : labels.labels) {
      out.push_back({BuildContextWindow(g, l.commentary_index, spec.context_cap,
                                        spec.tokenization),
                     l.positive});
    }
  }
  return out;
}

std::vector<double> ScoreCommentaries(const GameRecord &game,
                                      const ImportanceModel &model) {
  if (!model.trained) throw Error(ErrorCode::kModelNotTrained, "selector not trained");
  std::vector<double> scores;
  scores.reserve(game.commentary.size());
  for (std::size_t j = 0; j < game.commentary.size(); ++j) {
    scores.push_back(model.Score(BuildContextWindow(
        game, j, model.spec.context_cap, model.spec.tokenization)));
  }
  return scores;
}

std::vector<std::size_t> Select(const std::vector<double> &scores,
                                const SelectionPolicy &policy) {
  std::vector<std::size_t> out;
  if (policy.kind == SelectionPolicy::Kind::kThreshold) {
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] >= policy.threshold) out.push_back(i);
    }
    return out;
  }
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  order.resize(std::min(order.size(), policy.top_k));
  std::sort(order.begin(), order.end());
  return order;
}

double RocAuc(const std::vector<double> &scores, const std::vector<bool> &labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "scores and labels differ in length");
  }
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0, positives = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]]) {
        rank_sum += avg_rank;
        positives += 1;
      }
    }
    i = j;
  }
  const double negatives = static_cast<double>(scores.size()) - positives;
  if (positives == 0 || negatives == 0) return 0.5;
  return (rank_sum - positives * (positives + 1) / 2.0) / (positives * negatives);
}

}  // namespace sportsnews
