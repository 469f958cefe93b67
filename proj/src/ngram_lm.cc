#include "sportsnews/ngram_lm.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "sportsnews/error.h"

namespace sportsnews {

namespace {

constexpr const char *kFormat = "sportsnews-ngram-lm";
constexpr int kVersion = 1;

}  // namespace

std::string NgramLm::Key(std::span<const std::string> tokens) {
  std::string key;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) key.push_back('\x1f');
    key += tokens[i];
  }
  return key;
}

NgramLm NgramLm::Train(const std::vector<Tokens> &corpus, int order,
                       double alpha) {
  if (order < 1) throw Error(ErrorCode::kInvalidConfig, "LM order must be >= 1");
  if (!(alpha > 0)) throw Error(ErrorCode::kInvalidConfig, "LM alpha must be > 0");
  NgramLm lm;
  lm.order_ = order;
  lm.alpha_ = alpha;
  lm.counts_.resize(order);
  for (const Tokens &sentence : corpus) {
    for (int n = 1; n <= order; ++n) {
      for (std::size_t i = 0; i + n <= sentence.size(); ++i) {
        ++lm.counts_[n - 1][Key(std::span(sentence).subspan(i, n))];
      }
    }
    lm.total_tokens_ += sentence.size();
  }
  if (lm.total_tokens_ == 0) {
    throw Error(ErrorCode::kEmptyCorpus, "LM training corpus has no tokens");
  }
  lm.vocab_size_ = lm.counts_[0].size();
  lm.RebuildContexts();
  return lm;
}

void NgramLm::RebuildContexts() {
  contexts_.assign(order_, {});
  for (int n = 2; n <= order_; ++n) {
    for (const auto &[key, c] : counts_[n - 1]) {
      contexts_[n - 1][key.substr(0, key.rfind('\x1f'))] += c;
    }
  }
}

std::uint64_t NgramLm::Count(const Tokens &ngram) const {
  if (ngram.empty() || static_cast<int>(ngram.size()) > order_) return 0;
  const auto &table = counts_[ngram.size() - 1];
  auto it = table.find(Key(ngram));
  return it == table.end() ? 0 : it->second;
}

std::size_t NgramLm::NumDistinct(int n) const {
  if (n < 1 || n > order_) return 0;
  return counts_[n - 1].size();
}

double NgramLm::LogProb(std::span<const std::string> history,
                        const std::string &token) const {
  if (!trained()) throw Error(ErrorCode::kModelNotTrained, "LM not trained");
  const std::size_t h = std::min(history.size(),
                                 static_cast<std::size_t>(order_ - 1));
  std::span<const std::string> ctx = history.subspan(history.size() - h, h);
  const int n = static_cast<int>(h) + 1;

  double context_count = 0;
  if (n == 1) {
    context_count = static_cast<double>(total_tokens_);
  } else {
    auto it = contexts_[n - 1].find(Key(ctx));
    if (it != contexts_[n - 1].end()) context_count = static_cast<double>(it->second);
  }
  std::string key = Key(ctx);
  if (n > 1) key.push_back('\x1f');
  key += token;
  double count = 0;
  auto it = counts_[n - 1].find(key);
  if (it != counts_[n - 1].end()) count = static_cast<double>(it->second);
  return std::log((count + alpha_) /
                  (context_count + alpha_ * static_cast<double>(vocab_size_)));
}

double NgramLm::Perplexity(const Tokens &tokens) const {
  if (!trained()) throw Error(ErrorCode::kModelNotTrained, "LM not trained");
  if (tokens.empty()) throw Error(ErrorCode::kEmptyText, "no tokens to score");
  double total = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    total += LogProb(std::span(tokens).first(i), tokens[i]);
  }
  return std::exp(-total / static_cast<double>(tokens.size()));
}

void NgramLm::Save(std::ostream &out) const {
  if (!trained()) throw Error(ErrorCode::kModelNotTrained, "LM not trained");
  nlohmann::ordered_json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["order"] = order_;
  doc["alpha"] = alpha_;
  doc["vocab_size"] = vocab_size_;
  doc["total_tokens"] = total_tokens_;
  nlohmann::ordered_json tables = nlohmann::ordered_json::array();
  for (const auto &table : counts_) {
    // Sorted so the file is byte-stable.
    std::set<std::pair<std::string, std::uint64_t>> sorted(table.begin(),
                                                           table.end());
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto &[key, c] : sorted) entries.push_back({key, c});
    tables.push_back(std::move(entries));
  }
  doc["counts"] = std::move(tables);
  out << doc.dump() << '\n';
}

NgramLm NgramLm::Load(std::istream &in) {
  NgramLm lm;
  try {
    nlohmann::json doc = nlohmann::json::parse(in);
    if (doc.at("format").get<std::string>() != kFormat ||
        doc.at("version").get<int>() != kVersion) {
      throw std::runtime_error("unsupported LM file format/version");
    }
    lm.order_ = doc.at("order").get<int>();
    lm.alpha_ = doc.at("alpha").get<double>();
    lm.vocab_size_ = doc.at("vocab_size").get<std::size_t>();
    lm.total_tokens_ = doc.at("total_tokens").get<std::uint64_t>();
    const auto &tables = doc.at("counts");
    if (lm.order_ < 1 || tables.size() != static_cast<std::size_t>(lm.order_)) {
      throw std::runtime_error("count tables do not match order");
    }
    lm.counts_.resize(lm.order_);
    for (int n = 0; n < lm.order_; ++n) {
      for (const auto &entry : tables[n]) {
        lm.counts_[n][entry.at(0).get<std::string>()] =
            entry.at(1).get<std::uint64_t>();
      }
    }
  } catch (const std::exception &e) {
    throw Error(ErrorCode::kMalformedRecord, std::string("LM file: ") + e.what());
  }
  lm.RebuildContexts();
  return lm;
}

void NgramLm::SaveFile(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  Save(out);
}

NgramLm NgramLm::LoadFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return Load(in);
}

LmFluencyScorer::LmFluencyScorer(std::shared_ptr<const NgramLm> lm,
                                 Tokenization tokenization)
    : lm_(std::move(lm)), tokenization_(tokenization) {
  if (!lm_ || !lm_->trained()) {
    throw Error(ErrorCode::kModelNotTrained, "fluency LM not trained");
  }
}

std::vector<double> LmFluencyScorer::Perplexities(
    std::span<const std::string> texts) const {
  std::vector<double> out;
  out.reserve(texts.size());
  for (const std::string &t : texts) {
    out.push_back(lm_->Perplexity(Tokenize(t, tokenization_)));
  }
  return out;
}

}  // namespace sportsnews
