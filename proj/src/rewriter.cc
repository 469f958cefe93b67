#include "sportsnews/rewriter.h"

#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "sportsnews/error.h"
#include "sportsnews/labeling.h"
#include "sportsnews/text.h"

namespace sportsnews {

TemplateRules TemplateRules::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  TemplateRules rules;
  try {
    nlohmann::json doc = nlohmann::json::parse(in);
    rules.minute_template = doc.value("minute_template", rules.minute_template);
    rules.minute_template_cjk =
        doc.value("minute_template_cjk", rules.minute_template_cjk);
    rules.strip_exclamations =
        doc.value("strip_exclamations", rules.strip_exclamations);
    if (doc.contains("substitutions")) {
      rules.substitutions.clear();
      for (const auto &e : doc.at("substitutions")) {
        rules.substitutions.emplace_back(e.at(0).get<std::string>(),
                                         e.at(1).get<std::string>());
      }
    }
  } catch (const std::exception &e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("rewrite rules: ") + e.what());
  }
  return rules;
}

std::string OrdinalSuffix(int n) {
  const int mod100 = n % 100;
  if (mod100 >= 11 && mod100 <= 13) return "th";
  switch (n % 10) {
    case 1: return "st";
    case 2: return "nd";
    case 3: return "rd";
    default: return "th";
  }
}

namespace {

void ReplaceAll(std::string &s, std::string_view from, std::string_view to) {
  if (from.empty()) return;
  std::string out;
  std::size_t pos = 0;
  for (;;) {
    std::size_t hit = s.find(from, pos);
    if (hit == std::string::npos) break;
    out.append(s, pos, hit - pos);
    out.append(to);
    pos = hit + from.size();
  }
  out.append(s, pos, std::string::npos);
  s.swap(out);
}

std::string StripExclamations(std::string_view text) {
  std::string out;
  std::size_t i = 0;
  static constexpr std::string_view kFullwidth = "\xEF\xBC\x81";  // ！
  while (i < text.size()) {
    bool ascii = text[i] == '!';
    bool wide = text.substr(i).starts_with(kFullwidth);
    if (!ascii && !wide) {
      out.push_back(text[i++]);
      continue;
    }
    bool any_wide = false;
    while (i < text.size()) {
      if (text[i] == '!') {
        ++i;
      } else if (text.substr(i).starts_with(kFullwidth)) {
        any_wide = true;
        i += kFullwidth.size();
      } else {
        break;
      }
    }
    out += any_wide ? "\xE3\x80\x82" : ".";  // 。
  }
  return out;
}

std::string CollapseSpaces(std::string_view text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      space = true;
      continue;
    }
    if (space && !out.empty()) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

std::string FillTemplate(std::string tmpl, int minute) {
  ReplaceAll(tmpl, "{ordinal}", std::to_string(minute) + OrdinalSuffix(minute));
  ReplaceAll(tmpl, "{minute}", std::to_string(minute));
  return tmpl;
}

std::string RewriteOnce(std::string_view source, const TemplateRules &rules) {
  static const std::regex kMinutePrefix(R"(^(\d{1,3})(?:\+\d{1,2})?'\s*)");
  const std::string trimmed = Trim(source);

  std::optional<int> minute;
  std::string body = trimmed;
  std::smatch m;
  if (std::regex_search(trimmed, m, kMinutePrefix)) {
    minute = std::stoi(m[1].str());
    body = m.suffix().str();
  }

  for (int round = 0; round < 16; ++round) {
    const std::string before = body;
    for (const auto &[from, to] : rules.substitutions) ReplaceAll(body, from, to);
    if (body == before) break;
  }
  if (rules.strip_exclamations) body = StripExclamations(body);
  body = CollapseSpaces(body);

  if (TrimView(body).empty()) return trimmed.empty() ? std::string(source) : trimmed;
  if (!minute) return body;
  const std::string &tmpl =
      ContainsCjk(body) ? rules.minute_template_cjk : rules.minute_template;
  return FillTemplate(tmpl, *minute) + body;
}

}  // namespace

std::string TemplateRewrite(std::string_view source, const TemplateRules &rules) {
  // Substitutions can expose a minute prefix; iterate so a second call is a no-op.
  std::string text = RewriteOnce(source, rules);
  for (int round = 0; round < 8; ++round) {
    std::string next = RewriteOnce(text, rules);
    if (next == text) break;
    text = std::move(next);
  }
  return text;
}

TemplateRewriter::TemplateRewriter(TemplateRules rules) : rules_(std::move(rules)) {}

std::vector<std::string> TemplateRewriter::Rewrite(
    std::span<const RewriteRequest> batch) const {
  std::vector<std::string> out;
  out.reserve(batch.size());
  for (const RewriteRequest &r : batch) out.push_back(TemplateRewrite(r.source, rules_));
  return out;
}

RemoteRewriter::RemoteRewriter(std::shared_ptr<ServiceClient> client,
                               bool fallback, TemplateRules rules)
    : client_(std::move(client)), fallback_(fallback), rules_(std::move(rules)) {}

std::vector<std::string> RemoteRewriter::Rewrite(
    std::span<const RewriteRequest> batch) const {
  std::vector<std::string> sources;
  sources.reserve(batch.size());
  for (const RewriteRequest &r : batch) sources.push_back(r.source);

  std::vector<std::optional<std::string>> remote;
  try {
    remote = client_->Rewrite(sources);
  } catch (const Error &e) {
    if (!fallback_ || e.code() != ErrorCode::kServiceUnavailable) throw;
    remote.assign(batch.size(), std::nullopt);
  }
  std::vector<std::string> out;
  out.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (remote[i] && !TrimView(*remote[i]).empty()) {
      out.push_back(*remote[i]);
    } else if (fallback_) {
      out.push_back(TemplateRewrite(sources[i], rules_));
    } else {
      throw ItemFailure(i, "service returned no rewrite for '" + sources[i] + "'");
    }
  }
  return out;
}

std::vector<RewriteRequest> MakeRewriteRequests(
    const GameRecord &game, const std::vector<std::size_t> &selected) {
  std::vector<RewriteRequest> requests;
  requests.reserve(selected.size());
  for (std::size_t j : selected) {
    if (j >= game.commentary.size()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "selected index " + std::to_string(j) + " outside game '" +
                      game.game_id + "'");
    }
    requests.push_back({FormatRewriteSource(game.commentary[j]), game.game_id, j});
  }
  return requests;
}

std::vector<RewrittenCandidate> RewriteSelected(
    const GameRecord &game, const std::vector<std::size_t> &selected,
    const std::vector<double> &scores, const Rewriter &rewriter) {
  if (scores.size() != game.commentary.size()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "expected one score per commentary event of '" + game.game_id + "'");
  }
  std::vector<RewriteRequest> requests = MakeRewriteRequests(game, selected);
  std::vector<std::string> texts = rewriter.Rewrite(requests);
  if (texts.size() != requests.size()) {
    throw Error(ErrorCode::kProtocolError, "rewriter changed the batch size");
  }
  std::vector<RewrittenCandidate> out;
  out.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const std::size_t j = requests[i].commentary_index;
    RewrittenCandidate c;
    c.text = std::move(texts[i]);
    c.info = scores[j];
    c.commentary_index = j;
    c.source_minute = game.commentary[j].minute;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace sportsnews
