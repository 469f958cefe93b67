#include "sportsnews/noise.h"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "sportsnews/error.h"
#include "sportsnews/text.h"

namespace sportsnews {

using json = nlohmann::ordered_json;

const char *NoiseClassName(NoiseClass cls) {
  switch (cls) {
    case NoiseClass::kOtherGame: return "OtherGame";
    case NoiseClass::kHistory: return "History";
    case NoiseClass::kAdOrHyperlink: return "AdOrHyperlink";
  }
  return "Unknown";
}

NoiseClass ParseNoiseClass(std::string_view name) {
  if (name == "OtherGame") return NoiseClass::kOtherGame;
  if (name == "History") return NoiseClass::kHistory;
  if (name == "AdOrHyperlink") return NoiseClass::kAdOrHyperlink;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown noise class '" + std::string(name) + "'");
}

namespace {

RuleKind ParseRuleKind(std::string_view name) {
  if (name == "substring") return RuleKind::kSubstring;
  if (name == "regex") return RuleKind::kRegex;
  if (name == "start_keyword") return RuleKind::kStartKeyword;
  if (name == "foreign_teams") return RuleKind::kForeignTeams;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown rule kind '" + std::string(name) + "'");
}

bool ContainsFolded(std::string_view haystack_lower, std::string_view pattern) {
  std::string p = ToLowerAscii(pattern);
  return !p.empty() && haystack_lower.find(p) != std::string_view::npos;
}

bool ContainsAny(std::string_view haystack_lower,
                 const std::vector<std::string> &patterns) {
  return std::any_of(patterns.begin(), patterns.end(),
                     [&](const std::string &p) {
                       return ContainsFolded(haystack_lower, p);
                     });
}

}  // namespace

NoiseRules DefaultNoiseRules() {
  NoiseRules rules;
  rules.rules.push_back({"other_game.foreign_teams", NoiseClass::kOtherGame,
                         RuleKind::kForeignTeams, {}, 2});
  rules.rules.push_back(
      {"ad.url",
       NoiseClass::kAdOrHyperlink,
       RuleKind::kRegex,
       {R"((https?://|www\.)\S+)",
        R"(\b[a-z0-9][a-z0-9-]*\.(com|cn|net|org|tv|cc)\b)"},
       0});
  rules.rules.push_back(
      {"ad.marker",
       NoiseClass::kAdOrHyperlink,
       RuleKind::kSubstring,
       {"click here", "click the link", "download the app", "scan the qr code",
        "follow us on", "subscribe to", "sponsored by", "点击", "下载客户端",
        "扫码", "二维码", "关注我们", "更多精彩", "广告"},
       0});
  rules.rules.push_back(
      {"history.cue",
       NoiseClass::kHistory,
       RuleKind::kSubstring,
       {"head-to-head", "previous meeting", "last meeting", "last season",
        "historical record", "in their last", "历史交锋", "上赛季",
        "上一次交手", "过往交锋", "此前双方"},
       0});
  rules.rules.push_back(
      {"history.before_start",
       NoiseClass::kHistory,
       RuleKind::kStartKeyword,
       {"at the beginning of the game", "at the beginning of the match",
        "at the start of the game", "at the start of the match",
        "比赛一开始", "比赛开始后", "开场后"},
       0});
  return rules;
}

NoiseRules ParseNoiseRules(std::string_view json_text) {
  NoiseRules rules;
  try {
    json doc = json::parse(json_text);
    if (doc.contains("teams")) {
      for (const json &t : doc.at("teams")) {
        TeamAliases team;
        team.name = t.at("name").get<std::string>();
        team.aliases = t.at("aliases").get<std::vector<std::string>>();
        rules.teams.push_back(std::move(team));
      }
    }
    if (doc.contains("rules")) {
      for (const json &r : doc.at("rules")) {
        NoiseRule rule;
        rule.id = r.at("id").get<std::string>();
        rule.cls = ParseNoiseClass(r.at("class").get<std::string>());
        rule.kind = ParseRuleKind(r.at("kind").get<std::string>());
        if (r.contains("patterns")) {
          rule.patterns = r.at("patterns").get<std::vector<std::string>>();
        }
        rule.min_teams = r.value("min_teams", 2);
        rules.rules.push_back(std::move(rule));
      }
    } else {
      rules.rules = DefaultNoiseRules().rules;
    }
  } catch (const Error &) {
    throw;
  } catch (const std::exception &e) {
    throw Error(ErrorCode::kInvalidConfig,
                std::string("noise rules: ") + e.what());
  }
  return rules;
}

NoiseRules LoadNoiseRules(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseNoiseRules(buf.str());
}

NoiseReport DetectNoise(const GameRecord &game, const NoiseRules &rules) {
  NoiseReport report;
  report.game_id = game.game_id;
  std::vector<std::string> lowered;
  lowered.reserve(game.news.size());
  for (const NewsSentence &s : game.news) lowered.push_back(ToLowerAscii(s.text));

  std::string commentary_lower;
  for (const CommentaryEvent &ev : game.commentary) {
    commentary_lower += ToLowerAscii(ev.text);
    commentary_lower += '\n';
  }
  std::vector<const TeamAliases *> foreign;
  for (const TeamAliases &team : rules.teams) {
    if (!ContainsAny(commentary_lower, team.aliases)) foreign.push_back(&team);
  }

  std::set<std::tuple<std::size_t, int, std::string>> found;
  auto flag = [&](std::size_t i, const NoiseRule &rule) {
    found.emplace(i, static_cast<int>(rule.cls), rule.id);
  };

  for (const NoiseRule &rule : rules.rules) {
    switch (rule.kind) {
      case RuleKind::kSubstring:
        for (std::size_t i = 0; i < lowered.size(); ++i) {
          if (ContainsAny(lowered[i], rule.patterns)) flag(i, rule);
        }
        break;
      case RuleKind::kRegex: {
        std::vector<std::regex> compiled;
        for (const std::string &p : rule.patterns) {
          compiled.emplace_back(p, std::regex::ECMAScript | std::regex::icase);
        }
        for (std::size_t i = 0; i < lowered.size(); ++i) {
          for (const std::regex &re : compiled) {
            if (std::regex_search(game.news[i].text, re)) {
              flag(i, rule);
              break;
            }
          }
        }
        break;
      }
      case RuleKind::kStartKeyword:
        for (std::size_t i = 0; i < lowered.size(); ++i) {
          if (ContainsAny(lowered[i], rule.patterns)) {
            for (std::size_t k = 0; k < i; ++k) flag(k, rule);
            break;
          }
        }
        break;
      case RuleKind::kForeignTeams:
        for (std::size_t i = 0; i < lowered.size(); ++i) {
          int mentioned = 0;
          for (const TeamAliases *team : foreign) {
            if (ContainsAny(lowered[i], team->aliases)) ++mentioned;
          }
          if (mentioned >= rule.min_teams) flag(i, rule);
        }
        break;
    }
  }
  for (const auto &[index, cls, id] : found) {
    report.flags.push_back({index, static_cast<NoiseClass>(cls), id});
  }
  return report;
}

std::string SerializeNoiseReport(const NoiseReport &report) {
  json obj;
  obj["game_id"] = report.game_id;
  json flags = json::array();
  for (const NoiseFlag &f : report.flags) {
    json e;
    e["news_index"] = f.news_index;
    e["class"] = NoiseClassName(f.cls);
    e["rule"] = f.rule_id;
    flags.push_back(std::move(e));
  }
  obj["flags"] = std::move(flags);
  return obj.dump();
}

NoiseReport ParseNoiseReport(std::string_view line) {
  NoiseReport report;
  try {
    json obj = json::parse(line);
    report.game_id = obj.at("game_id").get<std::string>();
    for (const json &f : obj.at("flags")) {
      report.flags.push_back({f.at("news_index").get<std::size_t>(),
                              ParseNoiseClass(f.at("class").get<std::string>()),
                              f.at("rule").get<std::string>()});
    }
  } catch (const Error &) {
    throw;
  } catch (const std::exception &e) {
    throw Error(ErrorCode::kMalformedRecord,
                std::string("noise report: ") + e.what());
  }
  return report;
}

CleanResult CleanNews(const GameRecord &game, const NoiseReport &report) {
  if (report.game_id != game.game_id) {
    throw Error(ErrorCode::kMismatchedReport,
                "report for '" + report.game_id + "' applied to '" +
                    game.game_id + "'");
  }
  std::vector<bool> remove_in_pass[3];
  for (auto &v : remove_in_pass) v.assign(game.news.size(), false);
  for (const NoiseFlag &f : report.flags) {
    if (f.news_index >= game.news.size()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "flag index " + std::to_string(f.news_index) +
                      " outside news of '" + game.game_id + "'");
    }
    int pass = f.cls == NoiseClass::kOtherGame       ? 0
               : f.cls == NoiseClass::kAdOrHyperlink ? 1
                                                     : 2;
    remove_in_pass[pass][f.news_index] = true;
  }

  CleanResult result;
  std::vector<bool> removed(game.news.size(), false);
  for (int pass = 0; pass < 3; ++pass) {
    std::vector<NewsSentence> &snapshot = result.passes[pass];
    for (std::size_t i = 0; i < game.news.size(); ++i) {
      removed[i] = removed[i] || remove_in_pass[pass][i];
      if (!removed[i]) snapshot.push_back(game.news[i]);
    }
  }
  result.game = game;
  result.game.news = result.passes[2];
  result.discardable = result.game.news.empty();
  return result;
}

}  // namespace sportsnews
