#ifndef SPORTSNEWS_NOISE_H_
#define SPORTSNEWS_NOISE_H_

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sportsnews/corpus.h"

namespace sportsnews {

enum class NoiseClass { kOtherGame, kHistory, kAdOrHyperlink };

const char *NoiseClassName(NoiseClass cls);
NoiseClass ParseNoiseClass(std::string_view name);

// How a rule's patterns are applied to a news sentence.
//  kSubstring:     any pattern occurs (ASCII case-insensitive).
//  kRegex:         any ECMAScript pattern matches (case-insensitive).
//  kStartKeyword:  every sentence before the first one containing a pattern.
//  kForeignTeams:  the sentence mentions at least `min_teams` teams whose
//                  aliases never appear in the game's commentary.
enum class RuleKind { kSubstring, kRegex, kStartKeyword, kForeignTeams };

struct NoiseRule {
  std::string id;
  NoiseClass cls = NoiseClass::kAdOrHyperlink;
  RuleKind kind = RuleKind::kSubstring;
  std::vector<std::string> patterns;
  int min_teams = 2;
};

struct TeamAliases {
  std::string name;
  std::vector<std::string> aliases;
};

struct NoiseRules {
  std::vector<TeamAliases> teams;
  std::vector<NoiseRule> rules;
};

// Shipped English and Chinese pattern lists. No teams: those are corpus
// specific and come from configuration.
NoiseRules DefaultNoiseRules();
NoiseRules LoadNoiseRules(const std::string &path);
NoiseRules ParseNoiseRules(std::string_view json_text);

struct NoiseFlag {
  std::size_t news_index = 0;
  NoiseClass cls = NoiseClass::kAdOrHyperlink;
  std::string rule_id;

  bool operator==(const NoiseFlag &) const = default;
};

struct NoiseReport {
  std::string game_id;
  // Sorted by (news_index, class, rule_id), no duplicates.
  std::vector<NoiseFlag> flags;

  bool operator==(const NoiseReport &) const = default;
};

NoiseReport DetectNoise(const GameRecord &game, const NoiseRules &rules);

std::string SerializeNoiseReport(const NoiseReport &report);
NoiseReport ParseNoiseReport(std::string_view line);

struct CleanResult {
  GameRecord game;
  // Set when nothing is left of the news article.
  bool discardable = false;
  // News after each removal pass: other games, ads/hyperlinks, history.
  std::array<std::vector<NewsSentence>, 3> passes;
};

// Throws Error(kMismatchedReport) when the report belongs to another game and
// Error(kIndexOutOfRange) for flags outside the article.
CleanResult CleanNews(const GameRecord &game, const NoiseReport &report);

}  // namespace sportsnews

#endif  // SPORTSNEWS_NOISE_H_
