#ifndef SPORTSNEWS_TEXT_H_
#define SPORTSNEWS_TEXT_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sportsnews {

using Tokens = std::vector<std::string>;

// Token granularity shared by ROUGE, the language model and the selector.
//  kChar: every non-whitespace code point is a token (ASCII lowercased).
//  kWord: runs of ASCII letters/digits form one token (lowercased), every
//         other non-space, non-punctuation code point (CJK etc.) is its own
//         token, punctuation is dropped.
enum class Tokenization { kChar, kWord };

const char *TokenizationName(Tokenization tokenization);
Tokenization ParseTokenization(std::string_view name);

// Decodes UTF-8 into code points. Invalid bytes decode as U+FFFD.
std::u32string DecodeUtf8(std::string_view text);
std::string EncodeUtf8(char32_t cp);

// Splits into code points, each returned as its UTF-8 encoding.
std::vector<std::string> SplitCodepoints(std::string_view text);

std::size_t CountCodepoints(std::string_view text);

bool IsWhitespace(char32_t cp);
bool IsCjk(char32_t cp);
bool IsPunctuation(char32_t cp);
bool ContainsCjk(std::string_view text);

std::string_view TrimView(std::string_view text);
std::string Trim(std::string_view text);
std::string ToLowerAscii(std::string_view text);

Tokens Tokenize(std::string_view text, Tokenization tokenization);

// Default word count used for corpus statistics: number of kWord tokens.
std::size_t CountWords(std::string_view text);

std::string Join(const std::vector<std::string> &parts, std::string_view sep);

// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double value);

// Fixed-point with the given number of decimals.
std::string FormatFixed(double value, int decimals);

std::uint64_t Fnv1a64(std::string_view bytes,
                      std::uint64_t seed = 1469598103934665603ULL);

}  // namespace sportsnews

#endif  // SPORTSNEWS_TEXT_H_
