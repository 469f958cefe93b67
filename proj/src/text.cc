#include "sportsnews/text.h"

#include <charconv>
#include <cstdint>
#include <cstdio>

#include "sportsnews/error.h"

namespace sportsnews {

const char *TokenizationName(Tokenization tokenization) {
  return tokenization == Tokenization::kChar ? "char" : "word";
}

Tokenization ParseTokenization(std::string_view name) {
  if (name == "char") return Tokenization::kChar;
  if (name == "word") return Tokenization::kWord;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown tokenization '" + std::string(name) + "'");
}

std::u32string DecodeUtf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    int len = 0;
    char32_t cp = 0;
    if (c < 0x80) {
      len = 1;
      cp = c;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    }
    bool ok = len > 0 && i + len <= text.size();
    for (int k = 1; ok && k < len; ++k) {
      unsigned char cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (cc & 0x3F);
      }
    }
    if (!ok) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string EncodeUtf8(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

std::vector<std::string> SplitCodepoints(std::string_view text) {
  std::vector<std::string> out;
  for (char32_t cp : DecodeUtf8(text)) out.push_back(EncodeUtf8(cp));
  return out;
}

std::size_t CountCodepoints(std::string_view text) {
  std::size_t n = 0;
  for (char c : text) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

bool IsWhitespace(char32_t cp) {
  // All C0 controls count as whitespace; 0x1F is reserved as a key separator.
  return cp == ' ' || cp < 0x20 || cp == 0x7F || cp == 0x3000 || cp == 0xA0;
}

bool IsCjk(char32_t cp) {
  return (cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF) ||
         (cp >= 0x20000 && cp <= 0x2A6DF) || (cp >= 0xF900 && cp <= 0xFAFF) ||
         (cp >= 0x3040 && cp <= 0x30FF) || (cp >= 0xAC00 && cp <= 0xD7AF);
}

bool IsPunctuation(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  }
  // General punctuation, CJK symbols and punctuation, fullwidth forms.
  return (cp >= 0x2000 && cp <= 0x206F) || (cp >= 0x3001 && cp <= 0x303F) ||
         (cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
         (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65) ||
         cp == 0xB7;
}

bool ContainsCjk(std::string_view text) {
  for (char32_t cp : DecodeUtf8(text)) {
    if (IsCjk(cp)) return true;
  }
  return false;
}

std::string_view TrimView(std::string_view text) {
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
           c == '\f';
  };
  // Ideographic space (U+3000) is common in Chinese text.
  static constexpr std::string_view kIdeoSpace = "\xE3\x80\x80";
  for (;;) {
    if (!text.empty() && is_space(text.front())) {
      text.remove_prefix(1);
    } else if (text.starts_with(kIdeoSpace)) {
      text.remove_prefix(kIdeoSpace.size());
    } else {
      break;
    }
  }
  for (;;) {
    if (!text.empty() && is_space(text.back())) {
      text.remove_suffix(1);
    } else if (text.ends_with(kIdeoSpace)) {
      text.remove_suffix(kIdeoSpace.size());
    } else {
      break;
    }
  }
  return text;
}

std::string Trim(std::string_view text) { return std::string(TrimView(text)); }

std::string ToLowerAscii(std::string_view text) {
  std::string out(text);
  for (char &c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

namespace {

bool IsAsciiAlnum(char32_t cp) {
  return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
         (cp >= 'A' && cp <= 'Z');
}

char32_t LowerAscii(char32_t cp) {
  return (cp >= 'A' && cp <= 'Z') ? cp - 'A' + 'a' : cp;
}

}  // namespace

Tokens Tokenize(std::string_view text, Tokenization tokenization) {
  Tokens tokens;
  std::u32string cps = DecodeUtf8(text);
  if (tokenization == Tokenization::kChar) {
    for (char32_t cp : cps) {
      if (!IsWhitespace(cp)) tokens.push_back(EncodeUtf8(LowerAscii(cp)));
    }
    return tokens;
  }
  std::string word;
  auto flush = [&] {
    if (!word.empty()) tokens.push_back(std::move(word));
    word.clear();
  };
  for (char32_t cp : cps) {
    if (IsAsciiAlnum(cp)) {
      word.push_back(static_cast<char>(LowerAscii(cp)));
      continue;
    }
    flush();
    if (IsWhitespace(cp) || IsPunctuation(cp)) continue;
    tokens.push_back(EncodeUtf8(cp));
  }
  flush();
  return tokens;
}

std::size_t CountWords(std::string_view text) {
  return Tokenize(text, Tokenization::kWord).size();
}

std::string Join(const std::vector<std::string> &parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

std::string FormatDouble(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string FormatFixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::uint64_t Fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace sportsnews
