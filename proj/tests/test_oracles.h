// Slow, independent reference computations used by the tests.
#ifndef SPORTSNEWS_TESTS_TEST_ORACLES_H_
#define SPORTSNEWS_TESTS_TEST_ORACLES_H_

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

using Seq = std::vector<std::string>;

inline Seq RandomTokens(std::mt19937 &rng, int min_len, int max_len, int alphabet) {
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::uniform_int_distribution<int> sym(0, alphabet - 1);
  Seq out(len(rng));
  for (auto &t : out) t = std::string(1, static_cast<char>('a' + sym(rng)));
  return out;
}

inline std::vector<Seq> Grams(const Seq &s, int n) {
  std::vector<Seq> out;
  for (int i = 0; i + n <= static_cast<int>(s.size()); ++i) {
    out.emplace_back(s.begin() + i, s.begin() + i + n);
  }
  return out;
}

inline std::tuple<double, double, double> Prf(double hits, double cand, double ref) {
  if (cand == 0 && ref == 0) return {1.0, 1.0, 1.0};
  if (cand == 0 || ref == 0) return {0.0, 0.0, 0.0};
  const double p = hits / cand, r = hits / ref;
  return {p, r, p + r > 0 ? 2 * p * r / (p + r) : 0.0};
}

// Greedy one-to-one matching of equal n-grams; equals clipped counting.
inline std::tuple<double, double, double> RougeN(const Seq &cand, const Seq &ref, int n) {
  std::vector<Seq> c = Grams(cand, n), r = Grams(ref, n);
  std::vector<bool> used(r.size(), false);
  double hits = 0;
  for (const Seq &g : c) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (!used[j] && r[j] == g) {
        used[j] = true;
        hits += 1;
        break;
      }
    }
  }
  return Prf(hits, static_cast<double>(c.size()), static_cast<double>(r.size()));
}

inline bool IsSubsequence(const Seq &sub, const Seq &s) {
  std::size_t k = 0;
  for (const auto &t : s) {
    if (k < sub.size() && sub[k] == t) ++k;
  }
  return k == sub.size();
}

// Exhaustive: longest subsequence of a that is also one of b.
inline std::size_t LcsBySubsets(const Seq &a, const Seq &b) {
  std::size_t best = 0;
  for (unsigned mask = 0; mask < (1u << a.size()); ++mask) {
    Seq sub;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (mask & (1u << i)) sub.push_back(a[i]);
    }
    if (sub.size() > best && IsSubsequence(sub, b)) best = sub.size();
  }
  return best;
}

inline std::size_t LcsRecursive(const Seq &a, const Seq &b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) {
    if (i == a.size() || j == b.size()) return std::size_t{0};
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t v = a[i] == b[j] ? 1 + go(i + 1, j + 1) : std::max(go(i + 1, j), go(i, j + 1));
    memo[key] = v;
    return v;
  };
  return go(0, 0);
}

inline std::tuple<double, double, double> RougeL(const Seq &cand, const Seq &ref) {
  return Prf(static_cast<double>(LcsRecursive(cand, ref)), static_cast<double>(cand.size()),
             static_cast<double>(ref.size()));
}

// Exact cosine over character n-gram counts, no hashing. Whitespace is
// dropped and ASCII lowercased; texts shorter than n form one gram.
inline double NgramCosine(const std::vector<std::string> &a_chars,
                          const std::vector<std::string> &b_chars, int n) {
  auto profile = [n](const std::vector<std::string> &c) {
    std::map<std::string, double> m;
    if (static_cast<int>(c.size()) < n) {
      std::string g;
      for (const auto &x : c) g += x + '\x01';
      m[g] += 1;
      return m;
    }
    for (int i = 0; i + n <= static_cast<int>(c.size()); ++i) {
      std::string g;
      for (int k = 0; k < n; ++k) g += c[i + k] + '\x01';
      m[g] += 1;
    }
    return m;
  };
  auto pa = profile(a_chars), pb = profile(b_chars);
  double dot = 0, na = 0, nb = 0;
  for (auto &[k, v] : pa) {
    na += v * v;
    if (auto it = pb.find(k); it != pb.end()) dot += v * it->second;
  }
  for (auto &[k, v] : pb) nb += v * v;
  return std::max(0.0, dot / std::sqrt(na * nb));
}

}  // namespace oracle

#endif  // SPORTSNEWS_TESTS_TEST_ORACLES_H_
