#pragma once

// Naive BLEU: every n-gram count is recomputed by linear scans over the token
// vectors; clipping is applied per distinct hypothesis n-gram occurrence.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace oracle {

struct Bleu {
  std::array<double, 4> p{};
  double bp = 0.0;
  std::array<double, 4> bleu{};
  double average = 0.0;
};

inline bool same_gram(const std::vector<std::string>& a, std::size_t i, const std::vector<std::string>& b,
                      std::size_t j, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    if (a[i + k] != b[j + k]) return false;
  }
  return true;
}

inline std::size_t occurrences(const std::vector<std::string>& seq, const std::vector<std::string>& gram_src,
                               std::size_t at, std::size_t n) {
  std::size_t count = 0;
  if (seq.size() < n) return 0;
  for (std::size_t j = 0; j + n <= seq.size(); ++j) count += same_gram(gram_src, at, seq, j, n) ? 1 : 0;
  return count;
}

inline Bleu bleu(const std::vector<std::string>& hyp, const std::vector<std::string>& ref) {
  Bleu out;
  for (std::size_t n = 1; n <= 4; ++n) {
    std::size_t matched = 0;
    std::size_t total = 0;
    if (hyp.size() >= n) {
      total = hyp.size() - n + 1;
      for (std::size_t i = 0; i < total; ++i) {
        // count each distinct gram once, at its first occurrence
        bool first = true;
        for (std::size_t j = 0; j < i; ++j) {
          if (same_gram(hyp, i, hyp, j, n)) {
            first = false;
            break;
          }
        }
        if (!first) continue;
        matched += std::min(occurrences(hyp, hyp, i, n), occurrences(ref, hyp, i, n));
      }
    }
    if (hyp.size() < n && ref.size() < n) {
      out.p[n - 1] = 1.0;  // no n-grams on either side
    } else {
      out.p[n - 1] = static_cast<double>(matched) / static_cast<double>(total == 0 ? 1 : total);
    }
  }
  const double c = static_cast<double>(hyp.size());
  const double r = static_cast<double>(ref.size());
  out.bp = hyp.empty() ? 0.0 : (c > r ? 1.0 : std::exp(1.0 - r / c));
  double sum = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    bool zero = false;
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (!(out.p[k] > 0.0)) {
        zero = true;
        break;
      }
      acc += (1.0 / static_cast<double>(n)) * std::log(out.p[k]);
    }
    out.bleu[n - 1] = zero ? 0.0 : out.bp * std::exp(acc);
    sum += out.bleu[n - 1];
  }
  out.average = sum / 4.0;
  return out;
}

}  // namespace oracle
