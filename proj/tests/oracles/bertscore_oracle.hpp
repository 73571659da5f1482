#pragma once

// Brute-force BERTScore: explicit double loop with cosine computed from raw
// (unnormalized) vectors.

#include <cmath>
#include <string>
#include <vector>

#include "dialogaug/intrinsic.hpp"

namespace oracle {

struct BertScore {
  double p = 0.0;
  double r = 0.0;
  double f1 = 0.0;
};

inline double cosine(const std::vector<double>& u, const std::vector<double>& v) {
  double uv = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  return uv / (std::sqrt(uu) * std::sqrt(vv));
}

inline BertScore bertscore(const std::vector<std::string>& hyp, const std::vector<std::string>& ref,
                           const dialogaug::EmbeddingProvider& provider) {
  const auto h = provider.embed(hyp);
  const auto r = provider.embed(ref);
  BertScore out;
  for (const auto& hv : h) {
    double best = -2.0;
    for (const auto& rv : r) best = std::max(best, cosine(hv, rv));
    out.p += best;
  }
  for (const auto& rv : r) {
    double best = -2.0;
    for (const auto& hv : h) best = std::max(best, cosine(rv, hv));
    out.r += best;
  }
  out.p /= static_cast<double>(h.size());
  out.r /= static_cast<double>(r.size());
  out.f1 = (out.p + out.r) > 0.0 ? 2.0 * out.p * out.r / (out.p + out.r) : 0.0;
  return out;
}

}  // namespace oracle
