#include "dialogaug/rank.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "dialogaug/text.hpp"

namespace dialogaug {

namespace {

using NgramCounts = std::map<std::vector<std::string_view>, std::size_t>;

NgramCounts count_ngrams(std::span<const std::string> tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::vector<std::string_view> gram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                       tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
    ++counts[std::move(gram)];
  }
  return counts;
}

}  // namespace

BleuBreakdown bleu(std::span<const std::string> hypothesis, std::span<const std::string> reference) {
  if (reference.empty()) throw std::invalid_argument("bleu: reference must be non-empty");

  BleuBreakdown out;
  const std::size_t c = hypothesis.size();
  const std::size_t r = reference.size();
  out.hypothesis_length = c;
  out.reference_length = r;

  for (std::size_t n = 1; n <= 4; ++n) {
    const NgramCounts hyp = count_ngrams(hypothesis, n);
    const NgramCounts ref = count_ngrams(reference, n);
    std::size_t clipped = 0;
    for (const auto& [gram, count] : hyp) {
      auto it = ref.find(gram);
      if (it != ref.end()) clipped += std::min(count, it->second);
    }
    const std::size_t total = c >= n ? c - n + 1 : 0;
    // An order neither side is long enough to have is vacuously matched;
    // otherwise bleu(x, x) would fall below 1 for |x| < 4.
    if (total == 0 && r < n) {
      out.precisions[n - 1] = 1.0;
      continue;
    }
    out.precisions[n - 1] = static_cast<double>(clipped) / static_cast<double>(std::max<std::size_t>(1, total));
  }

  if (c == 0) {
    out.brevity_penalty = 0.0;
  } else if (c > r) {
    out.brevity_penalty = 1.0;
  } else {
    out.brevity_penalty = std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
  }

  double sum = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    bool all_positive = true;
    double log_sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (out.precisions[k] <= 0.0) {
        all_positive = false;
        break;
      }
      log_sum += (1.0 / static_cast<double>(n)) * std::log(out.precisions[k]);
    }
    out.bleu[n - 1] = all_positive ? out.brevity_penalty * std::exp(log_sum) : 0.0;
    sum += out.bleu[n - 1];
  }
  out.average_bleu = sum / 4.0;
  return out;
}

BleuBreakdown sentence_bleu(std::string_view hypothesis, std::string_view reference) {
  const auto hyp = tokenize(hypothesis);
  const auto ref = tokenize(reference);
  return bleu(hyp, ref);
}

std::vector<double> BleuScorer::score(std::span<const std::string> candidates, const std::string& reference) {
  const auto ref = tokenize(reference);
  std::vector<double> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.push_back(bleu(tokenize(c), ref).average_bleu);
  return out;
}

std::vector<double> ServiceScorer::score(std::span<const std::string> candidates, const std::string& reference) {
  ScoreRequest request;
  request.metric = ScoreMetric::Bleurt;
  request.reference = reference;
  request.candidates.assign(candidates.begin(), candidates.end());
  return service_->score(request);
}

std::vector<double> FunctionScorer::score(std::span<const std::string> candidates, const std::string& reference) {
  std::vector<double> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.push_back(fn_(c, reference));
  return out;
}

std::string to_string(RankDecision decision) {
  return decision == RankDecision::Selected ? "selected" : "filtered_out";
}

RankOutcome rerank(std::span<const GenerationCandidate> candidates, const std::string& reference,
                   CandidateScorer& scorer) {
  if (candidates.empty()) throw std::invalid_argument("rerank: candidate list is empty");

  std::vector<std::string> texts;
  texts.reserve(candidates.size());
  for (const auto& c : candidates) texts.push_back(c.text);
  const std::vector<double> scores = scorer.score(texts, reference);
  if (scores.size() != candidates.size()) {
    throw std::runtime_error("rerank: scorer '" + scorer.identity() + "' returned " + std::to_string(scores.size()) +
                             " scores for " + std::to_string(candidates.size()) + " candidates");
  }

  RankOutcome out;
  out.all_scored.reserve(candidates.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      throw std::invalid_argument("rerank: non-finite score for candidate rank " + std::to_string(candidates[i].rank));
    }
    out.all_scored.push_back({candidates[i], scores[i]});
    const auto& incumbent = out.all_scored[best];
    if (scores[i] > incumbent.rank_score ||
        (scores[i] == incumbent.rank_score && candidates[i].rank < incumbent.candidate.rank)) {
      best = i;
    }
  }
  out.selected = out.all_scored[best];
  out.decision = RankDecision::Selected;
  return out;
}

RankOutcome filter(RankOutcome outcome, std::optional<double> threshold) {
  if (!threshold || !outcome.selected) return outcome;
  if (outcome.selected->rank_score >= *threshold) return outcome;
  outcome.selected.reset();
  outcome.decision = RankDecision::FilteredOut;
  return outcome;
}

}  // namespace dialogaug
