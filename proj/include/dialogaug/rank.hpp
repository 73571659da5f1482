#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dialogaug/model_services.hpp"

namespace dialogaug {

struct BleuBreakdown {
  std::array<double, 4> precisions{};  // clipped p_1..p_4
  double brevity_penalty = 0.0;
  std::size_t hypothesis_length = 0;
  std::size_t reference_length = 0;
  std::array<double, 4> bleu{};  // bleu_1..bleu_4
  double average_bleu = 0.0;
};

// Sentence BLEU without smoothing. An n-gram order that neither side is long
// enough to contain counts as p_n = 1. Throws std::invalid_argument on an
// empty reference.
BleuBreakdown bleu(std::span<const std::string> hypothesis, std::span<const std::string> reference);

// Tokenizes both sides with dialogaug::tokenize, then bleu().
BleuBreakdown sentence_bleu(std::string_view hypothesis, std::string_view reference);

// Scores a batch of candidate texts against one reference; higher is better.
class CandidateScorer {
 public:
  virtual ~CandidateScorer() = default;
  virtual std::vector<double> score(std::span<const std::string> candidates,
                                    const std::string& reference) = 0;
  virtual std::string identity() const = 0;
};

// Average of BLEU-1..4.
class BleuScorer final : public CandidateScorer {
 public:
  std::vector<double> score(std::span<const std::string> candidates, const std::string& reference) override;
  std::string identity() const override { return "bleu"; }
};

// Bleurt scores from a scoring service.
class ServiceScorer final : public CandidateScorer {
 public:
  explicit ServiceScorer(std::shared_ptr<ScoreService> service) : service_(std::move(service)) {}
  std::vector<double> score(std::span<const std::string> candidates, const std::string& reference) override;
  std::string identity() const override { return "bleurt@" + service_->identity(); }

 private:
  std::shared_ptr<ScoreService> service_;
};

// Adapts a plain function; handy for tests and ad-hoc scorers.
class FunctionScorer final : public CandidateScorer {
 public:
  using Fn = std::function<double(const std::string& candidate, const std::string& reference)>;
  FunctionScorer(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}
  std::vector<double> score(std::span<const std::string> candidates, const std::string& reference) override;
  std::string identity() const override { return name_; }

 private:
  std::string name_;
  Fn fn_;
};

struct ScoredCandidate {
  GenerationCandidate candidate;
  double rank_score = 0.0;

  bool operator==(const ScoredCandidate&) const = default;
};

enum class RankDecision { Selected, FilteredOut };

std::string to_string(RankDecision decision);

struct RankOutcome {
  std::optional<ScoredCandidate> selected;
  std::vector<ScoredCandidate> all_scored;  // input order
  RankDecision decision = RankDecision::Selected;

  bool operator==(const RankOutcome&) const = default;
};

// Argmax of scorer output; ties go to the lowest backend rank. Throws
// std::invalid_argument on an empty list or a non-finite score.
RankOutcome rerank(std::span<const GenerationCandidate> candidates, const std::string& reference,
                   CandidateScorer& scorer);

// Drops the selection when its score is below the threshold.
RankOutcome filter(RankOutcome outcome, std::optional<double> threshold);

}  // namespace dialogaug
