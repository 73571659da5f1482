#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dialogaug/model_services.hpp"

namespace dialogaug {

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  // One vector of dimension() entries per input token.
  virtual std::vector<std::vector<double>> embed(std::span<const std::string> tokens) const = 0;
  virtual std::size_t dimension() const = 0;
  virtual bool context_free() const = 0;
};

// Each distinct token maps to a unit vector whose entries are drawn uniform
// in [-1, 1) from PCG32 seeded with fnv1a64(token) ^ seed.
class ToyEmbeddingProvider final : public EmbeddingProvider {
 public:
  ToyEmbeddingProvider(std::size_t dimension, std::uint64_t seed);
  std::vector<std::vector<double>> embed(std::span<const std::string> tokens) const override;
  std::size_t dimension() const override { return dimension_; }
  bool context_free() const override { return true; }

  std::vector<double> embed_token(const std::string& token) const;

 private:
  std::size_t dimension_;
  std::uint64_t seed_;
};

std::unique_ptr<EmbeddingProvider> toy_embedding_provider(std::size_t dimension, std::uint64_t seed);

struct BertScoreResult {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Greedy cosine matching, no idf weighting, no baseline rescaling.
// Throws std::invalid_argument on empty input or a zero-norm embedding.
BertScoreResult bertscore(std::span<const std::string> hypothesis, std::span<const std::string> reference,
                          const EmbeddingProvider& provider);

struct IntrinsicPair {
  std::string augmentation;
  std::string reference;
};

struct IntrinsicReport {
  std::optional<double> average_bleu;
  std::optional<double> bertscore_f1;
  std::optional<double> bleurt_mean;
  std::optional<double> perplexity;
  std::size_t pair_count = 0;
  std::vector<std::string> failures;  // one note per metric that aborted
};

struct IntrinsicBackends {
  const EmbeddingProvider* embeddings = nullptr;  // BERTScore
  ScoreService* bleurt = nullptr;
  ScoreService* perplexity = nullptr;
};

IntrinsicReport corpus_intrinsic(std::span<const IntrinsicPair> pairs, const IntrinsicBackends& backends);

// JSONL: one {"augmentation": str, "reference": str} per line.
std::vector<IntrinsicPair> load_intrinsic_pairs(const std::filesystem::path& path);
std::string intrinsic_report_json(const IntrinsicReport& report);

}  // namespace dialogaug
