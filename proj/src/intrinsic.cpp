#include "dialogaug/intrinsic.hpp"

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "dialogaug/rank.hpp"
#include "dialogaug/rng.hpp"
#include "dialogaug/text.hpp"

namespace dialogaug {

using nlohmann::json;

ToyEmbeddingProvider::ToyEmbeddingProvider(std::size_t dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
  if (dimension < 2) throw std::invalid_argument("toy embedding dimension must be >= 2");
}

std::vector<double> ToyEmbeddingProvider::embed_token(const std::string& token) const {
  Pcg32 rng(fnv1a64(token) ^ seed_);
  std::vector<double> v(dimension_);
  double norm2 = 0.0;
  for (auto& x : v) {
    x = 2.0 * rng.unit() - 1.0;
    norm2 += x * x;
  }
  const double norm = std::sqrt(norm2);
  for (auto& x : v) x /= norm;
  return v;
}

std::vector<std::vector<double>> ToyEmbeddingProvider::embed(std::span<const std::string> tokens) const {
  std::vector<std::vector<double>> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(embed_token(t));
  return out;
}

std::unique_ptr<EmbeddingProvider> toy_embedding_provider(std::size_t dimension, std::uint64_t seed) {
  return std::make_unique<ToyEmbeddingProvider>(dimension, seed);
}

namespace {

std::vector<std::vector<double>> embed_unit(std::span<const std::string> tokens, const EmbeddingProvider& provider) {
  auto vectors = provider.embed(tokens);
  if (vectors.size() != tokens.size()) {
    throw std::runtime_error("embedding provider returned " + std::to_string(vectors.size()) + " vectors for " +
                             std::to_string(tokens.size()) + " tokens");
  }
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    double norm2 = 0.0;
    for (double x : vectors[i]) {
      if (!std::isfinite(x)) throw std::invalid_argument("non-finite embedding for token '" + tokens[i] + "'");
      norm2 += x * x;
    }
    if (norm2 == 0.0) throw std::invalid_argument("zero-norm embedding for token '" + tokens[i] + "'");
    const double norm = std::sqrt(norm2);
    for (double& x : vectors[i]) x /= norm;
  }
  return vectors;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::runtime_error("embedding dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

BertScoreResult bertscore(std::span<const std::string> hypothesis, std::span<const std::string> reference,
                          const EmbeddingProvider& provider) {
  if (hypothesis.empty() || reference.empty()) {
    throw std::invalid_argument("bertscore: hypothesis and reference must be non-empty");
  }
  const auto hyp = embed_unit(hypothesis, provider);
  const auto ref = embed_unit(reference, provider);

  std::vector<double> best_for_hyp(hyp.size(), -INFINITY);
  std::vector<double> best_for_ref(ref.size(), -INFINITY);
  for (std::size_t i = 0; i < hyp.size(); ++i) {
    for (std::size_t j = 0; j < ref.size(); ++j) {
      const double cos = dot(hyp[i], ref[j]);
      best_for_hyp[i] = std::max(best_for_hyp[i], cos);
      best_for_ref[j] = std::max(best_for_ref[j], cos);
    }
  }

  BertScoreResult out;
  for (double v : best_for_hyp) out.precision += v;
  for (double v : best_for_ref) out.recall += v;
  out.precision /= static_cast<double>(hyp.size());
  out.recall /= static_cast<double>(ref.size());
  const double denom = out.precision + out.recall;
  out.f1 = denom > 0.0 ? 2.0 * out.precision * out.recall / denom : 0.0;
  return out;
}

IntrinsicReport corpus_intrinsic(std::span<const IntrinsicPair> pairs, const IntrinsicBackends& backends) {
  if (pairs.empty()) throw std::invalid_argument("corpus_intrinsic: no pairs to evaluate");

  std::vector<std::vector<std::string>> aug_tokens;
  std::vector<std::vector<std::string>> ref_tokens;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    aug_tokens.push_back(tokenize(pairs[i].augmentation));
    ref_tokens.push_back(tokenize(pairs[i].reference));
    if (aug_tokens.back().empty() || ref_tokens.back().empty()) {
      throw std::invalid_argument("pair " + std::to_string(i) + " has an empty augmentation or reference");
    }
  }

  IntrinsicReport report;
  report.pair_count = pairs.size();
  const auto n = static_cast<double>(pairs.size());

  double bleu_sum = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) bleu_sum += bleu(aug_tokens[i], ref_tokens[i]).average_bleu;
  report.average_bleu = bleu_sum / n;

  auto guarded = [&report](const char* metric, auto&& compute) -> std::optional<double> {
    try {
      return compute();
    } catch (const std::exception& e) {
      spdlog::warn("{}: metric aborted: {}", metric, e.what());
      report.failures.push_back(std::string(metric) + ": " + e.what());
      return std::nullopt;
    }
  };

  if (backends.embeddings != nullptr) {
    report.bertscore_f1 = guarded("bertscore_f1", [&] {
      double sum = 0.0;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        sum += bertscore(aug_tokens[i], ref_tokens[i], *backends.embeddings).f1;
      }
      return sum / n;
    });
  }

  if (backends.bleurt != nullptr) {
    report.bleurt_mean = guarded("bleurt_mean", [&] {
      double sum = 0.0;
      for (const auto& pair : pairs) {
        ScoreRequest request{ScoreMetric::Bleurt, pair.reference, {pair.augmentation}};
        sum += backends.bleurt->score(request).at(0);
      }
      return sum / n;
    });
  }

  if (backends.perplexity != nullptr) {
    report.perplexity = guarded("perplexity", [&] {
      constexpr std::size_t kBatch = 64;
      double sum = 0.0;
      for (std::size_t start = 0; start < pairs.size(); start += kBatch) {
        ScoreRequest request;
        request.metric = ScoreMetric::Perplexity;
        for (std::size_t i = start; i < std::min(pairs.size(), start + kBatch); ++i) {
          request.candidates.push_back(pairs[i].augmentation);
        }
        for (double v : backends.perplexity->score(request)) sum += v;
      }
      return sum / n;
    });
  }
  return report;
}

std::vector<IntrinsicPair> load_intrinsic_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::vector<IntrinsicPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": malformed JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("augmentation") || !j["augmentation"].is_string() ||
        !j.contains("reference") || !j["reference"].is_string()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected {\"augmentation\": str, \"reference\": str}");
    }
    pairs.push_back({j["augmentation"].get<std::string>(), j["reference"].get<std::string>()});
  }
  return pairs;
}

std::string intrinsic_report_json(const IntrinsicReport& report) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j = {{"average_bleu", opt(report.average_bleu)},
            {"bertscore_f1", opt(report.bertscore_f1)},
            {"bleurt_mean", opt(report.bleurt_mean)},
            {"perplexity", opt(report.perplexity)},
            {"pair_count", report.pair_count}};
  if (!report.failures.empty()) j["failures"] = report.failures;
  return j.dump(2);
}

}  // namespace dialogaug
