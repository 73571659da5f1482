#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dialogaug/corpus.hpp"
#include "dialogaug/model_services.hpp"
#include "dialogaug/prompt.hpp"
#include "dialogaug/rank.hpp"

namespace dialogaug {

class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  double fraction = 0.05;
  std::uint64_t seed = 0;
  PromptConfig prompt;
  GenerationRequest generation;  // prompt field is ignored
  std::optional<double> filter_threshold;
  std::size_t concurrency = 4;

  void validate() const;
};

struct Backends {
  Generator* generator = nullptr;
  CandidateScorer* scorer = nullptr;
};

struct SampledTarget {
  std::string dialog_id;
  std::size_t target_index = 0;

  bool operator==(const SampledTarget&) const = default;
};

struct AugmentationRecord {
  std::string dialog_id;
  std::size_t turn_index = 0;
  std::string original;
  std::vector<ScoredCandidate> candidates;
  std::optional<std::string> selected;
  RankDecision decision = RankDecision::FilteredOut;
  PromptStyle style = PromptStyle::NaturalColon;
  std::uint64_t seed = 0;
  std::optional<std::string> error;  // set when the backend call failed
  std::chrono::system_clock::time_point started;
  std::chrono::system_clock::time_point finished;
};

struct PipelineResult {
  Corpus corpus;
  std::vector<AugmentationRecord> records;
  std::string manifest_json;
};

// k = max(1, floor(p * N)) dialogs: the first k of a Fisher-Yates shuffle
// of the id-sorted dialogs; then one uniform exchange index per chosen
// dialog from the same PCG32 stream. Output sorted by dialog id.
std::vector<SampledTarget> sample_targets(const Corpus& corpus, double fraction, std::uint64_t seed);

std::size_t target_count(std::size_t dialogs, double fraction);

AugmentationRecord augment_turn(const Dialog& dialog, std::size_t target, const PipelineConfig& config,
                                const Backends& backends);

// Originals first, then one "-aug" copy per Selected record.
Corpus build_augmented_corpus(const Corpus& corpus, const std::vector<AugmentationRecord>& records);

PipelineResult run_pipeline(const Corpus& corpus, const PipelineConfig& config, const Backends& backends);

std::string record_to_json_line(const AugmentationRecord& record);
std::string records_to_jsonl(const std::vector<AugmentationRecord>& records);
void write_records(const std::vector<AugmentationRecord>& records, const std::filesystem::path& path);

}  // namespace dialogaug
