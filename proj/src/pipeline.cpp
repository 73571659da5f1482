#include "dialogaug/pipeline.hpp"

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>
#include <unordered_map>

#include "dialogaug/rng.hpp"
#include "dialogaug/text.hpp"

namespace dialogaug {

using nlohmann::json;

void PipelineConfig::validate() const {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("fraction must lie in (0, 1]");
  if (concurrency < 1) throw std::invalid_argument("concurrency must be >= 1");
  if (filter_threshold && !std::isfinite(*filter_threshold)) throw std::invalid_argument("filter threshold must be finite");
  validate_prompt_config(prompt);
  generation.validate();
}

std::size_t target_count(std::size_t dialogs, double fraction) {
  // The epsilon absorbs representation error such as 0.29 * 100 = 28.999...
  const double raw = std::floor(fraction * static_cast<double>(dialogs) + 1e-9);
  const auto k = static_cast<std::size_t>(std::max(1.0, raw));
  return std::min(k, dialogs);
}

std::vector<SampledTarget> sample_targets(const Corpus& corpus, double fraction, std::uint64_t seed) {
  if (corpus.dialogs.empty()) throw PipelineError("sample_targets: corpus is empty");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("fraction must lie in (0, 1]");

  std::vector<const Dialog*> order;
  order.reserve(corpus.dialogs.size());
  for (const auto& d : corpus.dialogs) order.push_back(&d);
  std::sort(order.begin(), order.end(), [](const Dialog* a, const Dialog* b) { return a->id < b->id; });

  Pcg32 rng(seed);
  fisher_yates_shuffle(std::span<const Dialog*>(order), rng);

  const std::size_t k = target_count(order.size(), fraction);
  std::vector<SampledTarget> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Dialog& d = *order[i];
    const auto t = rng.bounded(static_cast<std::uint32_t>(d.exchanges.size()));
    out.push_back({d.id, t});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.dialog_id < b.dialog_id; });
  return out;
}

AugmentationRecord augment_turn(const Dialog& dialog, std::size_t target, const PipelineConfig& config,
                                const Backends& backends) {
  if (backends.generator == nullptr || backends.scorer == nullptr) {
    throw std::invalid_argument("augment_turn: generator and scorer are required");
  }
  AugmentationRecord record;
  record.started = std::chrono::system_clock::now();
  record.dialog_id = dialog.id;
  record.turn_index = target;
  record.style = config.prompt.style;
  record.seed = config.seed;
  record.decision = RankDecision::FilteredOut;

  const RenderedPrompt prompt = render(dialog, target, config.prompt);
  record.original = prompt.reference;

  auto fail = [&](std::string note) {
    spdlog::warn("dialog '{}' turn {}: {}", dialog.id, target, note);
    record.error = std::move(note);
    record.finished = std::chrono::system_clock::now();
    return record;
  };

  std::vector<GenerationCandidate> candidates;
  try {
    GenerationRequest request = config.generation;
    request.prompt = prompt.input_text;
    candidates = backends.generator->generate(request);
  } catch (const std::exception& e) {
    return fail(std::string("generation failed: ") + e.what());
  }

  std::erase_if(candidates, [](const GenerationCandidate& c) { return is_blank(c.text); });
  if (candidates.empty()) return fail("backend produced no non-blank candidates");

  RankOutcome outcome;
  try {
    outcome = filter(rerank(candidates, prompt.reference, *backends.scorer), config.filter_threshold);
  } catch (const std::exception& e) {
    return fail(std::string("scoring failed: ") + e.what());
  }

  record.candidates = std::move(outcome.all_scored);
  record.decision = outcome.decision;
  if (outcome.selected) record.selected = outcome.selected->candidate.text;
  record.finished = std::chrono::system_clock::now();
  return record;
}

Corpus build_augmented_corpus(const Corpus& corpus, const std::vector<AugmentationRecord>& records) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < corpus.dialogs.size(); ++i) index.emplace(corpus.dialogs[i].id, i);

  Corpus out = corpus;
  for (const auto& record : records) {
    auto it = index.find(record.dialog_id);
    if (it == index.end()) throw PipelineError("record references unknown dialog '" + record.dialog_id + "'");
    const Dialog& source = corpus.dialogs[it->second];
    if (record.turn_index >= source.exchanges.size()) {
      throw PipelineError("record references exchange " + std::to_string(record.turn_index) + " of dialog '" +
                          record.dialog_id + "', which has " + std::to_string(source.exchanges.size()));
    }
    if (record.decision != RankDecision::Selected) continue;
    if (!record.selected) throw PipelineError("record for '" + record.dialog_id + "' is Selected without text");

    Dialog copy = source;
    copy.id += "-aug";
    if (!index.emplace(copy.id, out.dialogs.size()).second) {
      throw PipelineError("augmented id '" + copy.id + "' collides with an existing dialog");
    }
    copy.exchanges[record.turn_index].user.text = *record.selected;
    out.dialogs.push_back(std::move(copy));
  }
  return out;
}

namespace {

json manifest(const Corpus& input, const Corpus& output, const PipelineConfig& config, const Backends& backends,
              const std::vector<SampledTarget>& targets, const std::vector<AugmentationRecord>& records) {
  std::size_t selected = 0;
  std::size_t filtered = 0;
  std::size_t failed = 0;
  for (const auto& r : records) {
    if (r.error) ++failed;
    else if (r.decision == RankDecision::Selected) ++selected;
    else ++filtered;
  }
  json cfg = {{"fraction", config.fraction},
              {"seed", config.seed},
              {"style", to_string(config.prompt.style)},
              {"include_future", config.prompt.include_future},
              {"include_bs_slots", config.prompt.include_bs_slots},
              {"mask_literal", config.prompt.mask_literal},
              {"num_beams", config.generation.num_beams},
              {"num_return", config.generation.num_return},
              {"max_new_tokens", config.generation.max_new_tokens},
              {"filter_threshold", config.filter_threshold ? json(*config.filter_threshold) : json(nullptr)},
              {"concurrency", config.concurrency}};
  return {{"config", cfg},
          {"backends", {{"generator", backends.generator->identity()}, {"scorer", backends.scorer->identity()}}},
          {"counts",
           {{"input_dialogs", input.dialogs.size()},
            {"targets", targets.size()},
            {"selected", selected},
            {"filtered_out", filtered},
            {"failed", failed},
            {"output_dialogs", output.dialogs.size()}}}};
}

}  // namespace

PipelineResult run_pipeline(const Corpus& corpus, const PipelineConfig& config, const Backends& backends) {
  config.validate();
  if (backends.generator == nullptr || backends.scorer == nullptr) {
    throw std::invalid_argument("run_pipeline: generator and scorer are required");
  }

  const auto targets = sample_targets(corpus, config.fraction, config.seed);
  std::unordered_map<std::string, const Dialog*> by_id;
  for (const auto& d : corpus.dialogs) by_id.emplace(d.id, &d);

  std::vector<AugmentationRecord> records(targets.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < targets.size(); i = next.fetch_add(1)) {
      const auto& target = targets[i];
      const Dialog& dialog = *by_id.at(target.dialog_id);
      try {
        records[i] = augment_turn(dialog, target.target_index, config, backends);
      } catch (const std::exception& e) {
        AugmentationRecord failed;
        failed.dialog_id = dialog.id;
        failed.turn_index = target.target_index;
        failed.original = dialog.exchanges[target.target_index].user.text;
        failed.style = config.prompt.style;
        failed.seed = config.seed;
        failed.error = e.what();
        spdlog::warn("dialog '{}' turn {}: {}", dialog.id, target.target_index, e.what());
        records[i] = std::move(failed);
      }
      const std::size_t finished = done.fetch_add(1) + 1;
      if (finished % 100 == 0 || finished == targets.size()) {
        spdlog::info("augmented {}/{} targets", finished, targets.size());
      }
    }
  };
  {
    const std::size_t workers = std::min(config.concurrency, targets.size());
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return a.dialog_id < b.dialog_id; });
  if (std::all_of(records.begin(), records.end(), [](const auto& r) { return r.error.has_value(); })) {
    throw PipelineError("every augmentation target failed; first error: " + records.front().error.value_or(""));
  }

  PipelineResult result;
  result.corpus = build_augmented_corpus(corpus, records);
  result.manifest_json = manifest(corpus, result.corpus, config, backends, targets, records).dump(2) + "\n";
  result.records = std::move(records);
  return result;
}

std::string record_to_json_line(const AugmentationRecord& record) {
  json candidates = json::array();
  for (const auto& c : record.candidates) {
    candidates.push_back({{"text", c.candidate.text}, {"gen_score", c.candidate.gen_score}, {"rank_score", c.rank_score}});
  }
  json j = {{"dialog_id", record.dialog_id},
            {"turn_index", record.turn_index},
            {"original", record.original},
            {"candidates", std::move(candidates)},
            {"selected", record.selected ? json(*record.selected) : json(nullptr)},
            {"decision", to_string(record.decision)},
            {"style", to_string(record.style)},
            {"seed", record.seed}};
  if (record.error) j["error"] = *record.error;
  return j.dump();
}

std::string records_to_jsonl(const std::vector<AugmentationRecord>& records) {
  std::string out;
  for (const auto& r : records) out += record_to_json_line(r) + "\n";
  return out;
}

void write_records(const std::vector<AugmentationRecord>& records, const std::filesystem::path& path) {
  const std::string text = records_to_jsonl(records);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PipelineError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw PipelineError("write failure on '" + path.string() + "'");
}

}  // namespace dialogaug
