#pragma once

#include <string>
#include <vector>

#include "dialogaug/corpus.hpp"
#include "dialogaug/model_services.hpp"
#include "dialogaug/pipeline.hpp"

namespace pipeline_cases {

// Empty when `copy` equals `source` apart from the user text at exchange t;
// otherwise a description of the first difference.
inline std::string diff_outside_turn(const dialogaug::Dialog& source, const dialogaug::Dialog& copy, std::size_t t) {
  if (copy.id != source.id + "-aug") return "id " + copy.id;
  if (copy.domains != source.domains) return "domains";
  if (copy.goal != source.goal) return "goal";
  if (copy.exchanges.size() != source.exchanges.size()) return "exchange count";
  for (std::size_t i = 0; i < source.exchanges.size(); ++i) {
    const auto& a = source.exchanges[i];
    const auto& b = copy.exchanges[i];
    if (a.belief != b.belief) return "belief at " + std::to_string(i);
    if (a.system != b.system) return "system turn at " + std::to_string(i);
    if (a.user.speaker != b.user.speaker || a.user.index != b.user.index) return "user turn fields at " + std::to_string(i);
    if (i == t && a.user.text == b.user.text) return "target turn unchanged";
    if (i != t && a.user.text != b.user.text) return "user text at " + std::to_string(i);
  }
  return "";
}

// Checks every output invariant of a pipeline run; returns the first problem.
inline std::string check_result(const dialogaug::Corpus& input, const dialogaug::PipelineResult& result) {
  std::size_t selected = 0;
  for (const auto& r : result.records) selected += r.decision == dialogaug::RankDecision::Selected ? 1 : 0;
  if (result.corpus.dialogs.size() != input.dialogs.size() + selected) return "output size";
  for (std::size_t i = 0; i < input.dialogs.size(); ++i) {
    if (!(result.corpus.dialogs[i] == input.dialogs[i])) return "original " + input.dialogs[i].id + " changed";
  }
  if (!dialogaug::validate(result.corpus).empty()) return "output fails validation: " + dialogaug::validate(result.corpus)[0].describe();
  std::size_t next = input.dialogs.size();
  for (const auto& r : result.records) {
    if (r.decision != dialogaug::RankDecision::Selected) continue;
    const auto& copy = result.corpus.dialogs[next++];
    const dialogaug::Dialog* source = nullptr;
    for (const auto& d : input.dialogs) {
      if (d.id == r.dialog_id) source = &d;
    }
    if (source == nullptr) return "record for unknown dialog";
    if (auto d = diff_outside_turn(*source, copy, r.turn_index); !d.empty()) return r.dialog_id + ": " + d;
    if (copy.exchanges[r.turn_index].user.text != *r.selected) return r.dialog_id + ": selected text not placed";
  }
  return "";
}

// Serves a fixed candidate list whatever the prompt.
class ListGenerator final : public dialogaug::Generator {
 public:
  explicit ListGenerator(std::vector<std::string> texts) : texts_(std::move(texts)) {}
  std::vector<dialogaug::GenerationCandidate> generate(const dialogaug::GenerationRequest& request) override {
    last_prompt = request.prompt;
    std::vector<dialogaug::GenerationCandidate> out;
    for (std::size_t i = 0; i < texts_.size(); ++i) out.push_back({texts_[i], -0.1 * static_cast<double>(i), i});
    return out;
  }
  std::string identity() const override { return "list"; }
  std::string last_prompt;

 private:
  std::vector<std::string> texts_;
};

}  // namespace pipeline_cases
