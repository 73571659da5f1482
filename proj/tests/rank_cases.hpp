#pragma once

// Shared between the rank unit tests and the acceptance gate.

#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "dialogaug/model_services.hpp"
#include "dialogaug/rank.hpp"

namespace rank_cases {

inline const std::string kFilteringReference = "that train is leaving from cambridge on sunday, correct?";

// Listed augmentations in backend order, with the Bleurt scores the mock
// replays. Only the ordering of the scores matters for the selection.
inline const std::vector<std::pair<std::string, double>> kFilteringCandidates = {
    {"I need to go from cambridge to ely", -0.41},
    {"I need to arrive in Ely by 19:30", -0.87},
    {"I would like to leave on Sunday", 0.12},
    {"I need to leave on Sunday from Cambridge", 0.34},
    {"I would like to depart from cambridge", -0.05},
    {"The train should depart from cambridge", -0.18},
    {"I need to arrive by 19:30 in Cambridge", -0.62},
};

inline std::vector<dialogaug::GenerationCandidate> filtering_candidates() {
  std::vector<dialogaug::GenerationCandidate> out;
  for (std::size_t i = 0; i < kFilteringCandidates.size(); ++i) {
    out.push_back({kFilteringCandidates[i].first, -static_cast<double>(i), i});
  }
  return out;
}

inline std::shared_ptr<dialogaug::ScoreService> filtering_mock_bleurt() {
  std::map<std::string, double> table(kFilteringCandidates.begin(), kFilteringCandidates.end());
  return std::make_shared<dialogaug::FixedTableScorer>(std::move(table));
}

inline std::vector<std::string> random_tokens(std::mt19937_64& rng, std::size_t min_len, std::size_t max_len,
                                              std::size_t vocab) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> word(0, vocab - 1);
  std::vector<std::string> out(len(rng));
  for (auto& t : out) t = "w" + std::to_string(word(rng));
  return out;
}

inline std::string joined(const std::vector<std::string>& tokens) {
  std::string s;
  for (const auto& t : tokens) s += (s.empty() ? "" : " ") + t;
  return s;
}

}  // namespace rank_cases
