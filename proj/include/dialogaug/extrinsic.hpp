#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dialogaug/corpus.hpp"

namespace dialogaug {

class ExtrinsicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using SlotValues = std::map<std::string, std::string>;

struct VenueRecord {
  std::string id;
  SlotValues attributes;
};

struct VenueDatabase {
  std::map<std::string, std::vector<VenueRecord>> domains;

  // Throws ExtrinsicError on duplicate ids within a domain.
  void validate() const;
};

struct EpisodeTrace {
  std::string dialog_id;
  std::map<std::string, SlotValues> final_constraints;                 // per domain
  std::map<std::string, std::set<std::string>> offered_entity_ids;     // per domain
  std::set<std::string> mentioned_slots;
};

struct FramePrediction {
  std::string dialog_id;
  std::size_t turn_index = 0;
  std::string active_intent;
  std::set<std::string> requested_slots;
  SlotValues slot_values;
};

struct MultiwozReport {
  double inform_rate = 0.0;
  double success_rate = 0.0;
  std::size_t episodes = 0;
  std::size_t informed = 0;
  std::size_t succeeded = 0;
};

struct SgdReport {
  double active_intent_accuracy = 0.0;
  double requested_slots_f1 = 0.0;
  double average_goal_accuracy = 0.0;
  double joint_goal_accuracy = 0.0;
  std::size_t turns = 0;
  std::size_t turns_with_gold_slots = 0;
};

// Ids of records matching every constraint (trimmed, case-insensitive);
// "dontcare" matches anything, a slot missing from a record never matches.
std::set<std::string> query_db(const VenueDatabase& db, const std::string& domain, const SlotValues& constraints);

bool inform(const std::optional<Goal>& goal, const EpisodeTrace& trace, const VenueDatabase& db);
bool success(const std::optional<Goal>& goal, const EpisodeTrace& trace, const VenueDatabase& db);

struct Episode {
  std::optional<Goal> goal;
  EpisodeTrace trace;
};

MultiwozReport multiwoz_rates(const std::vector<Episode>& episodes, const VenueDatabase& db);

// Requested-slot set F1; 1 when both sets are empty.
double set_f1(const std::set<std::string>& predicted, const std::set<std::string>& gold);

SgdReport sgd_metrics(const std::vector<FramePrediction>& predictions, const std::vector<FramePrediction>& golds);

// ---- file formats ---------------------------------------------------------

VenueDatabase load_venue_db(const std::filesystem::path& path);
std::vector<EpisodeTrace> load_traces(const std::filesystem::path& path);
std::vector<FramePrediction> load_frames(const std::filesystem::path& path);

// Pairs traces with goals of same-id dialogs in the corpus.
std::vector<Episode> pair_episodes(const Corpus& corpus, const std::vector<EpisodeTrace>& traces);

std::string multiwoz_report_json(const MultiwozReport& report);
std::string sgd_report_json(const SgdReport& report);

}  // namespace dialogaug
