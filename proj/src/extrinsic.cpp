#include "dialogaug/extrinsic.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_map>

#include "dialogaug/text.hpp"

namespace dialogaug {

using nlohmann::json;

namespace {

std::string fold(std::string_view value) {
  std::string out = trim(value);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_subset(const std::set<std::string>& sub, const std::set<std::string>& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

const Goal& require_goal(const std::optional<Goal>& goal, const EpisodeTrace& trace) {
  if (!goal) throw ExtrinsicError("dialog '" + trace.dialog_id + "': no goal annotation; MultiWoZ metrics need one");
  auto check = [&](const std::string& domain) {
    if (!goal->contains(domain)) {
      throw ExtrinsicError("dialog '" + trace.dialog_id + "': trace references domain '" + domain +
                           "' absent from the goal");
    }
  };
  for (const auto& [domain, _] : trace.final_constraints) check(domain);
  for (const auto& [domain, _] : trace.offered_entity_ids) check(domain);
  return *goal;
}

}  // namespace

void VenueDatabase::validate() const {
  for (const auto& [domain, records] : domains) {
    std::set<std::string> ids;
    for (const auto& r : records) {
      if (!ids.insert(r.id).second) throw ExtrinsicError("venue db: duplicate id '" + r.id + "' in domain '" + domain + "'");
    }
  }
}

std::set<std::string> query_db(const VenueDatabase& db, const std::string& domain, const SlotValues& constraints) {
  auto it = db.domains.find(domain);
  if (it == db.domains.end()) throw ExtrinsicError("venue db has no domain '" + domain + "'");

  std::set<std::string> out;
  for (const auto& record : it->second) {
    bool match = true;
    for (const auto& [slot, wanted] : constraints) {
      const std::string w = fold(wanted);
      if (w == "dontcare") continue;
      auto attr = record.attributes.find(slot);
      if (attr == record.attributes.end() || fold(attr->second) != w) {
        match = false;
        break;
      }
    }
    if (match) out.insert(record.id);
  }
  return out;
}

bool inform(const std::optional<Goal>& goal, const EpisodeTrace& trace, const VenueDatabase& db) {
  const Goal& g = require_goal(goal, trace);
  for (const auto& [domain, dg] : g) {
    if (dg.constraints.empty()) continue;
    const auto acceptable = query_db(db, domain, dg.constraints);

    std::set<std::string> returned;
    if (auto offered = trace.offered_entity_ids.find(domain);
        offered != trace.offered_entity_ids.end() && !offered->second.empty()) {
      returned = offered->second;
    } else if (auto belief = trace.final_constraints.find(domain); belief != trace.final_constraints.end()) {
      returned = query_db(db, domain, belief->second);
    }
    if (returned.empty() || !is_subset(returned, acceptable)) return false;
  }
  return true;
}

bool success(const std::optional<Goal>& goal, const EpisodeTrace& trace, const VenueDatabase& db) {
  if (!inform(goal, trace, db)) return false;
  for (const auto& [domain, dg] : *goal) {
    if (!is_subset(dg.requestables, trace.mentioned_slots)) return false;
  }
  return true;
}

MultiwozReport multiwoz_rates(const std::vector<Episode>& episodes, const VenueDatabase& db) {
  if (episodes.empty()) throw ExtrinsicError("multiwoz_rates: no episodes");
  MultiwozReport report;
  report.episodes = episodes.size();
  for (const auto& e : episodes) {
    const bool informed = inform(e.goal, e.trace, db);
    report.informed += informed ? 1 : 0;
    report.succeeded += (informed && success(e.goal, e.trace, db)) ? 1 : 0;
  }
  const auto n = static_cast<double>(report.episodes);
  report.inform_rate = static_cast<double>(report.informed) / n;
  report.success_rate = static_cast<double>(report.succeeded) / n;
  return report;
}

double set_f1(const std::set<std::string>& predicted, const std::set<std::string>& gold) {
  if (predicted.empty() && gold.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& s : predicted) common += gold.contains(s) ? 1 : 0;
  if (common == 0) return 0.0;
  const double p = static_cast<double>(common) / static_cast<double>(predicted.size());
  const double r = static_cast<double>(common) / static_cast<double>(gold.size());
  return 2.0 * p * r / (p + r);
}

SgdReport sgd_metrics(const std::vector<FramePrediction>& predictions, const std::vector<FramePrediction>& golds) {
  using Key = std::pair<std::string, std::size_t>;
  auto key_string = [](const Key& k) { return "(" + k.first + ", " + std::to_string(k.second) + ")"; };

  std::map<Key, const FramePrediction*> by_key;
  for (const auto& p : predictions) {
    Key k{p.dialog_id, p.turn_index};
    if (!by_key.emplace(k, &p).second) throw ExtrinsicError("duplicate prediction for turn " + key_string(k));
  }
  if (predictions.size() != golds.size()) {
    throw ExtrinsicError("misaligned turn sets: " + std::to_string(predictions.size()) + " predictions vs " +
                         std::to_string(golds.size()) + " gold turns");
  }
  if (golds.empty()) throw ExtrinsicError("sgd_metrics: no turns");

  SgdReport report;
  report.turns = golds.size();
  std::size_t intent_hits = 0;
  std::size_t joint_hits = 0;
  double f1_sum = 0.0;
  double goal_acc_sum = 0.0;
  std::set<Key> seen;
  for (const auto& gold : golds) {
    Key k{gold.dialog_id, gold.turn_index};
    if (!seen.insert(k).second) throw ExtrinsicError("duplicate gold turn " + key_string(k));
    auto it = by_key.find(k);
    if (it == by_key.end()) throw ExtrinsicError("misaligned turn sets: no prediction for gold turn " + key_string(k));
    const FramePrediction& pred = *it->second;

    intent_hits += pred.active_intent == gold.active_intent ? 1 : 0;
    f1_sum += set_f1(pred.requested_slots, gold.requested_slots);
    joint_hits += pred.slot_values == gold.slot_values ? 1 : 0;
    if (!gold.slot_values.empty()) {
      std::size_t correct = 0;
      for (const auto& [slot, value] : gold.slot_values) {
        auto p = pred.slot_values.find(slot);
        correct += (p != pred.slot_values.end() && p->second == value) ? 1 : 0;
      }
      goal_acc_sum += static_cast<double>(correct) / static_cast<double>(gold.slot_values.size());
      ++report.turns_with_gold_slots;
    }
  }
  const auto n = static_cast<double>(report.turns);
  report.active_intent_accuracy = static_cast<double>(intent_hits) / n;
  report.requested_slots_f1 = f1_sum / n;
  report.joint_goal_accuracy = static_cast<double>(joint_hits) / n;
  report.average_goal_accuracy =
      report.turns_with_gold_slots == 0 ? 0.0 : goal_acc_sum / static_cast<double>(report.turns_with_gold_slots);
  return report;
}

// ---- file formats ---------------------------------------------------------

namespace {

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ExtrinsicError("cannot open '" + path.string() + "' for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ExtrinsicError(path.string() + ": malformed JSON: " + e.what());
  }
}

template <typename Fn>
void for_each_jsonl(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw ExtrinsicError("cannot open '" + path.string() + "' for reading");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ExtrinsicError(where + ": malformed JSON: " + e.what());
    }
    try {
      fn(j);
    } catch (const json::exception& e) {
      throw ExtrinsicError(where + ": " + e.what());
    }
  }
}

SlotValues slot_map(const json& j) {
  SlotValues out;
  if (j.is_null()) return out;
  for (const auto& [k, v] : j.items()) out[k] = v.get<std::string>();
  return out;
}

std::set<std::string> string_set(const json& j) {
  std::set<std::string> out;
  if (j.is_null()) return out;
  for (const auto& v : j) out.insert(v.get<std::string>());
  return out;
}

}  // namespace

VenueDatabase load_venue_db(const std::filesystem::path& path) {
  const json root = read_json_file(path);
  if (!root.is_object()) throw ExtrinsicError(path.string() + ": expected an object keyed by domain");
  VenueDatabase db;
  try {
    for (const auto& [domain, records] : root.items()) {
      auto& list = db.domains[domain];
      for (const auto& r : records) list.push_back({r.at("id").get<std::string>(), slot_map(r.at("attributes"))});
    }
  } catch (const json::exception& e) {
    throw ExtrinsicError(path.string() + ": " + e.what());
  }
  db.validate();
  return db;
}

std::vector<EpisodeTrace> load_traces(const std::filesystem::path& path) {
  std::vector<EpisodeTrace> out;
  for_each_jsonl(path, [&](const json& j) {
    EpisodeTrace t;
    t.dialog_id = j.at("dialog_id").get<std::string>();
    if (auto fc = j.find("final_constraints"); fc != j.end()) {
      for (const auto& [domain, slots] : fc->items()) t.final_constraints[domain] = slot_map(slots);
    }
    if (auto off = j.find("offered_entity_ids"); off != j.end()) {
      for (const auto& [domain, ids] : off->items()) t.offered_entity_ids[domain] = string_set(ids);
    }
    if (auto m = j.find("mentioned_slots"); m != j.end()) t.mentioned_slots = string_set(*m);
    out.push_back(std::move(t));
  });
  return out;
}

std::vector<FramePrediction> load_frames(const std::filesystem::path& path) {
  std::vector<FramePrediction> out;
  for_each_jsonl(path, [&](const json& j) {
    FramePrediction f;
    f.dialog_id = j.at("dialog_id").get<std::string>();
    const auto turn = j.at("turn_index").get<long long>();
    if (turn < 0) throw ExtrinsicError("negative turn_index for dialog '" + f.dialog_id + "'");
    f.turn_index = static_cast<std::size_t>(turn);
    f.active_intent = j.value("active_intent", "");
    if (auto r = j.find("requested_slots"); r != j.end()) f.requested_slots = string_set(*r);
    if (auto s = j.find("slot_values"); s != j.end()) f.slot_values = slot_map(*s);
    out.push_back(std::move(f));
  });
  return out;
}

std::vector<Episode> pair_episodes(const Corpus& corpus, const std::vector<EpisodeTrace>& traces) {
  std::unordered_map<std::string, const Dialog*> by_id;
  for (const auto& d : corpus.dialogs) by_id.emplace(d.id, &d);
  std::vector<Episode> out;
  out.reserve(traces.size());
  for (const auto& t : traces) {
    auto it = by_id.find(t.dialog_id);
    if (it == by_id.end()) throw ExtrinsicError("trace for unknown dialog '" + t.dialog_id + "'");
    out.push_back({it->second->goal, t});
  }
  return out;
}

std::string multiwoz_report_json(const MultiwozReport& report) {
  json j = {{"inform_rate", report.inform_rate},
            {"success_rate", report.success_rate},
            {"episodes", report.episodes},
            {"informed", report.informed},
            {"succeeded", report.succeeded}};
  return j.dump(2);
}

std::string sgd_report_json(const SgdReport& report) {
  json j = {{"active_intent_accuracy", report.active_intent_accuracy},
            {"requested_slots_f1", report.requested_slots_f1},
            {"average_goal_accuracy", report.average_goal_accuracy},
            {"joint_goal_accuracy", report.joint_goal_accuracy},
            {"turns", report.turns},
            {"turns_with_gold_slots", report.turns_with_gold_slots}};
  return j.dump(2);
}

}  // namespace dialogaug
