#pragma once

// Random generators and fixtures shared by the extrinsic unit tests and the
// acceptance gate.

#include <random>
#include <string>
#include <vector>

#include "dialogaug/extrinsic.hpp"

namespace extrinsic_cases {

// restaurant {e1, e2, e3}
inline dialogaug::VenueDatabase toy_db() {
  dialogaug::VenueDatabase db;
  db.domains["restaurant"] = {{"e1", {{"food", "indian"}, {"area", "centre"}}},
                              {"e2", {{"food", "indian"}, {"area", "north"}}},
                              {"e3", {{"food", "chinese"}, {"area", "centre"}}}};
  return db;
}

inline dialogaug::VenueDatabase random_db(std::mt19937_64& rng) {
  static const char* kAreas[] = {"centre", "north", "south"};
  static const char* kFoods[] = {"indian", "chinese", "thai"};
  dialogaug::VenueDatabase db;
  for (const char* domain : {"restaurant", "hotel"}) {
    for (int i = 0; i < 6; ++i) {
      dialogaug::VenueRecord r;
      r.id = std::string(domain).substr(0, 1) + std::to_string(i);
      r.attributes["area"] = kAreas[rng() % 3];
      if (rng() % 4 != 0) r.attributes["food"] = kFoods[rng() % 3];
      db.domains[domain].push_back(std::move(r));
    }
  }
  return db;
}

inline dialogaug::SlotValues random_constraints(std::mt19937_64& rng) {
  static const char* kValues[] = {"centre", "north", "indian", "chinese", "dontcare", "thai"};
  dialogaug::SlotValues c;
  if (rng() % 2) c["area"] = kValues[rng() % 2];
  if (rng() % 2) c["food"] = kValues[2 + rng() % 4];
  return c;
}

// Returns a goal and trace over random_db's domains.
inline dialogaug::Episode random_episode(std::mt19937_64& rng, int serial) {
  static const char* kSlots[] = {"phone", "postcode", "address"};
  dialogaug::Episode ep;
  ep.trace.dialog_id = "rnd" + std::to_string(serial);
  dialogaug::Goal goal;
  for (const char* domain : {"restaurant", "hotel"}) {
    if (rng() % 3 == 0) continue;
    dialogaug::DomainGoal dg;
    dg.constraints = random_constraints(rng);
    for (const char* s : kSlots) {
      if (rng() % 3 == 0) dg.requestables.insert(s);
    }
    goal[domain] = dg;
    const std::string prefix = std::string(domain).substr(0, 1);
    switch (rng() % 3) {
      case 0:
        for (int i = 0; i < 6; ++i) {
          if (rng() % 3 == 0) ep.trace.offered_entity_ids[domain].insert(prefix + std::to_string(i));
        }
        break;
      case 1: ep.trace.final_constraints[domain] = random_constraints(rng); break;
      default: break;
    }
  }
  for (const char* s : kSlots) {
    if (rng() % 2) ep.trace.mentioned_slots.insert(s);
  }
  ep.goal = std::move(goal);
  return ep;
}

// Aligned prediction/gold sets in which every gold turn has at least one slot.
inline std::pair<std::vector<dialogaug::FramePrediction>, std::vector<dialogaug::FramePrediction>>
random_frames(std::mt19937_64& rng) {
  static const char* kSlots[] = {"food", "area", "stars", "day"};
  static const char* kValues[] = {"a", "b", "c"};
  static const char* kIntents[] = {"Find", "Book"};
  std::vector<dialogaug::FramePrediction> preds;
  std::vector<dialogaug::FramePrediction> golds;
  const std::size_t turns = 1 + rng() % 8;
  for (std::size_t t = 0; t < turns; ++t) {
    dialogaug::FramePrediction gold;
    gold.dialog_id = "d" + std::to_string(t % 3);
    gold.turn_index = t;
    gold.active_intent = kIntents[rng() % 2];
    for (const char* s : kSlots) {
      if (rng() % 2) gold.slot_values[s] = kValues[rng() % 3];
    }
    if (gold.slot_values.empty()) gold.slot_values[kSlots[rng() % 4]] = kValues[rng() % 3];
    if (rng() % 2) gold.requested_slots.insert("phone");

    dialogaug::FramePrediction pred = gold;
    if (rng() % 3 == 0) pred.active_intent = kIntents[rng() % 2];
    for (const char* s : kSlots) {
      const auto roll = rng() % 5;
      if (roll == 0) pred.slot_values.erase(s);
      else if (roll == 1) pred.slot_values[s] = kValues[rng() % 3];
    }
    if (rng() % 4 == 0) pred.requested_slots.insert("postcode");
    golds.push_back(std::move(gold));
    preds.push_back(std::move(pred));
  }
  return {std::move(preds), std::move(golds)};
}

}  // namespace extrinsic_cases
