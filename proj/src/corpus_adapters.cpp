// Raw-format adapters. Field mappings:
//
// MultiWoZ 2.x data.json: {<dialog id>: {"goal": {<domain>: {"info": {...},
//   "reqt": [...]}, ...}, "log": [{"text", "metadata"}, ...]}}
//   - log alternates user/system, user first; an odd-length log is rejected.
//   - belief of exchange i = metadata of log[2i+1] (state after the user turn):
//     "semi" slots verbatim, "book" slots as "book_<slot>" ("booked" skipped);
//     empty, "not mentioned" and "none" values are dropped.
//   - goal: "info" -> constraints, "reqt" -> requestables, for every domain
//     whose goal object is non-empty. Domains are the goal domains, or the
//     belief domains when the goal names none.
//
// SGD dialogues_*.json: [{"dialogue_id", "services", "turns": [{"speaker",
//   "utterance", "frames": [{"service", "state": {"slot_values": {..}}}]}]}]
//   - turns alternate USER/SYSTEM, user first.
//   - belief of exchange i = union over the user turn's frames of
//     (service, slot, first value). No goal.

#include <nlohmann/json.hpp>

#include <algorithm>

#include "dialogaug/corpus.hpp"

namespace dialogaug::detail {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& dialog_id, const std::string& path, const std::string& what) {
  throw CorpusSchemaError("dialog '" + dialog_id + "': " + path + ": " + what);
}

ordered_json parse_json(std::string_view text) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw CorpusSchemaError(std::string("malformed JSON: ") + e.what());
  }
}

std::string scalar_to_string(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

bool dropped_value(const std::string& v) {
  return v.empty() || v == "not mentioned" || v == "none";
}

constexpr const char* kMultiwozDomains[] = {"attraction", "hospital", "hotel", "police",
                                           "restaurant", "taxi",     "train"};

std::vector<BeliefSlot> multiwoz_belief(const ordered_json& metadata) {
  std::vector<BeliefSlot> belief;
  if (!metadata.is_object()) return belief;
  for (const auto& [domain, body] : metadata.items()) {
    if (!body.is_object()) continue;
    if (auto semi = body.find("semi"); semi != body.end() && semi->is_object()) {
      for (const auto& [slot, value] : semi->items()) {
        std::string v = scalar_to_string(value);
        if (!dropped_value(v)) belief.push_back({domain, slot, std::move(v)});
      }
    }
    if (auto book = body.find("book"); book != body.end() && book->is_object()) {
      for (const auto& [slot, value] : book->items()) {
        if (slot == "booked") continue;
        std::string v = scalar_to_string(value);
        if (!dropped_value(v)) belief.push_back({domain, "book_" + slot, std::move(v)});
      }
    }
  }
  return belief;
}

}  // namespace

Corpus parse_multiwoz(std::string_view json_text) {
  const ordered_json root = parse_json(json_text);
  if (!root.is_object()) throw CorpusSchemaError("multiwoz: top level must be an object keyed by dialog id");

  Corpus corpus;
  corpus.source_format = SourceFormat::MultiWoZ;
  for (const auto& [raw_id, body] : root.items()) {
    std::string id = raw_id;
    if (id.size() > 5 && id.ends_with(".json")) id.resize(id.size() - 5);
    if (!body.is_object()) fail(id, "$", "expected object");

    auto log = body.find("log");
    if (log == body.end() || !log->is_array()) fail(id, "log", "missing array");
    if (log->size() % 2 != 0) fail(id, "log", "trailing user turn without system reply");

    Dialog dialog;
    dialog.id = id;
    for (std::size_t i = 0; i + 1 < log->size(); i += 2) {
      const auto& u = (*log)[i];
      const auto& s = (*log)[i + 1];
      const std::string up = "log[" + std::to_string(i) + "]";
      const std::string sp = "log[" + std::to_string(i + 1) + "]";
      if (!u.is_object() || !u.contains("text") || !u["text"].is_string()) fail(id, up + ".text", "expected string");
      if (!s.is_object() || !s.contains("text") || !s["text"].is_string()) fail(id, sp + ".text", "expected string");
      std::vector<BeliefSlot> belief;
      if (auto md = s.find("metadata"); md != s.end()) belief = multiwoz_belief(*md);
      dialog.exchanges.push_back(make_exchange(i / 2, u["text"].get<std::string>(), std::move(belief),
                                               s["text"].get<std::string>()));
    }

    if (auto g = body.find("goal"); g != body.end() && g->is_object()) {
      Goal goal;
      for (const char* domain : kMultiwozDomains) {
        auto dg_it = g->find(domain);
        if (dg_it == g->end() || !dg_it->is_object() || dg_it->empty()) continue;
        DomainGoal dg;
        if (auto info = dg_it->find("info"); info != dg_it->end() && info->is_object()) {
          for (const auto& [slot, value] : info->items()) {
            std::string v = scalar_to_string(value);
            if (!v.empty()) dg.constraints[slot] = std::move(v);
          }
        }
        if (auto reqt = dg_it->find("reqt"); reqt != dg_it->end() && reqt->is_array()) {
          for (const auto& r : *reqt) {
            std::string name = scalar_to_string(r);
            if (!name.empty()) dg.requestables.insert(std::move(name));
          }
        }
        goal[domain] = std::move(dg);
        dialog.domains.insert(domain);
      }
      dialog.goal = std::move(goal);
    }
    if (dialog.domains.empty()) {
      for (const auto& ex : dialog.exchanges) {
        for (const auto& slot : ex.belief) dialog.domains.insert(slot.domain);
      }
    }
    corpus.dialogs.push_back(std::move(dialog));
  }
  return corpus;
}

Corpus parse_sgd_files(const std::vector<std::filesystem::path>& files) {
  Corpus corpus;
  corpus.source_format = SourceFormat::SGD;
  for (const auto& file : files) {
    const ordered_json root = parse_json(read_file(file));
    if (!root.is_array()) throw CorpusSchemaError("sgd: '" + file.string() + "' must hold an array of dialogues");
    for (const auto& d : root) {
      if (!d.is_object() || !d.contains("dialogue_id") || !d["dialogue_id"].is_string()) {
        throw CorpusSchemaError("sgd: dialogue without string 'dialogue_id' in '" + file.string() + "'");
      }
      Dialog dialog;
      dialog.id = d["dialogue_id"].get<std::string>();
      const std::string& id = dialog.id;
      if (auto services = d.find("services"); services != d.end() && services->is_array()) {
        for (const auto& s : *services) dialog.domains.insert(scalar_to_string(s));
      }
      auto turns = d.find("turns");
      if (turns == d.end() || !turns->is_array()) fail(id, "turns", "missing array");
      if (turns->size() % 2 != 0) fail(id, "turns", "trailing user turn without system reply");

      for (std::size_t i = 0; i + 1 < turns->size(); i += 2) {
        const auto& u = (*turns)[i];
        const auto& s = (*turns)[i + 1];
        const std::string up = "turns[" + std::to_string(i) + "]";
        const std::string sp = "turns[" + std::to_string(i + 1) + "]";
        if (u.value("speaker", "") != "USER") fail(id, up + ".speaker", "expected USER");
        if (s.value("speaker", "") != "SYSTEM") fail(id, sp + ".speaker", "expected SYSTEM");
        if (!u.contains("utterance") || !u["utterance"].is_string()) fail(id, up + ".utterance", "expected string");
        if (!s.contains("utterance") || !s["utterance"].is_string()) fail(id, sp + ".utterance", "expected string");

        std::vector<BeliefSlot> belief;
        if (auto frames = u.find("frames"); frames != u.end() && frames->is_array()) {
          for (const auto& frame : *frames) {
            const std::string service = frame.value("service", "");
            auto state = frame.find("state");
            if (state == frame.end() || !state->is_object()) continue;
            auto values = state->find("slot_values");
            if (values == state->end() || !values->is_object()) continue;
            for (const auto& [slot, vs] : values->items()) {
              std::string v = vs.is_array() ? (vs.empty() ? "" : scalar_to_string(vs.front()))
                                             : scalar_to_string(vs);
              if (!v.empty()) belief.push_back({service, slot, std::move(v)});
            }
          }
        }
        dialog.exchanges.push_back(make_exchange(i / 2, u["utterance"].get<std::string>(), std::move(belief),
                                                 s["utterance"].get<std::string>()));
      }
      corpus.dialogs.push_back(std::move(dialog));
    }
  }
  return corpus;
}

}  // namespace dialogaug::detail
