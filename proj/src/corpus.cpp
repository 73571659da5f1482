#include "dialogaug/corpus.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "dialogaug/text.hpp"

namespace dialogaug {

using nlohmann::json;

namespace {

[[noreturn]] void schema_fail(const std::string& dialog_id, const std::string& field_path,
                              const std::string& what) {
  throw CorpusSchemaError("dialog '" + dialog_id + "': " + field_path + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& dialog_id,
                    const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_fail(dialog_id, path + "." + key, "missing field");
  return *it;
}

std::string require_string(const json& value, const std::string& dialog_id,
                           const std::string& path) {
  if (!value.is_string()) schema_fail(dialog_id, path, "expected string");
  return value.get<std::string>();
}

Dialog parse_dialog(const json& d, std::size_t position) {
  const std::string where = "dialogs[" + std::to_string(position) + "]";
  if (!d.is_object()) schema_fail("?", where, "expected object");

  Dialog dialog;
  dialog.id = require_string(require(d, "id", "?", where), "?", where + ".id");
  const std::string& id = dialog.id;

  const json& domains = require(d, "domains", id, where);
  if (!domains.is_array()) schema_fail(id, where + ".domains", "expected array");
  for (std::size_t i = 0; i < domains.size(); ++i) {
    dialog.domains.insert(
        require_string(domains[i], id, where + ".domains[" + std::to_string(i) + "]"));
  }

  const json& exchanges = require(d, "exchanges", id, where);
  if (!exchanges.is_array()) schema_fail(id, where + ".exchanges", "expected array");
  for (std::size_t i = 0; i < exchanges.size(); ++i) {
    const std::string ex_path = where + ".exchanges[" + std::to_string(i) + "]";
    const json& ex = exchanges[i];
    if (!ex.is_object()) schema_fail(id, ex_path, "expected object");
    std::string user = require_string(require(ex, "user", id, ex_path), id, ex_path + ".user");
    std::string system =
        require_string(require(ex, "system", id, ex_path), id, ex_path + ".system");
    std::vector<BeliefSlot> belief;
    const json& b = require(ex, "belief", id, ex_path);
    if (!b.is_array()) schema_fail(id, ex_path + ".belief", "expected array");
    for (std::size_t k = 0; k < b.size(); ++k) {
      const std::string slot_path = ex_path + ".belief[" + std::to_string(k) + "]";
      if (!b[k].is_object()) schema_fail(id, slot_path, "expected object");
      BeliefSlot slot;
      slot.domain = require_string(require(b[k], "domain", id, slot_path), id, slot_path + ".domain");
      slot.slot = require_string(require(b[k], "slot", id, slot_path), id, slot_path + ".slot");
      slot.value = require_string(require(b[k], "value", id, slot_path), id, slot_path + ".value");
      belief.push_back(std::move(slot));
    }
    dialog.exchanges.push_back(make_exchange(i, std::move(user), std::move(belief), std::move(system)));
  }

  if (auto g = d.find("goal"); g != d.end() && !g->is_null()) {
    if (!g->is_object()) schema_fail(id, where + ".goal", "expected object");
    Goal goal;
    for (const auto& [domain, body] : g->items()) {
      const std::string gp = where + ".goal." + domain;
      if (!body.is_object()) schema_fail(id, gp, "expected object");
      DomainGoal dg;
      if (auto c = body.find("constraints"); c != body.end()) {
        if (!c->is_object()) schema_fail(id, gp + ".constraints", "expected object");
        for (const auto& [slot, value] : c->items()) {
          dg.constraints[slot] = require_string(value, id, gp + ".constraints." + slot);
        }
      }
      if (auto r = body.find("requestables"); r != body.end()) {
        if (!r->is_array()) schema_fail(id, gp + ".requestables", "expected array");
        for (std::size_t k = 0; k < r->size(); ++k) {
          dg.requestables.insert(
              require_string((*r)[k], id, gp + ".requestables[" + std::to_string(k) + "]"));
        }
      }
      goal[domain] = std::move(dg);
    }
    dialog.goal = std::move(goal);
  }
  return dialog;
}

json dialog_to_json(const Dialog& dialog) {
  json d;
  d["id"] = dialog.id;
  d["domains"] = json::array();
  for (const auto& domain : dialog.domains) d["domains"].push_back(domain);
  d["exchanges"] = json::array();
  for (const auto& ex : dialog.exchanges) {
    json e;
    e["user"] = ex.user.text;
    e["system"] = ex.system.text;
    e["belief"] = json::array();
    for (const auto& slot : ex.belief) {
      e["belief"].push_back({{"domain", slot.domain}, {"slot", slot.slot}, {"value", slot.value}});
    }
    d["exchanges"].push_back(std::move(e));
  }
  if (dialog.goal) {
    json g = json::object();
    for (const auto& [domain, dg] : *dialog.goal) {
      json body;
      body["constraints"] = json::object();
      for (const auto& [slot, value] : dg.constraints) body["constraints"][slot] = value;
      body["requestables"] = json::array();
      for (const auto& r : dg.requestables) body["requestables"].push_back(r);
      g[domain] = std::move(body);
    }
    d["goal"] = std::move(g);
  }
  return d;
}

void throw_on_violations(const Corpus& corpus) {
  const auto violations = validate(corpus);
  if (!violations.empty()) throw CorpusSchemaError(violations.front().describe());
}

}  // namespace

std::string Violation::describe() const {
  std::string out = "dialog '" + dialog_id + "'";
  if (exchange_index) out += " exchange " + std::to_string(*exchange_index);
  out += ": " + rule;
  if (!detail.empty()) out += " (" + detail + ")";
  return out;
}

Exchange make_exchange(std::size_t position, std::string user_text, std::vector<BeliefSlot> belief,
                       std::string system_text) {
  Exchange ex;
  ex.user = Turn{Speaker::User, std::move(user_text), 2 * position};
  ex.belief = std::move(belief);
  ex.system = Turn{Speaker::System, std::move(system_text), 2 * position + 1};
  return ex;
}

void renumber_turns(Dialog& dialog) {
  for (std::size_t i = 0; i < dialog.exchanges.size(); ++i) {
    auto& ex = dialog.exchanges[i];
    ex.user.speaker = Speaker::User;
    ex.user.index = 2 * i;
    ex.system.speaker = Speaker::System;
    ex.system.index = 2 * i + 1;
  }
}

namespace detail {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusIoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw CorpusIoError("read failure on '" + path.string() + "'");
  return buf.str();
}

}  // namespace detail

Corpus parse_canonical_corpus(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw CorpusSchemaError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw CorpusSchemaError("top level: expected object");
  auto dialogs = root.find("dialogs");
  if (dialogs == root.end() || !dialogs->is_array()) {
    throw CorpusSchemaError("top level: missing array field 'dialogs'");
  }
  Corpus corpus;
  corpus.source_format = SourceFormat::Canonical;
  for (std::size_t i = 0; i < dialogs->size(); ++i) {
    corpus.dialogs.push_back(parse_dialog((*dialogs)[i], i));
  }
  return corpus;
}

std::string serialize_corpus(const Corpus& corpus) {
  json root;
  root["dialogs"] = json::array();
  for (const auto& dialog : corpus.dialogs) root["dialogs"].push_back(dialog_to_json(dialog));
  return root.dump(2) + "\n";
}

Corpus read_corpus(const std::filesystem::path& path, SourceFormat format) {
  Corpus corpus;
  switch (format) {
    case SourceFormat::Canonical:
      corpus = parse_canonical_corpus(detail::read_file(path));
      break;
    case SourceFormat::MultiWoZ:
      corpus = detail::parse_multiwoz(detail::read_file(path));
      break;
    case SourceFormat::SGD: {
      std::vector<std::filesystem::path> files;
      std::error_code ec;
      if (std::filesystem::is_directory(path, ec)) {
        for (const auto& entry : std::filesystem::directory_iterator(path)) {
          const auto name = entry.path().filename().string();
          if (entry.is_regular_file() && name.rfind("dialogues_", 0) == 0 &&
              entry.path().extension() == ".json") {
            files.push_back(entry.path());
          }
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) {
          throw CorpusIoError("no dialogues_*.json files under '" + path.string() + "'");
        }
      } else {
        files.push_back(path);
      }
      corpus = detail::parse_sgd_files(files);
      break;
    }
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, SourceFormat format) {
  Corpus corpus = read_corpus(path, format);
  throw_on_violations(corpus);
  return corpus;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  const std::string text = serialize_corpus(corpus);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CorpusIoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw CorpusIoError("write failure on '" + path.string() + "'");
}

std::vector<Violation> validate(const Corpus& corpus) {
  std::vector<Violation> out;
  std::unordered_map<std::string, std::size_t> first_seen;

  for (std::size_t di = 0; di < corpus.dialogs.size(); ++di) {
    const Dialog& d = corpus.dialogs[di];
    if (is_blank(d.id)) out.push_back({d.id, std::nullopt, "empty-id", ""});

    auto [it, inserted] = first_seen.emplace(d.id, di);
    if (!inserted) {
      out.push_back({d.id, std::nullopt, "duplicate-dialog-id",
                     "dialogs #" + std::to_string(it->second) + " and #" + std::to_string(di) +
                         " share id '" + d.id + "'"});
    }
    if (d.exchanges.empty()) out.push_back({d.id, std::nullopt, "no-exchanges", ""});

    for (std::size_t i = 0; i < d.exchanges.size(); ++i) {
      const Exchange& ex = d.exchanges[i];
      if (ex.user.speaker != Speaker::User) out.push_back({d.id, i, "user-speaker", ""});
      if (ex.system.speaker != Speaker::System) out.push_back({d.id, i, "system-speaker", ""});
      if (ex.user.index != 2 * i || ex.system.index != 2 * i + 1) {
        out.push_back({d.id, i, "turn-index", ""});
      }
      if (is_blank(ex.user.text)) out.push_back({d.id, i, "empty-text", "user turn"});
      if (is_blank(ex.system.text)) out.push_back({d.id, i, "empty-text", "system turn"});

      std::set<std::pair<std::string, std::string>> seen;
      for (const auto& slot : ex.belief) {
        if (slot.domain.empty() || slot.slot.empty() || slot.value.empty()) {
          out.push_back({d.id, i, "empty-belief-field",
                         slot.domain + "/" + slot.slot + "=" + slot.value});
        }
        if (!seen.emplace(slot.domain, slot.slot).second) {
          out.push_back({d.id, i, "duplicate-belief-slot", slot.domain + "/" + slot.slot});
        }
      }
    }

    if (d.goal) {
      for (const auto& [domain, dg] : *d.goal) {
        for (const auto& [slot, value] : dg.constraints) {
          if (value.empty()) out.push_back({d.id, std::nullopt, "empty-goal-constraint", domain + "/" + slot});
        }
        for (const auto& r : dg.requestables) {
          if (r.empty()) out.push_back({d.id, std::nullopt, "empty-requestable", domain});
        }
      }
    }
  }
  return out;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.dialogs = corpus.dialogs.size();
  for (const auto& d : corpus.dialogs) {
    stats.exchanges += d.exchanges.size();
    stats.user_turns += d.exchanges.size();
    for (const auto& domain : d.domains) ++stats.domain_histogram[domain];
  }
  return stats;
}

std::string to_string(SourceFormat format) {
  switch (format) {
    case SourceFormat::Canonical: return "canonical";
    case SourceFormat::MultiWoZ: return "multiwoz";
    case SourceFormat::SGD: return "sgd";
  }
  return "canonical";
}

SourceFormat parse_source_format(std::string_view name) {
  if (name == "canonical") return SourceFormat::Canonical;
  if (name == "multiwoz") return SourceFormat::MultiWoZ;
  if (name == "sgd") return SourceFormat::SGD;
  throw std::invalid_argument("unknown corpus format '" + std::string(name) + "'");
}

}  // namespace dialogaug
