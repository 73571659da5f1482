#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dialogaug {

enum class Speaker { User, System };

struct Turn {
  Speaker speaker = Speaker::User;
  std::string text;
  std::size_t index = 0;  // position in the flattened U/S sequence

  bool operator==(const Turn&) const = default;
};

struct BeliefSlot {
  std::string domain;
  std::string slot;
  std::string value;

  bool operator==(const BeliefSlot&) const = default;
};

struct Exchange {
  Turn user;
  std::vector<BeliefSlot> belief;
  Turn system;

  bool operator==(const Exchange&) const = default;
};

struct DomainGoal {
  std::map<std::string, std::string> constraints;
  std::set<std::string> requestables;

  bool operator==(const DomainGoal&) const = default;
};

// Keyed by domain name.
using Goal = std::map<std::string, DomainGoal>;

struct Dialog {
  std::string id;
  std::set<std::string> domains;
  std::vector<Exchange> exchanges;
  std::optional<Goal> goal;

  bool operator==(const Dialog&) const = default;
};

enum class SourceFormat { Canonical, MultiWoZ, SGD };

struct Corpus {
  std::vector<Dialog> dialogs;
  SourceFormat source_format = SourceFormat::Canonical;

  bool operator==(const Corpus&) const = default;
};

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CorpusIoError : public CorpusError {
 public:
  using CorpusError::CorpusError;
};

class CorpusSchemaError : public CorpusError {
 public:
  using CorpusError::CorpusError;
};

struct Violation {
  std::string dialog_id;
  std::optional<std::size_t> exchange_index;
  std::string rule;
  std::string detail;

  std::string describe() const;
};

struct CorpusStats {
  std::size_t dialogs = 0;
  std::size_t exchanges = 0;
  std::size_t user_turns = 0;
  std::map<std::string, std::size_t> domain_histogram;
};

// Builds an Exchange with turn indices 2i / 2i+1 for exchange position i.
Exchange make_exchange(std::size_t position, std::string user_text,
                       std::vector<BeliefSlot> belief, std::string system_text);

// Re-stamps speaker and index fields from exchange positions.
void renumber_turns(Dialog& dialog);

// Parses and adapts without checking invariants; see validate().
Corpus read_corpus(const std::filesystem::path& path, SourceFormat format);

// read_corpus, then throws CorpusSchemaError on the first violation.
Corpus load_corpus(const std::filesystem::path& path, SourceFormat format);
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);

// Canonical serialization used by write_corpus; exposed for byte-level tests.
std::string serialize_corpus(const Corpus& corpus);
Corpus parse_canonical_corpus(std::string_view json_text);

std::vector<Violation> validate(const Corpus& corpus);
CorpusStats corpus_stats(const Corpus& corpus);

std::string to_string(SourceFormat format);
SourceFormat parse_source_format(std::string_view name);

namespace detail {
Corpus parse_multiwoz(std::string_view json_text);
Corpus parse_sgd_files(const std::vector<std::filesystem::path>& files);
std::string read_file(const std::filesystem::path& path);
}  // namespace detail

}  // namespace dialogaug
