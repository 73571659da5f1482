#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dialogaug/corpus.hpp"

namespace dialogaug {

enum class PromptStyle {
  SpecialTokens,  // ⟨user⟩ / ⟨system⟩, glued to the text
  NaturalColon,   // "user:" / "system:"
  NaturalSays,    // "user says" / "system says"
};

std::string_view role_marker(PromptStyle style, Speaker speaker);
std::string to_string(PromptStyle style);
PromptStyle parse_prompt_style(std::string_view name);

struct PromptConfig {
  PromptStyle style = PromptStyle::NaturalColon;
  bool include_future = true;
  bool include_bs_slots = false;
  std::string mask_literal = "<mask>";
  std::string separator = " ";
};

struct RenderedPrompt {
  std::string dialog_id;
  std::size_t target_index = 0;
  std::string input_text;  // masked model input
  std::string reference;   // original user text at target_index
};

class PromptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// (domain, slot) -> leading phrase; the value is appended after one space.
using PhraseTable = std::map<std::pair<std::string, std::string>, std::string>;

const PhraseTable& default_phrase_table();

std::string render_slot_template(const std::vector<BeliefSlot>& belief,
                                 const PhraseTable& table = default_phrase_table());

// Throws PromptError if the mask literal is empty or overlaps a role marker.
void validate_prompt_config(const PromptConfig& config);

RenderedPrompt render(const Dialog& dialog, std::size_t target, const PromptConfig& config,
                      const PhraseTable& table = default_phrase_table());

std::vector<std::size_t> user_turn_indices(const Dialog& dialog);

}  // namespace dialogaug
