#include "dialogaug/prompt.hpp"

#include <numeric>

namespace dialogaug {

std::string_view role_marker(PromptStyle style, Speaker speaker) {
  const bool user = speaker == Speaker::User;
  switch (style) {
    case PromptStyle::SpecialTokens: return user ? "⟨user⟩" : "⟨system⟩";
    case PromptStyle::NaturalColon: return user ? "user:" : "system:";
    case PromptStyle::NaturalSays: return user ? "user says" : "system says";
  }
  return {};
}

std::string to_string(PromptStyle style) {
  switch (style) {
    case PromptStyle::SpecialTokens: return "special";
    case PromptStyle::NaturalColon: return "natural-colon";
    case PromptStyle::NaturalSays: return "natural-says";
  }
  return "natural-colon";
}

PromptStyle parse_prompt_style(std::string_view name) {
  if (name == "special") return PromptStyle::SpecialTokens;
  if (name == "natural-colon") return PromptStyle::NaturalColon;
  if (name == "natural-says") return PromptStyle::NaturalSays;
  throw std::invalid_argument("unknown prompt style '" + std::string(name) + "'");
}

const PhraseTable& default_phrase_table() {
  static const PhraseTable table = {
      {{"train", "departure"}, "train departing"},
      {{"train", "destination"}, "train destination"},
  };
  return table;
}

std::string render_slot_template(const std::vector<BeliefSlot>& belief, const PhraseTable& table) {
  std::string out;
  for (const auto& slot : belief) {
    if (!out.empty()) out += ", ";
    if (auto it = table.find({slot.domain, slot.slot}); it != table.end()) {
      out += it->second + " " + slot.value;
    } else {
      out += slot.domain + " " + slot.slot + " " + slot.value;
    }
  }
  return out;
}

void validate_prompt_config(const PromptConfig& config) {
  if (config.mask_literal.empty()) throw PromptError("mask literal must be non-empty");
  for (auto style : {PromptStyle::SpecialTokens, PromptStyle::NaturalColon, PromptStyle::NaturalSays}) {
    for (auto speaker : {Speaker::User, Speaker::System}) {
      if (role_marker(style, speaker).find(config.mask_literal) != std::string_view::npos) {
        throw PromptError("mask literal '" + config.mask_literal + "' occurs inside role marker '" +
                          std::string(role_marker(style, speaker)) + "'");
      }
    }
  }
}

RenderedPrompt render(const Dialog& dialog, std::size_t target, const PromptConfig& config,
                      const PhraseTable& table) {
  if (target >= dialog.exchanges.size()) {
    throw PromptError("dialog '" + dialog.id + "': target exchange " + std::to_string(target) +
                      " out of range (n=" + std::to_string(dialog.exchanges.size()) + ")");
  }
  validate_prompt_config(config);

  const bool glued = config.style == PromptStyle::SpecialTokens;
  std::vector<std::string> segments;
  auto emit = [&](Speaker speaker, const std::string& text) {
    std::string seg(role_marker(config.style, speaker));
    if (!glued) seg += ' ';
    seg += text;
    segments.push_back(std::move(seg));
  };
  auto emit_context = [&](Speaker speaker, const std::string& text) {
    if (text.find(config.mask_literal) != std::string::npos) {
      throw PromptError("dialog '" + dialog.id + "': context text contains the mask literal '" +
                        config.mask_literal + "'");
    }
    emit(speaker, text);
  };

  for (std::size_t i = 0; i < target; ++i) {
    emit_context(Speaker::User, dialog.exchanges[i].user.text);
    emit_context(Speaker::System, dialog.exchanges[i].system.text);
  }

  const Exchange& masked = dialog.exchanges[target];
  std::string masked_content = config.mask_literal;
  if (config.include_bs_slots) {
    const std::string slots = render_slot_template(masked.belief, table);
    if (slots.find(config.mask_literal) != std::string::npos) {
      throw PromptError("dialog '" + dialog.id + "': slot template contains the mask literal");
    }
    if (!slots.empty()) masked_content = slots + config.separator + config.mask_literal;
  }
  emit(Speaker::User, masked_content);
  emit_context(Speaker::System, masked.system.text);

  if (config.include_future) {
    for (std::size_t i = target + 1; i < dialog.exchanges.size(); ++i) {
      emit_context(Speaker::User, dialog.exchanges[i].user.text);
      emit_context(Speaker::System, dialog.exchanges[i].system.text);
    }
  }

  RenderedPrompt out;
  out.dialog_id = dialog.id;
  out.target_index = target;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i != 0) out.input_text += config.separator;
    out.input_text += segments[i];
  }
  out.reference = masked.user.text;
  return out;
}

std::vector<std::size_t> user_turn_indices(const Dialog& dialog) {
  std::vector<std::size_t> out(dialog.exchanges.size());
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

}  // namespace dialogaug
