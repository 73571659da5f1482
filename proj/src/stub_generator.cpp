#include <array>

#include "dialogaug/model_services.hpp"
#include "dialogaug/rng.hpp"

namespace dialogaug {

namespace {

// Changing this list changes every committed stub golden.
constexpr std::array<std::string_view, 256> kStubWords = {
    "a", "about", "after", "afternoon", "again", "airport", "all", "also", "am", "an", "and",
    "any", "anything", "area", "arrive", "arriving", "at", "attraction", "available", "be", "book",
    "booking", "bus", "but", "by", "cambridge", "can", "centre", "cheap", "check", "cinema",
    "city", "close", "college", "could", "day", "departing", "depart", "destination", "dinner",
    "do", "does", "east", "eat", "evening", "expensive", "find", "fine", "first", "for", "free",
    "friday", "from", "get", "give", "go", "going", "good", "great", "guest", "hall", "has",
    "have", "help", "here", "hi", "hospital", "hotel", "house", "how", "i", "in", "indian",
    "information", "internet", "is", "it", "italian", "just", "know", "leave", "leaving", "like",
    "located", "looking", "lunch", "make", "me", "menu", "minutes", "moderate", "monday", "more",
    "morning", "museum", "my", "name", "near", "need", "needs", "next", "night", "nights", "no",
    "north", "not", "number", "of", "on", "one", "or", "other", "park", "parking", "people",
    "phone", "place", "please", "police", "postcode", "price", "range", "reference", "reservation",
    "restaurant", "room", "saturday", "same", "school", "serves", "should", "some", "something",
    "south", "star", "stars", "station", "stay", "still", "sunday", "sure", "swimming", "taxi",
    "tell", "thank", "thanks", "that", "the", "their", "then", "there", "thursday", "ticket",
    "time", "to", "today", "tomorrow", "town", "train", "travel", "tuesday", "two", "type", "up",
    "want", "was", "we", "wednesday", "west", "what", "when", "where", "which", "wifi", "will",
    "with", "within", "would", "yes", "you", "your", "address", "already", "anywhere", "around",
    "away", "back", "before", "best", "between", "both", "bye", "call", "car", "chinese", "choose",
    "cost", "cuisine", "date", "dates", "departure", "distance", "doing", "done", "during", "each",
    "else", "enough", "entrance", "even", "ever", "fee", "food", "four", "friend", "gallery",
    "guesthouse", "hello", "hold", "hours", "instead", "kind", "last", "later", "left", "little",
    "long", "lot", "many", "maybe", "meal", "much", "must", "nice", "nightclub", "now", "o'clock",
    "okay", "only", "open", "options", "order", "over", "pay", "pick", "plan", "plus", "pool",
    "pretty", "quite", "rather", "really", "recommend", "reserve", "right", "road"
};

}  // namespace

std::span<const std::string_view> stub_word_list() { return kStubWords; }

std::vector<GenerationCandidate> stub_generate(std::string_view prompt, int num_return,
                                               std::uint64_t seed_salt) {
  if (num_return < 1) throw std::invalid_argument("num_return must be >= 1");
  const std::uint64_t prompt_hash = fnv1a64(prompt);
  std::vector<GenerationCandidate> out;
  out.reserve(static_cast<std::size_t>(num_return));
  for (int i = 0; i < num_return; ++i) {
    Pcg32 rng(prompt_hash ^ (seed_salt + static_cast<std::uint64_t>(i)));
    const std::uint32_t length = rng.uniform_int(5, 12);
    std::string text;
    for (std::uint32_t w = 0; w < length; ++w) {
      if (w != 0) text += ' ';
      text += kStubWords[rng.bounded(static_cast<std::uint32_t>(kStubWords.size()))];
    }
    out.push_back({std::move(text), -static_cast<double>(i), static_cast<std::size_t>(i)});
  }
  return out;
}

std::vector<GenerationCandidate> StubGenerator::generate(const GenerationRequest& request) {
  request.validate();
  return stub_generate(request.prompt, request.num_return, seed_salt_);
}

}  // namespace dialogaug
