#include <doctest.h>

#include <string>
#include <vector>

#include "dialogaug/text.hpp"

using dialogaug::tokenize;
using V = std::vector<std::string>;

TEST_CASE("tokenize lowercases and splits punctuation") {
  CHECK(tokenize("That train is leaving from Cambridge on Sunday, correct?") ==
        V{"that", "train", "is", "leaving", "from", "cambridge", "on", "sunday", ",", "correct", "?"});
  CHECK(tokenize("a.b;c") == V{"a", ".", "b", ";", "c"});
  CHECK(tokenize("wait...") == V{"wait", ".", ".", "."});
  CHECK(tokenize("time: 19:30!") == V{"time", ":", "19", ":", "30", "!"});
}

TEST_CASE("tokenize handles unicode whitespace and normalization") {
  CHECK(tokenize("  two  spaces\t\nhere ") == V{"two", "spaces", "here"});
  CHECK(tokenize(" ") == V{});
  CHECK(tokenize("") == V{});
  // NFKC folds the ligature and full-width letters
  CHECK(tokenize("ﬁne ＡＢ") == V{"fine", "ab"});
  CHECK(tokenize("ÉCOLE") == V{"école"});
  // apostrophes and hyphens stay inside tokens
  CHECK(tokenize("i'm well-known") == V{"i'm", "well-known"});
}

TEST_CASE("trim, is_blank and join") {
  CHECK(dialogaug::trim("　 hi \t") == "hi");
  CHECK(dialogaug::trim("") == "");
  CHECK(dialogaug::is_blank("  \n"));
  CHECK_FALSE(dialogaug::is_blank(" x "));
  CHECK(dialogaug::join({"a", "b", "c"}, ", ") == "a, b, c");
  CHECK(dialogaug::join({}, "-") == "");
}
