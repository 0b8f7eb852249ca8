#include "lyricstat/style.hpp"

namespace lyricstat::style {

namespace {

bool is_vowel(unsigned char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

// Bytes of multi-byte UTF-8 sequences count as (non-vowel) letters.
bool is_letter(unsigned char c) { return (c >= 'a' && c <= 'z') || c >= 0x80; }

}  // namespace

// Rules:
//  1. count maximal runs of a, e, i, o, u, y;
//  2. a final "e" after a consonant is silent (love, the), except in a
//     consonant + "le" ending (table, little);
//  3. at least one syllable.
int count_syllables(std::string_view word) {
  int groups = 0;
  bool prev_vowel = false;
  for (unsigned char c : word) {
    const bool v = is_vowel(c);
    if (v && !prev_vowel) ++groups;
    prev_vowel = v;
  }
  const std::size_t n = word.size();
  if (n >= 2 && word[n - 1] == 'e') {
    const auto before = static_cast<unsigned char>(word[n - 2]);
    if (is_letter(before) && !is_vowel(before)) {
      const bool consonant_le =
          before == 'l' && n >= 3 && is_letter(static_cast<unsigned char>(word[n - 3])) &&
          !is_vowel(static_cast<unsigned char>(word[n - 3]));
      if (!consonant_le) --groups;
    }
  }
  return groups < 1 ? 1 : groups;
}

}  // namespace lyricstat::style
