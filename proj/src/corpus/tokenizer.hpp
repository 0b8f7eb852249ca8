#pragma once

#include <regex>
#include <string_view>
#include <vector>

#include "lyricstat/corpus.hpp"

namespace lyricstat {

/// TokenizeConfig with its patterns compiled once; const methods are safe to
/// call from several threads.
class Tokenizer {
 public:
  explicit Tokenizer(const TokenizeConfig& config);

  TokenizedLyric tokenize(const SongRecord& record) const;
  std::vector<std::vector<std::string>> tokenize_text(std::string_view lyrics) const;
  bool is_annotation(std::string_view raw_line) const;

 private:
  template <class Sink>
  void run(std::string_view lyrics, Sink& sink) const;

  bool strip_brackets_;
  std::vector<std::regex> patterns_;
};

}  // namespace lyricstat
