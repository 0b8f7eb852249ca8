#include <fstream>

#include "lyricstat/error.hpp"
#include "lyricstat/style.hpp"

namespace lyricstat::style {

Lexicon::Lexicon(std::vector<std::string> words, std::string source)
    : source_(std::move(source)) {
  for (auto& w : words) words_.insert(std::move(w));
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open word list " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    words.push_back(line.substr(b, e - b + 1));
  }
  if (words.empty()) throw FormatError("word list " + path.string() + " has no entries");
  return Lexicon(std::move(words), path.string());
}

void Lexicon::validate_against(const TokenizeConfig& config) const {
  for (const auto& w : words_) {
    auto lines = tokenize_text(w, config);
    if (lines.size() != 1 || lines[0].size() != 1 || lines[0][0] != w) {
      throw FormatError("lexicon entry '" + w + "' in " + source_ +
                        " does not survive tokenization unchanged");
    }
  }
}

Lexicon load_swear_lexicon(const std::filesystem::path& path, const TokenizeConfig& config) {
  Lexicon lex = Lexicon::load(path);
  lex.validate_against(config);
  return lex;
}

}  // namespace lyricstat::style
