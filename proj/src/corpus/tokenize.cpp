#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <regex>

#include "lyricstat/corpus.hpp"
#include "lyricstat/error.hpp"
#include "tokenizer.hpp"

namespace lyricstat {

namespace {

bool is_ascii(std::string_view s) {
  for (unsigned char c : s) {
    if (c >= 0x80) return false;
  }
  return true;
}

bool ascii_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\v' || c == '\f' || c == '\r';
}

bool ascii_alnum(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

std::string_view trim_ascii(std::string_view s) {
  while (!s.empty() && (ascii_space(s.front()) || s.front() == '\n')) s.remove_prefix(1);
  while (!s.empty() && (ascii_space(s.back()) || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

// Letters and numbers survive at token edges; everything else is trimmed.
bool keeps_edge(UChar32 c) {
  return (U_GET_GC_MASK(c) & (U_GC_L_MASK | U_GC_N_MASK)) != 0;
}

template <class Emit>
void split_ascii_line(std::string_view line, Emit&& emit) {
  std::string token;
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (i < n) {
    while (i < n && ascii_space(line[i])) ++i;
    std::size_t j = i;
    while (j < n && !ascii_space(line[j])) ++j;
    std::size_t b = i, e = j;
    while (b < e && !ascii_alnum(line[b])) ++b;
    while (e > b && !ascii_alnum(line[e - 1])) --e;
    if (b < e) {
      token.assign(line.substr(b, e - b));
      for (char& c : token) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      }
      emit(std::string_view(token));
    }
    i = j;
  }
}

template <class Emit>
void split_unicode_line(std::string_view line, Emit&& emit) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(line.data(), static_cast<int32_t>(line.size())));
  icu::UnicodeString normalized = nfc->normalize(text, status);
  if (U_FAILURE(status)) throw RecordError("text could not be NFC-normalized");
  normalized.foldCase();
  normalized.findAndReplace(icu::UnicodeString(static_cast<UChar32>(0x2019)), "'");
  normalized.findAndReplace(icu::UnicodeString(static_cast<UChar32>(0x2018)), "'");

  std::string token;
  const int32_t n = normalized.length();
  int32_t i = 0;
  while (i < n) {
    while (i < n && u_isUWhiteSpace(normalized.char32At(i))) i = normalized.moveIndex32(i, 1);
    int32_t j = i;
    while (j < n && !u_isUWhiteSpace(normalized.char32At(j))) j = normalized.moveIndex32(j, 1);
    int32_t b = i, e = j;
    while (b < e && !keeps_edge(normalized.char32At(b))) b = normalized.moveIndex32(b, 1);
    while (e > b) {
      const int32_t prev = normalized.moveIndex32(e, -1);
      if (keeps_edge(normalized.char32At(prev))) break;
      e = prev;
    }
    if (b < e) {
      token.clear();
      normalized.tempSubStringBetween(b, e).toUTF8String(token);
      emit(std::string_view(token));
    }
    i = j;
  }
}

}  // namespace

Tokenizer::Tokenizer(const TokenizeConfig& config)
    : strip_brackets_(config.strip_bracket_annotations) {
  patterns_.reserve(config.annotation_patterns.size());
  for (const auto& p : config.annotation_patterns) {
    try {
      patterns_.emplace_back(p, std::regex::ECMAScript | std::regex::optimize);
    } catch (const std::regex_error& e) {
      throw FormatError("invalid annotation pattern '" + p + "': " + e.what());
    }
  }
}

bool Tokenizer::is_annotation(std::string_view raw_line) const {
  const std::string_view t = trim_ascii(raw_line);
  if (strip_brackets_ && t.size() >= 2 && t.front() == '[' && t.back() == ']') return true;
  for (const auto& re : patterns_) {
    if (std::regex_match(t.begin(), t.end(), re)) return true;
  }
  return false;
}

template <class Sink>
void Tokenizer::run(std::string_view lyrics, Sink& sink) const {
  std::size_t pos = 0;
  while (pos <= lyrics.size()) {
    std::size_t nl = lyrics.find('\n', pos);
    if (nl == std::string_view::npos) nl = lyrics.size();
    std::string_view line = lyrics.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (is_annotation(line)) continue;
    bool any = false;
    auto emit = [&](std::string_view tok) {
      sink.add_token(tok);
      any = true;
    };
    if (is_ascii(line)) {
      split_ascii_line(line, emit);
    } else {
      split_unicode_line(line, emit);
    }
    if (any) sink.end_line();
  }
}

TokenizedLyric Tokenizer::tokenize(const SongRecord& record) const {
  TokenizedLyricBuilder builder(record.id);
  run(record.lyrics, builder);
  TokenizedLyric out = std::move(builder).finish();
  if (out.token_count() == 0) throw RecordError("lyrics contain no word tokens");
  return out;
}

std::vector<std::vector<std::string>> Tokenizer::tokenize_text(std::string_view lyrics) const {
  struct Sink {
    std::vector<std::vector<std::string>> lines;
    std::vector<std::string> current;
    void add_token(std::string_view t) { current.emplace_back(t); }
    void end_line() { lines.push_back(std::move(current)); current.clear(); }
  } sink;
  run(lyrics, sink);
  return std::move(sink.lines);
}

TokenizedLyric tokenize(const SongRecord& record, const TokenizeConfig& config) {
  return Tokenizer(config).tokenize(record);
}

std::vector<std::vector<std::string>> tokenize_text(std::string_view lyrics,
                                                    const TokenizeConfig& config) {
  return Tokenizer(config).tokenize_text(lyrics);
}

}  // namespace lyricstat
