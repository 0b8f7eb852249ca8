#include <stdexcept>
#include <unordered_set>

#include "lyricstat/error.hpp"
#include "lyricstat/style.hpp"

namespace lyricstat::style {

std::uint64_t length_words(const TokenizedLyric& lyric) { return lyric.token_count(); }

double speed(std::uint64_t length_words, double duration_seconds) {
  if (!(duration_seconds > 0.0)) throw std::invalid_argument("speed: duration must be > 0");
  return static_cast<double>(length_words) / duration_seconds;
}

std::optional<double> speed(std::uint64_t length_words, std::optional<double> duration_seconds) {
  if (!duration_seconds) return std::nullopt;
  return speed(length_words, *duration_seconds);
}

double repetitiveness(const TokenizedLyric& lyric) {
  const std::size_t total = lyric.line_count();
  if (total == 0) throw DegenerateInputError("repetitiveness: lyric has no lines");
  std::unordered_set<std::string_view> unique;
  unique.reserve(total);
  for (std::size_t l = 0; l < total; ++l) unique.insert(lyric.line_text(l));
  return (1.0 - static_cast<double>(unique.size()) / static_cast<double>(total)) * 100.0;
}

double fk_grade(double words, double sentences, double syllables) {
  return 0.39 * (words / sentences) + 11.8 * (syllables / words) - 15.59;
}

double fk_grade(const TokenizedLyric& lyric) {
  if (lyric.line_count() == 0 || lyric.token_count() == 0) {
    throw DegenerateInputError("fk_grade: lyric has no tokens");
  }
  std::uint64_t syllables = 0;
  lyric.for_each_token([&](std::string_view t) {
    syllables += static_cast<std::uint64_t>(count_syllables(t));
  });
  return fk_grade(static_cast<double>(lyric.token_count()),
                  static_cast<double>(lyric.line_count()), static_cast<double>(syllables));
}

SwearStats swear_stats(const TokenizedLyric& lyric, const Lexicon& lexicon) {
  SwearStats s;
  lyric.for_each_token([&](std::string_view t) {
    if (lexicon.contains(t)) ++s.count;
  });
  const auto n = lyric.token_count();
  s.rate = n == 0 ? 0.0 : static_cast<double>(s.count) / static_cast<double>(n);
  return s;
}

StyleMetrics compute_metrics(const SongRecord& record, const TokenizedLyric& lyric,
                             const Lexicon& swear_lexicon) {
  StyleMetrics m;
  m.song_id = record.id;
  m.year = record.year;
  m.cohort = record.cohort;
  m.length_words = length_words(lyric);
  m.duration_seconds = record.duration_seconds;
  m.speed_wps = speed(m.length_words, record.duration_seconds);
  m.repetitiveness_pct = repetitiveness(lyric);
  m.fk_grade = fk_grade(lyric);
  const SwearStats s = swear_stats(lyric, swear_lexicon);
  m.swear_count = s.count;
  m.swear_rate = s.rate;
  return m;
}

std::vector<StyleMetrics> compute_all(const Corpus& corpus, const Lexicon& swear_lexicon) {
  const auto records = corpus.records();
  const auto lyrics = corpus.tokenized();
  std::vector<StyleMetrics> out(records.size());
  const auto n = static_cast<std::ptrdiff_t>(records.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = compute_metrics(records[i], lyrics[i], swear_lexicon);
  }
  return out;
}

namespace serial {

std::vector<StyleMetrics> compute_all(const Corpus& corpus, const Lexicon& swear_lexicon) {
  std::vector<StyleMetrics> out;
  out.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    out.push_back(compute_metrics(corpus.records()[i], corpus.tokenized()[i], swear_lexicon));
  }
  return out;
}

}  // namespace serial

}  // namespace lyricstat::style
