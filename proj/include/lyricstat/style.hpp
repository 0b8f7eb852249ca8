#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "lyricstat/corpus.hpp"

namespace lyricstat::style {

/// Per-song lyric style metrics.
struct StyleMetrics {
  std::string song_id;
  int year = 0;
  Cohort cohort = Cohort::other;
  std::uint64_t length_words = 0;
  std::optional<double> duration_seconds;
  std::optional<double> speed_wps;
  double repetitiveness_pct = 0.0;
  double fk_grade = 0.0;
  std::uint64_t swear_count = 0;
  double swear_rate = 0.0;
};

/// A set of lowercase word forms loaded from a one-word-per-line file.
class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(std::vector<std::string> words, std::string source);

  /// '#' starts a comment line; blank lines are ignored. Throws IoError,
  /// or FormatError when no entries remain.
  static Lexicon load(const std::filesystem::path& path);

  bool contains(std::string_view word) const { return words_.contains(word); }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::string& source() const { return source_; }

  /// Throws FormatError naming the first entry that tokenize() would alter
  /// (split, case-fold or trim), since such an entry could never match.
  void validate_against(const TokenizeConfig& config) const;

 private:
  std::unordered_set<std::string, StringHash, std::equal_to<>> words_;
  std::string source_;
};

/// Swear-word list; must be non-empty and tokenizer-stable.
Lexicon load_swear_lexicon(const std::filesystem::path& path, const TokenizeConfig& config = {});

std::uint64_t length_words(const TokenizedLyric& lyric);

/// Words per second. Throws std::invalid_argument unless duration > 0.
double speed(std::uint64_t length_words, double duration_seconds);
std::optional<double> speed(std::uint64_t length_words, std::optional<double> duration_seconds);

/// (1 - unique lines / total lines) * 100 over whitespace-normalized lines.
/// Throws DegenerateInputError for a lyric with no lines.
double repetitiveness(const TokenizedLyric& lyric);

/// Vowel-group syllable heuristic; see syllables.cpp for the exact rules.
int count_syllables(std::string_view word);

/// Flesch-Kincaid grade level with one lyric line counted as one sentence.
double fk_grade(const TokenizedLyric& lyric);
double fk_grade(double words, double sentences, double syllables);

struct SwearStats {
  std::uint64_t count = 0;
  double rate = 0.0;
};
SwearStats swear_stats(const TokenizedLyric& lyric, const Lexicon& lexicon);

StyleMetrics compute_metrics(const SongRecord& record, const TokenizedLyric& lyric,
                             const Lexicon& swear_lexicon);

/// Metrics for every song, in corpus order. OpenMP-parallel over songs.
std::vector<StyleMetrics> compute_all(const Corpus& corpus, const Lexicon& swear_lexicon);

struct YearCohortAggregate {
  int year = 0;
  Cohort cohort = Cohort::other;
  std::size_t song_count = 0;
  double mean_length_words = 0.0;
  std::optional<double> mean_duration_seconds;
  std::size_t duration_coverage = 0;
  std::optional<double> mean_speed_wps;
  std::size_t speed_coverage = 0;
  double mean_repetitiveness_pct = 0.0;
  double mean_fk_grade = 0.0;
  double mean_swear_count = 0.0;
  double mean_swear_rate = 0.0;
};

/// Means per (year, cohort), sorted by year then cohort (popular first).
/// Sums are taken in song-id order so results do not depend on input order.
std::vector<YearCohortAggregate> aggregate(std::span<const StyleMetrics> metrics);

struct RankedWord {
  std::string word;
  std::uint64_t count = 0;
};

/// Every word in `counts`, by descending count then ascending word.
std::vector<RankedWord> rank_words(const WordCounts& counts);

struct RankSeries {
  std::string word;
  /// year -> (rank, count); years where the word is absent have no entry.
  std::map<int, std::pair<std::uint64_t, std::uint64_t>> entries;
};

/// Year-wise rank of each word among songs of `cohort` (all songs when
/// nullopt). Rank 1 is the most frequent word of that year.
std::vector<RankSeries> rank_series(const Corpus& corpus, std::span<const std::string> words,
                                    std::optional<Cohort> cohort);

/// The k most frequent tokens for (year, cohort), skipping `stopwords` when
/// given. Throws std::invalid_argument for k == 0 and EmptySelectionError
/// when no song matches.
std::vector<RankedWord> top_words(const Corpus& corpus, std::optional<int> year,
                                  std::optional<Cohort> cohort, std::size_t k,
                                  const Lexicon* stopwords);

// ---------------------------------------------------------------------------
// CSV reports

void write_song_metrics_csv(std::ostream& out, std::span<const StyleMetrics> metrics);
void write_aggregate_csv(std::ostream& out, std::span<const YearCohortAggregate> rows);

struct TopWordsBlock {
  int year = 0;
  std::optional<Cohort> cohort;
  std::vector<RankedWord> words;
};
void write_top_words_csv(std::ostream& out, std::span<const TopWordsBlock> blocks);
void write_rank_series_csv(std::ostream& out, std::span<const RankSeries> series,
                           std::optional<Cohort> cohort);

namespace serial {
std::vector<StyleMetrics> compute_all(const Corpus& corpus, const Lexicon& swear_lexicon);
}  // namespace serial

}  // namespace lyricstat::style
