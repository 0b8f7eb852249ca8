#include "lyricstat/csv.hpp"
#include "lyricstat/numfmt.hpp"
#include "lyricstat/style.hpp"

namespace lyricstat::style {

namespace {

std::string cohort_label(std::optional<Cohort> cohort) {
  return cohort ? std::string(to_string(*cohort)) : std::string("all");
}

}  // namespace

void write_song_metrics_csv(std::ostream& out, std::span<const StyleMetrics> metrics) {
  csv::write_row(out, {"song_id", "year", "cohort", "length_words", "duration_seconds",
                       "speed_wps", "repetitiveness_pct", "fk_grade", "swear_count",
                       "swear_rate"});
  for (const auto& m : metrics) {
    csv::write_row(out, {m.song_id, std::to_string(m.year), std::string(to_string(m.cohort)),
                         std::to_string(m.length_words), format_optional(m.duration_seconds),
                         format_optional(m.speed_wps), format_double(m.repetitiveness_pct),
                         format_double(m.fk_grade), std::to_string(m.swear_count),
                         format_double(m.swear_rate)});
  }
}

void write_aggregate_csv(std::ostream& out, std::span<const YearCohortAggregate> rows) {
  csv::write_row(out, {"year", "cohort", "song_count", "mean_length_words",
                       "mean_duration_seconds", "duration_coverage", "mean_speed_wps",
                       "speed_coverage", "mean_repetitiveness_pct", "mean_fk_grade",
                       "mean_swear_count", "mean_swear_rate"});
  for (const auto& a : rows) {
    csv::write_row(out, {std::to_string(a.year), std::string(to_string(a.cohort)),
                         std::to_string(a.song_count), format_double(a.mean_length_words),
                         format_optional(a.mean_duration_seconds),
                         std::to_string(a.duration_coverage), format_optional(a.mean_speed_wps),
                         std::to_string(a.speed_coverage),
                         format_double(a.mean_repetitiveness_pct), format_double(a.mean_fk_grade),
                         format_double(a.mean_swear_count), format_double(a.mean_swear_rate)});
  }
}

void write_top_words_csv(std::ostream& out, std::span<const TopWordsBlock> blocks) {
  csv::write_row(out, {"year", "cohort", "rank", "word", "count"});
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.words.size(); ++i) {
      csv::write_row(out, {std::to_string(b.year), cohort_label(b.cohort), std::to_string(i + 1),
                           b.words[i].word, std::to_string(b.words[i].count)});
    }
  }
}

void write_rank_series_csv(std::ostream& out, std::span<const RankSeries> series,
                           std::optional<Cohort> cohort) {
  csv::write_row(out, {"word", "year", "cohort", "rank", "count"});
  for (const auto& s : series) {
    for (const auto& [year, rc] : s.entries) {
      csv::write_row(out, {s.word, std::to_string(year), cohort_label(cohort),
                           std::to_string(rc.first), std::to_string(rc.second)});
    }
  }
}

}  // namespace lyricstat::style
