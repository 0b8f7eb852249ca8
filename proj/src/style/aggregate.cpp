#include <algorithm>
#include <map>

#include "lyricstat/style.hpp"

namespace lyricstat::style {

std::vector<YearCohortAggregate> aggregate(std::span<const StyleMetrics> metrics) {
  std::map<std::pair<int, int>, std::vector<const StyleMetrics*>> cells;
  for (const auto& m : metrics) {
    cells[{m.year, m.cohort == Cohort::popular ? 0 : 1}].push_back(&m);
  }

  std::vector<YearCohortAggregate> out;
  out.reserve(cells.size());
  for (auto& [key, songs] : cells) {
    std::sort(songs.begin(), songs.end(),
              [](const StyleMetrics* a, const StyleMetrics* b) { return a->song_id < b->song_id; });
    YearCohortAggregate a;
    a.year = key.first;
    a.cohort = key.second == 0 ? Cohort::popular : Cohort::other;
    a.song_count = songs.size();

    double length = 0, rep = 0, fk = 0, swear = 0, swear_rate = 0, dur = 0, spd = 0;
    for (const StyleMetrics* m : songs) {
      length += static_cast<double>(m->length_words);
      rep += m->repetitiveness_pct;
      fk += m->fk_grade;
      swear += static_cast<double>(m->swear_count);
      swear_rate += m->swear_rate;
      if (m->duration_seconds) {
        dur += *m->duration_seconds;
        ++a.duration_coverage;
      }
      if (m->speed_wps) {
        spd += *m->speed_wps;
        ++a.speed_coverage;
      }
    }
    const auto n = static_cast<double>(songs.size());
    a.mean_length_words = length / n;
    a.mean_repetitiveness_pct = rep / n;
    a.mean_fk_grade = fk / n;
    a.mean_swear_count = swear / n;
    a.mean_swear_rate = swear_rate / n;
    if (a.duration_coverage) a.mean_duration_seconds = dur / static_cast<double>(a.duration_coverage);
    if (a.speed_coverage) a.mean_speed_wps = spd / static_cast<double>(a.speed_coverage);
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace lyricstat::style
