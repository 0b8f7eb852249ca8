#include <algorithm>
#include <stdexcept>

#include "lyricstat/style.hpp"

namespace lyricstat::style {

namespace {

bool ranks_before(std::uint64_t count_a, std::string_view a, std::uint64_t count_b,
                  std::string_view b) {
  return count_a != count_b ? count_a > count_b : a < b;
}

}  // namespace

std::vector<RankedWord> rank_words(const WordCounts& counts) {
  std::vector<RankedWord> out;
  out.reserve(counts.size());
  for (const auto& [w, c] : counts) out.push_back({w, c});
  std::sort(out.begin(), out.end(), [](const RankedWord& a, const RankedWord& b) {
    return ranks_before(a.count, a.word, b.count, b.word);
  });
  return out;
}

std::vector<RankSeries> rank_series(const Corpus& corpus, std::span<const std::string> words,
                                    std::optional<Cohort> cohort) {
  if (words.empty()) throw std::invalid_argument("rank_series: empty word list");

  std::map<int, WordCounts> by_year;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const SongRecord& r = corpus.records()[i];
    if (cohort && r.cohort != *cohort) continue;
    WordCounts& counts = by_year[r.year];
    corpus.tokenized()[i].for_each_token([&](std::string_view t) {
      auto it = counts.find(t);
      if (it == counts.end()) {
        counts.emplace(std::string(t), 1);
      } else {
        ++it->second;
      }
    });
  }

  std::vector<RankSeries> out;
  out.reserve(words.size());
  for (const auto& word : words) {
    RankSeries series{word, {}};
    for (const auto& [year, counts] : by_year) {
      auto it = counts.find(word);
      if (it == counts.end()) continue;
      // Rank = 1 + number of words ordered strictly before this one.
      std::uint64_t rank = 1;
      for (const auto& [w, c] : counts) {
        if (ranks_before(c, w, it->second, word)) ++rank;
      }
      series.entries.emplace(year, std::pair{rank, it->second});
    }
    out.push_back(std::move(series));
  }
  return out;
}

std::vector<RankedWord> top_words(const Corpus& corpus, std::optional<int> year,
                                  std::optional<Cohort> cohort, std::size_t k,
                                  const Lexicon* stopwords) {
  if (k == 0) throw std::invalid_argument("top_words: k must be >= 1");
  WordCounts counts = token_counts(corpus, SongFilter{year, cohort});
  if (stopwords) {
    std::erase_if(counts, [&](const auto& kv) { return stopwords->contains(kv.first); });
  }
  std::vector<RankedWord> ranked = rank_words(counts);
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

}  // namespace lyricstat::style
