#include <omp.h>

#include <stdexcept>

#include "lyricstat/corpus.hpp"
#include "lyricstat/error.hpp"

namespace lyricstat {

std::string_view to_string(Cohort cohort) {
  return cohort == Cohort::popular ? "popular" : "other";
}

std::optional<Cohort> parse_cohort(std::string_view text) {
  if (text == "popular") return Cohort::popular;
  if (text == "other") return Cohort::other;
  return std::nullopt;
}

// --- TokenizedLyric ---------------------------------------------------------

TokenizedLyricBuilder::TokenizedLyricBuilder(std::string song_id) {
  out_.song_id_ = std::move(song_id);
}

void TokenizedLyricBuilder::add_token(std::string_view token) {
  if (token.empty()) throw std::invalid_argument("empty token");
  if (line_open_) {
    out_.text_.push_back(' ');
  } else if (!out_.text_.empty()) {
    out_.text_.push_back('\n');
  }
  out_.token_begin_.push_back(static_cast<std::uint32_t>(out_.text_.size()));
  out_.text_.append(token);
  line_open_ = true;
}

void TokenizedLyricBuilder::end_line() {
  if (!line_open_) return;
  out_.line_end_.push_back(static_cast<std::uint32_t>(out_.token_begin_.size()));
  line_open_ = false;
}

TokenizedLyric TokenizedLyricBuilder::finish() && {
  end_line();
  if (!out_.token_begin_.empty()) {
    out_.token_begin_.push_back(static_cast<std::uint32_t>(out_.text_.size() + 1));
  }
  return std::move(out_);
}

TokenizedLyric::TokenizedLyric(std::string song_id,
                               const std::vector<std::vector<std::string>>& lines) {
  TokenizedLyricBuilder b(std::move(song_id));
  for (const auto& line : lines) {
    for (const auto& t : line) b.add_token(t);
    b.end_line();
  }
  *this = std::move(b).finish();
}

std::pair<std::size_t, std::size_t> TokenizedLyric::line_range(std::size_t line) const {
  const std::size_t begin = line == 0 ? 0 : line_end_[line - 1];
  return {begin, line_end_[line]};
}

std::string_view TokenizedLyric::line_text(std::size_t line) const {
  auto [b, e] = line_range(line);
  const std::size_t from = token_begin_[b];
  const std::size_t to = token_begin_[e] - 1;
  return std::string_view(text_).substr(from, to - from);
}

std::vector<std::string_view> TokenizedLyric::line_tokens(std::size_t line) const {
  auto [b, e] = line_range(line);
  std::vector<std::string_view> out;
  out.reserve(e - b);
  for (std::size_t i = b; i < e; ++i) out.push_back(token(i));
  return out;
}

std::vector<std::string_view> TokenizedLyric::tokens() const {
  std::vector<std::string_view> out;
  out.reserve(token_count());
  for_each_token([&](std::string_view t) { out.push_back(t); });
  return out;
}

std::vector<std::vector<std::string>> TokenizedLyric::lines() const {
  std::vector<std::vector<std::string>> out(line_count());
  for (std::size_t l = 0; l < line_count(); ++l) {
    for (auto t : line_tokens(l)) out[l].emplace_back(t);
  }
  return out;
}

// --- Corpus -----------------------------------------------------------------

Corpus::Corpus(std::vector<SongRecord> records, std::vector<TokenizedLyric> tokenized,
               Provenance provenance)
    : records_(std::move(records)),
      tokenized_(std::move(tokenized)),
      provenance_(std::move(provenance)) {
  if (records_.size() != tokenized_.size()) {
    throw std::invalid_argument("corpus: records and tokenized lyrics differ in count");
  }
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].id != tokenized_[i].song_id()) {
      throw std::invalid_argument("corpus: tokenized lyric " + std::to_string(i) +
                                  " does not belong to record " + records_[i].id);
    }
  }
}

namespace {

void count_song(const TokenizedLyric& lyric, WordCounts& counts) {
  lyric.for_each_token([&](std::string_view t) {
    auto it = counts.find(t);
    if (it == counts.end()) {
      counts.emplace(std::string(t), 1);
    } else {
      ++it->second;
    }
  });
}

}  // namespace

WordCounts token_counts(const Corpus& corpus, const SongFilter& filter) {
  const auto records = corpus.records();
  const auto lyrics = corpus.tokenized();
  const auto n = static_cast<std::ptrdiff_t>(records.size());
  std::vector<WordCounts> partial(static_cast<std::size_t>(omp_get_max_threads()));
  std::size_t selected = 0;

#pragma omp parallel reduction(+ : selected)
  {
    WordCounts& local = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(dynamic, 256)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      if (!filter.matches(records[i])) continue;
      ++selected;
      count_song(lyrics[i], local);
    }
  }
  if (selected == 0) throw EmptySelectionError("no songs match the filter");

  WordCounts out = std::move(partial.front());
  for (std::size_t t = 1; t < partial.size(); ++t) {
    for (auto& [w, c] : partial[t]) out[w] += c;
  }
  return out;
}

namespace serial {

WordCounts token_counts(const Corpus& corpus, const SongFilter& filter) {
  WordCounts out;
  std::size_t selected = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!filter.matches(corpus.records()[i])) continue;
    ++selected;
    count_song(corpus.tokenized()[i], out);
  }
  if (selected == 0) throw EmptySelectionError("no songs match the filter");
  return out;
}

}  // namespace serial

}  // namespace lyricstat
