#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lyricstat {

enum class Cohort { popular, other };

std::string_view to_string(Cohort cohort);
std::optional<Cohort> parse_cohort(std::string_view text);

/// One song as ingested.
struct SongRecord {
  std::string id;
  std::string title;
  std::string artist;
  int year = 0;
  std::optional<double> duration_seconds;
  Cohort cohort = Cohort::other;
  std::string lyrics;
};

struct TokenizeConfig {
  /// Drop lines whose trimmed text is fully enclosed in square brackets.
  bool strip_bracket_annotations = true;
  /// Additional ECMAScript patterns; a trimmed raw line that fully matches
  /// any of them is dropped.
  std::vector<std::string> annotation_patterns;
};

/// Normalized lines and word tokens of one song.
///
/// Tokens are stored in a single buffer: tokens of a line are separated by a
/// space and lines by '\n', so line_text(i) is the whitespace-normalized line
/// used for repetition statistics.
class TokenizedLyric {
 public:
  TokenizedLyric() = default;
  TokenizedLyric(std::string song_id, const std::vector<std::vector<std::string>>& lines);

  const std::string& song_id() const { return song_id_; }
  std::size_t token_count() const { return token_begin_.empty() ? 0 : token_begin_.size() - 1; }
  std::size_t line_count() const { return line_end_.size(); }

  std::string_view token(std::size_t i) const {
    return std::string_view(text_).substr(token_begin_[i],
                                          token_begin_[i + 1] - token_begin_[i] - 1);
  }
  std::string_view line_text(std::size_t line) const;
  std::vector<std::string_view> line_tokens(std::size_t line) const;
  /// First token index of `line` and one past its last.
  std::pair<std::size_t, std::size_t> line_range(std::size_t line) const;

  std::vector<std::string_view> tokens() const;
  std::vector<std::vector<std::string>> lines() const;

  template <class Fn>
  void for_each_token(Fn&& fn) const {
    for (std::size_t i = 0, n = token_count(); i < n; ++i) fn(token(i));
  }

  bool operator==(const TokenizedLyric& other) const = default;

 private:
  friend class TokenizedLyricBuilder;
  std::string song_id_;
  std::string text_;
  std::vector<std::uint32_t> token_begin_;
  std::vector<std::uint32_t> line_end_;
};

class TokenizedLyricBuilder {
 public:
  explicit TokenizedLyricBuilder(std::string song_id);
  void add_token(std::string_view token);
  void end_line();
  TokenizedLyric finish() &&;

 private:
  TokenizedLyric out_;
  bool line_open_ = false;
};

/// Splits, normalizes and filters lyrics. Throws RecordError when nothing is
/// left after filtering.
TokenizedLyric tokenize(const SongRecord& record, const TokenizeConfig& config);

/// Lyric-text form of tokenize(): returns lines of tokens, possibly empty.
std::vector<std::vector<std::string>> tokenize_text(std::string_view lyrics,
                                                    const TokenizeConfig& config);

struct Provenance {
  std::string source;
  std::string config_digest;
};

/// Immutable collection of songs with one tokenized lyric per record.
class Corpus {
 public:
  Corpus() = default;
  /// Throws std::invalid_argument unless tokenized[i].song_id() == records[i].id
  /// for every i.
  Corpus(std::vector<SongRecord> records, std::vector<TokenizedLyric> tokenized,
         Provenance provenance);

  std::span<const SongRecord> records() const { return records_; }
  std::span<const TokenizedLyric> tokenized() const { return tokenized_; }
  const Provenance& provenance() const { return provenance_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

 private:
  std::vector<SongRecord> records_;
  std::vector<TokenizedLyric> tokenized_;
  Provenance provenance_;
};

struct SongFilter {
  std::optional<int> year;
  std::optional<Cohort> cohort;

  bool matches(const SongRecord& record) const {
    return (!year || record.year == *year) && (!cohort || record.cohort == *cohort);
  }
};

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

using WordCounts = std::unordered_map<std::string, std::uint64_t, StringHash, std::equal_to<>>;

/// Exact token multiset over songs matching `filter`. Throws
/// EmptySelectionError when no song matches.
WordCounts token_counts(const Corpus& corpus, const SongFilter& filter = {});

// ---------------------------------------------------------------------------
// Ingestion

enum class InputFormat { jsonl, csv };

std::optional<InputFormat> parse_input_format(std::string_view text);
/// From the file extension; jsonl unless the extension is .csv.
InputFormat infer_input_format(const std::filesystem::path& path);

struct IngestConfig {
  int min_year = 1900;
  int max_year = 2100;
  /// Ingestion is reported as failed when rejects / rows exceeds this.
  double max_reject_fraction = 0.5;
  TokenizeConfig tokenize;
  /// Rows parsed and tokenized per parallel batch.
  std::size_t batch_size = 4096;
};

/// Stable digest of every option that changes ingestion output.
std::string config_digest(const IngestConfig& config);

struct Reject {
  std::optional<std::string> id;
  std::size_t line_no = 0;
  std::string reason;
};

struct IngestSummary {
  std::size_t rows = 0;
  std::size_t accepted = 0;
  std::vector<Reject> rejects;
  double reject_fraction() const {
    return rows == 0 ? 0.0 : static_cast<double>(rejects.size()) / static_cast<double>(rows);
  }
};

struct IngestResult {
  Corpus corpus;
  IngestSummary summary;
  /// True when the reject fraction exceeds the configured maximum. The
  /// corpus still holds every accepted record.
  bool failed = false;
};

/// Streams `path`, validating and tokenizing rows batch by batch.
/// `on_batch` receives the accepted records of each batch in input order.
/// Throws IoError for an unreadable file and FormatError for a malformed
/// CSV header; record-level problems land in the summary.
using BatchCallback =
    std::function<void(std::vector<SongRecord>& records, std::vector<TokenizedLyric>& lyrics)>;
IngestSummary ingest_stream(const std::filesystem::path& path, InputFormat format,
                            const IngestConfig& config, const BatchCallback& on_batch);

/// Reads the whole file into a Corpus.
IngestResult ingest(const std::filesystem::path& path, InputFormat format,
                    const IngestConfig& config = {});

/// One JSON object per line: {"id"|"line_no", "reason"}; line_no is always
/// present, id when it could be read.
void write_reject_report(const std::filesystem::path& path, std::span<const Reject> rejects);

// ---------------------------------------------------------------------------
// Corpus cache: JSONL, one header line then one line per record.

inline constexpr int kCorpusCacheVersion = 1;

void save_corpus_cache(const Corpus& corpus, const std::filesystem::path& path);
Corpus load_corpus_cache(const std::filesystem::path& path);

namespace serial {
WordCounts token_counts(const Corpus& corpus, const SongFilter& filter = {});
}  // namespace serial

}  // namespace lyricstat
