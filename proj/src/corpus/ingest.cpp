#include <json.hpp>

#include <fstream>
#include <unordered_set>
#include <variant>

#include "lyricstat/corpus.hpp"
#include "lyricstat/csv.hpp"
#include "lyricstat/digest.hpp"
#include "lyricstat/error.hpp"
#include "lyricstat/numfmt.hpp"
#include "tokenizer.hpp"

namespace lyricstat {

using nlohmann::json;

std::optional<InputFormat> parse_input_format(std::string_view text) {
  if (text == "jsonl") return InputFormat::jsonl;
  if (text == "csv") return InputFormat::csv;
  return std::nullopt;
}

InputFormat infer_input_format(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".csv" ? InputFormat::csv : InputFormat::jsonl;
}

std::string config_digest(const IngestConfig& config) {
  json j = {
      {"min_year", config.min_year},
      {"max_year", config.max_year},
      {"max_reject_fraction", config.max_reject_fraction},
      {"strip_bracket_annotations", config.tokenize.strip_bracket_annotations},
      {"annotation_patterns", config.tokenize.annotation_patterns},
      {"tokenizer", "nfc-casefold-edgestrip/1"},
  };
  return sha256_hex(j.dump());
}

namespace {

struct RawRow {
  std::size_t line_no = 0;
  std::string text;                 // jsonl
  std::vector<std::string> fields;  // csv
};

struct Parsed {
  SongRecord record;
  TokenizedLyric lyric;
};

using RowOutcome = std::variant<Parsed, Reject>;

bool blank(std::string_view s) {
  for (unsigned char c : s) {
    if (!std::isspace(c)) return false;
  }
  return true;
}

void validate(const SongRecord& r, const IngestConfig& config) {
  if (r.id.empty()) throw RecordError("missing required field 'id'");
  if (r.year < config.min_year || r.year > config.max_year) {
    throw RecordError("year " + std::to_string(r.year) + " outside [" +
                      std::to_string(config.min_year) + ", " + std::to_string(config.max_year) +
                      "]");
  }
  if (r.duration_seconds && !(*r.duration_seconds > 0.0)) {
    throw RecordError("duration_seconds must be > 0");
  }
  if (blank(r.lyrics)) throw RecordError("lyrics empty after trimming");
}

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    throw RecordError(std::string("missing required field '") + key + "'");
  }
  return *it;
}

std::string optional_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) throw RecordError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

SongRecord parse_json_row(const RawRow& row) {
  json obj;
  try {
    obj = json::parse(row.text);
  } catch (const json::parse_error&) {
    throw RecordError("malformed JSON");
  }
  if (!obj.is_object()) throw RecordError("row is not a JSON object");

  SongRecord r;
  const json& id = require(obj, "id");
  if (!id.is_string()) throw RecordError("field 'id' must be a string");
  r.id = id.get<std::string>();
  r.title = optional_string(obj, "title");
  r.artist = optional_string(obj, "artist");

  const json& year = require(obj, "year");
  if (!year.is_number_integer()) throw RecordError("field 'year' must be an integer");
  r.year = year.get<int>();

  auto dur = obj.find("duration_seconds");
  if (dur != obj.end() && !dur->is_null()) {
    if (!dur->is_number()) throw RecordError("field 'duration_seconds' must be a number");
    r.duration_seconds = dur->get<double>();
  }

  const json& cohort = require(obj, "cohort");
  if (!cohort.is_string()) throw RecordError("field 'cohort' must be a string");
  auto c = parse_cohort(cohort.get<std::string>());
  if (!c) throw RecordError("field 'cohort' must be \"popular\" or \"other\"");
  r.cohort = *c;

  const json& lyrics = require(obj, "lyrics");
  if (!lyrics.is_string()) throw RecordError("field 'lyrics' must be a string");
  r.lyrics = lyrics.get<std::string>();
  return r;
}

struct CsvColumns {
  std::size_t count = 0;
  int id = -1, title = -1, artist = -1, year = -1, duration = -1, cohort = -1, lyrics = -1;
};

CsvColumns read_csv_header(const std::vector<std::string>& header) {
  CsvColumns cols;
  cols.count = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    std::string name = header[i];
    if (i == 0 && name.rfind("\xEF\xBB\xBF", 0) == 0) name.erase(0, 3);
    const int idx = static_cast<int>(i);
    if (name == "id") cols.id = idx;
    else if (name == "title") cols.title = idx;
    else if (name == "artist") cols.artist = idx;
    else if (name == "year") cols.year = idx;
    else if (name == "duration_seconds") cols.duration = idx;
    else if (name == "cohort") cols.cohort = idx;
    else if (name == "lyrics") cols.lyrics = idx;
  }
  std::string missing;
  for (auto [col, name] : {std::pair{cols.id, "id"}, {cols.year, "year"},
                           {cols.cohort, "cohort"}, {cols.lyrics, "lyrics"}}) {
    if (col < 0) missing += std::string(missing.empty() ? "" : ", ") + name;
  }
  if (!missing.empty()) throw FormatError("CSV header lacks required column(s): " + missing);
  return cols;
}

SongRecord parse_csv_row(const RawRow& row, const CsvColumns& cols) {
  const auto& f = row.fields;
  if (f.size() != cols.count) {
    throw RecordError("expected " + std::to_string(cols.count) + " fields, got " +
                      std::to_string(f.size()));
  }
  auto at = [&](int i) -> const std::string& {
    static const std::string empty;
    return i < 0 ? empty : f[static_cast<std::size_t>(i)];
  };
  SongRecord r;
  r.id = at(cols.id);
  if (r.id.empty()) throw RecordError("missing required field 'id'");
  r.title = at(cols.title);
  r.artist = at(cols.artist);
  if (at(cols.year).empty()) throw RecordError("missing required field 'year'");
  auto year = parse_integer(at(cols.year));
  if (!year) throw RecordError("field 'year' must be an integer");
  r.year = static_cast<int>(*year);
  const std::string& dur = at(cols.duration);
  if (!dur.empty() && dur != "null") {
    auto d = parse_double(dur);
    if (!d) throw RecordError("field 'duration_seconds' must be a number");
    r.duration_seconds = *d;
  }
  if (at(cols.cohort).empty()) throw RecordError("missing required field 'cohort'");
  auto c = parse_cohort(at(cols.cohort));
  if (!c) throw RecordError("field 'cohort' must be \"popular\" or \"other\"");
  r.cohort = *c;
  if (at(cols.lyrics).empty()) throw RecordError("missing required field 'lyrics'");
  r.lyrics = csv::unescape_lyrics(at(cols.lyrics));
  return r;
}

/// Reads rows of either format in input order.
class RowSource {
 public:
  RowSource(const std::filesystem::path& path, InputFormat format)
      : in_(path, std::ios::binary), format_(format), csv_(in_) {
    if (!in_) throw IoError("cannot open " + path.string());
    if (format_ == InputFormat::csv) {
      std::vector<std::string> header;
      if (!csv_.next(header)) throw FormatError("CSV file has no header: " + path.string());
      cols_ = read_csv_header(header);
    }
  }

  bool next(RawRow& row) {
    if (format_ == InputFormat::csv) {
      if (!csv_.next(row.fields)) return check_stream();
      row.line_no = csv_.record_line() + 1;  // header is line 1
      return true;
    }
    while (std::getline(in_, row.text)) {
      ++line_;
      if (!row.text.empty() && row.text.back() == '\r') row.text.pop_back();
      if (blank(row.text)) continue;
      row.line_no = line_;
      return true;
    }
    return check_stream();
  }

  const CsvColumns& columns() const { return cols_; }

 private:
  bool check_stream() {
    if (in_.bad()) throw IoError("read error");
    return false;
  }

  std::ifstream in_;
  InputFormat format_;
  csv::Reader csv_;
  CsvColumns cols_;
  std::size_t line_ = 0;
};

std::optional<std::string> peek_id(const RawRow& row, InputFormat format, const CsvColumns& cols) {
  if (format == InputFormat::csv) {
    if (cols.id >= 0 && static_cast<std::size_t>(cols.id) < row.fields.size() &&
        !row.fields[static_cast<std::size_t>(cols.id)].empty()) {
      return row.fields[static_cast<std::size_t>(cols.id)];
    }
    return std::nullopt;
  }
  try {
    auto obj = json::parse(row.text);
    if (obj.is_object()) {
      auto it = obj.find("id");
      if (it != obj.end() && it->is_string()) return it->get<std::string>();
    }
  } catch (const json::exception&) {
  }
  return std::nullopt;
}

}  // namespace

IngestSummary ingest_stream(const std::filesystem::path& path, InputFormat format,
                            const IngestConfig& config, const BatchCallback& on_batch) {
  RowSource source(path, format);
  const Tokenizer tokenizer(config.tokenize);
  const std::size_t batch_size = std::max<std::size_t>(1, config.batch_size);

  IngestSummary summary;
  std::unordered_set<std::string> seen_ids;
  std::vector<RawRow> rows(batch_size);
  std::vector<RowOutcome> outcomes(batch_size);

  for (;;) {
    std::size_t n = 0;
    while (n < batch_size && source.next(rows[n])) ++n;
    if (n == 0) break;

#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      const RawRow& row = rows[static_cast<std::size_t>(i)];
      try {
        SongRecord rec = format == InputFormat::csv ? parse_csv_row(row, source.columns())
                                                    : parse_json_row(row);
        validate(rec, config);
        TokenizedLyric lyric = tokenizer.tokenize(rec);
        outcomes[static_cast<std::size_t>(i)] = Parsed{std::move(rec), std::move(lyric)};
      } catch (const RecordError& e) {
        outcomes[static_cast<std::size_t>(i)] =
            Reject{peek_id(row, format, source.columns()), row.line_no, e.what()};
      }
    }

    std::vector<SongRecord> records;
    std::vector<TokenizedLyric> lyrics;
    records.reserve(n);
    lyrics.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      ++summary.rows;
      if (auto* rej = std::get_if<Reject>(&outcomes[i])) {
        summary.rejects.push_back(std::move(*rej));
        continue;
      }
      auto& parsed = std::get<Parsed>(outcomes[i]);
      if (!seen_ids.insert(parsed.record.id).second) {
        summary.rejects.push_back(
            Reject{parsed.record.id, rows[i].line_no, "duplicate id '" + parsed.record.id + "'"});
        continue;
      }
      records.push_back(std::move(parsed.record));
      lyrics.push_back(std::move(parsed.lyric));
    }
    summary.accepted += records.size();
    if (on_batch && !records.empty()) on_batch(records, lyrics);
  }
  return summary;
}

IngestResult ingest(const std::filesystem::path& path, InputFormat format,
                    const IngestConfig& config) {
  std::vector<SongRecord> records;
  std::vector<TokenizedLyric> lyrics;
  IngestSummary summary = ingest_stream(
      path, format, config, [&](std::vector<SongRecord>& r, std::vector<TokenizedLyric>& l) {
        std::move(r.begin(), r.end(), std::back_inserter(records));
        std::move(l.begin(), l.end(), std::back_inserter(lyrics));
      });
  IngestResult result;
  result.failed = summary.reject_fraction() > config.max_reject_fraction;
  result.corpus = Corpus(std::move(records), std::move(lyrics),
                         Provenance{path.string(), config_digest(config)});
  result.summary = std::move(summary);
  return result;
}

void write_reject_report(const std::filesystem::path& path, std::span<const Reject> rejects) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& r : rejects) {
    json j;
    if (r.id) j["id"] = *r.id;
    j["line_no"] = r.line_no;
    j["reason"] = r.reason;
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace lyricstat
