#include <json.hpp>

#include <fstream>

#include "lyricstat/corpus.hpp"
#include "lyricstat/error.hpp"

namespace lyricstat {

using nlohmann::json;

namespace {
constexpr const char* kCacheFormat = "lyricstat-corpus";
}

void save_corpus_cache(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  json header = {{"format", kCacheFormat},
                 {"version", kCorpusCacheVersion},
                 {"source", corpus.provenance().source},
                 {"config_digest", corpus.provenance().config_digest},
                 {"records", corpus.size()}};
  out << header.dump() << '\n';
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const SongRecord& r = corpus.records()[i];
    json lines = json::array();
    for (auto& line : corpus.tokenized()[i].lines()) lines.push_back(std::move(line));
    json row = {{"id", r.id},
                {"title", r.title},
                {"artist", r.artist},
                {"year", r.year},
                {"duration_seconds", r.duration_seconds ? json(*r.duration_seconds) : json()},
                {"cohort", std::string(to_string(r.cohort))},
                {"lyrics", r.lyrics},
                {"lines", std::move(lines)}};
    out << row.dump() << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Corpus load_corpus_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus cache " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty corpus cache " + path.string());

  Provenance provenance;
  std::size_t expected = 0;
  try {
    json header = json::parse(line);
    if (header.value("format", "") != kCacheFormat) throw FormatError("not a corpus cache");
    if (header.value("version", 0) != kCorpusCacheVersion) {
      throw FormatError("unsupported corpus cache version");
    }
    provenance.source = header.at("source").get<std::string>();
    provenance.config_digest = header.at("config_digest").get<std::string>();
    expected = header.at("records").get<std::size_t>();
  } catch (const json::exception& e) {
    throw FormatError("bad corpus cache header in " + path.string() + ": " + e.what());
  }

  std::vector<SongRecord> records;
  std::vector<TokenizedLyric> lyrics;
  records.reserve(expected);
  lyrics.reserve(expected);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      json row = json::parse(line);
      SongRecord r;
      r.id = row.at("id").get<std::string>();
      r.title = row.at("title").get<std::string>();
      r.artist = row.at("artist").get<std::string>();
      r.year = row.at("year").get<int>();
      if (!row.at("duration_seconds").is_null()) {
        r.duration_seconds = row.at("duration_seconds").get<double>();
      }
      auto cohort = parse_cohort(row.at("cohort").get<std::string>());
      if (!cohort) throw FormatError("bad cohort");
      r.cohort = *cohort;
      r.lyrics = row.at("lyrics").get<std::string>();
      lyrics.emplace_back(r.id, row.at("lines").get<std::vector<std::vector<std::string>>>());
      records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw FormatError("corpus cache " + path.string() + " line " + std::to_string(line_no) +
                        ": " + e.what());
    }
  }
  if (records.size() != expected) {
    throw FormatError("corpus cache " + path.string() + " is truncated: expected " +
                      std::to_string(expected) + " records, found " +
                      std::to_string(records.size()));
  }
  return Corpus(std::move(records), std::move(lyrics), std::move(provenance));
}

}  // namespace lyricstat
