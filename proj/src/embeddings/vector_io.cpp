#include <fstream>
#include <unicode/unistr.h>

#include "lyricstat/embeddings.hpp"
#include "lyricstat/error.hpp"
#include "lyricstat/numfmt.hpp"

namespace lyricstat {

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string fold(std::string_view word) {
  std::string out;
  icu::UnicodeString::fromUTF8(icu::StringPiece(word.data(), static_cast<int32_t>(word.size())))
      .foldCase()
      .toUTF8String(out);
  return out;
}

}  // namespace

EmbeddingTable load_vectors(const std::filesystem::path& path, const VectorLoadOptions& options,
                            VectorLoadReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open vector file " + path.string());

  VectorLoadReport rep;
  std::optional<EmbeddingTable> table;
  std::size_t dim = 0;
  std::vector<double> vec;
  std::unordered_set<std::string> folded_seen;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_spaces(line);
    if (fields.empty()) continue;

    if (!table && !rep.had_header && rep.rows == 0 && fields.size() == 2) {
      auto v = parse_integer(fields[0]);
      auto d = parse_integer(fields[1]);
      if (v && d && *v >= 0 && *d > 0) {
        rep.had_header = true;
        dim = static_cast<std::size_t>(*d);
        continue;
      }
    }

    const std::size_t row_dim = fields.size() - 1;
    if (row_dim == 0) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": word without vector");
    }
    if (dim == 0) dim = row_dim;
    if (row_dim != dim) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": dimension mismatch, expected " + std::to_string(dim) + " values, got " +
                        std::to_string(row_dim));
    }
    if (!table) table.emplace(dim);
    ++rep.rows;

    std::string word(fields[0]);
    if (options.fold_case) {
      word = fold(word);
      if (!folded_seen.insert(word).second) continue;
    }
    if (options.keep_only && !options.keep_only->contains(word)) continue;

    vec.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      auto x = parse_double(fields[k + 1]);
      if (!x) {
        throw FormatError(path.string() + ":" + std::to_string(line_no) +
                          ": unparsable number '" + std::string(fields[k + 1]) + "'");
      }
      vec[k] = *x;
    }
    if (!table->set(word, vec)) ++rep.duplicates;
  }
  if (in.bad()) throw IoError("read error in " + path.string());
  if (!table) {
    if (rep.had_header) {
      table.emplace(dim);
    } else {
      throw FormatError("vector file " + path.string() + " is empty");
    }
  }
  rep.zero_vectors = table->zero_vector_count();
  if (report) *report = rep;
  return std::move(*table);
}

void save_vectors(const EmbeddingTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  std::string buf = std::to_string(table.size()) + " " + std::to_string(table.dim()) + "\n";
  out << buf;
  for (std::size_t i = 0; i < table.size(); ++i) {
    buf = table.word(i);
    for (double x : table.vector(i)) {
      buf.push_back(' ');
      buf += format_fixed(x, 6);
    }
    buf.push_back('\n');
    out << buf;
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace lyricstat
