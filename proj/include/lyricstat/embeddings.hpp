#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lyricstat/corpus.hpp"

namespace lyricstat {

/// Word -> dense vector of fixed dimension.
///
/// Zero vectors may be stored (a word seen in a file or never updated during
/// training) but are flagged: usable() is false for them and similarity
/// callers are expected to treat such words as missing.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }

  /// Inserts `word`, or overwrites its vector when already present (returns
  /// false in that case). Throws std::invalid_argument on a dimension mismatch.
  bool set(std::string_view word, std::span<const double> vec);

  std::optional<std::size_t> index_of(std::string_view word) const;
  bool contains(std::string_view word) const { return index_of(word).has_value(); }
  /// In the vocabulary and not a zero vector.
  bool usable(std::string_view word) const;
  bool is_zero(std::size_t index) const { return zero_[index] != 0; }
  std::size_t zero_vector_count() const;

  const std::string& word(std::size_t index) const { return words_[index]; }
  std::span<const double> vector(std::size_t index) const {
    return {data_.data() + index * dim_, dim_};
  }
  /// Throws std::out_of_range for an unknown word.
  std::span<const double> vector(std::string_view word) const;

  /// Multiplies every vector by `factor`.
  void scale(double factor);

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::size_t dim_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
  std::vector<double> data_;
  std::vector<unsigned char> zero_;
};

/// Cosine similarity. Throws std::invalid_argument on a dimension mismatch
/// or a zero vector.
double cosine(std::span<const double> u, std::span<const double> v);

struct VectorLoadOptions {
  /// Keep only these words (after case folding when enabled). Loading a
  /// multi-gigabyte web-crawl file for a handful of test words needs this.
  std::optional<std::unordered_set<std::string>> keep_only;
  /// Lowercase words on load; the first occurrence of a folded form wins, so
  /// frequency-sorted files keep their most frequent casing.
  bool fold_case = false;
};

struct VectorLoadReport {
  bool had_header = false;
  std::size_t rows = 0;
  std::size_t duplicates = 0;
  std::size_t zero_vectors = 0;
};

/// Text vector format: optional "V D" header line, then "word x1 ... xD"
/// per line, space separated. Throws IoError, or FormatError (with the line
/// number) on an empty file, unparsable number or dimension mismatch.
/// Duplicate words: last occurrence wins and is counted in the report.
EmbeddingTable load_vectors(const std::filesystem::path& path,
                            const VectorLoadOptions& options = {},
                            VectorLoadReport* report = nullptr);

/// Writes the "V D" header and each vector with 6 decimal places.
void save_vectors(const EmbeddingTable& table, const std::filesystem::path& path);

}  // namespace lyricstat
