#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace lyricstat::csv {

/// RFC 4180 reader: comma separated, double-quote quoting, quoted fields may
/// span physical lines. Accepts both LF and CRLF line endings.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Reads the next record into `fields`. Returns false at end of input.
  /// Throws FormatError on an unterminated quoted field.
  bool next(std::vector<std::string>& fields);

  /// Physical line number (1-based) on which the last record started.
  std::size_t record_line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::size_t record_line_ = 0;
};

/// Appends `field` to `out`, quoting when it contains a comma, quote or newline.
void append_field(std::string& out, std::string_view field);

/// Writes one record terminated by '\n'.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Decodes the lyric escapes used in CSV inputs: "\n" becomes a newline and
/// "\\" a backslash. Other backslashes pass through unchanged.
std::string unescape_lyrics(std::string_view text);

/// Inverse of unescape_lyrics.
std::string escape_lyrics(std::string_view text);

}  // namespace lyricstat::csv
