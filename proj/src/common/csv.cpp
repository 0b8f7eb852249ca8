#include "lyricstat/csv.hpp"

#include "lyricstat/error.hpp"

namespace lyricstat::csv {

bool Reader::next(std::vector<std::string>& fields) {
  fields.clear();
  std::string line;
  if (!std::getline(in_, line)) return false;
  ++line_;
  record_line_ = line_;

  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  for (;;) {
    if (!in_quotes && !line.empty() && line.back() == '\r') line.pop_back();
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (in_quotes) {
        if (c == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field.push_back('"');
            ++i;
          } else {
            in_quotes = false;
          }
        } else {
          field.push_back(c);
        }
      } else if (c == '"' && field.empty() && !field_was_quoted) {
        in_quotes = true;
        field_was_quoted = true;
      } else if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
      } else {
        field.push_back(c);
      }
    }
    if (!in_quotes) break;
    // Quoted field continues on the next physical line.
    if (!std::getline(in_, line)) {
      throw FormatError("unterminated quoted field starting on line " +
                        std::to_string(record_line_));
    }
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    field.push_back('\n');
  }
  fields.push_back(std::move(field));
  return true;
}

void append_field(std::string& out, std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    out.append(field);
    return;
  }
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line.push_back(',');
    append_field(line, fields[i]);
  }
  line.push_back('\n');
  out << line;
}

std::string unescape_lyrics(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\\' && i + 1 < text.size()) {
      if (text[i + 1] == 'n') {
        out.push_back('\n');
        ++i;
        continue;
      }
      if (text[i + 1] == '\\') {
        out.push_back('\\');
        ++i;
        continue;
      }
    }
    out.push_back(text[i]);
  }
  return out;
}

std::string escape_lyrics(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '\\') {
      out += "\\\\";
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace lyricstat::csv
