#pragma once

#include <stdexcept>
#include <string>

namespace lyricstat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Input text does not follow the expected file format.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A single record violates the data model; callers usually collect these.
class RecordError : public Error {
 public:
  using Error::Error;
};

/// A filter selected no songs.
class EmptySelectionError : public Error {
 public:
  using Error::Error;
};

/// Input is well formed but too small or too uniform for the statistic.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

}  // namespace lyricstat
