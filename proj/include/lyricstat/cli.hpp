#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lyricstat/corpus.hpp"
#include "lyricstat/sgns.hpp"

namespace lyricstat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitDataQuality = 2;

/// Fully resolved options of one command invocation.
struct RunConfig {
  std::string command;
  std::filesystem::path out_dir;

  // ingest
  std::filesystem::path input;
  std::string input_format = "auto";
  IngestConfig ingest;

  // style
  std::filesystem::path corpus;
  std::filesystem::path swear_lexicon;
  std::filesystem::path stopwords;
  bool filter_stopwords = true;
  std::size_t top_k = 100;
  std::optional<int> year;
  std::string cohort = "popular";
  std::vector<std::string> words;

  // train
  sgns::SgnsConfig sgns;

  // weat
  std::filesystem::path vectors;
  std::filesystem::path tests;
  std::string oov = "drop";
  std::string p_mode = "auto";
  std::size_t samples = 100000;
  bool inclusive = false;
  bool fold_case = false;

  std::optional<std::uint64_t> seed;

  /// Options relevant to `command` as pretty-printed JSON.
  std::string to_json() const;
  /// SHA-256 of to_json().
  std::string digest() const;
};

/// Writes run_config.<command>.json (options plus digest) into config.out_dir.
void write_run_config(const RunConfig& config);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Returns the process exit code.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace lyricstat::cli
