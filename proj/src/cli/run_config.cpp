#include <json.hpp>

#include <fstream>

#include "lyricstat/cli.hpp"
#include "lyricstat/digest.hpp"
#include "lyricstat/error.hpp"

namespace lyricstat::cli {

using nlohmann::ordered_json;

std::string RunConfig::to_json() const {
  ordered_json j;
  j["command"] = command;
  j["out"] = out_dir.generic_string();
  if (command == "ingest") {
    j["input"] = input.generic_string();
    j["format"] = input_format;
    j["min_year"] = ingest.min_year;
    j["max_year"] = ingest.max_year;
    j["max_reject_fraction"] = ingest.max_reject_fraction;
    j["strip_bracket_annotations"] = ingest.tokenize.strip_bracket_annotations;
    j["annotation_patterns"] = ingest.tokenize.annotation_patterns;
    j["ingest_digest"] = config_digest(ingest);
  } else if (command == "style") {
    j["corpus"] = corpus.generic_string();
    j["swear_lexicon"] = swear_lexicon.generic_string();
    j["stopwords"] = filter_stopwords ? ordered_json(stopwords.generic_string()) : ordered_json();
    j["top_k"] = top_k;
    j["year"] = year ? ordered_json(*year) : ordered_json();
    j["cohort"] = cohort;
    j["words"] = words;
  } else if (command == "train") {
    j["corpus"] = corpus.generic_string();
    j["dim"] = sgns.dim;
    j["window"] = sgns.window;
    j["negatives"] = sgns.negatives;
    j["epochs"] = sgns.epochs;
    j["learning_rate"] = sgns.initial_learning_rate;
    j["min_count"] = sgns.min_count;
    j["subsample"] = sgns.subsample_threshold;
    j["deterministic"] = sgns.deterministic;
    j["seed"] = seed ? ordered_json(*seed) : ordered_json();
  } else if (command == "weat") {
    j["vectors"] = vectors.generic_string();
    j["tests"] = tests.generic_string();
    j["oov"] = oov;
    j["p_mode"] = p_mode;
    j["samples"] = samples;
    j["inclusive"] = inclusive;
    j["fold_case"] = fold_case;
    j["seed"] = seed ? ordered_json(*seed) : ordered_json();
  }
  return j.dump(2);
}

std::string RunConfig::digest() const { return sha256_hex(to_json()); }

void write_run_config(const RunConfig& config) {
  const auto path = config.out_dir / ("run_config." + config.command + ".json");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  auto j = ordered_json::parse(config.to_json());
  j["digest"] = config.digest();
  out << j.dump(2) << '\n';
  if (!out) throw IoError("error writing " + path.string());
}

}  // namespace lyricstat::cli
