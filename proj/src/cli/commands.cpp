#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>

#include "lyricstat/cli.hpp"
#include "lyricstat/embeddings.hpp"
#include "lyricstat/error.hpp"
#include "lyricstat/sgns.hpp"
#include "lyricstat/style.hpp"
#include "lyricstat/weat.hpp"

namespace lyricstat::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish_output(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("error writing " + path.string());
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
}

fs::path data_file(const char* name) { return fs::path(LYRICSTAT_DATA_DIR) / name; }

// Accepts the cache file itself or the directory `ingest` wrote it to.
fs::path corpus_cache_path(const fs::path& p) {
  return fs::is_directory(p) ? p / "corpus.cache" : p;
}

std::optional<Cohort> cohort_option(const std::string& text) {
  if (text == "all") return std::nullopt;
  auto c = parse_cohort(text);
  if (!c) throw std::invalid_argument("unknown cohort '" + text + "'");
  return c;
}

int cmd_ingest(const RunConfig& cfg, std::ostream& out) {
  if (!fs::exists(cfg.input)) throw IoError("input not found: " + cfg.input.string());
  InputFormat format = infer_input_format(cfg.input);
  if (cfg.input_format != "auto") format = *parse_input_format(cfg.input_format);
  prepare_out_dir(cfg.out_dir);

  IngestResult result = ingest(cfg.input, format, cfg.ingest);
  save_corpus_cache(result.corpus, cfg.out_dir / "corpus.cache");
  write_reject_report(cfg.out_dir / "rejects.jsonl", result.summary.rejects);
  write_run_config(cfg);

  out << "rows " << result.summary.rows << ", accepted " << result.summary.accepted
      << ", rejected " << result.summary.rejects.size() << '\n';
  if (result.failed) {
    out << "reject fraction " << result.summary.reject_fraction() << " exceeds "
        << cfg.ingest.max_reject_fraction << '\n';
    return kExitDataQuality;
  }
  return kExitOk;
}

int cmd_style(const RunConfig& cfg, std::ostream& out) {
  const Corpus corpus = load_corpus_cache(corpus_cache_path(cfg.corpus));
  const style::Lexicon swear = style::load_swear_lexicon(cfg.swear_lexicon);
  std::optional<style::Lexicon> stop;
  if (cfg.filter_stopwords) stop = style::Lexicon::load(cfg.stopwords);
  const std::optional<Cohort> cohort = cohort_option(cfg.cohort);
  prepare_out_dir(cfg.out_dir);

  const auto metrics = style::compute_all(corpus, swear);
  {
    const auto path = cfg.out_dir / "song_metrics.csv";
    auto f = open_output(path);
    style::write_song_metrics_csv(f, metrics);
    finish_output(f, path);
  }
  {
    const auto path = cfg.out_dir / "aggregate.csv";
    auto f = open_output(path);
    style::write_aggregate_csv(f, style::aggregate(metrics));
    finish_output(f, path);
  }

  std::vector<int> years;
  if (cfg.year) {
    years.push_back(*cfg.year);
  } else {
    std::set<int> seen;
    for (const auto& r : corpus.records()) {
      if (!cohort || r.cohort == *cohort) seen.insert(r.year);
    }
    years.assign(seen.begin(), seen.end());
  }
  std::vector<style::TopWordsBlock> blocks;
  for (int y : years) {
    blocks.push_back({y, cohort,
                      style::top_words(corpus, y, cohort, cfg.top_k, stop ? &*stop : nullptr)});
  }
  {
    const auto path = cfg.out_dir / "top_words.csv";
    auto f = open_output(path);
    style::write_top_words_csv(f, blocks);
    finish_output(f, path);
  }
  {
    const auto path = cfg.out_dir / "rank_series.csv";
    auto f = open_output(path);
    style::write_rank_series_csv(f, style::rank_series(corpus, cfg.words, cohort), cohort);
    finish_output(f, path);
  }
  write_run_config(cfg);
  out << "songs " << corpus.size() << ", years " << years.size() << '\n';
  return kExitOk;
}

int cmd_train(const RunConfig& cfg, std::ostream& out) {
  const Corpus corpus = load_corpus_cache(corpus_cache_path(cfg.corpus));
  prepare_out_dir(cfg.out_dir);
  const EmbeddingTable table = sgns::train_sgns(corpus, cfg.sgns);
  save_vectors(table, cfg.out_dir / "vectors.txt");
  write_run_config(cfg);
  out << "vocabulary " << table.size() << ", dim " << table.dim() << '\n';
  return kExitOk;
}

int cmd_weat(const RunConfig& cfg, std::ostream& out) {
  const auto tests = weat::load_tests(cfg.tests);
  VectorLoadOptions opts;
  opts.fold_case = cfg.fold_case;
  opts.keep_only.emplace();
  for (const auto& t : tests) {
    for (const auto* list : {&t.targets_x, &t.targets_y, &t.attributes_a, &t.attributes_b}) {
      opts.keep_only->insert(list->begin(), list->end());
    }
  }
  VectorLoadReport report;
  const EmbeddingTable emb = load_vectors(cfg.vectors, opts, &report);
  prepare_out_dir(cfg.out_dir);

  weat::PValueMode mode;
  if (cfg.p_mode == "exact") {
    mode = weat::PValueMode::exact();
  } else if (cfg.p_mode == "monte_carlo") {
    mode = weat::PValueMode::monte_carlo(cfg.samples, *cfg.seed);
  } else {
    mode.samples = cfg.samples;
    mode.seed = cfg.seed;
  }
  mode.inclusive = cfg.inclusive;
  const auto policy =
      cfg.oov == "strict" ? weat::OovPolicy::strict : weat::OovPolicy::drop_and_truncate;

  const auto entries = weat::run_battery(tests, emb, policy, mode);
  {
    const auto path = cfg.out_dir / "weat_results.csv";
    auto f = open_output(path);
    weat::write_results_csv(f, entries);
    finish_output(f, path);
  }
  {
    const auto path = cfg.out_dir / "weat_summary.txt";
    auto f = open_output(path);
    weat::write_summary(f, entries);
    finish_output(f, path);
  }
  write_run_config(cfg);
  weat::write_summary(out, entries);
  return kExitOk;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

// Turns a JSON config object into flags placed ahead of the command-line
// flags, which therefore take precedence. Keys naming options of other
// subcommands are ignored.
std::vector<std::string> config_flags(const fs::path& path, const CLI::App& sub,
                                      const CLI::App& app) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("config file " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw FormatError("config file must hold a JSON object");
  std::vector<std::string> flags;
  for (const auto& [key, value] : j.items()) {
    const std::string name = "--" + key;
    if (!sub.get_option_no_throw(name)) {
      bool known = false;
      for (const auto* other : app.get_subcommands({})) {
        known = known || other->get_option_no_throw(name) != nullptr;
      }
      if (!known) throw FormatError("config file: unknown option '" + key + "'");
      continue;
    }
    if (value.is_boolean()) {
      flags.push_back(name + "=" + (value.get<bool>() ? "true" : "false"));
    } else if (value.is_string()) {
      flags.push_back(name + "=" + value.get<std::string>());
    } else if (value.is_array()) {
      std::vector<std::string> items;
      for (const auto& v : value) items.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      flags.push_back(name + "=" + join(items));
    } else if (!value.is_null()) {
      flags.push_back(name + "=" + value.dump());
    }
  }
  return flags;
}

}  // namespace

int run(std::span<const std::string> args_in, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string config_path;
  std::string format_text = "auto";
  bool keep_brackets = false;
  bool no_stopwords = false;
  bool exact = false, monte_carlo = false;
  std::string cohort = cfg.cohort;

  CLI::App app{"Lyric style metrics and word-embedding association tests", "lyricstat"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(LYRICSTAT_VERSION));

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON file of option defaults");
  };

  auto* ingest_cmd = app.add_subcommand("ingest", "Validate and tokenize a song file");
  add_config(ingest_cmd);
  ingest_cmd->add_option("--input", cfg.input, "Songs as JSONL or CSV")->required();
  ingest_cmd->add_option("--format", format_text, "auto, jsonl or csv")
      ->check(CLI::IsMember({"auto", "jsonl", "csv"}));
  ingest_cmd->add_option("--out", cfg.out_dir, "Output directory")->required();
  ingest_cmd->add_option("--min-year", cfg.ingest.min_year);
  ingest_cmd->add_option("--max-year", cfg.ingest.max_year);
  ingest_cmd->add_option("--max-reject-fraction", cfg.ingest.max_reject_fraction)
      ->check(CLI::Range(0.0, 1.0));
  ingest_cmd->add_flag("--keep-brackets", keep_brackets, "Keep [bracketed] lines");
  ingest_cmd
      ->add_option("--annotation-pattern", cfg.ingest.tokenize.annotation_patterns,
                   "Regex of lines to drop (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  auto* style_cmd = app.add_subcommand("style", "Style metrics and word-frequency reports");
  add_config(style_cmd);
  style_cmd->add_option("--corpus", cfg.corpus, "Corpus cache or ingest output directory")
      ->required();
  style_cmd->add_option("--out", cfg.out_dir)->required();
  cfg.swear_lexicon = data_file("swear_words.txt");
  cfg.stopwords = data_file("stopwords.txt");
  style_cmd->add_option("--swear-lexicon", cfg.swear_lexicon);
  style_cmd->add_option("--stopwords", cfg.stopwords);
  style_cmd->add_flag("--no-stopwords", no_stopwords, "Keep stopwords in top-word lists");
  style_cmd->add_option("--top-k", cfg.top_k)->check(CLI::PositiveNumber);
  style_cmd->add_option("--year", cfg.year, "Only this year in top-word lists");
  style_cmd->add_option("--cohort", cohort, "popular, other or all")
      ->check(CLI::IsMember({"popular", "other", "all"}));
  style_cmd->add_option("--words", cfg.words, "Words for rank series")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  auto* train_cmd = app.add_subcommand("train", "Train skip-gram vectors on a corpus");
  add_config(train_cmd);
  train_cmd->add_option("--corpus", cfg.corpus)->required();
  train_cmd->add_option("--out", cfg.out_dir)->required();
  train_cmd->add_option("--dim", cfg.sgns.dim);
  train_cmd->add_option("--window", cfg.sgns.window);
  train_cmd->add_option("--negatives", cfg.sgns.negatives);
  train_cmd->add_option("--epochs", cfg.sgns.epochs);
  train_cmd->add_option("--learning-rate", cfg.sgns.initial_learning_rate);
  train_cmd->add_option("--min-count", cfg.sgns.min_count);
  train_cmd->add_option("--subsample", cfg.sgns.subsample_threshold);
  train_cmd->add_flag("--deterministic,!--parallel", cfg.sgns.deterministic,
                      "Single-threaded reproducible training (default)");
  train_cmd->add_option("--seed", cfg.seed)->required();

  auto* weat_cmd = app.add_subcommand("weat", "Run the WEAT battery on a vector file");
  add_config(weat_cmd);
  cfg.tests = data_file("weat_tests.json");
  weat_cmd->add_option("--vectors", cfg.vectors)->required();
  weat_cmd->add_option("--tests", cfg.tests);
  weat_cmd->add_option("--out", cfg.out_dir)->required();
  auto* exact_flag = weat_cmd->add_flag("--exact", exact, "Exact permutation p-values");
  weat_cmd->add_flag("--monte-carlo", monte_carlo, "Sampled permutation p-values")
      ->excludes(exact_flag);
  weat_cmd->add_option("--samples", cfg.samples)->check(CLI::PositiveNumber);
  weat_cmd->add_option("--seed", cfg.seed);
  weat_cmd->add_flag("--inclusive", cfg.inclusive, "Count ties in the p-value");
  weat_cmd->add_flag("--fold-case", cfg.fold_case, "Lowercase vector-file words");
  weat_cmd->add_option("--oov", cfg.oov, "drop or strict")
      ->check(CLI::IsMember({"drop", "strict"}));

  auto* version_cmd = app.add_subcommand("version", "Print the version");

  std::vector<std::string> args(args_in.begin(), args_in.end());
  try {
    // Config file flags go right after the subcommand name.
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config" && i + 1 < args.size()) {
        path = args[i + 1];
      } else if (args[i].rfind("--config=", 0) == 0) {
        path = args[i].substr(9);
      } else {
        continue;
      }
      auto pos = std::find_if(args.begin(), args.end(),
                              [](const std::string& a) { return !a.empty() && a[0] != '-'; });
      if (pos == args.end()) break;
      const CLI::App* sub = app.get_subcommand_no_throw(*pos);
      if (!sub) break;
      auto flags = config_flags(path, *sub, app);
      args.insert(pos + 1, flags.begin(), flags.end());
      break;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitIo;
  }

  try {
    if (version_cmd->parsed()) {
      out << "lyricstat " << LYRICSTAT_VERSION << '\n';
      return kExitOk;
    }
    if (ingest_cmd->parsed()) {
      cfg.command = "ingest";
      cfg.input_format = format_text;
      cfg.ingest.tokenize.strip_bracket_annotations = !keep_brackets;
      return cmd_ingest(cfg, out);
    }
    if (style_cmd->parsed()) {
      cfg.command = "style";
      cfg.cohort = cohort;
      cfg.filter_stopwords = !no_stopwords;
      return cmd_style(cfg, out);
    }
    if (train_cmd->parsed()) {
      cfg.command = "train";
      cfg.sgns.seed = *cfg.seed;
      cfg.sgns.validate();
      return cmd_train(cfg, out);
    }
    if (weat_cmd->parsed()) {
      cfg.command = "weat";
      cfg.p_mode = exact ? "exact" : monte_carlo ? "monte_carlo" : "auto";
      if (!exact && !cfg.seed) {
        err << "error: --seed is required unless --exact is given\n";
        return kExitIo;
      }
      return cmd_weat(cfg, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitIo;
}

}  // namespace lyricstat::cli
