#include <cstdio>

#include "lyricstat/csv.hpp"
#include "lyricstat/numfmt.hpp"
#include "lyricstat/weat.hpp"

namespace lyricstat::weat {

namespace {

std::uint64_t derive_seed(std::uint64_t base, std::size_t test_index) {
  std::uint64_t x = base + 0x9E3779B97F4A7C15ULL * (test_index + 1);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::string join(const std::vector<std::string>& words, char sep) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(sep);
    out += words[i];
  }
  return out;
}

std::string coverage_text(const Coverage& c) {
  return std::to_string(c.found) + "/" + std::to_string(c.requested);
}

}  // namespace

std::vector<BatteryEntry> run_battery(std::span<const WeatTest> tests, const EmbeddingTable& emb,
                                      OovPolicy policy, const PValueMode& mode) {
  std::vector<BatteryEntry> out;
  out.reserve(tests.size());
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const WeatTest& test = tests[i];
    BatteryEntry e;
    e.test_name = test.name;
    e.targets_label = test.targets_label;
    e.attributes_label = test.attributes_label;
    PValueMode test_mode = mode;
    if (mode.seed) test_mode.seed = derive_seed(*mode.seed, i);
    try {
      e.result = evaluate(test, emb, policy, test_mode);
      e.coverage = e.result->coverage;
      e.dropped_words = e.result->dropped_words;
    } catch (const UnderfilledError& err) {
      e.error = err.what();
      e.coverage = err.coverage;
      e.dropped_words = err.dropped;
    } catch (const Error& err) {
      e.error = err.what();
    } catch (const std::invalid_argument& err) {
      e.error = err.what();
    }
    out.push_back(std::move(e));
  }
  return out;
}

void write_results_csv(std::ostream& out, std::span<const BatteryEntry> entries) {
  csv::write_row(out, {"test_name", "effect_size", "test_statistic", "p_value", "p_method",
                       "coverage_x", "coverage_y", "coverage_a", "coverage_b", "dropped_words",
                       "error"});
  for (const auto& e : entries) {
    std::vector<std::string> row{e.test_name};
    if (e.result) {
      row.push_back(format_double(e.result->effect_size));
      row.push_back(format_double(e.result->test_statistic));
      row.push_back(format_double(e.result->p_value));
      row.push_back(e.result->p_method);
    } else {
      row.insert(row.end(), {"", "", "", ""});
    }
    for (const auto& c : e.coverage) row.push_back(coverage_text(c));
    row.push_back(join(e.dropped_words, ';'));
    row.push_back(e.error);
    csv::write_row(out, row);
  }
}

void write_summary(std::ostream& out, std::span<const BatteryEntry> entries) {
  char line[512];
  std::snprintf(line, sizeof line, "%-4s | %-46s | %-26s | %11s | %8s\n", "No.", "Target words",
                "Attribute words", "Effect size", "p-value");
  out << line << std::string(110, '-') << '\n';
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const std::string targets = e.targets_label.empty() ? e.test_name : e.targets_label;
    if (e.result) {
      std::snprintf(line, sizeof line, "%-4zu | %-46s | %-26s | %11.2f | %8.4f\n", i + 1,
                    targets.c_str(), e.attributes_label.c_str(), e.result->effect_size,
                    e.result->p_value);
    } else {
      std::snprintf(line, sizeof line, "%-4zu | %-46s | %-26s | %11s | %8s\n", i + 1,
                    targets.c_str(), e.attributes_label.c_str(), "n/a", "n/a");
    }
    out << line;
    if (!e.ok()) out << "       error: " << e.error << '\n';
  }
}

}  // namespace lyricstat::weat
