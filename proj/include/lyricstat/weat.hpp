#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lyricstat/embeddings.hpp"
#include "lyricstat/error.hpp"

namespace lyricstat::weat {

/// Two target word sets (X, Y) and two attribute word sets (A, B).
struct WeatTest {
  std::string name;
  std::string targets_label;
  std::string attributes_label;
  std::vector<std::string> targets_x;
  std::vector<std::string> targets_y;
  std::vector<std::string> attributes_a;
  std::vector<std::string> attributes_b;

  /// Same test with X and Y exchanged.
  WeatTest swapped_targets() const;
  /// Same test with A and B exchanged.
  WeatTest swapped_attributes() const;
};

/// JSON list of {name, targets_x, targets_y, attributes_a, attributes_b}
/// plus optional targets_label / attributes_label. Lists must be non-empty,
/// lowercase and pairwise disjoint. Throws IoError or FormatError.
std::vector<WeatTest> load_tests(const std::filesystem::path& path);
std::vector<WeatTest> parse_tests(std::string_view json_text);

enum class OovPolicy {
  /// Drop missing words, then truncate the longer target list from its end.
  drop_and_truncate,
  /// Any missing word fails the test.
  strict,
};

struct Coverage {
  std::size_t requested = 0;
  std::size_t found = 0;
};

/// Coverage of X, Y, A, B in that order.
using CoverageReport = std::array<Coverage, 4>;

/// A test reduced to in-vocabulary words after applying the OOV policy.
struct ResolvedTest {
  std::vector<std::string> x, y, a, b;
  CoverageReport coverage;
  std::vector<std::string> dropped;
};

/// Raised when a list is too short after OOV filtering.
class UnderfilledError : public Error {
 public:
  UnderfilledError(const std::string& what, CoverageReport coverage,
                   std::vector<std::string> dropped)
      : Error(what), coverage(coverage), dropped(std::move(dropped)) {}
  CoverageReport coverage;
  std::vector<std::string> dropped;
};

/// All association scores are equal, so the effect size is undefined.
class DegenerateStatisticError : public Error {
 public:
  using Error::Error;
};

/// Exact enumeration would exceed the partition budget.
class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

/// Words absent from the table, or present with a zero vector, are missing.
/// Throws UnderfilledError unless |X| = |Y| >= min_targets and |A|, |B| >=
/// min_attributes after filtering.
ResolvedTest resolve(const WeatTest& test, const EmbeddingTable& emb, OovPolicy policy,
                     std::size_t min_targets = 2, std::size_t min_attributes = 2);

/// mean_{a in A} cos(w, a) - mean_{b in B} cos(w, b). Every word must be in
/// the table (std::out_of_range otherwise).
double association(std::string_view w, std::span<const std::string> attributes_a,
                   std::span<const std::string> attributes_b, const EmbeddingTable& emb);

/// Association scores of X and Y words, computed with unit-normalized
/// vectors.
struct Scores {
  std::vector<double> x;
  std::vector<double> y;
};
Scores association_scores(const ResolvedTest& test, const EmbeddingTable& emb);

/// sum_x s(x) - sum_y s(y).
double test_statistic(std::span<const double> x_scores, std::span<const double> y_scores);
/// (mean_x s - mean_y s) / population std over X u Y. Throws
/// DegenerateStatisticError when the std is zero.
double effect_size(std::span<const double> x_scores, std::span<const double> y_scores);

double test_statistic(const WeatTest& test, const EmbeddingTable& emb,
                      OovPolicy policy = OovPolicy::drop_and_truncate);

/// Largest C(2n, n) enumerated in exact mode.
inline constexpr std::uint64_t kExactPartitionBudget = 200000;
inline constexpr std::size_t kDefaultMonteCarloSamples = 100000;

struct PValueMode {
  enum class Kind { exact, monte_carlo, automatic };
  Kind kind = Kind::automatic;
  std::size_t samples = kDefaultMonteCarloSamples;
  /// Required for Monte Carlo; automatic mode only needs it when the test
  /// is too large for exact enumeration.
  std::optional<std::uint64_t> seed;
  /// Count partitions with S_i >= S instead of S_i > S.
  bool inclusive = false;

  static PValueMode exact() { return {Kind::exact, 0, std::nullopt, false}; }
  static PValueMode monte_carlo(std::size_t n, std::uint64_t seed) {
    return {Kind::monte_carlo, n, seed, false};
  }
};

struct PValue {
  double p = 0.0;
  std::string method;  // "exact" or "monte_carlo(n=...,seed=...)"
};

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// One-sided permutation p-value: the fraction of equal-size partitions
/// (Xi, Yi) of X u Y whose statistic exceeds the observed one. Differences
/// within 1e-12 * sum|s| count as ties. Throws std::invalid_argument when
/// |X| != |Y| or |X| < 1, BudgetExceededError when exact mode is asked for
/// more than kExactPartitionBudget partitions.
PValue permutation_p(std::span<const double> x_scores, std::span<const double> y_scores,
                     const PValueMode& mode);
PValue permutation_p(const WeatTest& test, const EmbeddingTable& emb, OovPolicy policy,
                     const PValueMode& mode);

struct WeatResult {
  std::string test_name;
  double effect_size = 0.0;
  double test_statistic = 0.0;
  double p_value = 0.0;
  std::string p_method;
  CoverageReport coverage{};
  std::vector<std::string> dropped_words;
};

/// Full statistics for one test. Throws UnderfilledError,
/// DegenerateStatisticError, BudgetExceededError.
WeatResult evaluate(const WeatTest& test, const EmbeddingTable& emb, OovPolicy policy,
                    const PValueMode& mode);

/// effect_size with coverage; same as evaluate() without the p-value.
double effect_size(const WeatTest& test, const EmbeddingTable& emb,
                   OovPolicy policy = OovPolicy::drop_and_truncate);

/// One battery row: either a result or the reason the test could not run.
struct BatteryEntry {
  std::string test_name;
  std::string targets_label;
  std::string attributes_label;
  std::optional<WeatResult> result;
  std::string error;
  CoverageReport coverage{};
  std::vector<std::string> dropped_words;

  bool ok() const { return result.has_value(); }
};

/// Runs each test in order; a failing test is reported in its entry and does
/// not stop the battery. Monte Carlo tests get per-test seeds derived from
/// mode.seed and the test position.
std::vector<BatteryEntry> run_battery(std::span<const WeatTest> tests, const EmbeddingTable& emb,
                                      OovPolicy policy, const PValueMode& mode);

/// CSV: test_name, effect_size, test_statistic, p_value, p_method,
/// coverage_x/y/a/b ("found/requested"), dropped_words (';'-joined), error.
void write_results_csv(std::ostream& out, std::span<const BatteryEntry> entries);

/// Plain-text table: test no., targets, attributes, effect size, p-value.
void write_summary(std::ostream& out, std::span<const BatteryEntry> entries);

}  // namespace lyricstat::weat
