#include <doctest.h>
#include <omp.h>

#include <json.hpp>
#include <sstream>

#include "lyricstat/csv.hpp"
#include "lyricstat/error.hpp"
#include "lyricstat/weat.hpp"
#include "test_support.hpp"
#include "weat_fixtures.hpp"

using namespace lyricstat;
using namespace lyricstat::weat;

namespace {

EmbeddingTable table(std::size_t dim,
                     std::initializer_list<std::pair<const char*, std::vector<double>>> rows) {
  EmbeddingTable t(dim);
  for (const auto& [w, v] : rows) t.set(w, v);
  return t;
}

WeatTest make_test(std::vector<std::string> x, std::vector<std::string> y,
                   std::vector<std::string> a, std::vector<std::string> b) {
  WeatTest t;
  t.name = "t";
  t.targets_x = std::move(x);
  t.targets_y = std::move(y);
  t.attributes_a = std::move(a);
  t.attributes_b = std::move(b);
  return t;
}

// X at +1, Y at -1 on the (A, B) axis.
struct SymmetricFixture {
  EmbeddingTable emb = table(2, {{"x1", {1, 0}},
                                 {"x2", {2, 0}},
                                 {"y1", {0, 1}},
                                 {"y2", {0, 3}},
                                 {"a1", {1, 0}},
                                 {"a2", {5, 0}},
                                 {"b1", {0, 1}},
                                 {"b2", {0, 2}}});
  WeatTest test = make_test({"x1", "x2"}, {"y1", "y2"}, {"a1", "a2"}, {"b1", "b2"});
};

}  // namespace

TEST_CASE("test file parsing and validation") {
  const auto ok = parse_tests(R"([{"name": "t", "targets_x": ["a"], "targets_y": ["b"],
      "attributes_a": ["c"], "attributes_b": ["d"], "targets_label": "X v/s Y"}])");
  REQUIRE(ok.size() == 1);
  CHECK(ok[0].targets_label == "X v/s Y");
  CHECK_THROWS_AS(parse_tests("{"), FormatError);
  CHECK_THROWS_AS(parse_tests(R"([{"name": "t", "targets_x": [], "targets_y": ["b"],
      "attributes_a": ["c"], "attributes_b": ["d"]}])"),
                  FormatError);
  CHECK_THROWS_AS(parse_tests(R"([{"name": "t", "targets_x": ["A"], "targets_y": ["b"],
      "attributes_a": ["c"], "attributes_b": ["d"]}])"),
                  FormatError);
  CHECK_THROWS_AS(parse_tests(R"([{"name": "t", "targets_x": ["a"], "targets_y": ["b"],
      "attributes_a": ["c"], "attributes_b": ["a"]}])"),
                  FormatError);
  CHECK_THROWS_AS(load_tests("/nonexistent/tests.json"), IoError);
}

TEST_CASE("bundled battery has eight well-formed tests") {
  const auto tests = load_tests(testing::data_dir() / "weat_tests.json");
  REQUIRE(tests.size() == 8);
  for (const auto& t : tests) {
    CHECK(t.targets_x.size() == t.targets_y.size());
    CHECK(t.attributes_a.size() == t.attributes_b.size());
    CHECK_FALSE(t.targets_label.empty());
  }
}

TEST_CASE("association examples") {
  const auto emb = table(2, {{"w", {1, 0}}, {"a1", {1, 0}}, {"b1", {0, 1}}, {"a2", {3, 4}}});
  const std::vector<std::string> a{"a1"}, b{"b1"}, ab{"a1", "a2"};
  CHECK(association("w", a, b, emb) == 1.0);
  CHECK(association("w", ab, ab, emb) == 0.0);
  CHECK_THROWS_AS(association("nope", a, b, emb), std::out_of_range);
}

TEST_CASE("association is unchanged by an attribute at the mean cosine") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = testing::random_instance(rng, 1, 4, 6);
    const auto& t = inst.test;
    const auto w = inst.table.vector(t.targets_x[0]);
    double target = 0;
    for (const auto& a : t.attributes_a) target += cosine(w, inst.table.vector(a));
    target /= static_cast<double>(t.attributes_a.size());
    // a* = target * w_hat + sqrt(1 - target^2) * u with u a unit vector orthogonal to w.
    std::vector<double> wh(w.begin(), w.end()), u(6);
    double wn = 0;
    for (double v : wh) wn += v * v;
    for (auto& v : wh) v /= std::sqrt(wn);
    for (auto& v : u) v = g(rng);
    double proj = 0;
    for (int i = 0; i < 6; ++i) proj += u[i] * wh[i];
    double un = 0;
    for (int i = 0; i < 6; ++i) {
      u[i] -= proj * wh[i];
      un += u[i] * u[i];
    }
    std::vector<double> star(6);
    for (int i = 0; i < 6; ++i) {
      star[i] = target * wh[i] + std::sqrt(1 - target * target) * u[i] / std::sqrt(un);
    }
    inst.table.set("astar", star);
    auto extended = t.attributes_a;
    extended.push_back("astar");
    CHECK(std::abs(association(t.targets_x[0], extended, t.attributes_b, inst.table) -
                   association(t.targets_x[0], t.attributes_a, t.attributes_b, inst.table)) <=
          1e-12);
  }
}

TEST_CASE("symmetric table: d = 2 and S = 4c") {
  SymmetricFixture f;
  CHECK(effect_size(f.test, f.emb) == 2.0);
  CHECK(test_statistic(f.test, f.emb) == 4.0);
}

TEST_CASE("identical score multisets give d = 0") {
  const auto emb = table(2, {{"x1", {1, 0}},
                             {"x2", {0, 1}},
                             {"y1", {0, 2}},
                             {"y2", {2, 0}},
                             {"a1", {1, 0}},
                             {"a2", {1, 0.1}},
                             {"b1", {0, 1}},
                             {"b2", {0.1, 1}}});
  const auto t = make_test({"x1", "x2"}, {"y1", "y2"}, {"a1", "a2"}, {"b1", "b2"});
  CHECK(std::abs(effect_size(t, emb)) <= 1e-15);
}

TEST_CASE("all scores equal is a degenerate statistic") {
  const auto emb = table(2, {{"x1", {1, 1}},
                             {"x2", {2, 2}},
                             {"y1", {3, 3}},
                             {"y2", {1, 1}},
                             {"a1", {1, 0}},
                             {"a2", {2, 0}},
                             {"b1", {0, 1}},
                             {"b2", {0, 2}}});
  const auto t = make_test({"x1", "x2"}, {"y1", "y2"}, {"a1", "a2"}, {"b1", "b2"});
  CHECK_THROWS_AS(effect_size(t, emb), DegenerateStatisticError);
  CHECK(test_statistic(t, emb) == 0.0);
}

TEST_CASE("matches the independent numpy oracle") {
  const auto dir = testing::test_data_dir() / "weat";
  const auto emb = load_vectors(dir / "random_table.txt");
  const auto test = load_tests(dir / "random_test.json").at(0);
  const auto expected = nlohmann::json::parse(testing::read_file(dir / "expected.json"));
  const ResolvedTest r = resolve(test, emb, OovPolicy::strict);
  const Scores s = association_scores(r, emb);
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    CHECK(std::abs(s.x[i] - expected["scores_x"][i].get<double>()) <= 1e-12);
    CHECK(std::abs(s.y[i] - expected["scores_y"][i].get<double>()) <= 1e-12);
    CHECK(std::abs(association(r.x[i], r.a, r.b, emb) - s.x[i]) <= 1e-12);
  }
  CHECK(std::abs(test_statistic(s.x, s.y) - expected["test_statistic"].get<double>()) <= 1e-12);
  CHECK(std::abs(effect_size(s.x, s.y) - expected["effect_size"].get<double>()) <= 1e-12);
  const PValue p = permutation_p(s.x, s.y, PValueMode::exact());
  CHECK(p.p == expected["exact_p"].get<double>());
  CHECK(p.method == "exact");
}

TEST_CASE("maximal separation: exact p = 0 over 6 partitions") {
  const std::vector<double> x{0.9, 0.8}, y{-0.7, -0.6};
  CHECK(permutation_p(x, y, PValueMode::exact()).p == 0.0);
  // Inclusive counting includes the observed partition itself.
  PValueMode incl = PValueMode::exact();
  incl.inclusive = true;
  CHECK(permutation_p(x, y, incl).p == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("exchangeable targets: p equals enumeration") {
  const std::vector<double> x{0.3, -0.1, 0.2}, y{0.2, 0.3, -0.1};
  const double p = permutation_p(x, y, PValueMode::exact()).p;
  CHECK(p == testing::brute_force_p(x, y));
  // S = 0; 8 of the 20 partitions tie at 0 and 6 lie above it.
  CHECK(p == doctest::Approx(6.0 / 20.0));
  PValueMode incl = PValueMode::exact();
  incl.inclusive = true;
  CHECK(permutation_p(x, y, incl).p == testing::brute_force_p(x, y, true));
}

TEST_CASE("exact mode equals the brute-force enumerator for 2n <= 12") {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> g(0.0, 0.3);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<double> x(n), y(n);
      for (auto& v : x) v = g(rng) + 0.1;
      for (auto& v : y) v = g(rng);
      if (trial % 5 == 0) y = x;  // force ties
      CHECK(permutation_p(x, y, PValueMode::exact()).p == testing::brute_force_p(x, y));
    }
  }
}

TEST_CASE("binomial and the exact budget") {
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(20, 10) == 184756);
  CHECK(binomial(64, 32) == 1832624140942590534ULL);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(200, 100) == std::numeric_limits<std::uint64_t>::max());
  std::vector<double> x(11, 0.0), y(11, 0.0);
  for (std::size_t i = 0; i < 11; ++i) x[i] = 0.01 * static_cast<double>(i);
  CHECK_THROWS_AS(permutation_p(x, y, PValueMode::exact()), BudgetExceededError);
  PValueMode automatic;
  CHECK_THROWS_AS(permutation_p(x, y, automatic), std::invalid_argument);  // no seed
  automatic.seed = 4;
  automatic.samples = 1000;
  CHECK(permutation_p(x, y, automatic).method == "monte_carlo(n=1000,seed=4)");
  x.resize(10);
  y.resize(10);
  CHECK(permutation_p(x, y, PValueMode{}).method == "exact");
}

TEST_CASE("argument errors") {
  const std::vector<double> one{1.0}, two{1.0, 2.0}, none{};
  CHECK_THROWS_AS(permutation_p(one, two, PValueMode::exact()), std::invalid_argument);
  CHECK_THROWS_AS(permutation_p(none, none, PValueMode::exact()), std::invalid_argument);
  CHECK_THROWS_AS(permutation_p(one, one, PValueMode::monte_carlo(0, 1)), std::invalid_argument);
}

TEST_CASE("Monte Carlo agrees with exact within 3 standard errors") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    auto inst = testing::random_instance(rng, 5, 5, 8);
    const auto r = resolve(inst.test, inst.table, OovPolicy::strict);
    const auto s = association_scores(r, inst.table);
    const double exact = permutation_p(s.x, s.y, PValueMode::exact()).p;
    const double mc = permutation_p(s.x, s.y, PValueMode::monte_carlo(100000, 11 + trial)).p;
    const double se = std::sqrt(exact * (1 - exact) / 100000);
    CHECK(std::abs(mc - exact) <= 3 * se + 1e-12);
  }
}

TEST_CASE("Monte Carlo is reproducible and independent of thread count") {
  const std::vector<double> x{0.3, 0.1, 0.25, -0.05, 0.4, 0.2, 0.0, 0.15},
      y{0.1, -0.2, 0.05, 0.3, -0.1, 0.0, 0.12, -0.3};
  const auto mode = PValueMode::monte_carlo(30000, 5);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const PValue one = permutation_p(x, y, mode);
  omp_set_num_threads(4);
  const PValue four = permutation_p(x, y, mode);
  omp_set_num_threads(saved);
  CHECK(one.p == four.p);
  CHECK(one.method == "monte_carlo(n=30000,seed=5)");
  CHECK(permutation_p(x, y, PValueMode::monte_carlo(30000, 6)).p != one.p);
}

TEST_CASE("antisymmetry under target and attribute swaps") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = testing::random_instance(rng, 2 + trial % 5, 2 + trial % 3, 10);
    const double d = effect_size(inst.test, inst.table);
    const double s = test_statistic(inst.test, inst.table);
    for (const auto& swapped :
         {inst.test.swapped_targets(), inst.test.swapped_attributes()}) {
      CHECK(std::abs(effect_size(swapped, inst.table) + d) <= 1e-12);
      CHECK(std::abs(test_statistic(swapped, inst.table) + s) <= 1e-12);
    }
    if (d != 0.0) CHECK((s > 0) == (d > 0));
  }
}

TEST_CASE("positive scaling leaves every statistic unchanged") {
  std::mt19937_64 rng(6);
  for (double factor : {1e-3, 0.5, 7.0, 1e4}) {
    auto inst = testing::random_instance(rng, 4, 4, 12);
    const auto mode = PValueMode::exact();
    const WeatResult before = evaluate(inst.test, inst.table, OovPolicy::strict, mode);
    const double a_before =
        association(inst.test.targets_x[0], inst.test.attributes_a, inst.test.attributes_b, inst.table);
    inst.table.scale(factor);
    const WeatResult after = evaluate(inst.test, inst.table, OovPolicy::strict, mode);
    CHECK(std::abs(after.effect_size - before.effect_size) <= 1e-12);
    CHECK(std::abs(after.test_statistic - before.test_statistic) <= 1e-12);
    CHECK(after.p_value == before.p_value);
    CHECK(std::abs(association(inst.test.targets_x[0], inst.test.attributes_a,
                               inst.test.attributes_b, inst.table) -
                   a_before) <= 1e-12);
  }
}

TEST_CASE("|d| <= 2 on random equal-size instances") {
  std::mt19937_64 rng(1000);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto inst = testing::random_instance(rng, 2 + trial % 7, 2 + trial % 4, 5);
    CHECK(std::abs(effect_size(inst.test, inst.table)) <= 2.0 + 1e-12);
  }
}

TEST_CASE("OOV: drop, truncate and report") {
  SymmetricFixture f;
  f.emb.set("zero", std::vector<double>{0, 0});
  const auto t = make_test({"x1", "missing", "x2"}, {"y1", "y2", "zero"}, {"a1", "a2", "gone"},
                           {"b1", "b2"});
  const ResolvedTest r = resolve(t, f.emb, OovPolicy::drop_and_truncate);
  CHECK(r.x == std::vector<std::string>{"x1", "x2"});
  CHECK(r.y == std::vector<std::string>{"y1", "y2"});
  CHECK(r.coverage[0].requested == 3);
  CHECK(r.coverage[0].found == 2);
  CHECK(r.coverage[1].found == 2);
  CHECK(r.coverage[2].found == 2);
  CHECK(r.dropped == std::vector<std::string>{"missing", "zero", "gone"});
  CHECK_THROWS_AS(resolve(t, f.emb, OovPolicy::strict), UnderfilledError);

  // Unequal after dropping: the longer list loses its tail.
  const auto u = make_test({"x1", "x2"}, {"y1", "nope"}, {"a1", "a2"}, {"b1", "b2"});
  const ResolvedTest ru = resolve(u, f.emb, OovPolicy::drop_and_truncate, 1, 2);
  CHECK(ru.x == std::vector<std::string>{"x1"});
  CHECK(ru.dropped == std::vector<std::string>{"nope", "x2"});
  try {
    resolve(u, f.emb, OovPolicy::drop_and_truncate);
    FAIL("expected UnderfilledError");
  } catch (const UnderfilledError& e) {
    CHECK(e.coverage[1].found == 1);
    CHECK(std::string(e.what()).find("Y 1/2") != std::string::npos);
  }
}

TEST_CASE("battery: per-test failures do not stop the run") {
  const auto tests = load_tests(testing::data_dir() / "weat_tests.json");
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  EmbeddingTable full(10), partial(10);
  const WeatTest& names = tests[2];
  for (const auto& t : tests) {
    for (const auto* list : {&t.targets_x, &t.targets_y, &t.attributes_a, &t.attributes_b}) {
      for (const auto& w : *list) {
        std::vector<double> v(10);
        for (auto& x : v) x = g(rng);
        full.set(w, v);
        const bool is_name = std::find(names.targets_x.begin(), names.targets_x.end(), w) !=
                                 names.targets_x.end() ||
                             std::find(names.targets_y.begin(), names.targets_y.end(), w) !=
                                 names.targets_y.end();
        if (!is_name) partial.set(w, v);
      }
    }
  }
  PValueMode mode;
  mode.samples = 2000;
  mode.seed = 9;
  const auto all = run_battery(tests, full, OovPolicy::drop_and_truncate, mode);
  REQUIRE(all.size() == 8);
  for (const auto& e : all) CHECK(e.ok());
  CHECK(all[0].result->p_method.rfind("monte_carlo", 0) == 0);
  CHECK(all[3].result->p_method == "exact");

  const auto some = run_battery(tests, partial, OovPolicy::drop_and_truncate, mode);
  for (std::size_t i = 0; i < 8; ++i) CHECK(some[i].ok() == (i != 2));
  CHECK(some[2].coverage[0].found == 0);
  CHECK(some[2].error.find("under-filled") != std::string::npos);
  // Tests that share no words with test 3 give the same answer as before.
  CHECK(some[0].result->effect_size == all[0].result->effect_size);
  CHECK(some[0].result->p_value == all[0].result->p_value);

  std::ostringstream csv_out, summary;
  write_results_csv(csv_out, some);
  write_summary(summary, some);
  std::istringstream in(csv_out.str());
  csv::Reader reader(in);
  std::vector<std::string> row;
  REQUIRE(reader.next(row));
  CHECK(row == std::vector<std::string>{"test_name", "effect_size", "test_statistic", "p_value",
                                        "p_method", "coverage_x", "coverage_y", "coverage_a",
                                        "coverage_b", "dropped_words", "error"});
  int rows = 0;
  while (reader.next(row)) {
    ++rows;
    if (rows == 3) {
      CHECK(row[1].empty());
      CHECK(row[5] == "0/32");
    }
  }
  CHECK(rows == 8);
  CHECK(summary.str().find("Flowers v/s Insects") != std::string::npos);
}
