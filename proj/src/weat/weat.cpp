#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "lyricstat/weat.hpp"

namespace lyricstat::weat {

using nlohmann::json;

WeatTest WeatTest::swapped_targets() const {
  WeatTest t = *this;
  std::swap(t.targets_x, t.targets_y);
  return t;
}

WeatTest WeatTest::swapped_attributes() const {
  WeatTest t = *this;
  std::swap(t.attributes_a, t.attributes_b);
  return t;
}

namespace {

std::vector<std::string> word_list(const json& obj, const char* key, const std::string& test) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_array()) {
    throw FormatError("test '" + test + "': '" + key + "' must be a list of words");
  }
  std::vector<std::string> words;
  for (const auto& w : *it) {
    if (!w.is_string()) throw FormatError("test '" + test + "': '" + key + "' holds a non-string");
    std::string s = w.get<std::string>();
    for (unsigned char c : s) {
      if (c >= 'A' && c <= 'Z') {
        throw FormatError("test '" + test + "': word '" + s + "' is not lowercase");
      }
    }
    words.push_back(std::move(s));
  }
  if (words.empty()) throw FormatError("test '" + test + "': '" + key + "' is empty");
  return words;
}

}  // namespace

std::vector<WeatTest> parse_tests(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("WEAT test file is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw FormatError("WEAT test file must hold a JSON list");
  std::vector<WeatTest> tests;
  for (const auto& obj : doc) {
    if (!obj.is_object() || !obj.contains("name") || !obj["name"].is_string()) {
      throw FormatError("every WEAT test needs a string 'name'");
    }
    WeatTest t;
    t.name = obj["name"].get<std::string>();
    t.targets_label = obj.value("targets_label", "");
    t.attributes_label = obj.value("attributes_label", "");
    t.targets_x = word_list(obj, "targets_x", t.name);
    t.targets_y = word_list(obj, "targets_y", t.name);
    t.attributes_a = word_list(obj, "attributes_a", t.name);
    t.attributes_b = word_list(obj, "attributes_b", t.name);

    const std::array<const std::vector<std::string>*, 4> lists{&t.targets_x, &t.targets_y,
                                                               &t.attributes_a, &t.attributes_b};
    for (std::size_t i = 0; i < lists.size(); ++i) {
      std::unordered_set<std::string> seen(lists[i]->begin(), lists[i]->end());
      for (std::size_t j = i + 1; j < lists.size(); ++j) {
        for (const auto& w : *lists[j]) {
          if (seen.contains(w)) {
            throw FormatError("test '" + t.name + "': word '" + w + "' appears in two lists");
          }
        }
      }
    }
    tests.push_back(std::move(t));
  }
  return tests;
}

std::vector<WeatTest> load_tests(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open WEAT test file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_tests(ss.str());
}

ResolvedTest resolve(const WeatTest& test, const EmbeddingTable& emb, OovPolicy policy,
                     std::size_t min_targets, std::size_t min_attributes) {
  ResolvedTest r;
  const std::array<const std::vector<std::string>*, 4> in{&test.targets_x, &test.targets_y,
                                                          &test.attributes_a, &test.attributes_b};
  const std::array<std::vector<std::string>*, 4> out{&r.x, &r.y, &r.a, &r.b};
  for (std::size_t i = 0; i < 4; ++i) {
    r.coverage[i].requested = in[i]->size();
    for (const auto& w : *in[i]) {
      if (emb.usable(w)) {
        out[i]->push_back(w);
      } else {
        r.dropped.push_back(w);
      }
    }
    r.coverage[i].found = out[i]->size();
  }

  auto describe = [&] {
    static constexpr const char* kNames[] = {"X", "Y", "A", "B"};
    std::string s;
    for (std::size_t i = 0; i < 4; ++i) {
      s += std::string(i ? ", " : "") + kNames[i] + " " + std::to_string(r.coverage[i].found) +
           "/" + std::to_string(r.coverage[i].requested);
    }
    return s;
  };

  if (policy == OovPolicy::strict && !r.dropped.empty()) {
    throw UnderfilledError("missing words under strict OOV policy (" + describe() + ")",
                           r.coverage, r.dropped);
  }
  if (r.x.size() != r.y.size()) {
    if (policy == OovPolicy::strict) {
      throw UnderfilledError("target lists differ in size (" + describe() + ")", r.coverage,
                             r.dropped);
    }
    auto& longer = r.x.size() > r.y.size() ? r.x : r.y;
    const std::size_t keep = std::min(r.x.size(), r.y.size());
    for (std::size_t i = keep; i < longer.size(); ++i) r.dropped.push_back(longer[i]);
    longer.resize(keep);
  }
  if (r.x.size() < min_targets || r.a.size() < min_attributes || r.b.size() < min_attributes) {
    throw UnderfilledError("under-filled word lists after OOV filtering (" + describe() + ")",
                           r.coverage, r.dropped);
  }
  return r;
}

double association(std::string_view w, std::span<const std::string> attributes_a,
                   std::span<const std::string> attributes_b, const EmbeddingTable& emb) {
  const auto wv = emb.vector(w);
  double sa = 0, sb = 0;
  for (const auto& a : attributes_a) sa += cosine(wv, emb.vector(a));
  for (const auto& b : attributes_b) sb += cosine(wv, emb.vector(b));
  return sa / static_cast<double>(attributes_a.size()) -
         sb / static_cast<double>(attributes_b.size());
}

Scores association_scores(const ResolvedTest& test, const EmbeddingTable& emb) {
  const std::size_t d = emb.dim();
  auto unit = [&](const std::string& w) {
    auto v = emb.vector(w);
    double nn = 0;
    for (double x : v) nn += x * x;
    const double inv = 1.0 / std::sqrt(nn);
    std::vector<double> u(d);
    for (std::size_t i = 0; i < d; ++i) u[i] = v[i] * inv;
    return u;
  };
  auto units = [&](const std::vector<std::string>& ws) {
    std::vector<std::vector<double>> out;
    out.reserve(ws.size());
    for (const auto& w : ws) out.push_back(unit(w));
    return out;
  };
  const auto a = units(test.a);
  const auto b = units(test.b);
  auto score = [&](const std::string& w) {
    const auto u = unit(w);
    auto mean_dot = [&](const std::vector<std::vector<double>>& set) {
      double s = 0;
      for (const auto& v : set) {
        double dot = 0;
        for (std::size_t i = 0; i < d; ++i) dot += u[i] * v[i];
        s += dot;
      }
      return s / static_cast<double>(set.size());
    };
    return mean_dot(a) - mean_dot(b);
  };
  Scores s;
  for (const auto& w : test.x) s.x.push_back(score(w));
  for (const auto& w : test.y) s.y.push_back(score(w));
  return s;
}

double test_statistic(std::span<const double> x_scores, std::span<const double> y_scores) {
  double sx = 0, sy = 0;
  for (double v : x_scores) sx += v;
  for (double v : y_scores) sy += v;
  return sx - sy;
}

double effect_size(std::span<const double> x_scores, std::span<const double> y_scores) {
  if (x_scores.empty() || y_scores.empty()) {
    throw std::invalid_argument("effect_size: empty target scores");
  }
  double sx = 0, sy = 0;
  for (double v : x_scores) sx += v;
  for (double v : y_scores) sy += v;
  const double mx = sx / static_cast<double>(x_scores.size());
  const double my = sy / static_cast<double>(y_scores.size());
  const double n = static_cast<double>(x_scores.size() + y_scores.size());
  const double mean = (sx + sy) / n;
  double ss = 0;
  for (double v : x_scores) ss += (v - mean) * (v - mean);
  for (double v : y_scores) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / n);
  if (!(sd > 0.0)) {
    throw DegenerateStatisticError("effect size undefined: all association scores are equal");
  }
  return (mx - my) / sd;
}

double test_statistic(const WeatTest& test, const EmbeddingTable& emb, OovPolicy policy) {
  const ResolvedTest r = resolve(test, emb, policy, 1, 1);
  const Scores s = association_scores(r, emb);
  return test_statistic(s.x, s.y);
}

double effect_size(const WeatTest& test, const EmbeddingTable& emb, OovPolicy policy) {
  const ResolvedTest r = resolve(test, emb, policy);
  const Scores s = association_scores(r, emb);
  return effect_size(s.x, s.y);
}

PValue permutation_p(const WeatTest& test, const EmbeddingTable& emb, OovPolicy policy,
                     const PValueMode& mode) {
  const ResolvedTest r = resolve(test, emb, policy, 1, 1);
  const Scores s = association_scores(r, emb);
  return permutation_p(s.x, s.y, mode);
}

WeatResult evaluate(const WeatTest& test, const EmbeddingTable& emb, OovPolicy policy,
                    const PValueMode& mode) {
  const ResolvedTest r = resolve(test, emb, policy);
  const Scores s = association_scores(r, emb);
  WeatResult out;
  out.test_name = test.name;
  out.effect_size = effect_size(s.x, s.y);
  out.test_statistic = test_statistic(s.x, s.y);
  const PValue p = permutation_p(s.x, s.y, mode);
  out.p_value = p.p;
  out.p_method = p.method;
  out.coverage = r.coverage;
  out.dropped_words = r.dropped;
  return out;
}

}  // namespace lyricstat::weat
