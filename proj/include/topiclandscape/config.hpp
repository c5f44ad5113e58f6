#pragma once

// Single-document JSON run configuration. Defaults reproduce the reference
// pipeline settings; relative paths resolve against the config's directory.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "corpus.hpp"
#include "diachronic.hpp"
#include "error.hpp"
#include "report.hpp"
#include "synchronic.hpp"
#include "topic_model.hpp"

namespace topiclandscape {

struct TopicSettings {
  LdaParams lda;
  std::size_t min_count = 1;
  std::set<std::string> stopwords;
  InferenceOptions inference;
  std::size_t threads = 0;
};

struct RunConfig {
  std::filesystem::path source;
  nlohmann::json snapshot;

  std::optional<std::filesystem::path> corpus;
  std::optional<std::filesystem::path> predictions;
  std::optional<std::filesystem::path> lexicon;
  std::optional<std::filesystem::path> model;
  std::optional<std::filesystem::path> series;
  /// Built-in cross-table replacing corpus-based inference ("appendix_b").
  std::string fixture;
  std::map<std::size_t, std::string> topic_labels;

  std::uint64_t seed = 1;
  std::filesystem::path out = "out";
  std::vector<report::TableFormat> formats = {report::TableFormat::csv,
                                              report::TableFormat::markdown,
                                              report::TableFormat::html};
  FilterOptions filter;
  TopicSettings topics;
  int window_span = 3;
  WindowAlignment alignment = WindowAlignment::trailing;
  SkewnessOptions skewness;
  TrendOptions trends;
  MissingPredictions missing = MissingPredictions::error;
  report::ElectionCalendar elections;
  std::optional<nlohmann::json> synth;
};

namespace detail {

template <class T>
T config_value(const nlohmann::json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw UsageError(std::string("config: invalid value for '") + key + "'");
  }
}

inline const nlohmann::json& config_section(const nlohmann::json& root, const char* key) {
  static const nlohmann::json empty = nlohmann::json::object();
  auto it = root.find(key);
  if (it == root.end() || it->is_null()) return empty;
  if (!it->is_object()) throw UsageError(std::string("config: '") + key + "' must be an object");
  return *it;
}

}  // namespace detail

/// Interprets a parsed config document. base_dir anchors relative paths.
inline RunConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  using detail::config_section;
  using detail::config_value;
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  RunConfig c;
  c.snapshot = j;

  auto path_of = [&](const char* key) -> std::optional<std::filesystem::path> {
    auto s = config_value<std::string>(j, key, "");
    if (s.empty()) return std::nullopt;
    std::filesystem::path p(s);
    return p.is_absolute() ? p : base_dir / p;
  };
  c.corpus = path_of("corpus");
  c.predictions = path_of("predictions");
  c.lexicon = path_of("lexicon");
  c.model = path_of("model");
  c.series = path_of("series");
  if (auto o = path_of("out")) c.out = *o;
  else c.out = base_dir / "out";

  c.fixture = config_value<std::string>(j, "fixture", "");
  if (!c.fixture.empty() && c.fixture != "appendix_b")
    throw UsageError("config: unknown fixture '" + c.fixture + "'");

  if (auto it = j.find("topic_labels"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw UsageError("config: 'topic_labels' must map indices to names");
    for (const auto& [k, v] : it->items()) {
      std::size_t idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoul(k, &used);
        if (used != k.size()) throw std::invalid_argument(k);
      } catch (const std::exception&) {
        throw UsageError("config: topic label key '" + k + "' is not an index");
      }
      if (!v.is_string()) throw UsageError("config: topic label " + k + " must be a string");
      c.topic_labels[idx] = v.get<std::string>();
    }
  }

  c.seed = config_value<std::uint64_t>(j, "seed", c.seed);

  if (auto it = j.find("formats"); it != j.end() && !it->is_null()) {
    c.formats.clear();
    for (const auto& f : *it) {
      auto parsed = f.is_string() ? report::parse_table_format(f.get<std::string>()) : std::nullopt;
      if (!parsed) throw UsageError("config: unknown output format " + f.dump());
      c.formats.push_back(*parsed);
    }
  }

  const auto& filter = config_section(j, "filter");
  c.filter.min_sentences = config_value(filter, "min_sentences", c.filter.min_sentences);
  if (auto it = filter.find("excluded_roles"); it != filter.end()) {
    c.filter.excluded_roles.clear();
    for (const auto& r : *it) {
      auto role = r.is_string() ? parse_role(r.get<std::string>()) : std::nullopt;
      if (!role) throw UsageError("config: unknown speaker role " + r.dump());
      c.filter.excluded_roles.insert(*role);
    }
  }

  const auto& topics = config_section(j, "topics");
  auto& t = c.topics;
  t.lda.topics = config_value(topics, "k", t.lda.topics);
  t.lda.alpha = config_value(topics, "alpha", t.lda.alpha);
  t.lda.beta = config_value(topics, "beta", t.lda.beta);
  t.lda.iterations = config_value(topics, "iterations", t.lda.iterations);
  t.min_count = config_value(topics, "min_count", t.min_count);
  t.stopwords = config_value(topics, "stopwords", t.stopwords);
  t.inference.iterations = config_value(topics, "fold_in_iterations", t.inference.iterations);
  t.inference.burn_in = config_value(topics, "burn_in", t.inference.burn_in);
  t.inference.token_cap = config_value(topics, "token_cap", t.inference.token_cap);
  t.threads = config_value(topics, "threads", t.threads);

  const auto& windows = config_section(j, "windows");
  c.window_span = config_value(windows, "span", c.window_span);
  if (c.window_span < 1) throw UsageError("config: window span must be >= 1");
  auto align = config_value<std::string>(windows, "alignment", "trailing");
  if (align == "trailing") c.alignment = WindowAlignment::trailing;
  else if (align == "centered") c.alignment = WindowAlignment::centered;
  else throw UsageError("config: unknown window alignment '" + align + "'");

  const auto& skew = config_section(j, "skewness");
  c.skewness.threshold = config_value(skew, "threshold", c.skewness.threshold);
  if (auto it = skew.find("decimals"); it != skew.end()) {
    if (it->is_null()) c.skewness.decimals.reset();
    else c.skewness.decimals = config_value(skew, "decimals", 2);
  }
  c.skewness.exclude_posi = config_value(skew, "exclude_posi", c.skewness.exclude_posi);

  const auto& trends = config_section(j, "trends");
  c.trends.r2_min = config_value(trends, "r2_min", c.trends.r2_min);
  c.trends.alpha = config_value(trends, "alpha", c.trends.alpha);
  c.trends.min_points = config_value(trends, "min_points", c.trends.min_points);

  if (auto it = j.find("elections"); it != j.end() && !it->is_null()) {
    for (const auto& d : *it) {
      auto date = d.is_string() ? parse_date(d.get<std::string>()) : std::nullopt;
      if (!date) throw UsageError("config: invalid election date " + d.dump());
      c.elections.dates.push_back(*date);
    }
  }

  const auto& was = config_section(j, "was");
  auto missing = config_value<std::string>(was, "missing", "error");
  if (missing == "error") c.missing = MissingPredictions::error;
  else if (missing == "skip") c.missing = MissingPredictions::skip;
  else throw UsageError("config: unknown missing-prediction policy '" + missing + "'");

  if (auto it = j.find("synth"); it != j.end() && !it->is_null()) c.synth = *it;
  return c;
}

/// Reads a config file; a missing file is a usage error, bad JSON likewise.
inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path.string());
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw UsageError("config " + path.string() + " is not valid JSON");
  auto base = path.parent_path();
  if (base.empty()) base = ".";
  auto c = config_from_json(j, base);
  c.source = path;
  return c;
}

}  // namespace topiclandscape
