#pragma once

// Time-indexed analytics over monthly rolling windows: weighted average
// sentiment, emotion shares, per-window topic-emotion series and OLS trend
// detection.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "corpus.hpp"
#include "detail/rng.hpp"
#include "emotion.hpp"
#include "error.hpp"
#include "stats.hpp"
#include "topic_model.hpp"

namespace topiclandscape {

struct YearMonth {
  int year = 2000;
  unsigned month = 1;

  [[nodiscard]] int ordinal() const { return year * 12 + static_cast<int>(month) - 1; }
  static YearMonth from_ordinal(int ord) {
    return {ord / 12, static_cast<unsigned>(ord % 12) + 1};
  }
  static YearMonth of(const Date& d) {
    return {static_cast<int>(d.year()), static_cast<unsigned>(d.month())};
  }
  [[nodiscard]] std::string str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u", year, month);
    return buf;
  }
  auto operator<=>(const YearMonth& o) const { return ordinal() <=> o.ordinal(); }
  bool operator==(const YearMonth& o) const { return ordinal() == o.ordinal(); }
};

/// Parses "YYYY-MM".
inline std::optional<YearMonth> parse_year_month(std::string_view s) {
  if (s.size() != 7 || s[4] != '-') return std::nullopt;
  auto d = parse_date(std::string(s) + "-01");
  if (!d) return std::nullopt;
  return YearMonth::of(*d);
}

enum class WindowAlignment { trailing, centered };

/// span consecutive calendar months around an anchor month. Trailing windows
/// end at the anchor; centered windows put it in the middle.
struct TimeWindow {
  YearMonth anchor;
  YearMonth first;
  YearMonth last;

  [[nodiscard]] bool contains(const YearMonth& m) const { return first <= m && m <= last; }
  bool operator==(const TimeWindow&) const = default;
};

inline TimeWindow make_window(YearMonth anchor, int span = 3,
                              WindowAlignment align = WindowAlignment::trailing) {
  if (span < 1) throw UsageError("window span must be >= 1");
  const int a = anchor.ordinal();
  const int first = align == WindowAlignment::trailing ? a - (span - 1) : a - (span - 1) / 2;
  return {anchor, YearMonth::from_ordinal(first), YearMonth::from_ordinal(first + span - 1)};
}

/// One window per month between two anchors inclusive, advancing by one
/// month.
inline std::vector<TimeWindow> monthly_windows(YearMonth from, YearMonth to, int span = 3,
                                               WindowAlignment align = WindowAlignment::trailing) {
  std::vector<TimeWindow> out;
  for (int m = from.ordinal(); m <= to.ordinal(); ++m)
    out.push_back(make_window(YearMonth::from_ordinal(m), span, align));
  return out;
}

/// Windows anchored on every month from the corpus's first to last month.
inline std::vector<TimeWindow> corpus_windows(const Corpus& corpus, int span = 3,
                                              WindowAlignment align = WindowAlignment::trailing) {
  if (corpus.empty()) return {};
  auto [lo, hi] = std::minmax_element(
      corpus.speeches().begin(), corpus.speeches().end(),
      [](const Speech& a, const Speech& b) { return a.date < b.date; });
  return monthly_windows(YearMonth::of(lo->date), YearMonth::of(hi->date), span, align);
}

enum class MissingPredictions { error, skip };

/// Sum over sentences of polarity(label) * probability, divided by
/// the sentence count. In skip mode uncovered sentences are left out of
/// both sums. Returns nullopt only when skip mode leaves no sentence.
inline std::optional<double> speech_was(const Speech& speech, const AnnotationSet& annotations,
                                        MissingPredictions policy = MissingPredictions::error,
                                        Warnings* warnings = nullptr) {
  if (speech.sentences.empty()) throw DataError("speech '" + speech.id + "' has no sentences");
  double sum = 0.0;
  std::size_t covered = 0;
  for (const auto& s : speech.sentences) {
    const SentencePrediction* p = annotations.find(speech.id, s.index);
    if (p == nullptr) {
      if (policy == MissingPredictions::error)
        throw DataError("speech '" + speech.id + "' sentence " + std::to_string(s.index) +
                        " has no prediction");
      continue;
    }
    sum += polarity(p->label) * p->probability;
    ++covered;
  }
  if (covered < speech.sentences.size())
    warn(warnings, "speech '" + speech.id + "': " +
                       std::to_string(speech.sentences.size() - covered) +
                       " sentences without predictions skipped");
  if (covered == 0) return std::nullopt;
  return sum / static_cast<double>(covered);
}

struct WasPoint {
  TimeWindow window;
  double was = 0.0;
  std::size_t n_speeches = 0;
};

struct YearlyWas {
  int year = 0;
  double was = 0.0;
  std::size_t n_speeches = 0;
};

namespace detail {

struct SpeechWas {
  int month;
  double was;
};

inline std::vector<SpeechWas> all_speech_was(const Corpus& corpus, const AnnotationSet& ann,
                                             MissingPredictions policy, Warnings* warnings) {
  std::vector<SpeechWas> out;
  out.reserve(corpus.size());
  for (const auto& sp : corpus.speeches())
    if (auto w = speech_was(sp, ann, policy, warnings))
      out.push_back({YearMonth::of(sp.date).ordinal(), *w});
  return out;
}

}  // namespace detail

/// Unweighted mean of speech WAS per window; windows without speeches are
/// omitted.
inline std::vector<WasPoint> rolling_was(const Corpus& corpus, const AnnotationSet& annotations,
                                         const std::vector<TimeWindow>& windows,
                                         MissingPredictions policy = MissingPredictions::error,
                                         Warnings* warnings = nullptr) {
  std::map<int, std::pair<double, std::size_t>> by_month;
  for (const auto& s : detail::all_speech_was(corpus, annotations, policy, warnings)) {
    auto& [sum, n] = by_month[s.month];
    sum += s.was;
    ++n;
  }
  std::vector<WasPoint> out;
  for (const auto& w : windows) {
    double sum = 0.0;
    std::size_t n = 0;
    for (auto it = by_month.lower_bound(w.first.ordinal());
         it != by_month.end() && it->first <= w.last.ordinal(); ++it) {
      sum += it->second.first;
      n += it->second.second;
    }
    if (n > 0) out.push_back({w, sum / static_cast<double>(n), n});
  }
  return out;
}

inline std::vector<YearlyWas> yearly_was(const Corpus& corpus, const AnnotationSet& annotations,
                                         MissingPredictions policy = MissingPredictions::error,
                                         Warnings* warnings = nullptr) {
  std::map<int, std::pair<double, std::size_t>> by_year;
  for (const auto& s : detail::all_speech_was(corpus, annotations, policy, warnings)) {
    auto& [sum, n] = by_year[YearMonth::from_ordinal(s.month).year];
    sum += s.was;
    ++n;
  }
  std::vector<YearlyWas> out;
  for (const auto& [year, acc] : by_year)
    out.push_back({year, acc.first / static_cast<double>(acc.second), acc.second});
  return out;
}

struct EmotionSharePoint {
  TimeWindow window;
  EmotionLabel label = EmotionLabel::NEUT;
  double share = 0.0;
};

/// Per window: summed certainty of each label over summed certainty of all
/// sentences. Emits nine points per nonempty window.
inline std::vector<EmotionSharePoint> rolling_emotion_shares(
    const Corpus& corpus, const AnnotationSet& annotations,
    const std::vector<TimeWindow>& windows) {
  std::map<int, PerLabel<double>> by_month;
  for (const auto& [key, p] : annotations) {
    const Speech* sp = corpus.find(key.speech_id);
    if (sp == nullptr) continue;
    by_month[YearMonth::of(sp->date).ordinal()][label_index(p.label)] += p.probability;
  }
  std::vector<EmotionSharePoint> out;
  for (const auto& w : windows) {
    PerLabel<double> acc{};
    for (auto it = by_month.lower_bound(w.first.ordinal());
         it != by_month.end() && it->first <= w.last.ordinal(); ++it)
      for (std::size_t e = 0; e < kLabelCount; ++e) acc[e] += it->second[e];
    double total = 0.0;
    for (double v : acc) total += v;
    if (!(total > 0.0)) continue;
    for (auto l : kAllLabels) out.push_back({w, l, acc[label_index(l)] / total});
  }
  return out;
}

struct SeriesPoint {
  TimeWindow window;
  /// nullopt marks a gap (no sentences in the cell).
  std::optional<double> value;
};

struct TopicEmotionSeries {
  std::size_t topic = 0;
  std::string topic_label;
  EmotionLabel label = EmotionLabel::NEUT;
  std::vector<SeriesPoint> points;
};

struct SeriesOptions {
  InferenceOptions inference;
  /// 0 picks the hardware concurrency.
  std::size_t threads = 0;
};

inline std::uint64_t cell_seed(std::uint64_t base, const TimeWindow& w, EmotionLabel l) {
  return detail::derive_seed(base, {0xce11u, static_cast<std::uint64_t>(w.anchor.ordinal()),
                                    label_index(l)});
}

/// For every (window, label) cell, the cell's sentences form one document
/// whose inferred topic distribution gives K prevalences. Returns K x 9
/// series ordered by topic, then label. Cells without in-vocabulary tokens
/// are gaps.
inline std::vector<TopicEmotionSeries> topic_emotion_series(
    const LdaModel& model, const Corpus& corpus, const AnnotationSet& annotations,
    const std::vector<TimeWindow>& windows, const TopicLabelMap& labels,
    const SeriesOptions& options = {}) {
  const std::size_t K = model.topics();
  const auto& vocab = model.vocabulary();

  // encoded tokens per (month, label)
  std::map<int, PerLabel<std::vector<WordId>>> by_month;
  for (const auto& sp : corpus.speeches()) {
    const int m = YearMonth::of(sp.date).ordinal();
    for (const auto& s : sp.sentences) {
      const SentencePrediction* p = annotations.find(sp.id, s.index);
      if (p == nullptr) continue;
      auto ids = vocab.encode(sentence_tokens(s));
      auto& cell = by_month[m][label_index(p->label)];
      cell.insert(cell.end(), ids.begin(), ids.end());
    }
  }

  const std::size_t cells = windows.size() * kLabelCount;
  std::vector<std::optional<std::vector<double>>> results(cells);
  auto run_cell = [&](std::size_t c) {
    const auto& w = windows[c / kLabelCount];
    const auto l = kAllLabels[c % kLabelCount];
    std::vector<WordId> doc;
    for (auto it = by_month.lower_bound(w.first.ordinal());
         it != by_month.end() && it->first <= w.last.ordinal(); ++it) {
      const auto& part = it->second[label_index(l)];
      doc.insert(doc.end(), part.begin(), part.end());
    }
    if (doc.empty()) return;
    InferenceOptions io = options.inference;
    io.seed = cell_seed(options.inference.seed, w, l);
    results[c] = infer_topics(model, std::span<const WordId>(doc), io).shares;
  };

  std::size_t threads = options.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(cells, 1));
  if (threads <= 1) {
    for (std::size_t c = 0; c < cells; ++c) run_cell(c);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t c = t; c < cells; c += threads) run_cell(c);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<TopicEmotionSeries> out;
  for (std::size_t k = 0; k < K; ++k) {
    for (auto l : kAllLabels) {
      TopicEmotionSeries series{k, labels.label(k), l, {}};
      series.points.reserve(windows.size());
      for (std::size_t wi = 0; wi < windows.size(); ++wi) {
        const auto& cell = results[wi * kLabelCount + label_index(l)];
        series.points.push_back(
            {windows[wi], cell ? std::optional<double>((*cell)[k]) : std::nullopt});
      }
      out.push_back(std::move(series));
    }
  }
  return out;
}

struct TrendOptions {
  double r2_min = 0.3;
  double alpha = 0.05;
  std::size_t min_points = 12;
};

struct TrendResult {
  std::size_t topic = 0;
  std::string topic_label;
  EmotionLabel label = EmotionLabel::NEUT;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double p_value = 1.0;
  bool meaningful = false;
  std::size_t n_points = 0;
  bool insufficient_data = false;
};

/// OLS of prevalence on window index (months since the first window; gaps
/// excluded). Meaningful means r^2 > r2_min and p < alpha.
inline TrendResult detect_trend(const TopicEmotionSeries& series, const TrendOptions& options = {}) {
  TrendResult r;
  r.topic = series.topic;
  r.topic_label = series.topic_label;
  r.label = series.label;
  std::vector<double> xs, ys;
  if (!series.points.empty()) {
    const int origin = series.points.front().window.anchor.ordinal();
    for (const auto& p : series.points) {
      if (!p.value) continue;
      xs.push_back(static_cast<double>(p.window.anchor.ordinal() - origin));
      ys.push_back(*p.value);
    }
  }
  r.n_points = xs.size();
  if (xs.size() < std::max<std::size_t>(options.min_points, 3)) {
    r.insufficient_data = true;
    return r;
  }
  auto fit = stats::ols_fit(xs, ys);
  r.slope = fit.slope;
  r.intercept = fit.intercept;
  r.r_squared = fit.r_squared;
  r.p_value = fit.p_value;
  r.meaningful = fit.r_squared > options.r2_min && fit.p_value < options.alpha;
  return r;
}

inline std::vector<TrendResult> detect_trends(const std::vector<TopicEmotionSeries>& series,
                                              const TrendOptions& options = {}) {
  std::vector<TrendResult> out;
  out.reserve(series.size());
  for (const auto& s : series) out.push_back(detect_trend(s, options));
  return out;
}

}  // namespace topiclandscape
