#pragma once

// Topic x emotion cross-table: emotion subcorpora, per-column topic
// inference, proportional differences from per-topic averages and the
// five-way skewness grouping.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.hpp"
#include "detail/rng.hpp"
#include "detail/text.hpp"
#include "emotion.hpp"
#include "error.hpp"
#include "topic_model.hpp"

namespace topiclandscape {

struct EmotionSubcorpus {
  EmotionLabel label = EmotionLabel::NEUT;
  TokenList tokens;
  std::size_t sentences = 0;
};

struct SubcorpusSet {
  PerLabel<EmotionSubcorpus> by_label;
  std::size_t annotated = 0;
  /// Corpus sentences without a prediction; they belong to no subcorpus.
  std::size_t unlabeled = 0;

  [[nodiscard]] const EmotionSubcorpus& operator[](EmotionLabel l) const {
    return by_label[label_index(l)];
  }
};

/// Concatenates the tokens of all sentences sharing a predicted label.
inline SubcorpusSet build_subcorpora(const Corpus& corpus, const AnnotationSet& annotations) {
  SubcorpusSet set;
  for (auto l : kAllLabels) set.by_label[label_index(l)].label = l;
  for (const auto& [key, p] : annotations) {
    const Speech* sp = corpus.find(key.speech_id);
    if (sp == nullptr || key.index >= sp->sentences.size())
      throw DataError("annotation references unknown sentence (" + key.speech_id + ", " +
                      std::to_string(key.index) + ")");
  }
  for (const auto& sp : corpus.speeches()) {
    for (const auto& s : sp.sentences) {
      const SentencePrediction* p = annotations.find(sp.id, s.index);
      if (p == nullptr) {
        ++set.unlabeled;
        continue;
      }
      auto& sub = set.by_label[label_index(p->label)];
      auto toks = sentence_tokens(s);
      sub.tokens.insert(sub.tokens.end(), std::make_move_iterator(toks.begin()),
                        std::make_move_iterator(toks.end()));
      ++sub.sentences;
      ++set.annotated;
    }
  }
  return set;
}

/// Topics as rows, the nine labels as columns.
struct CrossTable {
  std::vector<std::string> topic_labels;
  std::vector<PerLabel<double>> prevalence;
  /// Columns that fell back to the prior (empty subcorpus).
  PerLabel<bool> low_support{};

  [[nodiscard]] std::size_t topics() const { return prevalence.size(); }
  [[nodiscard]] double at(std::size_t topic, EmotionLabel l) const {
    return prevalence.at(topic)[label_index(l)];
  }
};

/// Seed for one cross-table column, so identical subcorpora get identical
/// columns.
inline std::uint64_t column_seed(std::uint64_t base, EmotionLabel l) {
  return detail::derive_seed(base, {0x5c01u, label_index(l)});
}

/// Infers a topic distribution for each emotion subcorpus. options.seed is
/// the base seed; each column derives its own.
inline CrossTable topic_prevalences(const LdaModel& model, const SubcorpusSet& subcorpora,
                                    const TopicLabelMap& labels, InferenceOptions options,
                                    Warnings* warnings = nullptr) {
  bool any = false;
  for (const auto& sub : subcorpora.by_label) any = any || sub.sentences > 0;
  if (!any) throw DataError("all emotion subcorpora are empty");

  CrossTable table;
  const std::size_t K = model.topics();
  table.prevalence.assign(K, PerLabel<double>{});
  for (std::size_t k = 0; k < K; ++k) table.topic_labels.push_back(labels.label(k));
  const std::uint64_t base = options.seed;
  for (auto l : kAllLabels) {
    const auto& sub = subcorpora[l];
    options.seed = column_seed(base, l);
    auto dist = infer_topics(model, std::span<const std::string>(sub.tokens), options);
    if (dist.prior_only) {
      table.low_support[label_index(l)] = true;
      warn(warnings, std::string("subcorpus ") + std::string(label_code(l)) +
                         " is empty; column set to the prior");
    }
    for (std::size_t k = 0; k < K; ++k) table.prevalence[k][label_index(l)] = dist.shares[k];
  }
  return table;
}

/// Unweighted mean of each topic's nine prevalences.
inline std::vector<double> topic_averages(const CrossTable& table) {
  std::vector<double> avg;
  avg.reserve(table.topics());
  for (const auto& row : table.prevalence) {
    double sum = 0.0;
    for (double v : row) sum += v;
    avg.push_back(sum / static_cast<double>(kLabelCount));
  }
  return avg;
}

struct RelativeDifferenceTable {
  std::vector<std::string> topic_labels;
  /// (prevalence - average) / average
  std::vector<PerLabel<double>> rows;
  std::vector<double> averages;
  /// Topics dropped for a zero average.
  std::vector<std::string> excluded;

  [[nodiscard]] std::size_t topics() const { return rows.size(); }
  [[nodiscard]] double at(std::size_t topic, EmotionLabel l) const {
    return rows.at(topic)[label_index(l)];
  }
  [[nodiscard]] std::optional<std::size_t> find(std::string_view label) const {
    for (std::size_t i = 0; i < topic_labels.size(); ++i)
      if (topic_labels[i] == label) return i;
    return std::nullopt;
  }
};

inline RelativeDifferenceTable relative_differences(const CrossTable& table,
                                                    Warnings* warnings = nullptr) {
  RelativeDifferenceTable out;
  const auto averages = topic_averages(table);
  for (std::size_t t = 0; t < table.topics(); ++t) {
    if (!(averages[t] > 0.0)) {
      out.excluded.push_back(table.topic_labels[t]);
      warn(warnings, "topic '" + table.topic_labels[t] + "' has zero average prevalence; excluded");
      continue;
    }
    PerLabel<double> row{};
    for (std::size_t e = 0; e < kLabelCount; ++e)
      row[e] = (table.prevalence[t][e] - averages[t]) / averages[t];
    out.topic_labels.push_back(table.topic_labels[t]);
    out.rows.push_back(row);
    out.averages.push_back(averages[t]);
  }
  return out;
}

/// Heat-map highlighting: the value shown at 2 decimals exceeds +0.5.
inline bool is_bold(double relative_difference) {
  return detail::round_to(relative_difference, 2) > 0.5;
}

enum class SkewnessGroup {
  polarized,
  negatively_skewed,
  neutrally_skewed,
  positively_skewed,
  average_posi_subgroup,
  average,
};

inline std::string_view group_name(SkewnessGroup g) {
  switch (g) {
    case SkewnessGroup::polarized: return "polarized";
    case SkewnessGroup::negatively_skewed: return "negatively skewed";
    case SkewnessGroup::neutrally_skewed: return "neutrally skewed";
    case SkewnessGroup::positively_skewed: return "positively skewed";
    case SkewnessGroup::average_posi_subgroup: return "average (POSI)";
    case SkewnessGroup::average: return "average";
  }
  return "average";
}

inline std::optional<SkewnessGroup> parse_group_name(std::string_view s) {
  for (auto g : {SkewnessGroup::polarized, SkewnessGroup::negatively_skewed,
                 SkewnessGroup::neutrally_skewed, SkewnessGroup::positively_skewed,
                 SkewnessGroup::average_posi_subgroup, SkewnessGroup::average})
    if (group_name(g) == s) return g;
  return std::nullopt;
}

struct SkewnessOptions {
  double threshold = 0.5;
  /// Rounding applied before thresholding; nullopt compares raw values.
  std::optional<int> decimals = 2;
  bool exclude_posi = true;
};

namespace detail {

inline PerLabel<double> rounded_row(const PerLabel<double>& row, const SkewnessOptions& o) {
  PerLabel<double> r = row;
  if (o.decimals)
    for (auto& v : r) v = round_to(v, *o.decimals);
  return r;
}

}  // namespace detail

/// Groups a topic by which label families reach the overrepresentation
/// threshold. When NEUT and a polar family both qualify, the single largest
/// qualifying value decides; ties go to NEUT, and a positive/negative tie
/// without NEUT at the top is polarized.
inline SkewnessGroup classify_skewness(const PerLabel<double>& row,
                                       const SkewnessOptions& options = {}) {
  const auto r = detail::rounded_row(row, options);
  auto counts = [&](EmotionLabel l) {
    return !(options.exclude_posi && l == EmotionLabel::POSI) && r[label_index(l)] >= options.threshold;
  };
  bool over_pos = false, over_neg = false;
  double max_pos = -1e300, max_neg = -1e300;
  for (auto l : kAllLabels) {
    if (!counts(l)) continue;
    double v = r[label_index(l)];
    if (polarity(l) > 0) {
      over_pos = true;
      max_pos = std::max(max_pos, v);
    } else if (polarity(l) < 0) {
      over_neg = true;
      max_neg = std::max(max_neg, v);
    }
  }
  const double neut = r[label_index(EmotionLabel::NEUT)];
  const bool over_neut = neut >= options.threshold;

  if (!over_neut) {
    if (over_pos && over_neg) return SkewnessGroup::polarized;
    if (over_neg) return SkewnessGroup::negatively_skewed;
    if (over_pos) return SkewnessGroup::positively_skewed;
    if (options.exclude_posi && r[label_index(EmotionLabel::POSI)] >= options.threshold)
      return SkewnessGroup::average_posi_subgroup;
    return SkewnessGroup::average;
  }
  if (!over_pos && !over_neg) return SkewnessGroup::neutrally_skewed;
  if (neut >= max_pos && neut >= max_neg) return SkewnessGroup::neutrally_skewed;
  if (max_pos > max_neg) return SkewnessGroup::positively_skewed;
  if (max_neg > max_pos) return SkewnessGroup::negatively_skewed;
  return SkewnessGroup::polarized;
}

/// Labels at or below -threshold (reported, never used for grouping).
inline std::vector<EmotionLabel> underrepresented(const PerLabel<double>& row,
                                                  const SkewnessOptions& options = {}) {
  const auto r = detail::rounded_row(row, options);
  std::vector<EmotionLabel> out;
  for (auto l : kAllLabels)
    if (r[label_index(l)] <= -options.threshold) out.push_back(l);
  return out;
}

inline std::vector<SkewnessGroup> classify_all(const RelativeDifferenceTable& table,
                                               const SkewnessOptions& options = {}) {
  std::vector<SkewnessGroup> groups;
  groups.reserve(table.topics());
  for (const auto& row : table.rows) groups.push_back(classify_skewness(row, options));
  return groups;
}

}  // namespace topiclandscape
