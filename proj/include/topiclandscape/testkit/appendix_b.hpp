#pragma once

// Reference topic-by-emotion prevalences (26 topics, 9 emotion
// subcorpora), their proportional-difference heat map and topic grouping,
// transcribed as constants. Nothing here is recomputed.

#include <array>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "../emotion.hpp"
#include "../synchronic.hpp"
#include "../topic_model.hpp"

namespace topiclandscape::testkit {

struct AppendixBRow {
  std::string_view topic;
  /// Prevalence per emotion subcorpus, in kAllLabels order.
  PerLabel<double> prevalence;
  /// Transcribed average column (5 decimals).
  double average;
  /// Reference relative differences (2 decimals), kAllLabels order.
  PerLabel<double> relative_difference;
  SkewnessGroup group;
};

class AppendixBFixture {
 public:
  static constexpr std::size_t kTopics = 26;

  // Rows in the reference row order; columns reordered from
  // the source HATE..POSI layout to JOY-, HOPE, LOVE, POSI, SADN, FEAR,
  // HATE, NEGA, NEUT.
  static constexpr std::array<AppendixBRow, kTopics> kRows = {{
      {"Commerce", {0.01032, 0.0163, 0.00498, 0.01242, 0.01136, 0.01622, 0.01439, 0.00669, 0.01368}, 0.01182, {-0.13, 0.38, -0.58, 0.05, -0.04, 0.37, 0.22, -0.43, 0.16}, SkewnessGroup::average},
      {"Social benefits", {0.02925, 0.05126, 0.02167, 0.04597, 0.04944, 0.04896, 0.01869, 0.01518, 0.03038}, 0.03453, {-0.15, 0.48, -0.37, 0.33, 0.43, 0.42, -0.46, -0.56, -0.12}, SkewnessGroup::average},
      {"Energy", {0.01307, 0.03941, 0.0099, 0.01175, 0.01227, 0.03356, 0.01588, 0.01181, 0.01376}, 0.01793, {-0.27, 1.20, -0.45, -0.34, -0.32, 0.87, -0.11, -0.34, -0.23}, SkewnessGroup::polarized},
      {"Regionality", {0.01018, 0.01046, 0.00735, 0.01553, 0.00988, 0.01005, 0.00689, 0.00677, 0.00752}, 0.00940, {0.08, 0.11, -0.22, 0.65, 0.05, 0.07, -0.27, -0.28, -0.20}, SkewnessGroup::average_posi_subgroup},
      {"Education", {0.0217, 0.0221, 0.01625, 0.03537, 0.01555, 0.01255, 0.01067, 0.00947, 0.0184}, 0.01801, {0.21, 0.23, -0.10, 0.96, -0.14, -0.30, -0.41, -0.47, 0.02}, SkewnessGroup::average_posi_subgroup},
      {"Pensions", {0.0115, 0.00849, 0.02104, 0.00666, 0.01435, 0.01448, 0.01188, 0.00822, 0.02674}, 0.01371, {-0.16, -0.38, 0.54, -0.51, 0.05, 0.06, -0.13, -0.40, 0.95}, SkewnessGroup::neutrally_skewed},
      {"Crime", {0.01189, 0.00941, 0.01367, 0.00789, 0.02257, 0.01728, 0.01586, 0.01108, 0.02596}, 0.01507, {-0.21, -0.38, -0.09, -0.48, 0.50, 0.15, 0.05, -0.26, 0.72}, SkewnessGroup::neutrally_skewed},
      {"Employment", {0.02384, 0.03583, 0.01349, 0.00048, 0.03262, 0.0361, 0.02238, 0.01708, 0.01934}, 0.02235, {0.07, 0.60, -0.40, -0.98, 0.46, 0.62, 0.00, -0.24, -0.13}, SkewnessGroup::polarized},
      {"Legislation", {0.04961, 0.04936, 0.06456, 0.04845, 0.06934, 0.06834, 0.07341, 0.06341, 0.17301}, 0.07328, {-0.32, -0.33, -0.12, -0.34, -0.05, -0.07, 0.00, -0.13, 1.36}, SkewnessGroup::neutrally_skewed},
      {"Traffic and transport", {0.01018, 0.0102, 0.00721, 0.00388, 0.0099, 0.00866, 0.00629, 0.00492, 0.01878}, 0.00889, {0.14, 0.15, -0.19, -0.56, 0.11, -0.03, -0.29, -0.45, 1.11}, SkewnessGroup::neutrally_skewed},
      {"Question time", {0.00424, 0.00159, 0.00729, 0.0021, 0.00284, 0.00212, 0.00348, 0.00426, 0.0083}, 0.00402, {0.05, -0.60, 0.81, -0.48, -0.29, -0.47, -0.14, 0.06, 1.06}, SkewnessGroup::neutrally_skewed},
      {"Administration", {0.05317, 0.0459, 0.05352, 0.07704, 0.05112, 0.04714, 0.0504, 0.04954, 0.06556}, 0.05482, {-0.03, -0.16, -0.02, 0.41, -0.07, -0.14, -0.08, -0.10, 0.20}, SkewnessGroup::average},
      {"Public sector", {0.24064, 0.32037, 0.15286, 0.04972, 0.16549, 0.22017, 0.10974, 0.092, 0.16327}, 0.16825, {0.43, 0.90, -0.09, -0.70, -0.02, 0.31, -0.35, -0.45, -0.03}, SkewnessGroup::positively_skewed},
      {"Foreign and security policy", {0.03796, 0.04234, 0.02961, 0.02242, 0.01955, 0.02648, 0.02038, 0.01733, 0.03176}, 0.02754, {0.38, 0.54, 0.08, -0.19, -0.29, -0.04, -0.26, -0.37, 0.15}, SkewnessGroup::positively_skewed},
      {"Parliamentary factions", {0.06553, 0.03814, 0.07898, 0.05912, 0.0989, 0.0517, 0.11898, 0.15614, 0.02831}, 0.07731, {-0.15, -0.51, 0.02, -0.24, 0.28, -0.33, 0.54, 1.02, -0.63}, SkewnessGroup::negatively_skewed},
      {"Voting", {0.00313, 0.00189, 0.00466, 0.00507, 0.00319, 0.00202, 0.003, 0.00357, 0.00477}, 0.00348, {-0.10, -0.46, 0.34, 0.46, -0.08, -0.42, -0.14, 0.03, 0.37}, SkewnessGroup::average},
      {"Law proposals", {0.00395, 0.00259, 0.00434, 0.00027, 0.00372, 0.00321, 0.00765, 0.00717, 0.03198}, 0.00721, {-0.45, -0.64, -0.40, -0.96, -0.48, -0.55, 0.06, -0.01, 3.44}, SkewnessGroup::neutrally_skewed},
      {"Democracy", {0.03193, 0.02481, 0.04251, 0.01776, 0.02587, 0.02016, 0.03946, 0.03601, 0.04099}, 0.03106, {0.03, -0.20, 0.37, -0.43, -0.17, -0.35, 0.27, 0.16, 0.32}, SkewnessGroup::average},
      {"Development cooperation", {0.01733, 0.0101, 0.01478, 0.0161, 0.00736, 0.00666, 0.007, 0.00578, 0.0106}, 0.01063, {0.63, -0.05, 0.39, 0.51, -0.31, -0.37, -0.34, -0.46, 0.00}, SkewnessGroup::positively_skewed},
      {"Agriculture", {0.00627, 0.00871, 0.00519, 0.00244, 0.00714, 0.00779, 0.00458, 0.00387, 0.00568}, 0.00574, {0.09, 0.52, -0.10, -0.57, 0.24, 0.36, -0.20, -0.33, -0.01}, SkewnessGroup::positively_skewed},
      {"Social and health care", {0.00998, 0.01258, 0.01006, 0.00549, 0.0131, 0.01264, 0.01252, 0.00834, 0.02111}, 0.01176, {-0.15, 0.07, -0.14, -0.53, 0.11, 0.08, 0.06, -0.29, 0.80}, SkewnessGroup::neutrally_skewed},
      {"Taxation", {0.01202, 0.01369, 0.00684, 0.00803, 0.02216, 0.02327, 0.02635, 0.01499, 0.02217}, 0.01661, {-0.28, -0.18, -0.59, -0.52, 0.33, 0.40, 0.59, -0.10, 0.33}, SkewnessGroup::negatively_skewed},
      {"GENERAL", {0.25676, 0.16431, 0.3745, 0.43914, 0.25891, 0.21304, 0.3346, 0.40053, 0.16432}, 0.28957, {-0.11, -0.43, 0.29, 0.52, -0.11, -0.26, 0.16, 0.38, -0.43}, SkewnessGroup::average_posi_subgroup},
      {"Housing", {0.0211, 0.02035, 0.01283, 0.05523, 0.02564, 0.03004, 0.02962, 0.01849, 0.0188}, 0.02579, {-0.18, -0.21, -0.50, 1.14, -0.01, 0.16, 0.15, -0.28, -0.27}, SkewnessGroup::average_posi_subgroup},
      {"Social problems", {0.00889, 0.00752, 0.0104, 0.04012, 0.01267, 0.01309, 0.01207, 0.01045, 0.00899}, 0.01380, {-0.36, -0.46, -0.25, 1.91, -0.08, -0.05, -0.13, -0.24, -0.35}, SkewnessGroup::average_posi_subgroup},
      {"Budget", {0.03556, 0.03231, 0.01151, 0.01152, 0.03505, 0.0543, 0.0238, 0.01689, 0.02583}, 0.02742, {0.30, 0.18, -0.58, -0.58, 0.28, 0.98, -0.13, -0.38, -0.06}, SkewnessGroup::negatively_skewed},  }};

  [[nodiscard]] const std::array<AppendixBRow, kTopics>& rows() const { return kRows; }

  [[nodiscard]] const AppendixBRow& row(std::string_view topic) const {
    for (const auto& r : kRows)
      if (r.topic == topic) return r;
    throw std::out_of_range("no fixture topic '" + std::string(topic) + "'");
  }

  [[nodiscard]] double prevalence(std::string_view topic, EmotionLabel l) const {
    return row(topic).prevalence[label_index(l)];
  }
  [[nodiscard]] double average(std::string_view topic) const { return row(topic).average; }
  [[nodiscard]] double expected_relative_difference(std::string_view topic,
                                                    EmotionLabel l) const {
    return row(topic).relative_difference[label_index(l)];
  }
  [[nodiscard]] SkewnessGroup expected_group(std::string_view topic) const {
    return row(topic).group;
  }

  /// The prevalences as a cross-table (topics in reference order).
  [[nodiscard]] CrossTable cross_table() const {
    CrossTable t;
    for (const auto& r : kRows) {
      t.topic_labels.emplace_back(r.topic);
      t.prevalence.push_back(r.prevalence);
    }
    return t;
  }
};

inline AppendixBFixture appendix_b_fixture() { return {}; }

/// Names of the 26 reference topics, keyed by topic number.
inline TopicLabelMap appendix_a_topic_labels() {
  static const std::array<const char*, 26> names = {
      "Commerce",       "Social benefits",
      "Energy",         "Regionality",
      "Education",      "Pensions",
      "Crime",          "Employment",
      "Legislation",    "Traffic and transport",
      "Question time",  "Administration",
      "Public sector",  "Foreign and security policy",
      "Parliamentary factions", "Voting",
      "Law proposals",  "Democracy",
      "Development cooperation", "Agriculture",
      "Social and health care",  "Taxation",
      "GENERAL",        "Housing",
      "Social problems", "Budget"};
  std::map<std::size_t, std::string> labels;
  for (std::size_t k = 0; k < names.size(); ++k) labels.emplace(k, names[k]);
  return TopicLabelMap(names.size(), std::move(labels));
}

}  // namespace topiclandscape::testkit
