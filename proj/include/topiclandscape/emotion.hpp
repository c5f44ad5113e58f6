#pragma once

// Nine-category emotion taxonomy, per-sentence predictions, a lexicon
// baseline annotator and corpus-level distributions.

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include <nlohmann/json.hpp>

#include "corpus.hpp"
#include "error.hpp"

namespace topiclandscape {

enum class EmotionLabel : std::uint8_t { JOY, HOPE, LOVE, POSI, SADN, FEAR, HATE, NEGA, NEUT };

inline constexpr std::size_t kLabelCount = 9;

/// Fixed label order; also the tie-break order of the lexicon annotator and
/// the column order of every emitted table.
inline constexpr std::array<EmotionLabel, kLabelCount> kAllLabels = {
    EmotionLabel::JOY,  EmotionLabel::HOPE, EmotionLabel::LOVE,
    EmotionLabel::POSI, EmotionLabel::SADN, EmotionLabel::FEAR,
    EmotionLabel::HATE, EmotionLabel::NEGA, EmotionLabel::NEUT};

template <class T>
using PerLabel = std::array<T, kLabelCount>;

inline constexpr std::size_t label_index(EmotionLabel l) { return static_cast<std::size_t>(l); }

/// +1 for the four positive labels, -1 for the four negative ones, 0 for NEUT.
inline constexpr int polarity(EmotionLabel l) {
  switch (l) {
    case EmotionLabel::JOY:
    case EmotionLabel::HOPE:
    case EmotionLabel::LOVE:
    case EmotionLabel::POSI: return 1;
    case EmotionLabel::NEUT: return 0;
    default: return -1;
  }
}

/// Wire codes; JOY keeps its trailing hyphen.
inline constexpr std::string_view label_code(EmotionLabel l) {
  constexpr std::array<std::string_view, kLabelCount> codes = {
      "JOY-", "HOPE", "LOVE", "POSI", "SADN", "FEAR", "HATE", "NEGA", "NEUT"};
  return codes[label_index(l)];
}

inline std::optional<EmotionLabel> parse_label_code(std::string_view code) {
  for (auto l : kAllLabels)
    if (label_code(l) == code) return l;
  return std::nullopt;
}

struct SentenceKey {
  std::string speech_id;
  std::size_t index = 0;

  auto operator<=>(const SentenceKey&) const = default;
};

struct SentencePrediction {
  std::string speech_id;
  std::size_t sentence_index = 0;
  EmotionLabel label = EmotionLabel::NEUT;
  double probability = 1.0;

  bool operator==(const SentencePrediction&) const = default;
};

/// One hard label per sentence, keyed and iterated in (speech id, index)
/// order.
class AnnotationSet {
 public:
  /// Throws DataError on a duplicate key or a probability outside [0, 1].
  void add(SentencePrediction p) {
    if (!(p.probability >= 0.0 && p.probability <= 1.0))
      throw DataError("probability " + std::to_string(p.probability) + " outside [0, 1]");
    SentenceKey key{p.speech_id, p.sentence_index};
    auto [it, inserted] = items_.try_emplace(std::move(key), std::move(p));
    if (!inserted)
      throw DataError("duplicate prediction for (" + it->first.speech_id + ", " +
                      std::to_string(it->first.index) + ")");
  }

  [[nodiscard]] const SentencePrediction* find(std::string_view speech_id,
                                               std::size_t index) const {
    auto it = items_.find(SentenceKey{std::string(speech_id), index});
    return it == items_.end() ? nullptr : &it->second;
  }

  [[nodiscard]] std::size_t size() const { return items_.size(); }
  [[nodiscard]] bool empty() const { return items_.empty(); }
  [[nodiscard]] auto begin() const { return items_.begin(); }
  [[nodiscard]] auto end() const { return items_.end(); }

  bool operator==(const AnnotationSet&) const = default;

 private:
  std::map<SentenceKey, SentencePrediction> items_;
};

struct Coverage {
  std::size_t sentences = 0;
  std::size_t annotated = 0;
  std::size_t unlabeled = 0;
  std::size_t dangling = 0;
};

/// How much of the corpus the annotation set covers.
inline Coverage coverage(const Corpus& corpus, const AnnotationSet& annotations) {
  Coverage c;
  for (const auto& sp : corpus.speeches())
    for (const auto& s : sp.sentences) {
      ++c.sentences;
      if (annotations.find(sp.id, s.index)) ++c.annotated;
      else ++c.unlabeled;
    }
  for (const auto& [key, _] : annotations) {
    const Speech* sp = corpus.find(key.speech_id);
    if (sp == nullptr || key.index >= sp->sentences.size()) ++c.dangling;
  }
  return c;
}

/// Predictions whose sentence exists in the corpus; used after filtering.
inline AnnotationSet restrict_annotations(const AnnotationSet& annotations, const Corpus& corpus) {
  AnnotationSet out;
  for (const auto& [key, p] : annotations) {
    const Speech* sp = corpus.find(key.speech_id);
    if (sp != nullptr && key.index < sp->sentences.size()) out.add(p);
  }
  return out;
}

/// Reads {"speech_id", "sentence_index", "label", "prob"} records, one per
/// line. With a corpus bound, references to unknown sentences are rejected.
inline AnnotationSet ingest_predictions(std::istream& in, const Corpus* corpus = nullptr) {
  using nlohmann::json;
  AnnotationSet set;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> void {
    throw DataError("line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object()) fail("malformed record (not a JSON object)");
    SentencePrediction p;
    p.speech_id = detail::required_string(rec, "speech_id", line_no);
    const auto& idx = detail::required(rec, "sentence_index", line_no);
    if (!idx.is_number_unsigned()) fail("sentence_index must be a non-negative integer");
    p.sentence_index = idx.get<std::size_t>();
    auto code = detail::required_string(rec, "label", line_no);
    auto label = parse_label_code(code);
    if (!label) fail("unknown label '" + code + "'");
    p.label = *label;
    const auto& prob = detail::required(rec, "prob", line_no);
    if (!prob.is_number()) fail("prob must be a number");
    p.probability = prob.get<double>();
    if (!(p.probability >= 0.0 && p.probability <= 1.0))
      fail("prob " + prob.dump() + " outside [0, 1]");
    if (corpus != nullptr) {
      const Speech* sp = corpus->find(p.speech_id);
      if (sp == nullptr || p.sentence_index >= sp->sentences.size())
        fail("dangling reference (" + p.speech_id + ", " + std::to_string(p.sentence_index) + ")");
    }
    if (set.find(p.speech_id, p.sentence_index))
      fail("duplicate prediction for (" + p.speech_id + ", " +
           std::to_string(p.sentence_index) + ")");
    set.add(std::move(p));
  }
  return set;
}

inline void emit_predictions(const AnnotationSet& set, std::ostream& out) {
  for (const auto& [_, p] : set) {
    nlohmann::json rec;
    rec["speech_id"] = p.speech_id;
    rec["sentence_index"] = p.sentence_index;
    rec["label"] = std::string(label_code(p.label));
    rec["prob"] = p.probability;
    out << rec.dump() << '\n';
  }
}

using Lexicon = std::map<std::string, EmotionLabel, std::less<>>;

/// Deterministic stand-in for a trained classifier: the label with the most
/// lexicon hits wins (ties by kAllLabels order) with probability equal to
/// its share of hits. Sentences without hits become NEUT with certainty 1.
inline AnnotationSet annotate_with_lexicon(const Corpus& corpus, const Lexicon& lexicon) {
  if (lexicon.empty()) throw UsageError("lexicon is empty");
  Lexicon lowered;
  for (const auto& [token, label] : lexicon) lowered.emplace(detail::lowercase(token), label);

  AnnotationSet set;
  for (const auto& sp : corpus.speeches()) {
    for (const auto& s : sp.sentences) {
      PerLabel<std::size_t> hits{};
      std::size_t total = 0;
      for (const auto& tok : sentence_tokens(s)) {
        if (auto it = lowered.find(detail::lowercase(tok)); it != lowered.end()) {
          ++hits[label_index(it->second)];
          ++total;
        }
      }
      SentencePrediction p{sp.id, s.index, EmotionLabel::NEUT, 1.0};
      if (total > 0) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < kLabelCount; ++i)
          if (hits[i] > hits[best]) best = i;
        p.label = kAllLabels[best];
        p.probability = static_cast<double>(hits[best]) / static_cast<double>(total);
      }
      set.add(std::move(p));
    }
  }
  return set;
}

/// Share of sentences per label.
inline PerLabel<double> emotion_distribution(const AnnotationSet& annotations) {
  if (annotations.empty()) throw DataError("emotion distribution of an empty annotation set");
  PerLabel<std::size_t> counts{};
  for (const auto& [_, p] : annotations) ++counts[label_index(p.label)];
  PerLabel<double> shares{};
  const auto total = static_cast<double>(annotations.size());
  for (std::size_t i = 0; i < kLabelCount; ++i)
    shares[i] = static_cast<double>(counts[i]) / total;
  return shares;
}

struct SentimentShares {
  double positive = 0.0;
  double negative = 0.0;
  double neutral = 0.0;
};

inline SentimentShares sentiment_rollup(const PerLabel<double>& distribution) {
  SentimentShares s;
  for (auto l : kAllLabels) {
    double v = distribution[label_index(l)];
    switch (polarity(l)) {
      case 1: s.positive += v; break;
      case -1: s.negative += v; break;
      default: s.neutral += v; break;
    }
  }
  return s;
}

}  // namespace topiclandscape
