#pragma once

// Seeded synthetic parliament: speeches on planted topics with disjoint
// vocabularies, per-topic emotion mixtures and optional linear drifts.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "../corpus.hpp"
#include "../detail/rng.hpp"
#include "../diachronic.hpp"
#include "../emotion.hpp"
#include "../error.hpp"

namespace topiclandscape::testkit {

struct SynthTopic {
  std::string name;
  std::vector<std::string> vocabulary;
  /// Base emotion mixture (probability vector).
  PerLabel<double> mixture{};
};

/// mixture(topic)[label] += slope * month_index, then clipped and
/// renormalized.
struct Drift {
  std::size_t topic = 0;
  EmotionLabel label = EmotionLabel::HOPE;
  double slope = 0.0;
};

struct SynthSpec {
  std::vector<SynthTopic> topics;
  YearMonth start{2000, 1};
  int months = 12;
  std::size_t speeches_per_month = 10;
  std::size_t sentences_per_speech = 6;
  std::size_t tokens_per_sentence = 8;
  /// Fraction of speeches given fewer sentences than the default filter keeps.
  double short_speech_rate = 0.0;
  /// Fraction of speeches by the Speaker of Parliament.
  double chair_rate = 0.0;
  std::vector<Drift> drifts;
  std::uint64_t seed = 1;
};

/// n topics named topic_<k> with vocabularies t<k>w<j> and uniform mixtures.
inline std::vector<SynthTopic> default_topics(std::size_t n, std::size_t vocab_per_topic) {
  std::vector<SynthTopic> topics;
  for (std::size_t k = 0; k < n; ++k) {
    SynthTopic t;
    t.name = "topic_" + std::to_string(k);
    for (std::size_t j = 0; j < vocab_per_topic; ++j)
      t.vocabulary.push_back("t" + std::to_string(k) + "w" + std::to_string(j));
    t.mixture.fill(1.0 / static_cast<double>(kLabelCount));
    topics.push_back(std::move(t));
  }
  return topics;
}

/// Emotion mixture of a topic at a month offset, after drift, clipping and
/// renormalization. Throws DataError when nothing is left to renormalize.
inline PerLabel<double> mixture_at(const SynthSpec& spec, std::size_t topic, int month) {
  PerLabel<double> m = spec.topics.at(topic).mixture;
  for (const auto& d : spec.drifts)
    if (d.topic == topic) m[label_index(d.label)] += d.slope * month;
  double sum = 0.0;
  for (auto& v : m) {
    v = std::clamp(v, 0.0, 1.0);
    sum += v;
  }
  if (!(sum > 0.0))
    throw DataError("infeasible drift: mixture of topic " + std::to_string(topic) +
                    " leaves the simplex at month " + std::to_string(month));
  for (auto& v : m) v /= sum;
  return m;
}

inline void validate(const SynthSpec& spec) {
  if (spec.topics.empty()) throw UsageError("synthetic spec needs >= 1 topic");
  if (spec.months < 1) throw UsageError("synthetic date range is empty");
  if (spec.sentences_per_speech < 1 || spec.tokens_per_sentence < 1)
    throw UsageError("speeches need >= 1 sentence of >= 1 token");
  std::set<std::string> seen;
  for (const auto& t : spec.topics) {
    if (t.vocabulary.empty()) throw UsageError("topic '" + t.name + "' has no vocabulary");
    double sum = 0.0;
    for (double v : t.mixture) {
      if (v < 0.0) throw UsageError("topic '" + t.name + "' mixture has a negative entry");
      sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
      throw UsageError("topic '" + t.name + "' mixture is not a probability vector");
    for (const auto& w : t.vocabulary)
      if (!seen.insert(w).second) throw UsageError("vocabularies overlap on '" + w + "'");
  }
  for (const auto& d : spec.drifts)
    if (d.topic >= spec.topics.size()) throw UsageError("drift references unknown topic");
  for (std::size_t k = 0; k < spec.topics.size(); ++k)
    for (int m = 0; m < spec.months; ++m) (void)mixture_at(spec, k, m);
}

inline nlohmann::json to_json(const SynthSpec& spec) {
  using nlohmann::json;
  json topics = json::array();
  for (const auto& t : spec.topics) {
    json mixture = json::object();
    for (auto l : kAllLabels) mixture[std::string(label_code(l))] = t.mixture[label_index(l)];
    topics.push_back({{"name", t.name}, {"vocabulary", t.vocabulary}, {"mixture", mixture}});
  }
  json drifts = json::array();
  for (const auto& d : spec.drifts)
    drifts.push_back(
        {{"topic", d.topic}, {"label", std::string(label_code(d.label))}, {"slope", d.slope}});
  return {{"topics", topics},
          {"start", spec.start.str()},
          {"months", spec.months},
          {"speeches_per_month", spec.speeches_per_month},
          {"sentences_per_speech", spec.sentences_per_speech},
          {"tokens_per_sentence", spec.tokens_per_sentence},
          {"short_speech_rate", spec.short_speech_rate},
          {"chair_rate", spec.chair_rate},
          {"drifts", drifts},
          {"seed", spec.seed}};
}

/// Reads a spec. "topics" is either a count (default vocabularies of
/// "vocab_per_topic" tokens, uniform mixtures) or a list of
/// {"name", "vocabulary", "mixture"} objects.
inline SynthSpec synth_spec_from_json(const nlohmann::json& j) {
  SynthSpec spec;
  try {
    const auto& topics = j.at("topics");
    if (topics.is_number_unsigned()) {
      spec.topics = default_topics(topics.get<std::size_t>(), j.value("vocab_per_topic", 12u));
    } else {
      for (const auto& t : topics) {
        SynthTopic st;
        st.name = t.at("name").get<std::string>();
        st.vocabulary = t.at("vocabulary").get<std::vector<std::string>>();
        if (auto m = t.find("mixture"); m != t.end()) {
          for (const auto& [code, v] : m->items()) {
            auto l = parse_label_code(code);
            if (!l) throw UsageError("unknown label '" + code + "' in mixture");
            st.mixture[label_index(*l)] = v.get<double>();
          }
        } else {
          st.mixture.fill(1.0 / static_cast<double>(kLabelCount));
        }
        spec.topics.push_back(std::move(st));
      }
    }
    if (auto s = j.find("start"); s != j.end()) {
      auto ym = parse_year_month(s->get<std::string>());
      if (!ym) throw UsageError("synthetic start must be YYYY-MM");
      spec.start = *ym;
    }
    spec.months = j.value("months", spec.months);
    spec.speeches_per_month = j.value("speeches_per_month", spec.speeches_per_month);
    spec.sentences_per_speech = j.value("sentences_per_speech", spec.sentences_per_speech);
    spec.tokens_per_sentence = j.value("tokens_per_sentence", spec.tokens_per_sentence);
    spec.short_speech_rate = j.value("short_speech_rate", spec.short_speech_rate);
    spec.chair_rate = j.value("chair_rate", spec.chair_rate);
    spec.seed = j.value("seed", spec.seed);
    if (auto d = j.find("drifts"); d != j.end()) {
      for (const auto& dj : *d) {
        Drift drift;
        drift.topic = dj.at("topic").get<std::size_t>();
        auto code = dj.at("label").get<std::string>();
        auto l = parse_label_code(code);
        if (!l) throw UsageError("unknown drift label '" + code + "'");
        drift.label = *l;
        drift.slope = dj.at("slope").get<double>();
        spec.drifts.push_back(drift);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("invalid synthetic spec: ") + e.what());
  }
  return spec;
}

struct SynthOutput {
  Corpus corpus;
  AnnotationSet predictions;
  /// Spec mirror plus realized per-month mixtures and topic of each speech.
  nlohmann::json truth;
};

inline SynthOutput generate_synthetic(const SynthSpec& spec) {
  validate(spec);
  detail::Rng rng(spec.seed);
  SynthOutput out;
  const std::size_t T = spec.topics.size();

  std::vector<std::vector<PerLabel<double>>> mixtures(T);
  for (std::size_t k = 0; k < T; ++k)
    for (int m = 0; m < spec.months; ++m) mixtures[k].push_back(mixture_at(spec, k, m));

  nlohmann::json speech_topics = nlohmann::json::object();
  for (int m = 0; m < spec.months; ++m) {
    const YearMonth ym = YearMonth::from_ordinal(spec.start.ordinal() + m);
    for (std::size_t i = 0; i < spec.speeches_per_month; ++i) {
      Speech sp;
      char id[48];
      std::snprintf(id, sizeof id, "s%s-%04zu", ym.str().c_str(), i);
      sp.id = id;
      const auto day = static_cast<unsigned>(1 + rng.below(28));
      sp.date = Date{std::chrono::year{ym.year}, std::chrono::month{ym.month}, std::chrono::day{day}};
      sp.speaker_id = "mp" + std::to_string(rng.below(200));
      sp.language_tag = "fi";
      const double role_draw = rng.uniform();
      sp.speaker_role = role_draw < spec.chair_rate ? SpeakerRole::speaker_of_parliament
                                                    : SpeakerRole::member;
      std::size_t n_sent = spec.sentences_per_speech;
      if (rng.uniform() < spec.short_speech_rate) n_sent = 1 + rng.below(4);
      const std::size_t topic = rng.below(T);
      speech_topics[sp.id] = topic;
      const auto& vocab = spec.topics[topic].vocabulary;
      const auto& mix = mixtures[topic][static_cast<std::size_t>(m)];
      for (std::size_t s = 0; s < n_sent; ++s) {
        Sentence sent;
        sent.speech_id = sp.id;
        sent.index = s;
        std::vector<std::string> tokens;
        for (std::size_t w = 0; w < spec.tokens_per_sentence; ++w)
          tokens.push_back(vocab[rng.below(vocab.size())]);
        std::string text;
        for (const auto& t : tokens) text += (text.empty() ? "" : " ") + t;
        text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
        sent.text = text + ".";
        sent.tokens = std::move(tokens);
        const auto label = kAllLabels[rng.categorical(mix)];
        const double prob = rng.uniform(0.5, 1.0);
        out.predictions.add({sp.id, s, label, prob});
        sp.sentences.push_back(std::move(sent));
      }
      out.corpus.add(std::move(sp));
    }
  }

  nlohmann::json realized = nlohmann::json::array();
  for (std::size_t k = 0; k < T; ++k) {
    nlohmann::json months = nlohmann::json::array();
    for (const auto& mix : mixtures[k]) months.push_back(mix);
    realized.push_back(std::move(months));
  }
  out.truth = {{"spec", to_json(spec)},
               {"realized_mixtures", std::move(realized)},
               {"speech_topics", std::move(speech_topics)}};
  return out;
}

}  // namespace topiclandscape::testkit
