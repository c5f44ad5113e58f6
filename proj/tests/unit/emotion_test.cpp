#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "topiclandscape/emotion.hpp"

namespace {

using namespace topiclandscape;
using tl_test::make_speech;
using tl_test::ymd;
using L = EmotionLabel;

TEST(Taxonomy, PolarityCounts) {
  int pos = 0, neg = 0, neu = 0;
  for (auto l : kAllLabels) {
    switch (polarity(l)) {
      case 1: ++pos; break;
      case -1: ++neg; break;
      default: ++neu;
    }
  }
  EXPECT_EQ(kAllLabels.size(), 9u);
  EXPECT_EQ(pos, 4);
  EXPECT_EQ(neg, 4);
  EXPECT_EQ(neu, 1);
  EXPECT_EQ(polarity(L::NEUT), 0);
}

TEST(Taxonomy, WireCodes) {
  EXPECT_EQ(label_code(L::JOY), "JOY-");
  EXPECT_EQ(parse_label_code("JOY-"), L::JOY);
  EXPECT_FALSE(parse_label_code("JOY"));
  EXPECT_FALSE(parse_label_code("hope"));
  for (auto l : kAllLabels) EXPECT_EQ(parse_label_code(label_code(l)), l);
}

Corpus small_corpus() {
  Corpus c;
  c.add(make_speech("s1", ymd(2010, 1, 1), {"One.", "Two.", "Three."}));
  return c;
}

TEST(Predictions, ValidRecordAccepted) {
  std::istringstream in(R"({"speech_id":"s1","sentence_index":0,"label":"HOPE","prob":0.91})");
  auto set = ingest_predictions(in);
  ASSERT_EQ(set.size(), 1u);
  const auto* p = set.find("s1", 0);
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->label, L::HOPE);
  EXPECT_DOUBLE_EQ(p->probability, 0.91);
}

TEST(Predictions, UnknownLabel) {
  std::istringstream in(R"({"speech_id":"s1","sentence_index":0,"label":"ANGER","prob":0.5})");
  try {
    ingest_predictions(in);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("ANGER"), std::string::npos);
  }
}

TEST(Predictions, ProbabilityOutOfRange) {
  for (const char* prob : {"1.2", "-0.1"}) {
    std::istringstream in(std::string(R"({"speech_id":"s1","sentence_index":0,"label":"HOPE","prob":)") +
                          prob + "}");
    EXPECT_THROW(ingest_predictions(in), DataError) << prob;
  }
}

TEST(Predictions, DuplicateKey) {
  std::istringstream in(
      "{\"speech_id\":\"s1\",\"sentence_index\":0,\"label\":\"HOPE\",\"prob\":0.5}\n"
      "{\"speech_id\":\"s1\",\"sentence_index\":0,\"label\":\"FEAR\",\"prob\":0.5}\n");
  EXPECT_THROW(ingest_predictions(in), DataError);
}

TEST(Predictions, DanglingWhenBound) {
  const auto c = small_corpus();
  std::istringstream ok(R"({"speech_id":"s1","sentence_index":2,"label":"NEUT","prob":1})");
  EXPECT_EQ(ingest_predictions(ok, &c).size(), 1u);
  std::istringstream past_end(R"({"speech_id":"s1","sentence_index":3,"label":"NEUT","prob":1})");
  EXPECT_THROW(ingest_predictions(past_end, &c), DataError);
  std::istringstream no_speech(R"({"speech_id":"s9","sentence_index":0,"label":"NEUT","prob":1})");
  EXPECT_THROW(ingest_predictions(no_speech, &c), DataError);
  std::istringstream unbound(R"({"speech_id":"s9","sentence_index":0,"label":"NEUT","prob":1})");
  EXPECT_NO_THROW(ingest_predictions(unbound));
}

TEST(Predictions, EmitRoundTripAndCoverage) {
  const auto c = small_corpus();
  AnnotationSet set;
  set.add({"s1", 0, L::JOY, 0.75});
  set.add({"s1", 2, L::NEGA, 0.5});
  std::stringstream buf;
  emit_predictions(set, buf);
  EXPECT_EQ(ingest_predictions(buf, &c), set);
  auto cov = coverage(c, set);
  EXPECT_EQ(cov.sentences, 3u);
  EXPECT_EQ(cov.annotated, 2u);
  EXPECT_EQ(cov.unlabeled, 1u);
  EXPECT_EQ(cov.dangling, 0u);
}

TEST(Lexicon, HandCount) {
  Corpus c;
  c.add(make_speech("s", ymd(2010, 1, 1), {"great great bad", "nothing here", "hopeful scary"}));
  Lexicon lex = {{"great", L::JOY}, {"bad", L::FEAR}, {"hopeful", L::HOPE}, {"scary", L::FEAR}};
  auto set = annotate_with_lexicon(c, lex);
  ASSERT_EQ(set.size(), 3u);
  EXPECT_EQ(set.find("s", 0)->label, L::JOY);
  EXPECT_NEAR(set.find("s", 0)->probability, 2.0 / 3.0, 1e-15);
  EXPECT_EQ(set.find("s", 1)->label, L::NEUT);
  EXPECT_EQ(set.find("s", 1)->probability, 1.0);
  EXPECT_EQ(set.find("s", 2)->label, L::HOPE);
  EXPECT_DOUBLE_EQ(set.find("s", 2)->probability, 0.5);
}

TEST(Lexicon, CaseInsensitiveAndDeterministic) {
  Corpus c;
  c.add(make_speech("s", ymd(2010, 1, 1), {"GREAT Bad bad."}));
  Lexicon lex = {{"Great", L::JOY}, {"bad", L::FEAR}};
  auto a = annotate_with_lexicon(c, lex);
  EXPECT_EQ(a.find("s", 0)->label, L::FEAR);
  EXPECT_EQ(a, annotate_with_lexicon(c, lex));
}

TEST(Lexicon, EmptyLexiconRejected) {
  EXPECT_THROW(annotate_with_lexicon(small_corpus(), Lexicon{}), UsageError);
}

AnnotationSet labelled(const std::vector<L>& labels) {
  AnnotationSet set;
  for (std::size_t i = 0; i < labels.size(); ++i) set.add({"s", i, labels[i], 1.0});
  return set;
}

TEST(Distribution, AllNeutral) {
  auto d = emotion_distribution(labelled(std::vector<L>(10, L::NEUT)));
  for (auto l : kAllLabels) EXPECT_EQ(d[label_index(l)], l == L::NEUT ? 1.0 : 0.0);
}

TEST(Distribution, HandCount) {
  auto d = emotion_distribution(labelled({L::HOPE, L::HOPE, L::FEAR, L::HOPE}));
  EXPECT_DOUBLE_EQ(d[label_index(L::HOPE)], 0.75);
  EXPECT_DOUBLE_EQ(d[label_index(L::FEAR)], 0.25);
}

TEST(Distribution, EmptyRejected) {
  EXPECT_THROW(emotion_distribution(AnnotationSet{}), DataError);
}

TEST(Distribution, SharesSumToOne) {
  for (std::size_t n = 1; n < 60; n += 7) {
    std::vector<L> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(kAllLabels[(i * i + 3 * i) % 9]);
    auto d = emotion_distribution(labelled(labels));
    double sum = 0.0;
    for (double v : d) {
      EXPECT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

PerLabel<double> dist(std::initializer_list<std::pair<L, double>> items) {
  PerLabel<double> d{};
  for (auto [l, v] : items) d[label_index(l)] = v;
  return d;
}

TEST(Rollup, Examples) {
  auto a = sentiment_rollup(dist({{L::NEUT, 1.0}}));
  EXPECT_EQ(a.positive, 0.0);
  EXPECT_EQ(a.negative, 0.0);
  EXPECT_EQ(a.neutral, 1.0);
  auto b = sentiment_rollup(dist({{L::HOPE, 0.5}, {L::FEAR, 0.5}}));
  EXPECT_EQ(b.positive, 0.5);
  EXPECT_EQ(b.negative, 0.5);
  EXPECT_EQ(b.neutral, 0.0);
  auto c = sentiment_rollup(dist({{L::JOY, .1}, {L::HOPE, .1}, {L::LOVE, .05}, {L::POSI, .05},
                                  {L::SADN, .2}, {L::FEAR, .2}, {L::HATE, .1}, {L::NEGA, .1},
                                  {L::NEUT, .1}}));
  EXPECT_NEAR(c.positive, 0.3, 1e-12);
  EXPECT_NEAR(c.negative, 0.6, 1e-12);
  EXPECT_NEAR(c.neutral, 0.1, 1e-12);
}

TEST(Rollup, Linear) {
  auto p = dist({{L::JOY, .2}, {L::SADN, .3}, {L::NEUT, .5}});
  auto q = dist({{L::LOVE, .6}, {L::HATE, .1}, {L::NEGA, .3}});
  for (double w : {0.0, 0.25, 0.5, 0.9, 1.0}) {
    PerLabel<double> mix{};
    for (std::size_t i = 0; i < kLabelCount; ++i) mix[i] = w * p[i] + (1 - w) * q[i];
    auto rm = sentiment_rollup(mix);
    auto rp = sentiment_rollup(p), rq = sentiment_rollup(q);
    EXPECT_NEAR(rm.positive, w * rp.positive + (1 - w) * rq.positive, 1e-12);
    EXPECT_NEAR(rm.negative, w * rp.negative + (1 - w) * rq.negative, 1e-12);
    EXPECT_NEAR(rm.neutral, w * rp.neutral + (1 - w) * rq.neutral, 1e-12);
    EXPECT_NEAR(rm.positive + rm.negative + rm.neutral, 1.0, 1e-12);
  }
}

TEST(Annotations, RestrictToCorpus) {
  AnnotationSet set;
  set.add({"s1", 0, L::JOY, 1.0});
  set.add({"gone", 0, L::JOY, 1.0});
  set.add({"s1", 7, L::JOY, 1.0});
  auto r = restrict_annotations(set, small_corpus());
  EXPECT_EQ(r.size(), 1u);
  EXPECT_NE(r.find("s1", 0), nullptr);
}

}  // namespace
