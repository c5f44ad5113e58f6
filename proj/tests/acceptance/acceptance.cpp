// Acceptance checks; one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "topiclandscape.hpp"
#include "topiclandscape/cli.hpp"

namespace {

namespace fs = std::filesystem;
using namespace topiclandscape;
using L = EmotionLabel;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      outcome_.pass = false;
      if (failures_++ < 5) note("FAILED " + what);
    }
  }
  void note(const std::string& s) {
    outcome_.detail += (outcome_.detail.empty() ? "" : "; ") + s;
  }
  Outcome result() const { return outcome_; }

 private:
  Outcome outcome_;
  std::size_t failures_ = 0;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Date ymd(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

Outcome table_reproduction() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  const auto f = testkit::appendix_b_fixture();
  const auto rd = relative_differences(f.cross_table());
  const double elapsed = seconds_since(t0);
  c.expect(rd.topics() == 26, "26 topics");
  std::size_t matched = 0;
  for (std::size_t t = 0; t < rd.topics(); ++t)
    for (auto l : kAllLabels) {
      const double got = rd.at(t, l);
      const double want = f.rows()[t].relative_difference[label_index(l)];
      const bool ok = std::fabs(got - want) <= 0.005 &&
                      detail::format_fixed(got, 2) == detail::format_fixed(want, 2);
      matched += ok;
      c.expect(ok, rd.topic_labels[t] + "/" + std::string(label_code(l)));
    }
  const std::vector<std::tuple<std::string, L, std::string>> anchors = {
      {"Commerce", L::HATE, "0.22"},
      {"Energy", L::HOPE, "1.20"},
      {"Law proposals", L::NEUT, "3.44"},
      {"Employment", L::POSI, "-0.98"}};
  for (const auto& [topic, label, want] : anchors)
    c.expect(detail::format_fixed(rd.at(*rd.find(topic), label), 2) == want, topic + " anchor");
  c.expect(elapsed < 1.0, "runtime < 1 s");
  c.note(std::to_string(matched) + "/234 cells");
  c.note(fmt("%.4f s", elapsed));
  return c.result();
}

Outcome group_reproduction() {
  Check c;
  const auto f = testkit::appendix_b_fixture();
  const auto rd = relative_differences(f.cross_table());
  const auto groups = classify_all(rd);
  std::size_t matched = 0;
  for (std::size_t t = 0; t < rd.topics(); ++t) {
    const bool ok = groups[t] == f.expected_group(rd.topic_labels[t]);
    matched += ok;
    c.expect(ok, rd.topic_labels[t] + " is " + std::string(group_name(groups[t])));
  }
  const auto crime = *rd.find("Crime");
  c.expect(detail::format_fixed(rd.at(crime, L::SADN), 2) == "0.50", "Crime SADN rounds to 0.50");
  c.expect(groups[crime] == SkewnessGroup::neutrally_skewed, "Crime neutrally skewed");
  c.expect(std::count(groups.begin(), groups.end(), SkewnessGroup::average_posi_subgroup) == 5,
           "five POSI-subgroup topics");
  c.note(std::to_string(matched) + "/26 groups");
  return c.result();
}

Outcome extremes() {
  Check c;
  const auto rd = relative_differences(testkit::appendix_b_fixture().cross_table());
  double lo = 1e9, hi = -1e9;
  for (const auto& row : rd.rows)
    for (double v : row) {
      lo = std::min(lo, detail::round_to(v, 2));
      hi = std::max(hi, detail::round_to(v, 2));
    }
  c.expect(lo == -0.98, "min");
  c.expect(hi == 3.44, "max");
  c.note("range " + detail::format_fixed(lo, 2) + " .. " + detail::format_fixed(hi, 2));
  return c.result();
}

L flipped(L l) {
  switch (l) {
    case L::JOY: return L::SADN;
    case L::HOPE: return L::FEAR;
    case L::LOVE: return L::HATE;
    case L::POSI: return L::NEGA;
    case L::SADN: return L::JOY;
    case L::FEAR: return L::HOPE;
    case L::HATE: return L::LOVE;
    case L::NEGA: return L::POSI;
    case L::NEUT: return L::NEUT;
  }
  return l;
}

Speech bare_speech(const std::string& id, std::size_t n, Date date) {
  Speech sp;
  sp.id = id;
  sp.date = date;
  sp.speaker_id = "mp";
  sp.language_tag = "fi";
  for (std::size_t i = 0; i < n; ++i) sp.sentences.push_back({id, i, "Words here.", {}});
  return sp;
}

Outcome was_properties() {
  Check c;
  std::mt19937_64 gen(20240);
  std::uniform_int_distribution<std::size_t> len(1, 40), lab(0, kLabelCount - 1);
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  const int trials = 10000;
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i < trials; ++i) {
    const auto sp = bare_speech("s", len(gen), ymd(2010, 1, 1));
    AnnotationSet a, flip, neutral;
    for (std::size_t s = 0; s < sp.sentences.size(); ++s) {
      const auto l = kAllLabels[lab(gen)];
      const double p = prob(gen);
      a.add({"s", s, l, p});
      flip.add({"s", s, flipped(l), p});
      neutral.add({"s", s, L::NEUT, p});
    }
    const double w = *speech_was(sp, a);
    lo = std::min(lo, w);
    hi = std::max(hi, w);
    c.expect(w >= -1.0 && w <= 1.0, "bounded");
    c.expect(*speech_was(sp, neutral) == 0.0, "neutral is zero");
    c.expect(*speech_was(sp, flip) == -w, "antisymmetric");
  }
  const auto hand = bare_speech("h", 2, ymd(2010, 1, 1));
  AnnotationSet ha;
  ha.add({"h", 0, L::HOPE, 0.8});
  ha.add({"h", 1, L::FEAR, 0.6});
  const double w = *speech_was(hand, ha);
  c.expect(std::fabs(w - 0.1) <= 1e-15, "hand case 0.1");
  c.note(std::to_string(trials) + " sets, observed [" + fmt("%.3f", lo) + ", " + fmt("%.3f", hi) +
         "], hand case " + fmt("%.17g", w));
  return c.result();
}

Outcome share_properties() {
  Check c;
  std::mt19937_64 gen(515);
  std::uniform_int_distribution<int> month(0, 35), sentences(1, 8);
  std::uniform_int_distribution<std::size_t> lab(0, kLabelCount - 1);
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  Corpus corpus;
  AnnotationSet ann;
  for (int i = 0; i < 600; ++i) {
    const auto ym = YearMonth::from_ordinal(YearMonth{2012, 1}.ordinal() + month(gen));
    const std::string id = "s" + std::to_string(i);
    auto sp = bare_speech(id, static_cast<std::size_t>(sentences(gen)),
                          ymd(ym.year, static_cast<unsigned>(ym.month), 10));
    for (std::size_t s = 0; s < sp.sentences.size(); ++s)
      ann.add({id, s, kAllLabels[lab(gen)], prob(gen)});
    corpus.add(std::move(sp));
  }
  std::uniform_int_distribution<int> anchor(0, 40), span(1, 12);
  double worst = 0.0;
  std::size_t windows = 0;
  while (windows < 1000) {
    const auto w = make_window(YearMonth::from_ordinal(YearMonth{2012, 1}.ordinal() + anchor(gen)),
                               span(gen),
                               gen() % 2 ? WindowAlignment::trailing : WindowAlignment::centered);
    const auto pts = rolling_emotion_shares(corpus, ann, {w});
    if (pts.empty()) continue;
    ++windows;
    double sum = 0.0;
    for (const auto& p : pts) {
      c.expect(p.share >= 0.0, "non-negative share");
      sum += p.share;
    }
    worst = std::max(worst, std::fabs(sum - 1.0));
  }
  c.expect(worst <= 1e-9, "shares sum to 1");

  Corpus hand;
  hand.add(bare_speech("a", 3, ymd(2016, 5, 1)));
  AnnotationSet three;
  three.add({"a", 0, L::HOPE, 0.9});
  three.add({"a", 1, L::HOPE, 0.3});
  three.add({"a", 2, L::NEUT, 0.6});
  double hope = -1, neut = -1;
  for (const auto& p : rolling_emotion_shares(hand, three, {make_window({2016, 5})})) {
    if (p.label == L::HOPE) hope = p.share;
    if (p.label == L::NEUT) neut = p.share;
  }
  c.expect(std::fabs(hope - 2.0 / 3.0) <= 1e-15 && std::fabs(neut - 1.0 / 3.0) <= 1e-15,
           "hand case 2/3, 1/3");
  c.note(std::to_string(windows) + " windows, max |sum-1| " + fmt("%.1e", worst));
  return c.result();
}

Outcome statistics_oracle() {
  Check c;
  using namespace stats;
  c.expect(std::fabs(student_t_two_sided_p(1.0, 1.0) - 0.5) <= 1e-10, "df=1 t=1");
  for (double t : {0.3, 2.0, 7.5})
    c.expect(std::fabs(student_t_two_sided_p(t, 1.0) -
                       (1.0 - 2.0 * std::atan(t) / 3.14159265358979323846)) <= 1e-10,
             "df=1 closed form");
  const double p10 = student_t_two_sided_p(2.228, 10.0);
  c.expect(std::fabs(p10 - 0.050) <= 5e-4, "df=10 t=2.228");

  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> x(0.0, 1.0), ab(0.05, 50.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double xi = x(gen), a = ab(gen), b = ab(gen);
    worst = std::max(worst, std::fabs(regularized_incomplete_beta(xi, a, b) -
                                      (1.0 - regularized_incomplete_beta(1.0 - xi, b, a))));
  }
  c.expect(worst <= 1e-10, "incomplete-beta symmetry");

  const std::vector<double> xs = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const std::vector<double> ys = {2.1, 1.9, 3.2, 3.8, 5.1, 4.9, 6.2, 7.1, 7.9, 9.0};
  const auto fit = ols_fit(xs, ys);
  c.expect(std::fabs(fit.slope - 0.7915151515151516) <= 1e-6, "OLS slope");
  c.expect(std::fabs(fit.intercept - 0.7666666666666657) <= 1e-6, "OLS intercept");
  c.expect(std::fabs(fit.r_squared - 0.978233389998096) <= 1e-6, "OLS r^2");
  c.expect(std::fabs(fit.p_value - 6.192099691042916e-08) <= 1e-6, "OLS p");
  c.note("p(df=10, 2.228) = " + fmt("%.5f", p10) + ", max symmetry error " + fmt("%.1e", worst));
  return c.result();
}

TopicEmotionSeries series_of(const std::vector<double>& values) {
  TopicEmotionSeries s{0, "planted", L::HOPE, {}};
  const int origin = YearMonth{2000, 1}.ordinal();
  for (std::size_t i = 0; i < values.size(); ++i)
    s.points.push_back({make_window(YearMonth::from_ordinal(origin + static_cast<int>(i))),
                        values[i]});
  return s;
}

Outcome trend_detection() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  constexpr int n = 120;
  const double var_x = (static_cast<double>(n) * n - 1.0) / 12.0;
  const double slope = std::sqrt(1.5 / var_x);
  int planted_hits = 0, noise_hits = 0;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    std::mt19937_64 gen(detail::derive_seed(777, {rep}));
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> planted, pure;
    for (int i = 0; i < n; ++i) {
      planted.push_back(5.0 + slope * i + noise(gen));
      pure.push_back(5.0 + noise(gen));
    }
    planted_hits += detect_trend(series_of(planted)).meaningful;
    noise_hits += detect_trend(series_of(pure)).meaningful;
  }
  const double elapsed = seconds_since(t0);
  c.expect(planted_hits >= 95, "planted flagged >= 95/100");
  c.expect(noise_hits <= 10, "noise flagged <= 10/100");
  c.expect(elapsed < 30.0, "runtime < 30 s");
  c.note("planted " + std::to_string(planted_hits) + "/100, noise " + std::to_string(noise_hits) +
         "/100, " + fmt("%.3f s", elapsed));
  return c.result();
}

Outcome lda_recovery() {
  Check c;
  double slowest = 0.0;
  int pure_seeds = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::mt19937_64 gen(seed * 1000 + 17);
    std::uniform_int_distribution<int> word(0, 19);
    std::vector<TokenList> docs;
    for (int d = 0; d < 200; ++d) {
      const std::string prefix = d % 2 ? "alpha" : "omega";
      TokenList doc;
      for (int i = 0; i < 50; ++i) doc.push_back(prefix + std::to_string(word(gen)));
      docs.push_back(std::move(doc));
    }
    const auto vocab = build_vocabulary(docs, 1);
    LdaParams params;
    params.topics = 2;
    params.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    const auto model = train_lda(vocab, docs, params);
    const double elapsed = seconds_since(t0);
    slowest = std::max(slowest, elapsed);
    std::set<std::string> families;
    std::size_t pure_words = 0;
    for (std::size_t k = 0; k < 2; ++k) {
      std::map<std::string, std::size_t> counts;
      for (const auto& [tok, _] : top_words(model, k, 10)) ++counts[tok.substr(0, 5)];
      auto best = std::max_element(counts.begin(), counts.end(),
                                   [](const auto& a, const auto& b) { return a.second < b.second; });
      families.insert(best->first);
      pure_words += best->second;
    }
    const double purity = static_cast<double>(pure_words) / 20.0;
    const bool ok = purity == 1.0 && families.size() == 2;
    pure_seeds += ok;
    c.expect(ok, "seed " + std::to_string(seed) + " purity " + fmt("%.2f", purity));
    c.expect(elapsed < 10.0, "seed " + std::to_string(seed) + " training < 10 s");
  }
  c.note(std::to_string(pure_seeds) + "/5 seeds pure, slowest training " + fmt("%.3f s", slowest));
  return c.result();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cli(const std::vector<std::string>& args, std::string* err_text) {
  std::vector<const char*> argv = {"topiclandscape"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  *err_text = err.str();
  return code;
}

/// Eight planted topics; HOPE and FEAR start rare.
nlohmann::json end_to_end_config() {
  nlohmann::json mixture = nlohmann::json::object();
  for (auto l : kAllLabels)
    mixture[std::string(label_code(l))] = (l == L::HOPE || l == L::FEAR) ? 0.05 : 0.9 / 7.0;
  nlohmann::json topics = nlohmann::json::array();
  for (int k = 0; k < 8; ++k) {
    std::vector<std::string> vocab;
    for (int j = 0; j < 25; ++j) vocab.push_back("t" + std::to_string(k) + "w" + std::to_string(j));
    topics.push_back({{"name", "topic_" + std::to_string(k)}, {"vocabulary", vocab}, {"mixture", mixture}});
  }
  return {{"corpus", "out/synth_corpus.jsonl"},
          {"predictions", "out/synth_predictions.jsonl"},
          {"out", "out"},
          {"seed", 42},
          {"topics", {{"k", 8}, {"iterations", 200}}},
          {"elections", {"2003-03-16", "2007-03-18", "2011-04-17", "2015-04-19"}},
          {"formats", {"csv", "html"}},
          {"synth",
           {{"topics", topics},
            {"start", "2000-01"},
            {"months", 240},
            {"speeches_per_month", 60},
            {"sentences_per_speech", 6},
            {"tokens_per_sentence", 4},
            {"short_speech_rate", 0.05},
            {"chair_rate", 0.05},
            {"drifts",
             {{{"topic", 0}, {"label", "HOPE"}, {"slope", 0.001}},
              {{"topic", 2}, {"label", "FEAR"}, {"slope", 0.001}}}}}}};
}

struct PipelineRun {
  bool ok = false;
  std::string failure;
  double seconds = 0.0;
  fs::path out;
};

PipelineRun run_pipeline(const fs::path& dir) {
  PipelineRun r;
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto cfg = dir / "run.json";
  std::ofstream(cfg) << end_to_end_config().dump(2);
  r.out = dir / "out";
  const auto t0 = std::chrono::steady_clock::now();
  for (const char* stage :
       {"synth", "filter", "train-topics", "landscape", "timeseries", "trends", "report"}) {
    std::string err;
    if (cli({stage, "--config", cfg.string(), "--quiet"}, &err) != 0) {
      r.failure = std::string(stage) + ": " + err;
      return r;
    }
  }
  r.seconds = seconds_since(t0);
  r.ok = true;
  return r;
}

/// Planted topic index of each learned topic, from its top words' prefix.
std::map<std::string, std::size_t> learned_to_planted(const fs::path& out) {
  std::ifstream in(out / "train-topics_model.json");
  const auto model = load_model(in);
  std::map<std::string, std::size_t> mapping;
  for (std::size_t k = 0; k < model.topics(); ++k) {
    std::map<std::size_t, std::size_t> votes;
    for (const auto& [tok, _] : top_words(model, k, 10))
      ++votes[std::stoul(tok.substr(1, tok.find('w') - 1))];
    auto best = std::max_element(votes.begin(), votes.end(),
                                 [](const auto& a, const auto& b) { return a.second < b.second; });
    mapping[TopicLabelMap(model.topics(), {}).label(k)] = best->first;
  }
  return mapping;
}

Outcome end_to_end() {
  Check c;
  const auto base = fs::temp_directory_path() / "topiclandscape_acceptance";
  const auto first = run_pipeline(base / "a");
  c.expect(first.ok, "pipeline run 1 " + first.failure);
  if (!first.ok) return c.result();
  c.expect(first.seconds < 60.0, "runtime < 60 s");

  const auto mapping = learned_to_planted(first.out);
  std::set<std::size_t> planted_topics;
  for (const auto& [_, p] : mapping) planted_topics.insert(p);
  c.expect(planted_topics.size() == 8, "learned topics map one-to-one to planted topics");

  std::ifstream in(first.out / "trends_meaningful.csv");
  std::string line;
  std::getline(in, line);
  const std::set<std::pair<std::size_t, std::string>> planted = {{0, "HOPE"}, {2, "FEAR"}};
  std::set<std::pair<std::size_t, std::string>> flagged;
  while (std::getline(in, line)) {
    const auto f = detail::csv_split(line);
    flagged.insert({mapping.at(f[0]), f[1]});
  }
  std::size_t hits = 0, false_pairs = 0;
  for (const auto& p : flagged) (planted.contains(p) ? hits : false_pairs)++;
  c.expect(hits == 2, "both planted pairs flagged");
  c.expect(false_pairs <= 2, "at most 2 false pairs");

  const auto second = run_pipeline(base / "b");
  c.expect(second.ok, "pipeline run 2 " + second.failure);
  std::size_t compared = 0;
  if (second.ok) {
    for (const auto& e : fs::directory_iterator(first.out)) {
      if (e.path().extension() != ".csv") continue;
      ++compared;
      c.expect(slurp(e.path()) == slurp(second.out / e.path().filename()),
               e.path().filename().string() + " identical");
    }
  }
  c.expect(compared >= 10, "CSV outputs compared");
  c.note(fmt("%.1f s", first.seconds) + ", planted flagged " + std::to_string(hits) +
         "/2, false pairs " + std::to_string(false_pairs) + ", " + std::to_string(compared) +
         " CSVs identical across runs");
  fs::remove_all(base);
  return c.result();
}

Outcome filtering_contract() {
  Check c;
  Corpus corpus;
  FilterReport want{1000, 0, 0, 0, 0};
  for (int i = 0; i < 1000; ++i) {
    std::size_t n = 5 + static_cast<std::size_t>(i % 7);
    auto role = SpeakerRole::member;
    if (i % 10 == 3) role = SpeakerRole::speaker_of_parliament;
    if (i % 10 == 5) role = SpeakerRole::minister;
    if (i % 8 == 1) n = 1 + static_cast<std::size_t>(i % 4);
    if (i % 40 == 0) n = 4;
    auto sp = bare_speech("s" + std::to_string(i), n, ymd(2011, 1 + i % 12, 2));
    sp.speaker_role = role;
    if (role == SpeakerRole::speaker_of_parliament) ++want.speeches_removed_role;
    else if (n < 5) ++want.speeches_removed_short;
    else want.sentences_out += n;
    corpus.add(std::move(sp));
  }
  want.speeches_out = 1000 - want.speeches_removed_role - want.speeches_removed_short;
  const auto once = filter_corpus(corpus);
  c.expect(once.report == want, "report counts");
  const auto twice = filter_corpus(once.corpus);
  c.expect(twice.corpus == once.corpus, "idempotent corpus");
  c.expect(twice.report.speeches_removed_role == 0 && twice.report.speeches_removed_short == 0,
           "second pass removes nothing");
  c.note("role " + std::to_string(once.report.speeches_removed_role) + ", short " +
         std::to_string(once.report.speeches_removed_short) + ", kept " +
         std::to_string(once.report.speeches_out) + " speeches / " +
         std::to_string(once.report.sentences_out) + " sentences");
  return c.result();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"table reproduction", table_reproduction},
      {"group reproduction", group_reproduction},
      {"extremes", extremes},
      {"WAS properties", was_properties},
      {"emotion shares", share_properties},
      {"statistics oracle", statistics_oracle},
      {"trend detection", trend_detection},
      {"LDA recovery", lda_recovery},
      {"end-to-end", end_to_end},
      {"filtering contract", filtering_contract}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << i + 1 << ". " << criteria[i].first
              << " (" << o.detail << ")" << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
