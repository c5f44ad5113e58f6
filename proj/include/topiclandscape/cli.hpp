#pragma once

// Command-line front end. Each subcommand is one pipeline stage that reads
// the run config, writes <stage>_<name>.<ext> files into the output
// directory and records itself in manifest.json.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "config.hpp"
#include "corpus.hpp"
#include "detail/rng.hpp"
#include "detail/text.hpp"
#include "diachronic.hpp"
#include "emotion.hpp"
#include "error.hpp"
#include "report.hpp"
#include "synchronic.hpp"
#include "testkit/appendix_b.hpp"
#include "testkit/synthetic.hpp"
#include "topic_model.hpp"

namespace topiclandscape::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { ok = 0, usage = 1, data = 2, internal = 3 };

namespace fs = std::filesystem;

struct Invocation {
  std::string stage;
  fs::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
  bool quiet = false;
};

/// Exclusive ownership of an output directory for the lifetime of a stage.
class OutputLock {
 public:
  explicit OutputLock(fs::path dir) : path_(std::move(dir) / ".lock") {
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (f == nullptr)
      throw DataError("output directory is locked by another run (" + path_.string() + ")");
    std::fprintf(f, "topiclandscape\n");
    std::fclose(f);
  }
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;
  ~OutputLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }

 private:
  fs::path path_;
};

inline std::string file_hash(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return detail::hex64(detail::fnv1a64(buf.str()));
}

class StageRun {
 public:
  StageRun(std::string stage, const RunConfig& config, std::ostream& err, bool quiet)
      : stage_(std::move(stage)), config_(config), err_(err), quiet_(quiet),
        started_(std::chrono::steady_clock::now()) {}

  [[nodiscard]] const RunConfig& config() const { return config_; }
  [[nodiscard]] const std::string& stage() const { return stage_; }
  Warnings* warnings() { return &warnings_; }

  void log(const std::string& msg) {
    if (!quiet_) err_ << '[' << stage_ << "] " << msg << '\n';
  }

  /// Opens an input file, recording its content hash.
  std::ifstream open_input(const fs::path& p) {
    if (!fs::exists(p)) throw DataError("input file not found: " + p.string());
    inputs_[p.string()] = file_hash(p);
    std::ifstream in(p, std::ios::binary);
    if (!in) throw DataError("cannot read " + p.string());
    return in;
  }

  void write(const std::string& name, std::string_view ext,
             const std::function<void(std::ostream&)>& body) {
    const fs::path p = config_.out / (stage_ + "_" + name + "." + std::string(ext));
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + p.string() + " for writing");
    body(f);
    f.flush();
    if (!f) throw std::runtime_error("write to " + p.string() + " failed");
    outputs_.push_back(p.filename().string());
    log("wrote " + p.string());
  }

  void write_json(const std::string& name, const nlohmann::json& j) {
    write(name, "json", [&](std::ostream& o) { o << j.dump(2) << '\n'; });
  }

  /// Merges this stage's entry into manifest.json.
  void finish() {
    for (const auto& w : warnings_)
      if (!quiet_) err_ << "warning: " << w << '\n';
    const fs::path mpath = config_.out / "manifest.json";
    nlohmann::json manifest = nlohmann::json::object();
    if (std::ifstream in(mpath); in) {
      manifest = nlohmann::json::parse(in, nullptr, false);
      if (manifest.is_discarded() || !manifest.is_object()) manifest = nlohmann::json::object();
    }
    nlohmann::json snapshot = config_.snapshot;
    snapshot["seed"] = config_.seed;
    snapshot["out"] = config_.out.string();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
    manifest["tool"] = "topiclandscape";
    manifest["version"] = kToolVersion;
    manifest["stages"][stage_] = {{"config", snapshot},
                                  {"config_path", config_.source.string()},
                                  {"seed", config_.seed},
                                  {"inputs", inputs_},
                                  {"duration_seconds", seconds},
                                  {"outputs", outputs_},
                                  {"warnings", warnings_}};
    std::ofstream out(mpath, std::ios::binary | std::ios::trunc);
    out << manifest.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write " + mpath.string());
  }

 private:
  std::string stage_;
  const RunConfig& config_;
  std::ostream& err_;
  bool quiet_;
  std::chrono::steady_clock::time_point started_;
  Warnings warnings_;
  std::map<std::string, std::string> inputs_;
  std::vector<std::string> outputs_;
};

namespace stages {

inline const fs::path& need(const std::optional<fs::path>& p, const char* what) {
  if (!p) throw UsageError(std::string("config does not name a ") + what + " file");
  return *p;
}

inline CorpusIngest read_corpus(StageRun& run) {
  auto in = run.open_input(need(run.config().corpus, "corpus"));
  auto ci = ingest_corpus(in);
  if (ci.unknown_fields > 0)
    warn(run.warnings(), std::to_string(ci.unknown_fields) + " unknown corpus fields ignored");
  return ci;
}

inline Lexicon read_lexicon(StageRun& run) {
  auto in = run.open_input(need(run.config().lexicon, "lexicon"));
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw DataError("lexicon must be a JSON object mapping tokens to labels");
  Lexicon lex;
  for (const auto& [token, code] : j.items()) {
    auto l = code.is_string() ? parse_label_code(code.get<std::string>()) : std::nullopt;
    if (!l) throw DataError("lexicon entry '" + token + "' has unknown label " + code.dump());
    lex.emplace(token, *l);
  }
  return lex;
}

/// Predictions from the configured file, or from the lexicon baseline.
inline AnnotationSet read_annotations(StageRun& run, const Corpus& full) {
  const auto& c = run.config();
  if (c.predictions) {
    auto in = run.open_input(*c.predictions);
    return ingest_predictions(in, &full);
  }
  if (c.lexicon) {
    warn(run.warnings(), "no predictions file; using the lexicon baseline");
    return annotate_with_lexicon(full, read_lexicon(run));
  }
  throw UsageError("config names neither a predictions nor a lexicon file");
}

struct Prepared {
  Corpus corpus;
  FilterReport report;
  AnnotationSet annotations;
};

inline Prepared prepare(StageRun& run, bool with_annotations) {
  auto ci = read_corpus(run);
  Prepared p;
  AnnotationSet all;
  if (with_annotations) all = read_annotations(run, ci.corpus);
  auto fr = filter_corpus(ci.corpus, run.config().filter);
  p.corpus = std::move(fr.corpus);
  p.report = fr.report;
  if (with_annotations) p.annotations = restrict_annotations(all, p.corpus);
  run.log("corpus: " + std::to_string(p.report.speeches_out) + " of " +
          std::to_string(p.report.speeches_in) + " speeches kept");
  if (p.corpus.empty()) throw DataError("no speeches left after filtering");
  return p;
}

inline fs::path model_path(const RunConfig& c) {
  return c.model ? *c.model : c.out / "train-topics_model.json";
}

inline LdaModel read_model(StageRun& run) {
  const auto p = model_path(run.config());
  if (!fs::exists(p)) throw DataError("topic model not found: " + p.string());
  auto in = run.open_input(p);
  return load_model(in);
}

inline TopicLabelMap topic_labels(const RunConfig& c, std::size_t topics) {
  return TopicLabelMap(topics, c.topic_labels);
}

inline InferenceOptions inference_options(const RunConfig& c) {
  auto o = c.topics.inference;
  o.seed = c.seed;
  return o;
}

inline std::vector<TokenList> speech_documents(const Corpus& corpus) {
  std::vector<TokenList> docs;
  docs.reserve(corpus.size());
  for (const auto& sp : corpus.speeches()) {
    TokenList doc;
    for (const auto& s : sp.sentences) {
      auto toks = sentence_tokens(s);
      doc.insert(doc.end(), toks.begin(), toks.end());
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

inline void ingest(StageRun& run) {
  auto ci = read_corpus(run);
  run.write("corpus", "jsonl", [&](std::ostream& o) { emit_corpus(ci.corpus, o); });
  nlohmann::json summary = {{"speeches", ci.corpus.size()},
                            {"sentences", ci.corpus.sentence_count()},
                            {"unknown_fields", ci.unknown_fields},
                            {"segmented_records", ci.segmented_records}};
  if (run.config().predictions) {
    auto in = run.open_input(*run.config().predictions);
    auto ann = ingest_predictions(in, &ci.corpus);
    auto cov = coverage(ci.corpus, ann);
    summary["predictions"] = ann.size();
    summary["unlabeled_sentences"] = cov.unlabeled;
    run.write("predictions", "jsonl", [&](std::ostream& o) { emit_predictions(ann, o); });
  }
  run.write_json("summary", summary);
}

inline void filter(StageRun& run) {
  auto ci = read_corpus(run);
  auto fr = filter_corpus(ci.corpus, run.config().filter);
  run.write("corpus", "jsonl", [&](std::ostream& o) { emit_corpus(fr.corpus, o); });
  const auto& r = fr.report;
  run.write_json("report", {{"speeches_in", r.speeches_in},
                            {"speeches_removed_role", r.speeches_removed_role},
                            {"speeches_removed_short", r.speeches_removed_short},
                            {"speeches_out", r.speeches_out},
                            {"sentences_out", r.sentences_out}});
}

inline void train_topics(StageRun& run) {
  const auto& c = run.config();
  auto prep = prepare(run, false);
  auto docs = speech_documents(prep.corpus);
  auto vocab = build_vocabulary(docs, c.topics.min_count, c.topics.stopwords);
  auto params = c.topics.lda;
  params.seed = c.seed;
  run.log("training " + std::to_string(params.topics) + " topics over " +
          std::to_string(vocab.size()) + " word types");
  auto trained = train_lda_detailed(vocab, docs, params, run.warnings());
  run.write("model", "json", [&](std::ostream& o) { save_model(trained.model, o); });
  const auto labels = topic_labels(c, trained.model.topics());
  run.write("top_words", "csv",
            [&](std::ostream& o) { report::write_top_words_csv(trained.model, labels, 20, o); });
  run.write_json("summary", {{"documents", trained.document_index.size()},
                             {"vocabulary", vocab.size()},
                             {"topics", trained.model.topics()},
                             {"alpha", trained.model.alpha()},
                             {"beta", trained.model.beta()},
                             {"perplexity", trained.perplexity}});
}

inline void infer_topics_stage(StageRun& run) {
  const auto& c = run.config();
  auto prep = prepare(run, false);
  auto model = read_model(run);
  const auto labels = topic_labels(c, model.topics());
  auto opts = inference_options(c);
  run.write("speech_topics", "csv", [&](std::ostream& o) {
    o << "speech_id";
    for (std::size_t k = 0; k < model.topics(); ++k) o << ',' << detail::csv_escape(labels.label(k));
    o << '\n';
    std::uint64_t i = 0;
    for (const auto& sp : prep.corpus.speeches()) {
      TokenList doc;
      for (const auto& s : sp.sentences) {
        auto toks = sentence_tokens(s);
        doc.insert(doc.end(), toks.begin(), toks.end());
      }
      auto local = opts;
      local.seed = detail::derive_seed(c.seed, {0x5fe3u, i++});
      auto dist = infer_topics(model, std::span<const std::string>(doc), local);
      o << detail::csv_escape(sp.id);
      for (double v : dist.shares) o << ',' << detail::format_fixed(v, 6);
      o << '\n';
    }
  });
}

inline void annotate(StageRun& run) {
  auto ci = read_corpus(run);
  auto ann = annotate_with_lexicon(ci.corpus, read_lexicon(run));
  run.write("predictions", "jsonl", [&](std::ostream& o) { emit_predictions(ann, o); });
  run.write("distribution", "csv",
            [&](std::ostream& o) { report::write_distribution_csv(emotion_distribution(ann), o); });
}

struct Landscape {
  CrossTable table;
  RelativeDifferenceTable differences;
  std::vector<SkewnessGroup> groups;
  std::optional<PerLabel<double>> distribution;
};

inline Landscape compute_landscape(StageRun& run) {
  const auto& c = run.config();
  Landscape l;
  if (c.fixture == "appendix_b") {
    l.table = testkit::appendix_b_fixture().cross_table();
    if (!c.topic_labels.empty()) {
      const auto labels = topic_labels(c, l.table.topics());
      for (std::size_t k = 0; k < l.table.topics(); ++k)
        if (c.topic_labels.count(k)) l.table.topic_labels[k] = labels.label(k);
    }
    run.log("using the bundled cross-table fixture");
  } else {
    auto prep = prepare(run, true);
    l.distribution = emotion_distribution(prep.annotations);
    auto model = read_model(run);
    auto subs = build_subcorpora(prep.corpus, prep.annotations);
    l.table = topic_prevalences(model, subs, topic_labels(c, model.topics()),
                                inference_options(c), run.warnings());
  }
  l.differences = relative_differences(l.table, run.warnings());
  l.groups = classify_all(l.differences, c.skewness);
  return l;
}

inline void landscape(StageRun& run) {
  auto l = compute_landscape(run);
  if (l.distribution) {
    run.write("distribution", "csv",
              [&](std::ostream& o) { report::write_distribution_csv(*l.distribution, o); });
    run.write("sentiment", "csv", [&](std::ostream& o) {
      report::write_sentiment_csv(sentiment_rollup(*l.distribution), o);
    });
  }
  run.write("crosstable", "csv", [&](std::ostream& o) { report::write_crosstable_csv(l.table, o); });
  run.write("reldiff", "csv",
            [&](std::ostream& o) { report::write_reldiff_csv(l.differences, l.groups, o); });
  run.write("groups", "csv", [&](std::ostream& o) {
    report::write_groups_csv(l.differences, l.groups, run.config().skewness, o);
  });
}

inline void timeseries(StageRun& run) {
  const auto& c = run.config();
  auto prep = prepare(run, true);
  const auto windows = corpus_windows(prep.corpus, c.window_span, c.alignment);
  run.write("was", "csv", [&](std::ostream& o) {
    report::write_was_csv(rolling_was(prep.corpus, prep.annotations, windows, c.missing,
                                      run.warnings()),
                          o);
  });
  run.write("was_yearly", "csv", [&](std::ostream& o) {
    report::write_yearly_was_csv(yearly_was(prep.corpus, prep.annotations, c.missing), o);
  });
  run.write("shares", "csv", [&](std::ostream& o) {
    report::write_shares_csv(rolling_emotion_shares(prep.corpus, prep.annotations, windows), o);
  });
  if (!fs::exists(model_path(c))) {
    warn(run.warnings(), "no topic model at " + model_path(c).string() +
                             "; topic-emotion series skipped");
    return;
  }
  auto model = read_model(run);
  SeriesOptions opts{inference_options(c), c.topics.threads};
  run.log("inferring " + std::to_string(windows.size()) + " x 9 window cells");
  auto series = topic_emotion_series(model, prep.corpus, prep.annotations, windows,
                                     topic_labels(c, model.topics()), opts);
  run.write("topic_emotion", "csv",
            [&](std::ostream& o) { report::write_topic_emotion_csv(series, o); });
}

inline fs::path series_path(const RunConfig& c) {
  return c.series ? *c.series : c.out / "timeseries_topic_emotion.csv";
}

inline std::vector<TopicEmotionSeries> read_series(StageRun& run) {
  const auto& c = run.config();
  const auto p = series_path(c);
  if (!fs::exists(p)) throw DataError("topic-emotion series not found: " + p.string());
  auto in = run.open_input(p);
  return report::read_topic_emotion_csv(in, c.window_span, c.alignment);
}

inline void trends(StageRun& run) {
  auto series = read_series(run);
  auto results = detect_trends(series, run.config().trends);
  std::vector<TrendResult> meaningful;
  for (const auto& r : results)
    if (r.meaningful) meaningful.push_back(r);
  run.log(std::to_string(meaningful.size()) + " meaningful trends of " +
          std::to_string(results.size()));
  run.write("results", "csv", [&](std::ostream& o) { report::write_trends_csv(results, o); });
  run.write("meaningful", "csv", [&](std::ostream& o) { report::write_trends_csv(meaningful, o); });
}

inline const std::vector<std::string>& palette() {
  static const std::vector<std::string> colours = {
      "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e",
      "#e6ab02", "#a6761d", "#666666", "#1f78b4", "#b2df8a"};
  return colours;
}

inline void report_stage(StageRun& run, const std::vector<report::TableFormat>& formats) {
  const auto& c = run.config();
  auto l = compute_landscape(run);
  for (auto f : formats)
    run.write("heat", report::extension(f),
              [&](std::ostream& o) { report::emit_heat_table(l.differences, l.groups, f, o); });

  const bool have_series_inputs = c.corpus && (c.predictions || c.lexicon);
  if (have_series_inputs) {
    auto prep = prepare(run, true);
    const auto windows = corpus_windows(prep.corpus, c.window_span, c.alignment);
    const auto& speeches = prep.corpus.speeches();
    Date first = speeches.front().date, last = first;
    for (const auto& sp : speeches) {
      first = std::min(first, sp.date);
      last = std::max(last, sp.date);
    }
    report::check_election_range(c.elections, first, last, run.warnings());

    auto was = rolling_was(prep.corpus, prep.annotations, windows, c.missing, run.warnings());
    std::map<int, double> was_at;
    for (const auto& p : was) was_at[p.window.anchor.ordinal()] = p.was;
    report::ChartSeries was_series{"WAS", palette()[0], {}};
    for (const auto& w : windows) {
      auto it = was_at.find(w.anchor.ordinal());
      was_series.points.push_back(
          {report::decimal_year(w.anchor),
           it == was_at.end() ? std::nullopt : std::optional<double>(it->second)});
    }
    run.write("was", "svg", [&](std::ostream& o) {
      report::emit_timeseries_chart({was_series}, c.elections,
                                    {960, 420, "Weighted average sentiment", "WAS", {}}, o);
    });

    auto shares = rolling_emotion_shares(prep.corpus, prep.annotations, windows);
    std::vector<report::ChartSeries> share_series;
    for (auto lab : kAllLabels)
      share_series.push_back({std::string(label_code(lab)),
                              palette()[label_index(lab) % palette().size()], {}});
    std::map<std::pair<int, std::size_t>, double> share_at;
    for (const auto& p : shares) share_at[{p.window.anchor.ordinal(), label_index(p.label)}] = p.share;
    for (const auto& w : windows)
      for (auto lab : kAllLabels) {
        auto it = share_at.find({w.anchor.ordinal(), label_index(lab)});
        share_series[label_index(lab)].points.push_back(
            {report::decimal_year(w.anchor),
             it == share_at.end() ? std::nullopt : std::optional<double>(it->second)});
      }
    run.write("shares", "svg", [&](std::ostream& o) {
      report::emit_timeseries_chart(share_series, c.elections,
                                    {960, 420, "Emotion shares", "share", {}}, o);
    });
  }

  if (fs::exists(series_path(c))) {
    auto series = read_series(run);
    std::vector<report::ChartSeries> chart;
    for (const auto& s : series) {
      if (!detect_trend(s, c.trends).meaningful) continue;
      report::ChartSeries cs{s.topic_label + " / " + std::string(label_code(s.label)),
                             palette()[chart.size() % palette().size()], {}};
      for (const auto& p : s.points) cs.points.push_back({report::decimal_year(p.window.anchor), p.value});
      chart.push_back(std::move(cs));
    }
    if (chart.empty()) {
      run.log("no meaningful topic-emotion trends to chart");
    } else {
      run.write("trends", "svg", [&](std::ostream& o) {
        report::emit_timeseries_chart(chart, c.elections,
                                      {960, 420, "Meaningful topic-emotion trends", "prevalence", {}},
                                      o);
      });
    }
  }
}

inline void synth(StageRun& run, bool seed_overridden) {
  const auto& c = run.config();
  if (!c.synth) throw UsageError("config has no 'synth' section");
  auto spec = testkit::synth_spec_from_json(*c.synth);
  if (seed_overridden || !c.synth->contains("seed")) spec.seed = c.seed;
  auto out = testkit::generate_synthetic(spec);
  run.write("corpus", "jsonl", [&](std::ostream& o) { emit_corpus(out.corpus, o); });
  run.write("predictions", "jsonl", [&](std::ostream& o) { emit_predictions(out.predictions, o); });
  run.write_json("truth", out.truth);
}

}  // namespace stages

/// Input paths named by the config must exist before anything runs.
inline void check_inputs(const RunConfig& c) {
  for (const auto* p : {&c.corpus, &c.predictions, &c.lexicon})
    if (*p && !fs::exists(**p)) throw DataError("input file not found: " + (*p)->string());
}

inline void run_stage(const Invocation& inv, std::ostream& err) {
  auto config = load_config(inv.config);
  if (inv.seed) config.seed = *inv.seed;
  if (inv.out) config.out = *inv.out;
  std::vector<report::TableFormat> formats = config.formats;
  if (inv.format) {
    auto f = report::parse_table_format(*inv.format);
    if (!f) throw UsageError("unknown format '" + *inv.format + "'");
    formats = {*f};
  }
  if (inv.stage != "synth") check_inputs(config);

  fs::create_directories(config.out);
  OutputLock lock(config.out);
  StageRun run(inv.stage, config, err, inv.quiet);
  const std::string& s = inv.stage;
  if (s == "ingest") stages::ingest(run);
  else if (s == "filter") stages::filter(run);
  else if (s == "train-topics") stages::train_topics(run);
  else if (s == "infer-topics") stages::infer_topics_stage(run);
  else if (s == "annotate") stages::annotate(run);
  else if (s == "landscape") stages::landscape(run);
  else if (s == "timeseries") stages::timeseries(run);
  else if (s == "trends") stages::trends(run);
  else if (s == "report") stages::report_stage(run, formats);
  else if (s == "synth") stages::synth(run, inv.seed.has_value());
  else throw UsageError("unknown subcommand '" + s + "'");
  run.finish();
}

/// Parses argv and runs one stage. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topic and emotion landscapes of parliamentary speech corpora", "topiclandscape"};
  app.require_subcommand(1);
  Invocation inv;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"ingest", "Validate and normalize a corpus (and predictions)"},
      {"filter", "Drop chair speeches and short speeches"},
      {"train-topics", "Train the topic model on filtered speeches"},
      {"infer-topics", "Infer topic distributions for each speech"},
      {"annotate", "Label sentences with the lexicon baseline"},
      {"landscape", "Emotion distribution, topic x emotion table and skewness groups"},
      {"timeseries", "Rolling sentiment, emotion shares and topic-emotion series"},
      {"trends", "Linear trends of the topic-emotion series"},
      {"report", "Heat tables and time-series charts"},
      {"synth", "Generate a synthetic corpus with planted structure"}};
  for (const auto& [name, desc] : commands) {
    auto* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", inv.config, "Run configuration (JSON)")->required();
    sub->add_option("--seed", inv.seed, "Base seed (overrides the config)");
    sub->add_option("--out", inv.out, "Output directory (overrides the config)");
    sub->add_option("--format", inv.format, "Heat-table format: csv, markdown or html");
    sub->add_flag("--quiet", inv.quiet, "Suppress progress and warnings");
    sub->callback([&inv, sub] { inv.stage = sub->get_name(); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ExitCode::ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ExitCode::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return ExitCode::usage;
  }

  try {
    run_stage(inv, err);
    return ExitCode::ok;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return ExitCode::usage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return ExitCode::data;
  } catch (const nlohmann::json::exception& e) {
    err << "data error: " << e.what() << '\n';
    return ExitCode::data;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return ExitCode::data;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return ExitCode::internal;
  }
}

}  // namespace topiclandscape::cli
