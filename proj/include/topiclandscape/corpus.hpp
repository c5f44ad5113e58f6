#pragma once

// Corpus data model, newline-delimited JSON ingestion, sentence segmentation
// and the speech filter applied before every analysis.

#include <chrono>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "detail/text.hpp"
#include "error.hpp"

namespace topiclandscape {

using Date = std::chrono::year_month_day;

/// Parses a strict "YYYY-MM-DD" calendar date.
inline std::optional<Date> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto digits = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (text[i] < '0' || text[i] > '9') return std::nullopt;
      v = v * 10 + (text[i] - '0');
    }
    return v;
  };
  auto y = digits(0, 4), m = digits(5, 2), d = digits(8, 2);
  if (!y || !m || !d) return std::nullopt;
  Date date{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
            std::chrono::day{static_cast<unsigned>(*d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

inline std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

enum class SpeakerRole { member, speaker_of_parliament, minister, other };

inline std::string_view role_name(SpeakerRole r) {
  switch (r) {
    case SpeakerRole::member: return "member";
    case SpeakerRole::speaker_of_parliament: return "speaker_of_parliament";
    case SpeakerRole::minister: return "minister";
    case SpeakerRole::other: return "other";
  }
  return "other";
}

inline std::optional<SpeakerRole> parse_role(std::string_view s) {
  if (s == "member") return SpeakerRole::member;
  if (s == "speaker_of_parliament") return SpeakerRole::speaker_of_parliament;
  if (s == "minister") return SpeakerRole::minister;
  if (s == "other") return SpeakerRole::other;
  return std::nullopt;
}

struct Sentence {
  std::string speech_id;
  std::size_t index = 0;
  std::string text;
  /// Pre-lemmatized forms; when absent, tokens come from tokenize(text).
  std::optional<std::vector<std::string>> tokens;

  bool operator==(const Sentence&) const = default;
};

/// Tokens used for topic modelling and lexicon matching.
inline std::vector<std::string> sentence_tokens(const Sentence& s) {
  if (s.tokens) return *s.tokens;
  return detail::tokenize(s.text);
}

struct Speech {
  std::string id;
  Date date{};
  std::string speaker_id;
  SpeakerRole speaker_role = SpeakerRole::member;
  std::string language_tag;
  std::vector<Sentence> sentences;

  bool operator==(const Speech&) const = default;
};

/// Ordered collection of speeches with unique ids. Immutable once built, so
/// concurrent reads are safe.
class Corpus {
 public:
  /// Appends a speech; throws DataError on a duplicate id.
  void add(Speech speech) {
    auto [it, inserted] = index_.try_emplace(speech.id, speeches_.size());
    if (!inserted) throw DataError("duplicate speech id '" + speech.id + "'");
    speeches_.push_back(std::move(speech));
  }

  [[nodiscard]] const std::vector<Speech>& speeches() const { return speeches_; }
  [[nodiscard]] std::size_t size() const { return speeches_.size(); }
  [[nodiscard]] bool empty() const { return speeches_.empty(); }

  [[nodiscard]] const Speech* find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? nullptr : &speeches_[it->second];
  }

  [[nodiscard]] std::size_t sentence_count() const {
    std::size_t n = 0;
    for (const auto& s : speeches_) n += s.sentences.size();
    return n;
  }

  bool operator==(const Corpus& other) const { return speeches_ == other.speeches_; }

 private:
  std::vector<Speech> speeches_;
  std::unordered_map<std::string, std::size_t> index_;
};

namespace detail {

inline bool abbreviation_before(std::string_view text, std::size_t dot) {
  static const std::set<std::string, std::less<>> kAbbrev = {
      "mr", "mrs", "ms", "dr", "prof", "st", "jr", "sr", "vs", "etc", "no",
      "e.g", "i.e", "esim", "ns", "mm", "yms", "jne", "ed", "n:o", "ks", "vrt"};
  std::size_t start = dot;
  while (start > 0 && !is_space(text[start - 1])) --start;
  std::string_view word = text.substr(start, dot - start);
  while (!word.empty() && (word.front() == '(' || word.front() == '"')) word.remove_prefix(1);
  if (word.empty()) return false;
  return kAbbrev.contains(lowercase(word));
}

inline bool starts_sentence(std::string_view text, std::size_t pos) {
  auto c = static_cast<unsigned char>(text[pos]);
  while ((c == '"' || c == '(' || c == '\'') && pos + 1 < text.size())
    c = static_cast<unsigned char>(text[++pos]);
  if ((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) return true;
  // UTF-8 Latin-1 supplement capitals (Ä, Ö, Å, ...)
  if (c == 0xC3 && pos + 1 < text.size()) {
    auto n = static_cast<unsigned char>(text[pos + 1]);
    return n >= 0x80 && n <= 0x9E && n != 0x97;
  }
  return false;
}

}  // namespace detail

/// Splits raw text after runs of '.', '!' or '?' (plus closing quotes or
/// brackets) when followed by whitespace and an uppercase letter or digit.
/// A period ending a known abbreviation or single initial does not split.
inline std::vector<std::string> segment_sentences(std::string_view raw) {
  std::vector<std::string> out;
  std::size_t start = 0;
  std::size_t i = 0;
  auto emit = [&](std::size_t end) {
    auto piece = detail::trim(raw.substr(start, end - start));
    if (!piece.empty()) out.emplace_back(piece);
    start = end;
  };
  while (i < raw.size()) {
    char c = raw[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t term = i;
    std::size_t j = i;
    while (j < raw.size() && (raw[j] == '.' || raw[j] == '!' || raw[j] == '?')) ++j;
    while (j < raw.size() && (raw[j] == '"' || raw[j] == ')' || raw[j] == '\'')) ++j;
    std::size_t k = j;
    while (k < raw.size() && detail::is_space(raw[k])) ++k;
    bool boundary = k > j && k < raw.size() && detail::starts_sentence(raw, k);
    if (boundary && raw[term] == '.' && j == term + 1 && detail::abbreviation_before(raw, term))
      boundary = false;
    if (boundary) emit(j);
    i = j;
  }
  emit(raw.size());
  return out;
}

struct CorpusIngest {
  Corpus corpus;
  std::size_t unknown_fields = 0;
  std::size_t segmented_records = 0;
};

namespace detail {

[[noreturn]] inline void record_error(std::size_t line, const std::string& what) {
  throw DataError("line " + std::to_string(line) + ": " + what);
}

inline const nlohmann::json& required(const nlohmann::json& obj, const char* key,
                                      std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) record_error(line, std::string("missing field '") + key + "'");
  return *it;
}

inline std::string required_string(const nlohmann::json& obj, const char* key,
                                   std::size_t line) {
  const auto& v = required(obj, key, line);
  if (!v.is_string()) record_error(line, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace detail

/// Reads one speech per line. Blank lines are skipped; unknown fields are
/// counted. A record may carry raw "text" instead of "sentences", in which
/// case it is segmented.
inline CorpusIngest ingest_corpus(std::istream& in) {
  using nlohmann::json;
  static const std::set<std::string, std::less<>> kKnown = {
      "id", "date", "speaker_id", "speaker_role", "language", "sentences", "text"};
  CorpusIngest result;
  std::unordered_map<std::string, std::size_t> first_line;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object())
      detail::record_error(line_no, "malformed record (not a JSON object)");

    Speech sp;
    sp.id = detail::required_string(rec, "id", line_no);
    if (detail::trim(sp.id).empty()) detail::record_error(line_no, "empty speech id");
    if (auto [it, fresh] = first_line.try_emplace(sp.id, line_no); !fresh)
      detail::record_error(line_no, "duplicate speech id '" + sp.id + "' (first seen at line " +
                                        std::to_string(it->second) + ")");

    auto date_text = detail::required_string(rec, "date", line_no);
    auto date = parse_date(date_text);
    if (!date) detail::record_error(line_no, "unparseable date '" + date_text + "'");
    sp.date = *date;

    sp.speaker_id = detail::required_string(rec, "speaker_id", line_no);
    auto role_text = detail::required_string(rec, "speaker_role", line_no);
    auto role = parse_role(role_text);
    if (!role) detail::record_error(line_no, "unknown speaker_role '" + role_text + "'");
    sp.speaker_role = *role;
    sp.language_tag = detail::required_string(rec, "language", line_no);

    for (const auto& [key, _] : rec.items())
      if (!kKnown.contains(key)) ++result.unknown_fields;

    if (auto it = rec.find("sentences"); it != rec.end()) {
      if (!it->is_array()) detail::record_error(line_no, "field 'sentences' must be an array");
      for (const auto& s : *it) {
        if (!s.is_object()) detail::record_error(line_no, "sentence entries must be objects");
        Sentence sent;
        sent.speech_id = sp.id;
        sent.index = sp.sentences.size();
        sent.text = detail::required_string(s, "text", line_no);
        if (detail::trim(sent.text).empty())
          detail::record_error(line_no, "empty sentence text at index " +
                                            std::to_string(sent.index));
        if (auto tk = s.find("tokens"); tk != s.end() && !tk->is_null()) {
          if (!tk->is_array()) detail::record_error(line_no, "field 'tokens' must be an array");
          std::vector<std::string> tokens;
          for (const auto& t : *tk) {
            if (!t.is_string() || t.get_ref<const std::string&>().empty())
              detail::record_error(line_no, "tokens must be nonempty strings");
            tokens.push_back(t.get<std::string>());
          }
          sent.tokens = std::move(tokens);
        }
        for (const auto& [key, _] : s.items())
          if (key != "text" && key != "tokens") ++result.unknown_fields;
        sp.sentences.push_back(std::move(sent));
      }
    } else if (auto tx = rec.find("text"); tx != rec.end() && tx->is_string()) {
      for (auto& piece : segment_sentences(tx->get_ref<const std::string&>())) {
        Sentence sent{sp.id, sp.sentences.size(), std::move(piece), std::nullopt};
        sp.sentences.push_back(std::move(sent));
      }
      ++result.segmented_records;
    } else {
      detail::record_error(line_no, "record has neither 'sentences' nor 'text'");
    }
    result.corpus.add(std::move(sp));
  }
  return result;
}

/// Writes the corpus in the ingestion format; ingest_corpus reads it back
/// to an equal corpus.
inline void emit_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& sp : corpus.speeches()) {
    nlohmann::json rec;
    rec["id"] = sp.id;
    rec["date"] = format_date(sp.date);
    rec["speaker_id"] = sp.speaker_id;
    rec["speaker_role"] = std::string(role_name(sp.speaker_role));
    rec["language"] = sp.language_tag;
    auto sentences = nlohmann::json::array();
    for (const auto& s : sp.sentences) {
      nlohmann::json js;
      js["text"] = s.text;
      if (s.tokens) js["tokens"] = *s.tokens;
      sentences.push_back(std::move(js));
    }
    rec["sentences"] = std::move(sentences);
    out << rec.dump() << '\n';
  }
}

struct FilterOptions {
  std::size_t min_sentences = 5;
  std::set<SpeakerRole> excluded_roles = {SpeakerRole::speaker_of_parliament};
};

struct FilterReport {
  std::size_t speeches_in = 0;
  std::size_t speeches_removed_role = 0;
  std::size_t speeches_removed_short = 0;
  std::size_t speeches_out = 0;
  std::size_t sentences_out = 0;

  bool operator==(const FilterReport&) const = default;
};

struct FilterResult {
  Corpus corpus;
  FilterReport report;
};

/// Drops speeches by excluded roles, then speeches shorter than
/// min_sentences. A speech failing both checks counts as a role removal.
inline FilterResult filter_corpus(const Corpus& corpus, const FilterOptions& options = {}) {
  FilterResult result;
  auto& rep = result.report;
  rep.speeches_in = corpus.size();
  for (const auto& sp : corpus.speeches()) {
    if (options.excluded_roles.contains(sp.speaker_role)) {
      ++rep.speeches_removed_role;
    } else if (sp.sentences.size() < options.min_sentences) {
      ++rep.speeches_removed_short;
    } else {
      rep.sentences_out += sp.sentences.size();
      result.corpus.add(sp);
    }
  }
  rep.speeches_out = result.corpus.size();
  return result;
}

}  // namespace topiclandscape
