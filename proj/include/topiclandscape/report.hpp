#pragma once

// File emitters: CSV tables and series, heat-map tables (CSV, Markdown,
// HTML) and standalone SVG time-series charts.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.hpp"
#include "detail/text.hpp"
#include "diachronic.hpp"
#include "emotion.hpp"
#include "error.hpp"
#include "synchronic.hpp"
#include "topic_model.hpp"

namespace topiclandscape::report {

using detail::csv_escape;
using detail::format_fixed;

enum class TableFormat { csv, markdown, html };

inline std::optional<TableFormat> parse_table_format(std::string_view s) {
  if (s == "csv") return TableFormat::csv;
  if (s == "markdown" || s == "md") return TableFormat::markdown;
  if (s == "html") return TableFormat::html;
  return std::nullopt;
}

inline std::string_view extension(TableFormat f) {
  switch (f) {
    case TableFormat::csv: return "csv";
    case TableFormat::markdown: return "md";
    case TableFormat::html: return "html";
  }
  return "csv";
}

inline void write_label_header(std::ostream& out) {
  for (auto l : kAllLabels) out << ',' << label_code(l);
}

inline void write_distribution_csv(const PerLabel<double>& dist, std::ostream& out) {
  out << "emotion_code,share\n";
  for (auto l : kAllLabels) out << label_code(l) << ',' << format_fixed(dist[label_index(l)], 6) << '\n';
}

inline void write_sentiment_csv(const SentimentShares& s, std::ostream& out) {
  out << "polarity,share\n"
      << "positive," << format_fixed(s.positive, 6) << '\n'
      << "negative," << format_fixed(s.negative, 6) << '\n'
      << "neutral," << format_fixed(s.neutral, 6) << '\n';
}

inline void write_crosstable_csv(const CrossTable& table, std::ostream& out) {
  const auto averages = topic_averages(table);
  out << "topic";
  write_label_header(out);
  out << ",average\n";
  for (std::size_t t = 0; t < table.topics(); ++t) {
    out << csv_escape(table.topic_labels[t]);
    for (double v : table.prevalence[t]) out << ',' << format_fixed(v, 6);
    out << ',' << format_fixed(averages[t], 6) << '\n';
  }
}

/// Wide relative-difference table with the topic's group.
inline void write_reldiff_csv(const RelativeDifferenceTable& table,
                              const std::vector<SkewnessGroup>& groups, std::ostream& out) {
  out << "topic";
  write_label_header(out);
  out << ",average,group\n";
  for (std::size_t t = 0; t < table.topics(); ++t) {
    out << csv_escape(table.topic_labels[t]);
    for (double v : table.rows[t]) out << ',' << format_fixed(v, 6);
    out << ',' << format_fixed(table.averages[t], 6) << ',' << group_name(groups.at(t)) << '\n';
  }
}

inline std::string join_codes(const std::vector<EmotionLabel>& labels) {
  std::string s;
  for (auto l : labels) s += (s.empty() ? "" : ";") + std::string(label_code(l));
  return s;
}

inline void write_groups_csv(const RelativeDifferenceTable& table,
                             const std::vector<SkewnessGroup>& groups,
                             const SkewnessOptions& options, std::ostream& out) {
  out << "topic,group,overrepresented,underrepresented\n";
  for (std::size_t t = 0; t < table.topics(); ++t) {
    const auto rounded = detail::rounded_row(table.rows[t], options);
    std::vector<EmotionLabel> over;
    for (auto l : kAllLabels)
      if (rounded[label_index(l)] >= options.threshold) over.push_back(l);
    out << csv_escape(table.topic_labels[t]) << ',' << group_name(groups.at(t)) << ','
        << join_codes(over) << ',' << join_codes(underrepresented(table.rows[t], options))
        << '\n';
  }
}

/// Heat-map row order: by group (polarized, negatively, neutrally,
/// positively skewed, average with the POSI subgroup first), then by topic.
inline std::vector<std::size_t> heat_row_order(const RelativeDifferenceTable& table,
                                               const std::vector<SkewnessGroup>& groups) {
  std::vector<std::size_t> order(table.topics());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (groups[a] != groups[b]) return groups[a] < groups[b];
    return table.topic_labels[a] < table.topic_labels[b];
  });
  return order;
}

namespace markup {

inline std::string html_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Diverging colour: white at 0, red toward +1 and beyond, blue toward -1.
inline std::string heat_colour(double v) {
  const double t = std::clamp(std::fabs(v), 0.0, 1.0);
  const int fade = static_cast<int>(std::lround(255.0 * (1.0 - 0.75 * t)));
  char buf[16];
  if (v >= 0) std::snprintf(buf, sizeof buf, "#ff%02x%02x", fade, fade);
  else std::snprintf(buf, sizeof buf, "#%02x%02xff", fade, fade);
  return buf;
}

}  // namespace markup

/// Relative differences at 2 decimals, cells above +0.5 highlighted. CSV
/// output is long-form with a boolean bold column.
inline void emit_heat_table(const RelativeDifferenceTable& table,
                            const std::vector<SkewnessGroup>& groups, TableFormat format,
                            std::ostream& out) {
  if (groups.size() != table.topics()) throw UsageError("one group per topic required");
  for (const auto& row : table.rows)
    for (double v : row)
      if (!std::isfinite(v)) throw DataError("heat table has non-finite entries");
  const auto order = heat_row_order(table, groups);

  switch (format) {
    case TableFormat::csv:
      out << "group,topic,emotion_code,value,bold\n";
      for (auto t : order)
        for (auto l : kAllLabels) {
          double v = table.rows[t][label_index(l)];
          out << group_name(groups[t]) << ',' << csv_escape(table.topic_labels[t]) << ','
              << label_code(l) << ',' << format_fixed(v, 2) << ','
              << (is_bold(v) ? "true" : "false") << '\n';
        }
      break;
    case TableFormat::markdown: {
      out << "| group | topic |";
      for (auto l : kAllLabels) out << ' ' << label_code(l) << " |";
      out << "\n|---|---|";
      for (std::size_t i = 0; i < kLabelCount; ++i) out << "---:|";
      out << '\n';
      for (auto t : order) {
        out << "| " << group_name(groups[t]) << " | " << table.topic_labels[t] << " |";
        for (double v : table.rows[t]) {
          const auto s = format_fixed(v, 2);
          out << ' ' << (is_bold(v) ? "**" + s + "**" : s) << " |";
        }
        out << '\n';
      }
      break;
    }
    case TableFormat::html: {
      out << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>Topic-emotion heat "
             "map</title>\n<style>table{border-collapse:collapse;font-family:sans-serif}"
             "td,th{padding:2px 8px;border:1px solid #ccc}td.v{text-align:right}"
             "tr.posi-subgroup td.topic{background:#ffd6d6}</style></head><body>\n<table>\n"
             "<tr><th>group</th><th>topic</th>";
      for (auto l : kAllLabels) out << "<th>" << label_code(l) << "</th>";
      out << "</tr>\n";
      for (auto t : order) {
        out << "<tr"
            << (groups[t] == SkewnessGroup::average_posi_subgroup ? " class=\"posi-subgroup\""
                                                                  : "")
            << "><td>" << group_name(groups[t]) << "</td><td class=\"topic\">"
            << markup::html_escape(table.topic_labels[t]) << "</td>";
        for (double v : table.rows[t]) {
          const auto s = format_fixed(v, 2);
          out << "<td class=\"v\" style=\"background:" << markup::heat_colour(v) << "\">"
              << (is_bold(v) ? "<b>" + s + "</b>" : s) << "</td>";
        }
        out << "</tr>\n";
      }
      out << "</table>\n</body></html>\n";
      break;
    }
  }
}

inline void write_top_words_csv(const LdaModel& model, const TopicLabelMap& labels,
                                std::size_t n, std::ostream& out) {
  out << "topic,topic_label,rank,token,probability\n";
  for (std::size_t k = 0; k < model.topics(); ++k) {
    auto words = top_words(model, k, n);
    for (std::size_t r = 0; r < words.size(); ++r)
      out << k << ',' << csv_escape(labels.label(k)) << ',' << r + 1 << ','
          << csv_escape(words[r].first) << ',' << format_fixed(words[r].second, 8) << '\n';
  }
}

inline void write_was_csv(const std::vector<WasPoint>& points, std::ostream& out) {
  out << "window_end,was,n_speeches\n";
  for (const auto& p : points)
    out << p.window.last.str() << ',' << format_fixed(p.was, 8) << ',' << p.n_speeches << '\n';
}

inline void write_yearly_was_csv(const std::vector<YearlyWas>& points, std::ostream& out) {
  out << "year,was,n_speeches\n";
  for (const auto& p : points)
    out << p.year << ',' << format_fixed(p.was, 8) << ',' << p.n_speeches << '\n';
}

inline void write_shares_csv(const std::vector<EmotionSharePoint>& points, std::ostream& out) {
  out << "window_end,emotion_code,share\n";
  for (const auto& p : points)
    out << p.window.last.str() << ',' << label_code(p.label) << ',' << format_fixed(p.share, 8)
        << '\n';
}

/// Long format, one row per (window, topic, label); gaps have an empty
/// prevalence field.
inline void write_topic_emotion_csv(const std::vector<TopicEmotionSeries>& series,
                                    std::ostream& out) {
  out << "window_end,topic_label,emotion_code,prevalence\n";
  for (const auto& s : series)
    for (const auto& p : s.points)
      out << p.window.last.str() << ',' << csv_escape(s.topic_label) << ','
          << label_code(s.label) << ',' << (p.value ? format_fixed(*p.value, 8) : "") << '\n';
}

/// Reads write_topic_emotion_csv output back. Topics are numbered by first
/// appearance.
inline std::vector<TopicEmotionSeries> read_topic_emotion_csv(
    std::istream& in, int span = 3, WindowAlignment align = WindowAlignment::trailing) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("series file is empty");
  const auto header = detail::csv_split(line);
  if (header.size() != 4 || header[0] != "window_end" || header[3] != "prevalence")
    throw DataError("series file header must be window_end,topic_label,emotion_code,prevalence");
  std::map<std::string, std::size_t> topic_ids;
  std::map<std::pair<std::size_t, std::size_t>, TopicEmotionSeries> by_key;
  // anchor of a window given its last month
  const int end_offset = align == WindowAlignment::trailing ? 0 : (span - 1) - (span - 1) / 2;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    auto f = detail::csv_split(line);
    auto bad = [&](const std::string& why) {
      return DataError("series file line " + std::to_string(line_no) + ": " + why);
    };
    if (f.size() != 4) throw bad("expected 4 fields");
    auto end = parse_year_month(f[0]);
    if (!end) throw bad("bad window_end '" + f[0] + "'");
    auto label = parse_label_code(f[2]);
    if (!label) throw bad("unknown emotion code '" + f[2] + "'");
    auto [tid, _] = topic_ids.try_emplace(f[1], topic_ids.size());
    auto& s = by_key[{tid->second, label_index(*label)}];
    s.topic = tid->second;
    s.topic_label = f[1];
    s.label = *label;
    SeriesPoint p{make_window(YearMonth::from_ordinal(end->ordinal() - end_offset), span, align),
                  std::nullopt};
    if (!f[3].empty()) {
      try {
        p.value = std::stod(f[3]);
      } catch (const std::exception&) {
        throw bad("bad prevalence '" + f[3] + "'");
      }
    }
    s.points.push_back(p);
  }
  std::vector<TopicEmotionSeries> out;
  for (auto& [_, s] : by_key) {
    std::sort(s.points.begin(), s.points.end(), [](const SeriesPoint& a, const SeriesPoint& b) {
      return a.window.anchor < b.window.anchor;
    });
    out.push_back(std::move(s));
  }
  return out;
}

inline void write_trends_csv(const std::vector<TrendResult>& results, std::ostream& out) {
  out << "topic_label,emotion_code,slope,intercept,r_squared,p_value,n_points,meaningful\n";
  char p_buf[32];
  for (const auto& r : results) {
    std::snprintf(p_buf, sizeof p_buf, "%.6e", r.p_value);
    out << csv_escape(r.topic_label) << ',' << label_code(r.label) << ','
        << detail::format_general(r.slope) << ','
        << detail::format_general(r.intercept) << ','
        << format_fixed(r.r_squared, 6) << ',' << p_buf << ',' << r.n_points << ','
        << (r.meaningful ? "true" : "false") << '\n';
  }
}

// ---------------------------------------------------------------------------
// SVG charts

struct ElectionCalendar {
  std::vector<Date> dates;
};

/// Warns about election dates outside [first, last].
inline void check_election_range(const ElectionCalendar& cal, const Date& first,
                                 const Date& last, Warnings* warnings) {
  for (const auto& d : cal.dates)
    if (d < first || d > last)
      warn(warnings, "election date " + format_date(d) + " lies outside the corpus range");
}

inline double decimal_year(const Date& d) {
  using namespace std::chrono;
  const auto y = d.year();
  const auto start = sys_days{y / January / 1};
  const auto next = sys_days{(y + years{1}) / January / 1};
  return static_cast<int>(y) + static_cast<double>((sys_days{d} - start).count()) /
                                   static_cast<double>((next - start).count());
}

/// Middle of a calendar month.
inline double decimal_year(const YearMonth& m) {
  return m.year + (static_cast<double>(m.month) - 0.5) / 12.0;
}

struct ChartPoint {
  double x = 0.0;
  /// nullopt breaks the line.
  std::optional<double> y;
};

struct ChartSeries {
  std::string name;
  std::string colour = "#000000";
  std::vector<ChartPoint> points;
};

struct ChartStyle {
  int width = 960;
  int height = 420;
  std::string title;
  std::string y_label;
  /// Fixed y range; derived from the data when absent.
  std::optional<std::pair<double, double>> y_range;
};

/// Self-contained SVG: one polyline per unbroken run of each series, a
/// dashed vertical line per election inside the plotted x range, year ticks
/// and a legend. Output depends only on the inputs.
inline void emit_timeseries_chart(const std::vector<ChartSeries>& series,
                                  const ElectionCalendar& elections, const ChartStyle& style,
                                  std::ostream& out) {
  double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
  std::size_t n_points = 0;
  for (const auto& s : series)
    for (const auto& p : s.points) {
      x_lo = std::min(x_lo, p.x);
      x_hi = std::max(x_hi, p.x);
      if (p.y) {
        y_lo = std::min(y_lo, *p.y);
        y_hi = std::max(y_hi, *p.y);
        ++n_points;
      }
    }
  if (n_points == 0) throw DataError("chart needs at least one series point");
  if (style.y_range) std::tie(y_lo, y_hi) = *style.y_range;
  if (x_hi <= x_lo) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  if (y_hi <= y_lo) {
    y_lo -= 0.5;
    y_hi += 0.5;
  } else {
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;
  }

  const double left = 70, right = 170, top = 40, bottom = 50;
  const double plot_w = style.width - left - right;
  const double plot_h = style.height - top - bottom;
  auto sx = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto sy = [&](double y) { return top + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h; };
  auto f2 = [](double v) { return format_fixed(v, 2); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\""
      << style.height << "\" viewBox=\"0 0 " << style.width << ' ' << style.height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << style.width << "\" height=\"" << style.height
      << "\" fill=\"#ffffff\"/>\n";
  if (!style.title.empty())
    out << "<text x=\"" << f2(left) << "\" y=\"24\" font-size=\"15\">"
        << markup::html_escape(style.title) << "</text>\n";

  // axes
  out << "<g class=\"axes\" stroke=\"#333333\">\n";
  out << "<line x1=\"" << f2(left) << "\" y1=\"" << f2(top + plot_h) << "\" x2=\""
      << f2(left + plot_w) << "\" y2=\"" << f2(top + plot_h) << "\"/>\n";
  out << "<line x1=\"" << f2(left) << "\" y1=\"" << f2(top) << "\" x2=\"" << f2(left) << "\" y2=\""
      << f2(top + plot_h) << "\"/>\n</g>\n";

  const int first_year = static_cast<int>(std::ceil(x_lo));
  const int last_year = static_cast<int>(std::floor(x_hi));
  const int year_step = std::max(1, (last_year - first_year) / 20 + 1);
  out << "<g class=\"x-ticks\">\n";
  for (int y = first_year; y <= last_year; y += year_step) {
    const double px = sx(y);
    out << "<line x1=\"" << f2(px) << "\" y1=\"" << f2(top + plot_h) << "\" x2=\"" << f2(px)
        << "\" y2=\"" << f2(top + plot_h + 5) << "\" stroke=\"#333333\"/>";
    out << "<text x=\"" << f2(px) << "\" y=\"" << f2(top + plot_h + 18)
        << "\" text-anchor=\"middle\">" << y << "</text>\n";
  }
  out << "</g>\n<g class=\"y-ticks\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = y_lo + (y_hi - y_lo) * i / 4.0;
    out << "<text x=\"" << f2(left - 6) << "\" y=\"" << f2(sy(v) + 4)
        << "\" text-anchor=\"end\">" << format_fixed(v, 3) << "</text>\n";
  }
  out << "</g>\n";
  if (!style.y_label.empty())
    out << "<text transform=\"translate(16," << f2(top + plot_h / 2)
        << ") rotate(-90)\" text-anchor=\"middle\">" << markup::html_escape(style.y_label)
        << "</text>\n";

  out << "<g class=\"elections\">\n";
  for (const auto& d : elections.dates) {
    const double x = decimal_year(d);
    if (x < x_lo || x > x_hi) continue;
    out << "<line class=\"election\" x1=\"" << f2(sx(x)) << "\" y1=\"" << f2(top) << "\" x2=\""
        << f2(sx(x)) << "\" y2=\"" << f2(top + plot_h)
        << "\" stroke=\"#777777\" stroke-dasharray=\"6,4\"><title>" << format_date(d)
        << "</title></line>\n";
  }
  out << "</g>\n";

  for (const auto& s : series) {
    out << "<g class=\"series\" fill=\"none\" stroke=\"" << s.colour
        << "\" stroke-width=\"1.5\">\n";
    std::string run;
    auto flush = [&] {
      if (!run.empty()) out << "<polyline points=\"" << run << "\"/>\n";
      run.clear();
    };
    for (const auto& p : s.points) {
      if (!p.y) {
        flush();
        continue;
      }
      if (!run.empty()) run += ' ';
      run += f2(sx(p.x)) + ',' + f2(sy(*p.y));
    }
    flush();
    out << "</g>\n";
  }

  out << "<g class=\"legend\">\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double ly = top + 14.0 + 18.0 * static_cast<double>(i);
    const double lx = left + plot_w + 12;
    out << "<rect x=\"" << f2(lx) << "\" y=\"" << f2(ly - 9) << "\" width=\"14\" height=\"4\" fill=\""
        << series[i].colour << "\"/><text x=\"" << f2(lx + 20) << "\" y=\"" << f2(ly - 4) << "\">"
        << markup::html_escape(series[i].name) << "</text>\n";
  }
  out << "</g>\n</svg>\n";
}

}  // namespace topiclandscape::report
