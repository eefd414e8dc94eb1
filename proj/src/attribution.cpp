#include "xlex/attribution.hpp"

#include <algorithm>
#include <cmath>

#include "xlex/csv.hpp"
#include "xlex/error.hpp"

namespace xlex {

namespace {
constexpr double kRangeSlack = 1e-9;
}

std::vector<AttributionRecord> parse_attribution_file(std::istream& in, std::string_view source) {
  csv::Reader reader(in);
  reader.set_source(std::string(source));
  std::vector<AttributionRecord> records;
  std::vector<std::string> fields;

  if (!reader.next(fields)) return records;
  if (fields.size() != 3 || fields[0] != "sentence_id" || fields[1] != "token" ||
      fields[2] != "value") {
    throw MalformedRow(std::string(source), reader.line(),
                       "expected header '" + std::string(kAttributionHeader) + "'");
  }

  while (reader.next(fields)) {
    const auto line = reader.line();
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() != 3) {
      throw MalformedRow(std::string(source), line,
                         "expected 3 fields, got " + std::to_string(fields.size()));
    }
    const auto id = csv::parse_integer(fields[0]);
    if (!id || *id < 0) {
      throw MalformedRow(std::string(source), line, "bad sentence_id '" + fields[0] + "'");
    }
    if (fields[1].empty()) throw MalformedRow(std::string(source), line, "empty token");
    const auto value = csv::parse_real(fields[2]);
    if (!value) throw MalformedRow(std::string(source), line, "bad value '" + fields[2] + "'");
    if (std::abs(*value) > 1.0 + kRangeSlack) {
      throw ValueOutOfRange(std::string(source), line,
                            "attribution " + fields[2] + " outside [-1, 1]");
    }
    records.push_back(AttributionRecord{*id, std::move(fields[1]), *value});
  }
  return records;
}

std::vector<AttributionRecord> read_attribution_file(const std::filesystem::path& path) {
  auto in = csv::open_input(path);
  return parse_attribution_file(in, path.string());
}

void write_attribution_file(std::ostream& out, std::span<const AttributionRecord> records) {
  out << kAttributionHeader << '\n';
  for (const auto& r : records) {
    csv::write_row(out, {std::to_string(r.sentence_id), r.token, csv::format_real(r.value)});
  }
}

PolaritySplit split_by_polarity(std::span<const AttributionRecord> records) {
  PolaritySplit split;
  for (const auto& r : records) {
    if (r.value > 0.0) {
      split.positive.push_back({to_lower(r.token), r.value});
    } else if (r.value < 0.0) {
      split.negative.push_back({to_lower(r.token), -r.value});
    }
  }
  return split;
}

WordStats make_word_stats(std::span<const double> abs_values) {
  WordStats s;
  if (abs_values.empty()) return s;
  std::vector<double> sorted(abs_values.begin(), abs_values.end());
  std::sort(sorted.begin(), sorted.end());
  s.count = static_cast<std::int64_t>(sorted.size());
  for (double v : sorted) s.shap_sum += v;
  s.shap_avg = s.shap_sum / static_cast<double>(s.count);
  s.shap_min = sorted.front();
  s.shap_max = sorted.back();
  // The mean of rounded summands can land an ulp outside [min, max].
  s.shap_avg = std::clamp(s.shap_avg, s.shap_min, s.shap_max);
  return s;
}

WordStatsTable accumulate_word_stats(std::span<const WeightedWord> raw) {
  std::map<std::string, std::vector<double>, std::less<>> grouped;
  for (const auto& w : raw) grouped[w.word].push_back(w.value);
  WordStatsTable table;
  for (auto& [word, values] : grouped) table.emplace(word, make_word_stats(values));
  return table;
}

WordStatsTable postprocess(const WordStatsTable& table, const LanguageResources& res) {
  WordStatsTable out;
  for (const auto& [word, stats] : table) {
    if (res.is_valid_word(word)) out.emplace_hint(out.end(), word, stats);
  }
  return out;
}

}  // namespace xlex
