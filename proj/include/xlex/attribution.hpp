#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xlex/textprep.hpp"

namespace xlex {

// One token of one sentence and its signed attribution weight in [-1, 1].
struct AttributionRecord {
  std::int64_t sentence_id = 0;
  std::string token;
  double value = 0.0;

  friend bool operator==(const AttributionRecord&, const AttributionRecord&) = default;
};

// Aggregates over absolute attribution values of one word.
struct WordStats {
  std::int64_t count = 0;
  double shap_sum = 0.0;
  double shap_avg = 0.0;
  double shap_max = 0.0;
  double shap_min = 0.0;

  friend bool operator==(const WordStats&, const WordStats&) = default;
};

// Keyed by lowercase word; iteration order is the canonical word order.
using WordStatsTable = std::map<std::string, WordStats, std::less<>>;

struct WeightedWord {
  std::string word;
  double value = 0.0;  // absolute attribution
};

struct PolaritySplit {
  std::vector<WeightedWord> positive;
  std::vector<WeightedWord> negative;
};

inline constexpr std::string_view kAttributionHeader = "sentence_id,token,value";

// Parses `sentence_id,token,value` CSV. An empty stream yields no records.
// Throws MalformedRow or ValueOutOfRange with the offending line number.
std::vector<AttributionRecord> parse_attribution_file(std::istream& in,
                                                      std::string_view source = "<stream>");
std::vector<AttributionRecord> read_attribution_file(const std::filesystem::path& path);
void write_attribution_file(std::ostream& out, std::span<const AttributionRecord> records);

// Positive values go to `positive`, negative to `negative`, zeros are
// dropped. Words are lowercased and values stored as absolute values.
PolaritySplit split_by_polarity(std::span<const AttributionRecord> records);

WordStats make_word_stats(std::span<const double> abs_values);

// Values of each word are summed in ascending order, so the result does not
// depend on the order of `raw`.
WordStatsTable accumulate_word_stats(std::span<const WeightedWord> raw);

// Keeps the rows whose word passes LanguageResources::is_valid_word.
WordStatsTable postprocess(const WordStatsTable& table, const LanguageResources& res);

}  // namespace xlex
