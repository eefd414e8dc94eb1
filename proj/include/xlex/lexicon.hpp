#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xlex/attribution.hpp"
#include "xlex/textprep.hpp"

namespace xlex {

enum class Category { positive, negative, none };
enum class Source { xlex, lm };

std::string_view to_string(Category c);
std::string_view to_string(Source s);
Category parse_category(std::string_view text);  // throws DataError
Source parse_source(std::string_view text);      // throws DataError

// One word of a lexicon: stats of the category it was assigned to, stats of
// the category it was removed from, and the average-attribution ratio.
struct LexiconEntry {
  std::string word;
  Category category = Category::positive;
  WordStats selected;
  WordStats opposite;
  std::int64_t count_total = 0;
  double shap_ratio = 1.0;
  double shap_ratio_opp = 0.0;
  Source src = Source::xlex;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

// Word-sorted, one entry per word.
using Lexicon = std::vector<LexiconEntry>;

struct ResolvedTables {
  std::vector<LexiconEntry> positive;
  std::vector<LexiconEntry> negative;
};

// Replaces every word by its lemma and merges rows sharing a lemma: counts
// and sums add, max/min take extrema, avg is recomputed as sum / count.
WordStatsTable lemmatize_and_dedupe(const WordStatsTable& table, const LanguageResources& res);

// Assigns a word present in both tables to the side with the strictly larger
// attribution sum (ties go negative), moving the other side's stats into the
// opposite fields.
ResolvedTables resolve_cross_duplicates(const WordStatsTable& positive,
                                        const WordStatsTable& negative);

// Throws DuplicateWord if a word occurs on both sides.
Lexicon merge_polarities(std::vector<LexiconEntry> positive, std::vector<LexiconEntry> negative);

// Attribution records to XLex lexicon: split, accumulate, filter, lemmatize,
// resolve, merge.
Lexicon build_xlex(std::span<const AttributionRecord> records, const LanguageResources& res);

struct CategoryCounts {
  std::size_t positive = 0;
  std::size_t negative = 0;
};
CategoryCounts count_categories(const Lexicon& lexicon);

inline constexpr std::string_view kXLexHeader =
    "word,category,count,shap_sum,shap_avg,shap_max,shap_min,count_total,count_opp,"
    "shap_sum_opp,shap_avg_opp,shap_max_opp,shap_min_opp,shap_ratio,shap_ratio_opp,src";

void write_lexicon_csv(std::ostream& out, const Lexicon& lexicon);
Lexicon read_lexicon_csv(std::istream& in, std::string_view source = "<stream>");

}  // namespace xlex
