#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xlex/lexicon.hpp"
#include "xlex/textprep.hpp"

namespace xlex {

// Version of the lexicon CSV layouts; bumped on any column change.
inline constexpr int kLexiconFormatVersion = 1;

enum class Side { xlex, lm };

// Numeric feature columns of one prefixed group, in file order.
enum class Field : std::size_t {
  count,
  count_total,
  count_opp,
  shap_sum,
  shap_avg,
  shap_max,
  shap_min,
  shap_ratio,
  shap_sum_opp,
  shap_avg_opp,
  shap_max_opp,
  shap_min_opp,
  shap_ratio_opp,
};
inline constexpr std::size_t kFieldCount = 13;
inline constexpr std::array<std::string_view, kFieldCount> kFieldNames = {
    "count",        "count_total",  "count_opp",    "shap_sum",     "shap_avg",
    "shap_max",     "shap_min",     "shap_ratio",   "shap_sum_opp", "shap_avg_opp",
    "shap_max_opp", "shap_min_opp", "shap_ratio_opp"};

struct FeatureGroup {
  Category category = Category::none;
  Source src = Source::xlex;
  std::array<double, kFieldCount> values{};

  double operator[](Field f) const { return values[static_cast<std::size_t>(f)]; }
  double& operator[](Field f) { return values[static_cast<std::size_t>(f)]; }

  friend bool operator==(const FeatureGroup&, const FeatureGroup&) = default;
};

FeatureGroup to_feature_group(const LexiconEntry& entry);
LexiconEntry to_lexicon_entry(const std::string& word, const FeatureGroup& group);

struct CombinedEntry {
  std::string word;
  FeatureGroup xlex;
  FeatureGroup lm;

  const FeatureGroup& group(Side side) const { return side == Side::xlex ? xlex : lm; }
  FeatureGroup& group(Side side) { return side == Side::xlex ? xlex : lm; }

  friend bool operator==(const CombinedEntry&, const CombinedEntry&) = default;
};

// Word-keyed XLex+LM table. Entries are kept sorted by word.
class CombinedLexicon {
 public:
  CombinedLexicon() = default;
  // Throws DuplicateWord when two entries share a word.
  CombinedLexicon(std::vector<CombinedEntry> entries, bool normalized);

  const CombinedEntry* find(std::string_view word) const;
  std::span<const CombinedEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool normalized() const { return normalized_; }

  // Free-form name of the data the XLex part was built from.
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

 private:
  std::vector<CombinedEntry> entries_;
  StringMap<std::size_t> index_;
  bool normalized_ = false;
  std::string name_;
};

// LM word lists to lexicon entries with the default feature values (selected
// features 1, opposite features 0). Duplicate lemmas within a list collapse
// to one entry; a lemma in both lists throws DuplicateAcrossPolarity.
Lexicon prepare_lm(std::span<const std::string> positive_words,
                   std::span<const std::string> negative_words, const LanguageResources& res);

// Outer join on word. A group missing for a word gets category none, zero
// features, and the src of the lexicon the word did come from.
CombinedLexicon combine(const Lexicon& xlex, const Lexicon& lm);

// Divides each numeric column by its maximum; all-zero columns stay.
// Throws AlreadyNormalized.
CombinedLexicon normalize(const CombinedLexicon& lexicon);

// Rows whose `side` category is not none, converted back to lexicon entries.
Lexicon project(const CombinedLexicon& lexicon, Side side);

std::string combined_header();
void write_combined_csv(std::ostream& out, const CombinedLexicon& lexicon);
// The normalized flag is not part of the CSV; pass it from the sidecar.
CombinedLexicon read_combined_csv(std::istream& in, std::string_view source = "<stream>",
                                  bool normalized = false);

struct LexiconMeta {
  bool normalized = false;
  std::string source_name;
  std::string built_at;  // ISO-8601 UTC
  int format_version = kLexiconFormatVersion;
};

std::filesystem::path meta_path(const std::filesystem::path& lexicon_path);
void write_meta(const std::filesystem::path& lexicon_path, const LexiconMeta& meta);
std::optional<LexiconMeta> read_meta(const std::filesystem::path& lexicon_path);

// Loads a combined lexicon CSV, or an XLex lexicon CSV (joined with an empty
// LM side). The sidecar supplies the normalized flag and name when present.
CombinedLexicon load_lexicon(const std::filesystem::path& path);
void save_combined(const std::filesystem::path& path, const CombinedLexicon& lexicon,
                   const LexiconMeta& meta);

std::vector<std::string> read_word_list_file(const std::filesystem::path& path);
std::string utc_timestamp();

}  // namespace xlex
