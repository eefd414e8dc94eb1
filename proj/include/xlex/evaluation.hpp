#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xlex/combined.hpp"
#include "xlex/sentiment.hpp"

namespace xlex {

struct LabeledSentence {
  std::string text;
  Polarity label = Polarity::positive;  // positive or negative
};

// One sentence per line; blank lines are skipped.
std::vector<std::string> read_sentences(std::istream& in);
std::vector<std::string> read_sentences_file(const std::filesystem::path& path);
// CSV with header `sentence,label`; labels positive|negative.
std::vector<LabeledSentence> read_labeled(std::istream& in, std::string_view source = "<stream>");
std::vector<LabeledSentence> read_labeled_file(const std::filesystem::path& path);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
};

// Truth rows: positive, negative. Prediction columns: positive, negative, neutral.
using Confusion = std::array<std::array<std::int64_t, 3>, 2>;

struct EvalReport {
  std::int64_t n = 0;
  double accuracy = 0.0;
  ClassMetrics positive;
  ClassMetrics negative;
  double f1_macro = 0.0;
  double f1_weighted = 0.0;
  double precision_macro = 0.0;
  double recall_macro = 0.0;
  double mcc = 0.0;
  Confusion confusion{};
  std::int64_t unanswered = 0;
};

// Metrics over binary truth and ternary predictions. A neutral prediction is
// wrong: it lowers accuracy, is a false negative of the true class for F1
// and a misclassification in the binarized table used for MCC.
// Throws EmptyDataset; DataError on size mismatch or a neutral truth label.
EvalReport compute_report(std::span<const Polarity> truth, std::span<const Polarity> predicted);

EvalReport evaluate(std::span<const LabeledSentence> sentences, const CombinedLexicon& lexicon,
                    const ModelConfig& config, const LanguageResources& res,
                    unsigned threads = 1);

// Sentences the LM-only model gives a non-neutral answer for. Throws
// InvalidConfig unless the selector is lm.
std::vector<LabeledSentence> lm_constrained_subset(std::span<const LabeledSentence> sentences,
                                                   const ModelConfig& lm_only_config,
                                                   const CombinedLexicon& lexicon,
                                                   const LanguageResources& res);

// Text table with per-class precision/recall/F1/support, accuracy, macro and
// weighted averages, MCC, unanswered count and the confusion matrix.
std::string format_classification_report(const EvalReport& report);
std::string report_to_json(const EvalReport& report);

// ---- grid search ----------------------------------------------------------

struct GridDataset {
  std::string name;
  std::vector<LabeledSentence> sentences;
};

// The lexicon variants (e.g. standard and normalized) built from one source.
struct GridSource {
  std::string name;
  std::vector<const CombinedLexicon*> variants;
  std::set<std::string> excluded_datasets;  // dataset names never paired with this source
};

enum class Metric { accuracy, f1_macro, mcc };
std::string_view to_string(Metric m);

struct GridOptions {
  std::vector<double> values{0.1, 0.3, 0.5, 0.7, 0.9};
  FeatureSet features{Feature::shap_avg};
  double lmo = 0.5;
  std::vector<Selector> selectors{Selector::xlex, Selector::combined};
  std::vector<Metric> metrics{Metric::accuracy, Metric::f1_macro, Metric::mcc};
  unsigned threads = 1;
};

struct GridRow {
  Coefficients coeffs;
  std::vector<double> cells;  // one per GridResult::cell_names
  double aggregated_average = 0.0;
};

struct GridResult {
  Coefficients best;
  double aggregated_average = 0.0;
  std::vector<std::string> cell_names;  // "<source>/<selector>/<metric>"
  std::vector<GridRow> table;           // (xlp, xlo, lmp) in lexicographic order
};

// Every (xlp, xlo, lmp) in values^3 with lmo fixed. A cell is the mean of one
// metric over all variants of one source and the datasets it is paired with,
// for one selector; the aggregated average is the sum of the cells. The best
// row has the largest aggregated average, the smallest quadruple on ties.
GridResult grid_search(std::span<const GridSource> sources, std::span<const GridDataset> datasets,
                       const LanguageResources& res, const GridOptions& options = {});

void write_grid_csv(std::ostream& out, const GridResult& result);

// ---- benchmark ------------------------------------------------------------

struct BenchReport {
  std::vector<double> seconds;  // wall-clock per repetition
  double mean_seconds = 0.0;
  double sentences_per_second = 0.0;
  std::size_t sentences = 0;
  std::uintmax_t lexicon_bytes = 0;
  double load_seconds = 0.0;
  std::size_t lexicon_words = 0;
};

// Loads the lexicon at `lexicon_path`, then classifies all sentences
// `repetitions` times single-threaded.
BenchReport benchmark(std::span<const std::string> sentences,
                      const std::filesystem::path& lexicon_path, const ModelConfig& config,
                      const LanguageResources& res, int repetitions);

std::string format_bench_report(const BenchReport& report);

}  // namespace xlex
