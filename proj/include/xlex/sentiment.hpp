#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xlex/combined.hpp"
#include "xlex/textprep.hpp"

namespace xlex {

enum class Selector { xlex, lm, combined };
enum class Role { primary, opposite };
enum class Polarity { positive, negative, neutral };

std::string_view to_string(Selector s);
std::string_view to_string(Polarity p);
Selector parse_selector(std::string_view text);  // xlex | lm | combined; throws InvalidConfig
Polarity parse_polarity(std::string_view text);  // throws DataError

enum class Feature : unsigned { shap_avg = 1u, shap_ratio = 2u, count = 4u };

// Non-empty subset of the decision features.
class FeatureSet {
 public:
  constexpr FeatureSet() = default;
  constexpr FeatureSet(std::initializer_list<Feature> features) {
    for (auto f : features) bits_ |= static_cast<unsigned>(f);
  }

  constexpr bool contains(Feature f) const { return (bits_ & static_cast<unsigned>(f)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr unsigned bits() const { return bits_; }

  // Comma-separated: avg|shap_avg, ratio|shap_ratio, count. Throws InvalidConfig.
  static FeatureSet parse(std::string_view text);
  std::string to_string() const;

  friend constexpr bool operator==(FeatureSet, FeatureSet) = default;

 private:
  unsigned bits_ = 0;
};

struct Coefficients {
  double xlp = 0.3;  // XLex, selected category
  double xlo = 0.1;  // XLex, opposite category
  double lmp = 0.1;  // LM, selected category
  double lmo = 0.5;  // LM, opposite category

  friend auto operator<=>(const Coefficients&, const Coefficients&) = default;
};

// Comma-separated quadruple "xlp,xlo,lmp,lmo". Throws InvalidConfig.
Coefficients parse_coefficients(std::string_view text);

struct ModelConfig {
  Selector selector = Selector::combined;
  FeatureSet features{Feature::shap_avg};
  Coefficients coeffs;

  // Throws InvalidConfig unless features are non-empty and every coefficient
  // is strictly positive.
  void validate() const;
};

struct SentenceVerdict {
  double value = 0.0;
  Polarity polarity = Polarity::neutral;
  int matched_words = 0;
};

Polarity polarity_of(double value);

// Sum of the chosen features of one (side, role) column group, carrying the
// sign of the category the group describes: the selected stats of a
// negative word and the opposite stats of a positive word are negated. A
// missing entry or a side with category none gives 0.
double cumulative_value(const CombinedEntry* entry, Side side, Role role, FeatureSet features);

// The four cumulative values of a word: xlex primary, xlex opposite, lm
// primary, lm opposite.
using TermVector = std::array<double, 4>;
TermVector cumulative_terms(const CombinedEntry* entry, FeatureSet features);

// Coefficient-weighted sum of the terms the selector admits.
inline double weigh_terms(const TermVector& t, const Coefficients& c, Selector selector) {
  switch (selector) {
    case Selector::xlex: return c.xlp * t[0] + c.xlo * t[1];
    case Selector::lm: return c.lmp * t[2] + c.lmo * t[3];
    case Selector::combined: return c.xlp * t[0] + c.xlo * t[1] + c.lmp * t[2] + c.lmo * t[3];
  }
  return 0.0;
}

double word_sentiment(std::string_view word, const CombinedLexicon& lexicon,
                      const ModelConfig& config);

// Tokenizes, lowercases and lemmatizes `text`, then sums word_sentiment over
// every token occurrence.
SentenceVerdict sentence_sentiment(std::string_view text, const CombinedLexicon& lexicon,
                                   const ModelConfig& config, const LanguageResources& res);

// Precomputed surface-form lookup for repeated scoring against one lexicon
// and one feature set. Every lowercase surface whose lemma is in the lexicon
// maps straight to that lemma's term vector, so scoring a token is a single
// hash probe. Results are identical to sentence_sentiment.
class Scorer {
 public:
  Scorer(const CombinedLexicon& lexicon, const LanguageResources& res, FeatureSet features);

  FeatureSet features() const { return features_; }

  // Term indices of the known tokens of `text`, in order.
  std::vector<std::uint32_t> encode(std::string_view text) const;

  SentenceVerdict score(std::string_view text, const Coefficients& c, Selector selector) const;
  SentenceVerdict score_encoded(std::span<const std::uint32_t> terms, const Coefficients& c,
                                Selector selector) const;

 private:
  template <class Fn>
  void visit_terms(std::string_view text, Fn&& fn) const;

  FeatureSet features_;
  std::vector<TermVector> terms_;
  StringMap<std::uint32_t> surface_index_;
};

class SentimentModel {
 public:
  // Throws InvalidConfig.
  SentimentModel(const CombinedLexicon& lexicon, const LanguageResources& res,
                 ModelConfig config);

  const ModelConfig& config() const { return config_; }
  SentenceVerdict classify(std::string_view text) const;
  // Output order follows `sentences` for any thread count (0 = all cores).
  std::vector<SentenceVerdict> classify_all(std::span<const std::string> sentences,
                                            unsigned threads = 1) const;

 private:
  ModelConfig config_;
  Scorer scorer_;
};

}  // namespace xlex
