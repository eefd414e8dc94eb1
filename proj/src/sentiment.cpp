#include "xlex/sentiment.hpp"

#include <cstdlib>

#include "parallel.hpp"
#include "xlex/csv.hpp"
#include "xlex/error.hpp"

namespace xlex {

std::string_view to_string(Selector s) {
  switch (s) {
    case Selector::xlex: return "xlex";
    case Selector::lm: return "lm";
    case Selector::combined: return "combined";
  }
  return "combined";
}

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::positive: return "positive";
    case Polarity::negative: return "negative";
    case Polarity::neutral: return "neutral";
  }
  return "neutral";
}

Selector parse_selector(std::string_view text) {
  const auto t = to_lower(text);
  if (t == "xlex") return Selector::xlex;
  if (t == "lm") return Selector::lm;
  if (t == "combined" || t == "xlex+lm") return Selector::combined;
  throw InvalidConfig("unknown selector '" + std::string(text) + "' (xlex|lm|combined)");
}

Polarity parse_polarity(std::string_view text) {
  const auto t = to_lower(text);
  if (t == "positive" || t == "pos") return Polarity::positive;
  if (t == "negative" || t == "neg") return Polarity::negative;
  if (t == "neutral") return Polarity::neutral;
  throw DataError("unknown polarity '" + std::string(text) + "'");
}

FeatureSet FeatureSet::parse(std::string_view text) {
  FeatureSet set;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    const auto name = to_lower(text.substr(start, comma - start));
    if (name == "avg" || name == "shap_avg") {
      set.bits_ |= static_cast<unsigned>(Feature::shap_avg);
    } else if (name == "ratio" || name == "shap_ratio") {
      set.bits_ |= static_cast<unsigned>(Feature::shap_ratio);
    } else if (name == "count") {
      set.bits_ |= static_cast<unsigned>(Feature::count);
    } else {
      throw InvalidConfig("unknown decision feature '" + name + "' (avg,ratio,count)");
    }
    start = comma + 1;
  }
  return set;
}

std::string FeatureSet::to_string() const {
  std::string out;
  auto add = [&](Feature f, const char* name) {
    if (!contains(f)) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  add(Feature::shap_avg, "avg");
  add(Feature::shap_ratio, "ratio");
  add(Feature::count, "count");
  return out;
}

Coefficients parse_coefficients(std::string_view text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    const auto v = csv::parse_real(text.substr(start, comma - start));
    if (!v) {
      throw InvalidConfig("bad coefficient '" + std::string(text.substr(start, comma - start)) +
                          "'");
    }
    values.push_back(*v);
    start = comma + 1;
  }
  if (values.size() != 4) throw InvalidConfig("expected four coefficients xlp,xlo,lmp,lmo");
  return {values[0], values[1], values[2], values[3]};
}

void ModelConfig::validate() const {
  if (features.empty()) throw InvalidConfig("at least one decision feature is required");
  for (double c : {coeffs.xlp, coeffs.xlo, coeffs.lmp, coeffs.lmo}) {
    if (!(c > 0.0)) throw InvalidConfig("coefficients must be strictly positive");
  }
}

Polarity polarity_of(double value) {
  if (value > 0.0) return Polarity::positive;
  if (value < 0.0) return Polarity::negative;
  return Polarity::neutral;
}

double cumulative_value(const CombinedEntry* entry, Side side, Role role, FeatureSet features) {
  if (entry == nullptr) return 0.0;
  const auto& g = entry->group(side);
  if (g.category == Category::none) return 0.0;
  const bool primary = role == Role::primary;
  double sum = 0.0;
  if (features.contains(Feature::shap_avg)) {
    sum += g[primary ? Field::shap_avg : Field::shap_avg_opp];
  }
  if (features.contains(Feature::shap_ratio)) {
    sum += g[primary ? Field::shap_ratio : Field::shap_ratio_opp];
  }
  if (features.contains(Feature::count)) {
    sum += g[primary ? Field::count : Field::count_opp];
  }
  const bool negative_category = (g.category == Category::negative) == primary;
  return negative_category ? -sum : sum;
}

TermVector cumulative_terms(const CombinedEntry* entry, FeatureSet features) {
  return {cumulative_value(entry, Side::xlex, Role::primary, features),
          cumulative_value(entry, Side::xlex, Role::opposite, features),
          cumulative_value(entry, Side::lm, Role::primary, features),
          cumulative_value(entry, Side::lm, Role::opposite, features)};
}

double word_sentiment(std::string_view word, const CombinedLexicon& lexicon,
                      const ModelConfig& config) {
  const auto* entry = lexicon.find(word);
  if (entry == nullptr) return 0.0;
  return weigh_terms(cumulative_terms(entry, config.features), config.coeffs, config.selector);
}

SentenceVerdict sentence_sentiment(std::string_view text, const CombinedLexicon& lexicon,
                                   const ModelConfig& config, const LanguageResources& res) {
  SentenceVerdict verdict;
  for_each_token(text, [&](std::string_view token) {
    const auto lower = to_lower(token);
    const double v = word_sentiment(res.lemmatize(lower), lexicon, config);
    verdict.value += v;
    if (v != 0.0) ++verdict.matched_words;
  });
  verdict.polarity = polarity_of(verdict.value);
  return verdict;
}

Scorer::Scorer(const CombinedLexicon& lexicon, const LanguageResources& res, FeatureSet features)
    : features_(features) {
  const auto entries = lexicon.entries();
  terms_.reserve(entries.size());
  for (const auto& e : entries) terms_.push_back(cumulative_terms(&e, features));
  const auto& lemmas = res.lemma_map();
  surface_index_.reserve(entries.size() * 2);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!lemmas.contains(entries[i].word)) {
      surface_index_.emplace(entries[i].word, static_cast<std::uint32_t>(i));
    }
  }
  for (const auto& [surface, lemma] : lemmas) {
    if (const auto* e = lexicon.find(lemma)) {
      surface_index_.emplace(surface, static_cast<std::uint32_t>(e - entries.data()));
    }
  }
}

template <class Fn>
void Scorer::visit_terms(std::string_view text, Fn&& fn) const {
  std::string lower;
  for_each_token(text, [&](std::string_view token) {
    lower.assign(token);
    for (char& c : lower) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    if (auto it = surface_index_.find(lower); it != surface_index_.end()) fn(it->second);
  });
}

std::vector<std::uint32_t> Scorer::encode(std::string_view text) const {
  std::vector<std::uint32_t> out;
  visit_terms(text, [&](std::uint32_t i) { out.push_back(i); });
  return out;
}

SentenceVerdict Scorer::score(std::string_view text, const Coefficients& c,
                              Selector selector) const {
  SentenceVerdict verdict;
  visit_terms(text, [&](std::uint32_t i) {
    const double v = weigh_terms(terms_[i], c, selector);
    verdict.value += v;
    if (v != 0.0) ++verdict.matched_words;
  });
  verdict.polarity = polarity_of(verdict.value);
  return verdict;
}

SentenceVerdict Scorer::score_encoded(std::span<const std::uint32_t> terms, const Coefficients& c,
                                      Selector selector) const {
  SentenceVerdict verdict;
  for (auto i : terms) {
    const double v = weigh_terms(terms_[i], c, selector);
    verdict.value += v;
    if (v != 0.0) ++verdict.matched_words;
  }
  verdict.polarity = polarity_of(verdict.value);
  return verdict;
}

namespace {
const ModelConfig& validated(const ModelConfig& config) {
  config.validate();
  return config;
}
}  // namespace

SentimentModel::SentimentModel(const CombinedLexicon& lexicon, const LanguageResources& res,
                               ModelConfig config)
    : config_(validated(config)), scorer_(lexicon, res, config.features) {}

SentenceVerdict SentimentModel::classify(std::string_view text) const {
  return scorer_.score(text, config_.coeffs, config_.selector);
}

std::vector<SentenceVerdict> SentimentModel::classify_all(std::span<const std::string> sentences,
                                                          unsigned threads) const {
  std::vector<SentenceVerdict> out(sentences.size());
  detail::parallel_for(sentences.size(), threads,
                       [&](std::size_t i) { out[i] = classify(sentences[i]); });
  return out;
}

}  // namespace xlex
