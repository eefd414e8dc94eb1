#pragma once

// Test-only fixture generators and brute-force oracles. Nothing here calls
// into the aggregation, scoring or metric code it is used to check.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "xlex/attribution.hpp"
#include "xlex/combined.hpp"
#include "xlex/evaluation.hpp"
#include "xlex/lexicon.hpp"
#include "xlex/sentiment.hpp"
#include "xlex/textprep.hpp"

namespace xlex::testkit {

// Small resource set: words "alpha".."omega" style plus inflections.
inline LanguageResources mini_resources() {
  std::vector<std::pair<std::string, std::string>> lemmas = {
      {"acquired", "acquire"}, {"acquiring", "acquire"}, {"acquires", "acquire"},
      {"winners", "winner"},   {"gains", "gain"},         {"losses", "loss"},
      {"profits", "profit"},   {"options", "option"},
  };
  std::vector<std::string> english = {
      "acquire", "acquired", "acquiring", "acquires", "winner", "winners", "gain",
      "gains",   "loss",     "losses",    "profit",   "profits", "option", "options",
      "the",     "of",       "market",    "rose",     "fell",    "good",   "bad",
      "abet",    "abide",    "writeoff",  "surpasses", "abandon", "abandonment", "flat"};
  std::vector<std::string> stop = {"the", "of", "and", "a", "to"};
  return LanguageResources(lemmas, english, stop);
}

// Synthetic vocabulary: `lemmas` base words "wrdNNN", each with an inflected
// surface "wrdNNNs" mapped to it, plus some words that fail validation.
struct SyntheticVocab {
  std::vector<std::string> surfaces;  // valid surfaces (bases and inflections)
  std::vector<std::string> invalid;   // stopwords, short words, unknown words
  LanguageResources res;
};

inline std::string base_word(std::size_t i) {
  std::ostringstream os;
  os << "wrd" << static_cast<char>('a' + (i / 26) % 26) << static_cast<char>('a' + i % 26);
  return os.str();
}

inline SyntheticVocab synthetic_vocab(std::size_t lemmas) {
  SyntheticVocab v;
  std::vector<std::pair<std::string, std::string>> lemma_rows;
  std::vector<std::string> english;
  for (std::size_t i = 0; i < lemmas; ++i) {
    const auto base = base_word(i);
    v.surfaces.push_back(base);
    english.push_back(base);
    if (i % 3 == 0) {
      v.surfaces.push_back(base + "s");
      english.push_back(base + "s");
      lemma_rows.emplace_back(base + "s", base);
    }
  }
  v.invalid = {"the", "of", "qx", "zzzunknown", "and"};
  english.push_back("the");
  english.push_back("and");
  v.res = LanguageResources(lemma_rows, english, {"the", "and", "of"});
  return v;
}

// Random attribution records over a vocabulary; tokens get random casing.
inline std::vector<AttributionRecord> random_records(std::mt19937_64& rng,
                                                     const SyntheticVocab& vocab,
                                                     std::size_t max_records) {
  std::uniform_int_distribution<std::size_t> n_dist(0, max_records);
  std::uniform_real_distribution<double> value_dist(-1.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 9);
  const std::size_t n = n_dist(rng);
  std::vector<AttributionRecord> out;
  out.reserve(n);
  std::int64_t sentence = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (coin(rng) == 0) ++sentence;
    std::string token;
    if (coin(rng) == 0) {
      token = vocab.invalid[std::uniform_int_distribution<std::size_t>(
          0, vocab.invalid.size() - 1)(rng)];
    } else {
      token = vocab.surfaces[std::uniform_int_distribution<std::size_t>(
          0, vocab.surfaces.size() - 1)(rng)];
    }
    if (coin(rng) < 2) token[0] = static_cast<char>(std::toupper(token[0]));
    double value = value_dist(rng);
    if (coin(rng) == 0) value = 0.0;
    out.push_back({sentence, token, value});
  }
  return out;
}

namespace oracle {

inline std::string lower(const std::string& s) {
  std::string out;
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

struct Acc {
  std::string word;
  std::int64_t count = 0;
  double sum = 0.0;
  double max = -std::numeric_limits<double>::infinity();
  double min = std::numeric_limits<double>::infinity();
};

inline Acc* find(std::vector<Acc>& rows, const std::string& w) {
  for (auto& r : rows) {
    if (r.word == w) return &r;
  }
  return nullptr;
}

// Group-by over (word, |value|) pairs by linear scan.
inline std::vector<Acc> group_by(const std::vector<WeightedWord>& raw) {
  std::vector<Acc> rows;
  for (const auto& w : raw) {
    Acc* a = find(rows, w.word);
    if (!a) {
      rows.push_back({w.word});
      a = &rows.back();
    }
    a->count += 1;
    a->sum += w.value;
    a->max = std::max(a->max, w.value);
    a->min = std::min(a->min, w.value);
  }
  return rows;
}

inline bool valid(const std::string& w, const LanguageResources& res) {
  return w.size() >= 3 && res.english_words().count(w) == 1 && res.stopwords().count(w) == 0;
}

inline std::string lemma_of(const std::string& w, const LanguageResources& res) {
  const auto& m = res.lemma_map();
  auto it = m.find(w);
  return it == m.end() ? w : it->second;
}

// XLex lexicon recomputed from raw records: per polarity, keep valid words,
// map to lemma and accumulate directly; then the selection rule and ratios.
inline Lexicon build_xlex(const std::vector<AttributionRecord>& records,
                          const LanguageResources& res) {
  std::vector<Acc> pos, neg;
  for (const auto& r : records) {
    if (r.value == 0.0) continue;
    const auto w = lower(r.token);
    if (!valid(w, res)) continue;
    auto& rows = r.value > 0 ? pos : neg;
    const auto l = lemma_of(w, res);
    Acc* a = find(rows, l);
    if (!a) {
      rows.push_back({l});
      a = &rows.back();
    }
    const double v = std::abs(r.value);
    a->count += 1;
    a->sum += v;
    a->max = std::max(a->max, v);
    a->min = std::min(a->min, v);
  }
  auto stats = [](const Acc& a) {
    return WordStats{a.count, a.sum, a.sum / static_cast<double>(a.count), a.max, a.min};
  };
  Lexicon out;
  for (const auto& p : pos) {
    const Acc* n = find(neg, p.word);
    LexiconEntry e;
    e.word = p.word;
    e.src = Source::xlex;
    if (!n) {
      e.category = Category::positive;
      e.selected = stats(p);
      e.count_total = p.count;
      e.shap_ratio = 1.0;
      e.shap_ratio_opp = 0.0;
    } else {
      const auto ps = stats(p);
      const auto ns = stats(*n);
      const bool positive = ps.shap_sum > ns.shap_sum;
      e.category = positive ? Category::positive : Category::negative;
      e.selected = positive ? ps : ns;
      e.opposite = positive ? ns : ps;
      e.count_total = p.count + n->count;
      e.shap_ratio = e.selected.shap_avg / (ps.shap_avg + ns.shap_avg);
      e.shap_ratio_opp = e.opposite.shap_avg / (ps.shap_avg + ns.shap_avg);
    }
    out.push_back(e);
  }
  for (auto& n : neg) {
    if (find(pos, n.word)) continue;
    LexiconEntry e;
    e.word = n.word;
    e.src = Source::xlex;
    e.category = Category::negative;
    e.selected = stats(n);
    e.count_total = n.count;
    out.push_back(e);
  }
  std::sort(out.begin(), out.end(),
            [](const LexiconEntry& a, const LexiconEntry& b) { return a.word < b.word; });
  return out;
}

inline bool close(double a, double b, double rel = 1e-12) {
  return std::abs(a - b) <= rel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

inline bool same_stats(const WordStats& a, const WordStats& b, double rel = 1e-12) {
  return a.count == b.count && close(a.shap_sum, b.shap_sum, rel) &&
         close(a.shap_avg, b.shap_avg, rel) && close(a.shap_max, b.shap_max, rel) &&
         close(a.shap_min, b.shap_min, rel);
}

// Empty string when equal; otherwise a description of the first difference.
inline std::string diff_lexicons(const Lexicon& got, const Lexicon& want, double rel = 1e-12) {
  if (got.size() != want.size()) {
    return "size " + std::to_string(got.size()) + " vs " + std::to_string(want.size());
  }
  for (std::size_t i = 0; i < got.size(); ++i) {
    const auto& a = got[i];
    const auto& b = want[i];
    if (a.word != b.word) return "word " + a.word + " vs " + b.word;
    if (a.category != b.category || a.src != b.src || a.count_total != b.count_total ||
        !same_stats(a.selected, b.selected, rel) || !same_stats(a.opposite, b.opposite, rel) ||
        !close(a.shap_ratio, b.shap_ratio, rel) || !close(a.shap_ratio_opp, b.shap_ratio_opp, rel)) {
      return "entry " + a.word + " differs";
    }
  }
  return {};
}

// Word sentiment written out term by term from the column values.
inline double word_sentiment(const std::string& lemma, const CombinedLexicon& lexicon,
                             const ModelConfig& config) {
  const CombinedEntry* entry = nullptr;
  for (const auto& e : lexicon.entries()) {
    if (e.word == lemma) entry = &e;
  }
  if (!entry) return 0.0;
  const auto& f = config.features;
  auto side_terms = [&](const FeatureGroup& g, double& primary, double& opposite) {
    primary = opposite = 0.0;
    if (g.category == Category::none) return;
    double sel = 0.0, opp = 0.0;
    if (f.contains(Feature::shap_avg)) {
      sel += g[Field::shap_avg];
      opp += g[Field::shap_avg_opp];
    }
    if (f.contains(Feature::shap_ratio)) {
      sel += g[Field::shap_ratio];
      opp += g[Field::shap_ratio_opp];
    }
    if (f.contains(Feature::count)) {
      sel += g[Field::count];
      opp += g[Field::count_opp];
    }
    const bool pos = g.category == Category::positive;
    primary = pos ? sel : -sel;
    opposite = pos ? -opp : opp;
  };
  double xp, xo, lp, lo;
  side_terms(entry->xlex, xp, xo);
  side_terms(entry->lm, lp, lo);
  const auto& c = config.coeffs;
  switch (config.selector) {
    case Selector::xlex: return c.xlp * xp + c.xlo * xo;
    case Selector::lm: return c.lmp * lp + c.lmo * lo;
    case Selector::combined: return c.xlp * xp + c.xlo * xo + c.lmp * lp + c.lmo * lo;
  }
  return 0.0;
}

inline std::vector<std::string> split_tokens(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  std::string chunk;
  auto keep = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || (c & 0x80); };
  while (in >> chunk) {
    std::size_t b = 0, e = chunk.size();
    while (b < e && !keep(chunk[b])) ++b;
    while (e > b && !keep(chunk[e - 1])) --e;
    if (b < e) out.push_back(chunk.substr(b, e - b));
  }
  return out;
}

inline double sentence_value(const std::string& text, const CombinedLexicon& lexicon,
                             const ModelConfig& config, const LanguageResources& res) {
  double v = 0.0;
  for (const auto& t : split_tokens(text)) v += word_sentiment(lemma_of(lower(t), res), lexicon, config);
  return v;
}

struct Metrics {
  double accuracy, f1_pos, f1_neg, f1_macro, mcc;
  std::int64_t unanswered;
};

// Direct formulas: F1 = 2TP / (2TP + FP + FN); MCC over positive vs.
// not-positive where a neutral prediction is always a mistake.
inline Metrics metrics(const std::vector<Polarity>& truth, const std::vector<Polarity>& pred) {
  Metrics m{};
  const double n = static_cast<double>(truth.size());
  double correct = 0;
  auto f1 = [&](Polarity cls) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (truth[i] == cls && pred[i] == cls) ++tp;
      if (truth[i] != cls && pred[i] == cls) ++fp;
      if (truth[i] == cls && pred[i] != cls) ++fn;
    }
    return tp == 0 ? 0.0 : 2 * tp / (2 * tp + fp + fn);
  };
  double tp = 0, tn = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == pred[i]) ++correct;
    if (pred[i] == Polarity::neutral) ++m.unanswered;
    const bool right = truth[i] == pred[i];
    if (truth[i] == Polarity::positive) (right ? tp : fn) += 1;
    else (right ? tn : fp) += 1;
  }
  m.accuracy = correct / n;
  m.f1_pos = f1(Polarity::positive);
  m.f1_neg = f1(Polarity::negative);
  m.f1_macro = (m.f1_pos + m.f1_neg) / 2;
  const double d = std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn));
  m.mcc = d > 0 ? (tp * tn - fp * fn) / d : (fp + fn == 0 ? 1.0 : 0.0);
  return m;
}

}  // namespace oracle

// Random combined lexicon over `words` with both groups populated at random.
inline CombinedLexicon random_combined(std::mt19937_64& rng, const std::vector<std::string>& words) {
  std::uniform_real_distribution<double> u(0.001, 1.0);
  std::uniform_int_distribution<int> pick(0, 5);
  std::uniform_int_distribution<int> cnt(1, 50);
  std::vector<CombinedEntry> entries;
  for (const auto& w : words) {
    CombinedEntry e;
    e.word = w;
    const int kind = pick(rng);
    auto fill = [&](FeatureGroup& g, Category c, Source s, bool with_opp) {
      g.category = c;
      g.src = s;
      g[Field::count] = cnt(rng);
      g[Field::count_opp] = with_opp ? cnt(rng) : 0;
      g[Field::count_total] = g[Field::count] + g[Field::count_opp];
      g[Field::shap_avg] = u(rng);
      g[Field::shap_sum] = g[Field::shap_avg] * g[Field::count];
      g[Field::shap_max] = g[Field::shap_avg] * 1.5;
      g[Field::shap_min] = g[Field::shap_avg] * 0.5;
      if (with_opp) {
        g[Field::shap_avg_opp] = u(rng);
        g[Field::shap_sum_opp] = g[Field::shap_avg_opp] * g[Field::count_opp];
        g[Field::shap_max_opp] = g[Field::shap_avg_opp] * 1.5;
        g[Field::shap_min_opp] = g[Field::shap_avg_opp] * 0.5;
        g[Field::shap_ratio] = g[Field::shap_avg] / (g[Field::shap_avg] + g[Field::shap_avg_opp]);
      } else {
        g[Field::shap_ratio] = 1.0;
      }
      g[Field::shap_ratio_opp] = 1.0 - g[Field::shap_ratio];
    };
    const Category xc = (kind % 2 == 0) ? Category::positive : Category::negative;
    const Category lc = (kind / 2 == 0) ? Category::positive
                        : (kind / 2 == 1) ? Category::negative
                                          : Category::none;
    fill(e.xlex, xc, Source::xlex, pick(rng) < 3);
    if (lc == Category::none) {
      e.lm.category = Category::none;
      e.lm.src = Source::xlex;
    } else {
      fill(e.lm, lc, Source::lm, false);
    }
    entries.push_back(std::move(e));
  }
  return CombinedLexicon(std::move(entries), false);
}

}  // namespace xlex::testkit
