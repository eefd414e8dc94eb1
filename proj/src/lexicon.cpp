#include "xlex/lexicon.hpp"

#include <algorithm>
#include <map>

#include "xlex/csv.hpp"
#include "xlex/error.hpp"

namespace xlex {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::positive: return "positive";
    case Category::negative: return "negative";
    case Category::none: return "none";
  }
  return "none";
}

std::string_view to_string(Source s) { return s == Source::xlex ? "XLex" : "LM"; }

Category parse_category(std::string_view text) {
  if (text == "positive") return Category::positive;
  if (text == "negative") return Category::negative;
  if (text == "none") return Category::none;
  throw DataError("unknown category '" + std::string(text) + "'");
}

Source parse_source(std::string_view text) {
  if (text == "XLex") return Source::xlex;
  if (text == "LM") return Source::lm;
  throw DataError("unknown source '" + std::string(text) + "'");
}

WordStatsTable lemmatize_and_dedupe(const WordStatsTable& table, const LanguageResources& res) {
  WordStatsTable out;
  // Partial sums per lemma, added smallest first so the result does not
  // depend on which surface form sorts first.
  std::map<std::string, std::vector<double>, std::less<>> parts;
  for (const auto& [word, stats] : table) {
    const auto lemma = res.lemmatize(word);
    auto [it, inserted] = out.try_emplace(std::string(lemma), stats);
    parts[std::string(lemma)].push_back(stats.shap_sum);
    if (inserted) continue;
    auto& merged = it->second;
    merged.count += stats.count;
    merged.shap_max = std::max(merged.shap_max, stats.shap_max);
    merged.shap_min = std::min(merged.shap_min, stats.shap_min);
  }
  for (auto& [word, s] : out) {
    auto& sums = parts.find(word)->second;
    if (sums.size() > 1) {
      std::sort(sums.begin(), sums.end());
      s.shap_sum = 0.0;
      for (double v : sums) s.shap_sum += v;
    }
    if (s.count > 0) {
      s.shap_avg = std::clamp(s.shap_sum / static_cast<double>(s.count), s.shap_min, s.shap_max);
    }
  }
  return out;
}

namespace {

LexiconEntry single_sided(const std::string& word, const WordStats& stats, Category category) {
  LexiconEntry e;
  e.word = word;
  e.category = category;
  e.selected = stats;
  e.count_total = stats.count;
  e.shap_ratio = 1.0;
  e.shap_ratio_opp = 0.0;
  e.src = Source::xlex;
  return e;
}

}  // namespace

ResolvedTables resolve_cross_duplicates(const WordStatsTable& positive,
                                        const WordStatsTable& negative) {
  ResolvedTables out;
  for (const auto& [word, pos] : positive) {
    const auto it = negative.find(word);
    if (it == negative.end()) {
      out.positive.push_back(single_sided(word, pos, Category::positive));
      continue;
    }
    const auto& neg = it->second;
    const bool pick_positive = pos.shap_sum > neg.shap_sum;
    LexiconEntry e;
    e.word = word;
    e.category = pick_positive ? Category::positive : Category::negative;
    e.selected = pick_positive ? pos : neg;
    e.opposite = pick_positive ? neg : pos;
    e.count_total = pos.count + neg.count;
    const double denom = pos.shap_avg + neg.shap_avg;
    e.shap_ratio = denom > 0.0 ? e.selected.shap_avg / denom : 1.0;
    e.shap_ratio_opp = 1.0 - e.shap_ratio;
    e.src = Source::xlex;
    (pick_positive ? out.positive : out.negative).push_back(std::move(e));
  }
  for (const auto& [word, neg] : negative) {
    if (!positive.contains(word)) {
      out.negative.push_back(single_sided(word, neg, Category::negative));
    }
  }
  auto by_word = [](const LexiconEntry& a, const LexiconEntry& b) { return a.word < b.word; };
  std::sort(out.negative.begin(), out.negative.end(), by_word);
  return out;
}

Lexicon merge_polarities(std::vector<LexiconEntry> positive, std::vector<LexiconEntry> negative) {
  Lexicon merged;
  merged.reserve(positive.size() + negative.size());
  for (auto& e : positive) {
    e.category = Category::positive;
    merged.push_back(std::move(e));
  }
  for (auto& e : negative) {
    e.category = Category::negative;
    merged.push_back(std::move(e));
  }
  std::sort(merged.begin(), merged.end(),
            [](const LexiconEntry& a, const LexiconEntry& b) { return a.word < b.word; });
  for (std::size_t i = 1; i < merged.size(); ++i) {
    if (merged[i].word == merged[i - 1].word) throw DuplicateWord(merged[i].word);
  }
  return merged;
}

Lexicon build_xlex(std::span<const AttributionRecord> records, const LanguageResources& res) {
  const auto split = split_by_polarity(records);
  auto pos = lemmatize_and_dedupe(postprocess(accumulate_word_stats(split.positive), res), res);
  auto neg = lemmatize_and_dedupe(postprocess(accumulate_word_stats(split.negative), res), res);
  auto resolved = resolve_cross_duplicates(pos, neg);
  return merge_polarities(std::move(resolved.positive), std::move(resolved.negative));
}

CategoryCounts count_categories(const Lexicon& lexicon) {
  CategoryCounts c;
  for (const auto& e : lexicon) {
    if (e.category == Category::positive) ++c.positive;
    if (e.category == Category::negative) ++c.negative;
  }
  return c;
}

void write_lexicon_csv(std::ostream& out, const Lexicon& lexicon) {
  using csv::format_real;
  out << kXLexHeader << '\n';
  for (const auto& e : lexicon) {
    const std::string fields[] = {
        e.word,
        std::string(to_string(e.category)),
        std::to_string(e.selected.count),
        format_real(e.selected.shap_sum),
        format_real(e.selected.shap_avg),
        format_real(e.selected.shap_max),
        format_real(e.selected.shap_min),
        std::to_string(e.count_total),
        std::to_string(e.opposite.count),
        format_real(e.opposite.shap_sum),
        format_real(e.opposite.shap_avg),
        format_real(e.opposite.shap_max),
        format_real(e.opposite.shap_min),
        format_real(e.shap_ratio),
        format_real(e.shap_ratio_opp),
        std::string(to_string(e.src)),
    };
    csv::write_row(out, fields);
  }
}

Lexicon read_lexicon_csv(std::istream& in, std::string_view source) {
  const std::string src(source);
  csv::Reader reader(in);
  reader.set_source(src);
  std::vector<std::string> f;
  Lexicon lexicon;
  if (!reader.next(f)) throw MalformedRow(src, 1, "missing header");
  {
    std::string header;
    for (std::size_t i = 0; i < f.size(); ++i) header += (i ? "," : "") + f[i];
    if (header != kXLexHeader) throw MalformedRow(src, 1, "not an XLex lexicon header");
  }
  auto real = [&](const std::string& s) {
    auto v = csv::parse_real(s);
    if (!v) throw MalformedRow(src, reader.line(), "bad number '" + s + "'");
    return *v;
  };
  auto integer = [&](const std::string& s) {
    auto v = csv::parse_integer(s);
    if (!v) throw MalformedRow(src, reader.line(), "bad integer '" + s + "'");
    return static_cast<std::int64_t>(*v);
  };
  while (reader.next(f)) {
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != 16) throw MalformedRow(src, reader.line(), "expected 16 fields");
    LexiconEntry e;
    e.word = f[0];
    try {
      e.category = parse_category(f[1]);
      e.src = parse_source(f[15]);
    } catch (const DataError& err) {
      throw MalformedRow(src, reader.line(), err.what());
    }
    e.selected = {integer(f[2]), real(f[3]), real(f[4]), real(f[5]), real(f[6])};
    e.count_total = integer(f[7]);
    e.opposite = {integer(f[8]), real(f[9]), real(f[10]), real(f[11]), real(f[12])};
    e.shap_ratio = real(f[13]);
    e.shap_ratio_opp = real(f[14]);
    lexicon.push_back(std::move(e));
  }
  std::sort(lexicon.begin(), lexicon.end(),
            [](const LexiconEntry& a, const LexiconEntry& b) { return a.word < b.word; });
  for (std::size_t i = 1; i < lexicon.size(); ++i) {
    if (lexicon[i].word == lexicon[i - 1].word) throw DuplicateWord(lexicon[i].word);
  }
  return lexicon;
}

}  // namespace xlex
