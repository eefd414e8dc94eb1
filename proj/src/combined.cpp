#include "xlex/combined.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <ctime>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "xlex/csv.hpp"
#include "xlex/error.hpp"

namespace xlex {

FeatureGroup to_feature_group(const LexiconEntry& e) {
  FeatureGroup g;
  g.category = e.category;
  g.src = e.src;
  g[Field::count] = static_cast<double>(e.selected.count);
  g[Field::count_total] = static_cast<double>(e.count_total);
  g[Field::count_opp] = static_cast<double>(e.opposite.count);
  g[Field::shap_sum] = e.selected.shap_sum;
  g[Field::shap_avg] = e.selected.shap_avg;
  g[Field::shap_max] = e.selected.shap_max;
  g[Field::shap_min] = e.selected.shap_min;
  g[Field::shap_ratio] = e.shap_ratio;
  g[Field::shap_sum_opp] = e.opposite.shap_sum;
  g[Field::shap_avg_opp] = e.opposite.shap_avg;
  g[Field::shap_max_opp] = e.opposite.shap_max;
  g[Field::shap_min_opp] = e.opposite.shap_min;
  g[Field::shap_ratio_opp] = e.shap_ratio_opp;
  return g;
}

LexiconEntry to_lexicon_entry(const std::string& word, const FeatureGroup& g) {
  auto as_count = [](double v) { return static_cast<std::int64_t>(std::llround(v)); };
  LexiconEntry e;
  e.word = word;
  e.category = g.category;
  e.src = g.src;
  e.selected = {as_count(g[Field::count]), g[Field::shap_sum], g[Field::shap_avg],
                g[Field::shap_max], g[Field::shap_min]};
  e.opposite = {as_count(g[Field::count_opp]), g[Field::shap_sum_opp], g[Field::shap_avg_opp],
                g[Field::shap_max_opp], g[Field::shap_min_opp]};
  e.count_total = as_count(g[Field::count_total]);
  e.shap_ratio = g[Field::shap_ratio];
  e.shap_ratio_opp = g[Field::shap_ratio_opp];
  return e;
}

CombinedLexicon::CombinedLexicon(std::vector<CombinedEntry> entries, bool normalized)
    : entries_(std::move(entries)), normalized_(normalized) {
  std::sort(entries_.begin(), entries_.end(),
            [](const CombinedEntry& a, const CombinedEntry& b) { return a.word < b.word; });
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!index_.emplace(entries_[i].word, i).second) throw DuplicateWord(entries_[i].word);
  }
}

const CombinedEntry* CombinedLexicon::find(std::string_view word) const {
  const auto it = index_.find(word);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

Lexicon prepare_lm(std::span<const std::string> positive_words,
                   std::span<const std::string> negative_words, const LanguageResources& res) {
  // lemma -> first surface form seen
  auto collect = [&](std::span<const std::string> words) {
    std::map<std::string, std::string, std::less<>> lemmas;
    for (const auto& raw : words) {
      auto lower = to_lower(raw);
      std::string_view w = lower;
      while (!w.empty() && is_space(w.front())) w.remove_prefix(1);
      while (!w.empty() && is_space(w.back())) w.remove_suffix(1);
      if (w.empty()) continue;
      lemmas.try_emplace(std::string(res.lemmatize(w)), std::string(w));
    }
    return lemmas;
  };
  const auto pos = collect(positive_words);
  const auto neg = collect(negative_words);
  for (const auto& [lemma, surface] : pos) {
    if (auto it = neg.find(lemma); it != neg.end()) {
      throw DuplicateAcrossPolarity(lemma, surface, it->second);
    }
  }

  auto make = [](const std::string& word, Category category) {
    LexiconEntry e;
    e.word = word;
    e.category = category;
    e.selected = {1, 1.0, 1.0, 1.0, 1.0};
    e.opposite = {};
    e.count_total = 1;
    e.shap_ratio = 1.0;
    e.shap_ratio_opp = 0.0;
    e.src = Source::lm;
    return e;
  };
  Lexicon lm;
  lm.reserve(pos.size() + neg.size());
  for (const auto& [lemma, _] : pos) lm.push_back(make(lemma, Category::positive));
  for (const auto& [lemma, _] : neg) lm.push_back(make(lemma, Category::negative));
  std::sort(lm.begin(), lm.end(),
            [](const LexiconEntry& a, const LexiconEntry& b) { return a.word < b.word; });
  return lm;
}

CombinedLexicon combine(const Lexicon& xlex, const Lexicon& lm) {
  std::map<std::string, CombinedEntry, std::less<>> rows;
  auto missing = [](Source present) {
    FeatureGroup g;
    g.category = Category::none;
    g.src = present;
    return g;
  };
  for (const auto& e : xlex) {
    CombinedEntry row;
    row.word = e.word;
    row.xlex = to_feature_group(e);
    row.xlex.src = Source::xlex;
    row.lm = missing(Source::xlex);
    if (!rows.emplace(e.word, std::move(row)).second) throw DuplicateWord(e.word);
  }
  for (const auto& e : lm) {
    auto group = to_feature_group(e);
    group.src = Source::lm;
    auto it = rows.find(e.word);
    if (it == rows.end()) {
      CombinedEntry row;
      row.word = e.word;
      row.xlex = missing(Source::lm);
      row.lm = group;
      rows.emplace(e.word, std::move(row));
    } else if (it->second.lm.category != Category::none) {
      throw DuplicateWord(e.word);
    } else {
      it->second.lm = group;
    }
  }
  std::vector<CombinedEntry> entries;
  entries.reserve(rows.size());
  for (auto& [_, row] : rows) entries.push_back(std::move(row));
  return CombinedLexicon(std::move(entries), false);
}

CombinedLexicon normalize(const CombinedLexicon& lexicon) {
  if (lexicon.normalized()) throw AlreadyNormalized();
  std::vector<CombinedEntry> entries(lexicon.entries().begin(), lexicon.entries().end());
  for (Side side : {Side::xlex, Side::lm}) {
    for (std::size_t f = 0; f < kFieldCount; ++f) {
      double max = 0.0;
      for (const auto& e : entries) max = std::max(max, e.group(side).values[f]);
      if (max == 0.0) continue;
      for (auto& e : entries) e.group(side).values[f] /= max;
    }
  }
  CombinedLexicon out(std::move(entries), true);
  out.set_name(lexicon.name());
  return out;
}

Lexicon project(const CombinedLexicon& lexicon, Side side) {
  Lexicon out;
  for (const auto& e : lexicon.entries()) {
    const auto& g = e.group(side);
    if (g.category != Category::none) out.push_back(to_lexicon_entry(e.word, g));
  }
  return out;
}

namespace {

// Column order inside one prefixed group.
constexpr std::string_view kGroupLayout[] = {
    "count",        "count_total",  "count_opp",      "category", "shap_sum",
    "shap_avg",     "shap_max",     "shap_min",       "shap_ratio", "shap_sum_opp",
    "shap_avg_opp", "shap_max_opp", "shap_min_opp",   "shap_ratio_opp", "src"};
constexpr std::size_t kGroupColumns = std::size(kGroupLayout);

std::size_t field_index(std::string_view name) {
  for (std::size_t i = 0; i < kFieldCount; ++i) {
    if (kFieldNames[i] == name) return i;
  }
  return kFieldCount;
}

void append_group(std::vector<std::string>& out, const FeatureGroup& g) {
  for (auto col : kGroupLayout) {
    if (col == "category") {
      out.emplace_back(to_string(g.category));
    } else if (col == "src") {
      out.emplace_back(to_string(g.src));
    } else {
      out.push_back(csv::format_real(g.values[field_index(col)]));
    }
  }
}

}  // namespace

std::string combined_header() {
  std::string h = "word";
  for (std::string_view prefix : {"xlex_", "lm_"}) {
    for (auto col : kGroupLayout) {
      h += ',';
      h += prefix;
      h += col;
    }
  }
  return h;
}

void write_combined_csv(std::ostream& out, const CombinedLexicon& lexicon) {
  out << combined_header() << '\n';
  std::vector<std::string> fields;
  for (const auto& e : lexicon.entries()) {
    fields.clear();
    fields.push_back(e.word);
    append_group(fields, e.xlex);
    append_group(fields, e.lm);
    csv::write_row(out, fields);
  }
}

CombinedLexicon read_combined_csv(std::istream& in, std::string_view source, bool normalized) {
  const std::string src(source);
  csv::Reader reader(in);
  reader.set_source(src);
  std::vector<std::string> f;
  if (!reader.next(f)) throw MalformedRow(src, 1, "missing header");
  {
    std::string header;
    for (std::size_t i = 0; i < f.size(); ++i) header += (i ? "," : "") + f[i];
    if (header != combined_header()) throw MalformedRow(src, 1, "not a combined lexicon header");
  }
  std::vector<CombinedEntry> entries;
  while (reader.next(f)) {
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != 1 + 2 * kGroupColumns) {
      throw MalformedRow(src, reader.line(),
                         "expected " + std::to_string(1 + 2 * kGroupColumns) + " fields");
    }
    CombinedEntry e;
    e.word = f[0];
    std::size_t col = 1;
    for (Side side : {Side::xlex, Side::lm}) {
      auto& g = e.group(side);
      for (auto name : kGroupLayout) {
        const auto& cell = f[col++];
        try {
          if (name == "category") {
            g.category = parse_category(cell);
          } else if (name == "src") {
            g.src = parse_source(cell);
          } else {
            auto v = csv::parse_real(cell);
            if (!v) throw DataError("bad number '" + cell + "'");
            g.values[field_index(name)] = *v;
          }
        } catch (const MalformedRow&) {
          throw;
        } catch (const DataError& err) {
          throw MalformedRow(src, reader.line(), err.what());
        }
      }
    }
    entries.push_back(std::move(e));
  }
  return CombinedLexicon(std::move(entries), normalized);
}

std::filesystem::path meta_path(const std::filesystem::path& lexicon_path) {
  auto p = lexicon_path;
  p += ".meta.json";
  return p;
}

void write_meta(const std::filesystem::path& lexicon_path, const LexiconMeta& meta) {
  nlohmann::ordered_json j;
  j["format_version"] = meta.format_version;
  j["normalized"] = meta.normalized;
  j["source_name"] = meta.source_name;
  j["built_at"] = meta.built_at;
  auto out = csv::open_output(meta_path(lexicon_path));
  out << j.dump(2) << '\n';
}

std::optional<LexiconMeta> read_meta(const std::filesystem::path& lexicon_path) {
  const auto path = meta_path(lexicon_path);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    const auto j = nlohmann::json::parse(in);
    LexiconMeta meta;
    meta.format_version = j.value("format_version", kLexiconFormatVersion);
    meta.normalized = j.value("normalized", false);
    meta.source_name = j.value("source_name", std::string{});
    meta.built_at = j.value("built_at", std::string{});
    return meta;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

CombinedLexicon load_lexicon(const std::filesystem::path& path) {
  auto in = csv::open_input(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto meta = read_meta(path);

  const auto eol = text.find('\n');
  std::string first = text.substr(0, eol);
  if (!first.empty() && first.back() == '\r') first.pop_back();

  std::istringstream stream(text);
  CombinedLexicon lexicon;
  if (first == kXLexHeader) {
    lexicon = combine(read_lexicon_csv(stream, path.string()), {});
  } else {
    const bool normalized = meta ? meta->normalized
                                 : path.filename().string().ends_with(".norm.csv");
    lexicon = read_combined_csv(stream, path.string(), normalized);
  }
  std::string name = meta ? meta->source_name : std::string{};
  if (name.empty()) {
    name = path.filename().string();
    for (std::string_view suffix : {".norm.csv", ".csv"}) {
      if (name.ends_with(suffix)) {
        name.resize(name.size() - suffix.size());
        break;
      }
    }
  }
  lexicon.set_name(std::move(name));
  return lexicon;
}

void save_combined(const std::filesystem::path& path, const CombinedLexicon& lexicon,
                   const LexiconMeta& meta) {
  {
    auto out = csv::open_output(path);
    write_combined_csv(out, lexicon);
  }
  auto m = meta;
  m.normalized = lexicon.normalized();
  write_meta(path, m);
}

std::vector<std::string> read_word_list_file(const std::filesystem::path& path) {
  auto in = csv::open_input(path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view w = line;
    while (!w.empty() && is_space(w.front())) w.remove_prefix(1);
    while (!w.empty() && is_space(w.back())) w.remove_suffix(1);
    if (w.empty() || w.front() == '#') continue;
    words.emplace_back(w);
  }
  return words;
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  // Reproducible builds pin the clock.
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    if (auto v = csv::parse_integer(epoch)) now = static_cast<std::time_t>(*v);
  }
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace xlex
