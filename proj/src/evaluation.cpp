#include "xlex/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "parallel.hpp"
#include "xlex/csv.hpp"
#include "xlex/error.hpp"

namespace xlex {

std::vector<std::string> read_sentences(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::all_of(line.begin(), line.end(), is_space)) continue;
    out.push_back(std::move(line));
  }
  return out;
}

std::vector<std::string> read_sentences_file(const std::filesystem::path& path) {
  auto in = csv::open_input(path);
  return read_sentences(in);
}

std::vector<LabeledSentence> read_labeled(std::istream& in, std::string_view source) {
  const std::string src(source);
  csv::Reader reader(in);
  reader.set_source(src);
  std::vector<std::string> f;
  std::vector<LabeledSentence> out;
  if (!reader.next(f)) return out;
  if (f.size() != 2 || f[0] != "sentence" || f[1] != "label") {
    throw MalformedRow(src, reader.line(), "expected header 'sentence,label'");
  }
  while (reader.next(f)) {
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != 2) throw MalformedRow(src, reader.line(), "expected 2 fields");
    const auto label = to_lower(f[1]);
    Polarity p;
    if (label == "positive") {
      p = Polarity::positive;
    } else if (label == "negative") {
      p = Polarity::negative;
    } else {
      throw MalformedRow(src, reader.line(), "label must be positive or negative, got '" +
                                                 f[1] + "'");
    }
    out.push_back({std::move(f[0]), p});
  }
  return out;
}

std::vector<LabeledSentence> read_labeled_file(const std::filesystem::path& path) {
  auto in = csv::open_input(path);
  return read_labeled(in, path.string());
}

namespace {

std::size_t column(Polarity p) {
  switch (p) {
    case Polarity::positive: return 0;
    case Polarity::negative: return 1;
    case Polarity::neutral: return 2;
  }
  return 2;
}

ClassMetrics class_metrics(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
  ClassMetrics m;
  m.support = tp + fn;
  m.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  m.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  m.f1 = m.precision + m.recall > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

}  // namespace

EvalReport compute_report(std::span<const Polarity> truth, std::span<const Polarity> predicted) {
  if (truth.size() != predicted.size()) {
    throw DataError("truth and prediction lengths differ");
  }
  if (truth.empty()) throw EmptyDataset();
  EvalReport r;
  r.n = static_cast<std::int64_t>(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == Polarity::neutral) throw DataError("truth labels must be positive or negative");
    ++r.confusion[column(truth[i])][column(predicted[i])];
  }
  const auto& c = r.confusion;
  r.unanswered = c[0][2] + c[1][2];
  r.accuracy = static_cast<double>(c[0][0] + c[1][1]) / static_cast<double>(r.n);

  r.positive = class_metrics(c[0][0], c[1][0], c[0][1] + c[0][2]);
  r.negative = class_metrics(c[1][1], c[0][1], c[1][0] + c[1][2]);
  r.f1_macro = (r.positive.f1 + r.negative.f1) / 2.0;
  r.precision_macro = (r.positive.precision + r.negative.precision) / 2.0;
  r.recall_macro = (r.positive.recall + r.negative.recall) / 2.0;
  r.f1_weighted = (r.positive.f1 * static_cast<double>(r.positive.support) +
                   r.negative.f1 * static_cast<double>(r.negative.support)) /
                  static_cast<double>(r.n);

  // Positive vs. negative with every neutral prediction counted as the wrong class.
  const double tp = static_cast<double>(c[0][0]);
  const double fn = static_cast<double>(c[0][1] + c[0][2]);
  const double fp = static_cast<double>(c[1][0] + c[1][2]);
  const double tn = static_cast<double>(c[1][1]);
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom > 0.0) {
    r.mcc = (tp * tn - fp * fn) / std::sqrt(denom);
  } else {
    // Degenerate margins (single-class truth or predictions).
    r.mcc = (fp + fn == 0.0) ? 1.0 : 0.0;
  }
  r.mcc = std::clamp(r.mcc, -1.0, 1.0);
  return r;
}

EvalReport evaluate(std::span<const LabeledSentence> sentences, const CombinedLexicon& lexicon,
                    const ModelConfig& config, const LanguageResources& res, unsigned threads) {
  if (sentences.empty()) throw EmptyDataset();
  const SentimentModel model(lexicon, res, config);
  std::vector<Polarity> truth(sentences.size());
  std::vector<Polarity> predicted(sentences.size());
  detail::parallel_for(sentences.size(), threads, [&](std::size_t i) {
    truth[i] = sentences[i].label;
    predicted[i] = model.classify(sentences[i].text).polarity;
  });
  return compute_report(truth, predicted);
}

std::vector<LabeledSentence> lm_constrained_subset(std::span<const LabeledSentence> sentences,
                                                   const ModelConfig& lm_only_config,
                                                   const CombinedLexicon& lexicon,
                                                   const LanguageResources& res) {
  if (lm_only_config.selector != Selector::lm) {
    throw InvalidConfig("LM-constrained subset needs the lm selector");
  }
  const SentimentModel model(lexicon, res, lm_only_config);
  std::vector<LabeledSentence> out;
  for (const auto& s : sentences) {
    if (model.classify(s.text).polarity != Polarity::neutral) out.push_back(s);
  }
  return out;
}

namespace {

std::string fmt(const char* format, auto... args) {
  char buf[256];
  const int n = std::snprintf(buf, sizeof buf, format, args...);
  return std::string(buf, static_cast<std::size_t>(std::max(n, 0)));
}

}  // namespace

std::string format_classification_report(const EvalReport& r) {
  std::string out;
  out += fmt("%12s %10s %10s %10s %10s\n\n", "", "precision", "recall", "f1-score", "support");
  auto row = [&](const char* name, const ClassMetrics& m) {
    out += fmt("%12s %10.4f %10.4f %10.4f %10lld\n", name, m.precision, m.recall, m.f1,
               static_cast<long long>(m.support));
  };
  row("positive", r.positive);
  row("negative", r.negative);
  out += '\n';
  out += fmt("%12s %10s %10s %10.4f %10lld\n", "accuracy", "", "", r.accuracy,
             static_cast<long long>(r.n));
  out += fmt("%12s %10.4f %10.4f %10.4f %10lld\n", "macro avg", r.precision_macro,
             r.recall_macro, r.f1_macro, static_cast<long long>(r.n));
  const double n = static_cast<double>(r.n);
  const double wp = (r.positive.precision * static_cast<double>(r.positive.support) +
                     r.negative.precision * static_cast<double>(r.negative.support)) / n;
  const double wr = (r.positive.recall * static_cast<double>(r.positive.support) +
                     r.negative.recall * static_cast<double>(r.negative.support)) / n;
  out += fmt("%12s %10.4f %10.4f %10.4f %10lld\n", "weighted avg", wp, wr, r.f1_weighted,
             static_cast<long long>(r.n));
  out += '\n';
  out += fmt("mcc: %.4f\n", r.mcc);
  out += fmt("unanswered: %lld (%.2f%%)\n", static_cast<long long>(r.unanswered),
             100.0 * static_cast<double>(r.unanswered) / n);
  out += "\nconfusion matrix (rows: true, columns: predicted)\n";
  out += fmt("%12s %10s %10s %10s\n", "", "positive", "negative", "neutral");
  const char* names[] = {"positive", "negative"};
  for (std::size_t t = 0; t < 2; ++t) {
    out += fmt("%12s %10lld %10lld %10lld\n", names[t], static_cast<long long>(r.confusion[t][0]),
               static_cast<long long>(r.confusion[t][1]),
               static_cast<long long>(r.confusion[t][2]));
  }
  return out;
}

std::string report_to_json(const EvalReport& r) {
  auto cls = [](const ClassMetrics& m) {
    return nlohmann::ordered_json{{"precision", m.precision},
                                  {"recall", m.recall},
                                  {"f1", m.f1},
                                  {"support", m.support}};
  };
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["accuracy"] = r.accuracy;
  j["f1_per_class"] = {{"positive", r.positive.f1}, {"negative", r.negative.f1}};
  j["f1_macro"] = r.f1_macro;
  j["f1_weighted"] = r.f1_weighted;
  j["precision_macro"] = r.precision_macro;
  j["recall_macro"] = r.recall_macro;
  j["mcc"] = r.mcc;
  j["unanswered"] = r.unanswered;
  j["classes"] = {{"positive", cls(r.positive)}, {"negative", cls(r.negative)}};
  j["confusion"] = {
      {"true", {"positive", "negative"}},
      {"predicted", {"positive", "negative", "neutral"}},
      {"matrix", {r.confusion[0], r.confusion[1]}},
  };
  return j.dump(2);
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::accuracy: return "accuracy";
    case Metric::f1_macro: return "f1";
    case Metric::mcc: return "mcc";
  }
  return "accuracy";
}

namespace {

double metric_of(const EvalReport& r, Metric m) {
  switch (m) {
    case Metric::accuracy: return r.accuracy;
    case Metric::f1_macro: return r.f1_macro;
    case Metric::mcc: return r.mcc;
  }
  return 0.0;
}

struct PreparedPair {
  const Scorer* scorer;
  std::vector<std::vector<std::uint32_t>> sentences;
  std::vector<Polarity> truth;
};

}  // namespace

GridResult grid_search(std::span<const GridSource> sources, std::span<const GridDataset> datasets,
                       const LanguageResources& res, const GridOptions& options) {
  std::vector<double> values = options.values;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.empty()) throw InvalidConfig("grid needs at least one coefficient value");
  if (values.front() <= 0.0 || !(options.lmo > 0.0)) {
    throw InvalidConfig("grid coefficients must be strictly positive");
  }
  if (options.features.empty()) throw InvalidConfig("at least one decision feature is required");
  if (options.selectors.empty() || options.metrics.empty()) {
    throw InvalidConfig("grid needs at least one selector and one metric");
  }
  if (sources.empty()) throw InvalidConfig("grid needs at least one lexicon source");

  // Scorers and encoded sentences are built once and shared by every row.
  std::vector<std::unique_ptr<Scorer>> scorers;
  std::vector<std::vector<PreparedPair>> pairs(sources.size());
  for (std::size_t s = 0; s < sources.size(); ++s) {
    for (const auto* lexicon : sources[s].variants) {
      scorers.push_back(std::make_unique<Scorer>(*lexicon, res, options.features));
      for (const auto& d : datasets) {
        if (sources[s].excluded_datasets.contains(d.name)) continue;
        if (d.sentences.empty()) throw EmptyDataset();
        PreparedPair p{scorers.back().get(), {}, {}};
        p.sentences.reserve(d.sentences.size());
        for (const auto& sentence : d.sentences) {
          p.sentences.push_back(p.scorer->encode(sentence.text));
          p.truth.push_back(sentence.label);
        }
        pairs[s].push_back(std::move(p));
      }
    }
    if (pairs[s].empty()) {
      throw DataError("lexicon source '" + sources[s].name + "' has nothing to evaluate");
    }
  }

  GridResult result;
  for (const auto& src : sources) {
    for (auto sel : options.selectors) {
      for (auto m : options.metrics) {
        result.cell_names.push_back(src.name + "/" + std::string(to_string(sel)) + "/" +
                                    std::string(to_string(m)));
      }
    }
  }

  const std::size_t k = values.size();
  result.table.resize(k * k * k);
  detail::parallel_for(result.table.size(), options.threads, [&](std::size_t row_index) {
    auto& row = result.table[row_index];
    row.coeffs = {values[row_index / (k * k)], values[(row_index / k) % k], values[row_index % k],
                  options.lmo};
    row.cells.reserve(result.cell_names.size());
    std::vector<Polarity> predicted;
    for (std::size_t s = 0; s < sources.size(); ++s) {
      for (auto sel : options.selectors) {
        std::vector<EvalReport> reports;
        reports.reserve(pairs[s].size());
        for (const auto& p : pairs[s]) {
          predicted.resize(p.sentences.size());
          for (std::size_t i = 0; i < p.sentences.size(); ++i) {
            predicted[i] = p.scorer->score_encoded(p.sentences[i], row.coeffs, sel).polarity;
          }
          reports.push_back(compute_report(p.truth, predicted));
        }
        for (auto m : options.metrics) {
          double sum = 0.0;
          for (const auto& r : reports) sum += metric_of(r, m);
          row.cells.push_back(sum / static_cast<double>(reports.size()));
        }
      }
    }
    for (double c : row.cells) row.aggregated_average += c;
  });

  const GridRow* best = &result.table.front();
  for (const auto& row : result.table) {
    if (row.aggregated_average > best->aggregated_average) best = &row;
  }
  result.best = best->coeffs;
  result.aggregated_average = best->aggregated_average;
  return result;
}

void write_grid_csv(std::ostream& out, const GridResult& result) {
  std::vector<std::string> fields{"c_xlp", "c_xlo", "c_lmp", "c_lmo", "aggregated_average"};
  fields.insert(fields.end(), result.cell_names.begin(), result.cell_names.end());
  csv::write_row(out, fields);
  for (const auto& row : result.table) {
    fields.clear();
    for (double v : {row.coeffs.xlp, row.coeffs.xlo, row.coeffs.lmp, row.coeffs.lmo,
                     row.aggregated_average}) {
      fields.push_back(csv::format_real(v));
    }
    for (double c : row.cells) fields.push_back(csv::format_real(c));
    csv::write_row(out, fields);
  }
}

BenchReport benchmark(std::span<const std::string> sentences,
                      const std::filesystem::path& lexicon_path, const ModelConfig& config,
                      const LanguageResources& res, int repetitions) {
  if (repetitions < 1) throw InvalidConfig("repetitions must be at least 1");
  using clock = std::chrono::steady_clock;
  BenchReport report;
  report.sentences = sentences.size();

  const auto load_start = clock::now();
  const auto lexicon = load_lexicon(lexicon_path);
  const SentimentModel model(lexicon, res, config);
  report.load_seconds = std::chrono::duration<double>(clock::now() - load_start).count();
  report.lexicon_bytes = std::filesystem::file_size(lexicon_path);
  report.lexicon_words = lexicon.size();

  volatile double sink = 0.0;
  for (int rep = 0; rep < repetitions; ++rep) {
    const auto start = clock::now();
    double total = 0.0;
    for (const auto& s : sentences) total += model.classify(s).value;
    sink = sink + total;
    report.seconds.push_back(std::chrono::duration<double>(clock::now() - start).count());
  }
  double sum = 0.0;
  for (double s : report.seconds) sum += s;
  report.mean_seconds = sum / static_cast<double>(repetitions);
  report.sentences_per_second =
      (report.sentences == 0 || report.mean_seconds <= 0.0)
          ? 0.0
          : static_cast<double>(report.sentences) / report.mean_seconds;
  return report;
}

std::string format_bench_report(const BenchReport& r) {
  std::string out;
  out += fmt("sentences:        %zu\n", r.sentences);
  out += fmt("lexicon words:    %zu\n", r.lexicon_words);
  out += fmt("lexicon size:     %ju bytes (%.1f KB)\n", r.lexicon_bytes,
             static_cast<double>(r.lexicon_bytes) / 1024.0);
  out += fmt("load time:        %.6f s\n", r.load_seconds);
  for (std::size_t i = 0; i < r.seconds.size(); ++i) {
    out += fmt("run %-3zu          %.6f s\n", i + 1, r.seconds[i]);
  }
  out += fmt("mean:             %.6f s\n", r.mean_seconds);
  out += fmt("throughput:       %.1f sentences/s\n", r.sentences_per_second);
  return out;
}

}  // namespace xlex
