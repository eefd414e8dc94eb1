// xlex: build explainable sentiment lexicons and run the lexicon classifier.
//
// Exit codes: 0 success, 2 missing input file, 64 usage error, 65 data error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11/CLI11.hpp>
#include <nlohmann/json.hpp>

#include "xlex/attribution.hpp"
#include "xlex/combined.hpp"
#include "xlex/csv.hpp"
#include "xlex/error.hpp"
#include "xlex/evaluation.hpp"
#include "xlex/lexicon.hpp"
#include "xlex/sentiment.hpp"
#include "xlex/textprep.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitMissingFile = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

struct Manifest {
  std::string command;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  json config = json::object();
};

struct ModelFlags {
  std::string lexicon;
  std::string selector = "combined";
  std::string features = "avg";
  std::string coeffs = "0.3,0.1,0.1,0.5";
  bool normalized = false;

  void add_to(CLI::App& cmd, bool lexicon_required = true) {
    auto* opt = cmd.add_option("--lexicon", lexicon, "Combined (or XLex) lexicon CSV");
    if (lexicon_required) opt->required();
    cmd.add_option("--selector", selector, "Lexicon used for scoring: xlex|lm|combined")
        ->capture_default_str();
    cmd.add_option("--features", features, "Decision features: avg,ratio,count")
        ->capture_default_str();
    cmd.add_option("--coeffs", coeffs, "Coefficients c_xlp,c_xlo,c_lmp,c_lmo")
        ->capture_default_str();
    cmd.add_flag("--normalized", normalized,
                 "Use the normalized variant <lexicon>.norm.csv of a standard lexicon");
  }

  xlex::ModelConfig config() const {
    xlex::ModelConfig c;
    c.selector = xlex::parse_selector(selector);
    c.features = xlex::FeatureSet::parse(features);
    c.coeffs = xlex::parse_coefficients(coeffs);
    c.validate();
    return c;
  }

  fs::path lexicon_path() const { return resolve(lexicon); }

  fs::path resolve(const std::string& path) const {
    fs::path p = path;
    if (!normalized) return p;
    const auto name = p.filename().string();
    if (name.ends_with(".norm.csv")) return p;
    if (name.ends_with(".csv")) {
      p.replace_filename(name.substr(0, name.size() - 4) + ".norm.csv");
    } else {
      p += ".norm.csv";
    }
    return p;
  }

  json snapshot() const {
    return json{{"lexicon", lexicon},
                {"selector", selector},
                {"features", features},
                {"coeffs", coeffs},
                {"normalized", normalized}};
  }
};

void write_manifest(const std::string& path, const Manifest& m, double wall_seconds) {
  if (path.empty()) return;
  json j;
  j["command"] = m.command;
  j["inputs"] = m.inputs;
  j["outputs"] = m.outputs;
  j["config"] = m.config;
  j["finished_at"] = xlex::utc_timestamp();
  j["wall_seconds"] = wall_seconds;
  auto out = xlex::csv::open_output(path);
  out << j.dump(2) << '\n';
}

// Writes to `path`, or stdout when empty.
template <class Fn>
void emit(const std::string& path, Manifest& manifest, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  auto out = xlex::csv::open_output(path);
  fn(out);
  manifest.outputs.push_back(path);
}

bool looks_labeled(const fs::path& path) {
  auto in = xlex::csv::open_input(path);
  std::string first;
  std::getline(in, first);
  if (!first.empty() && first.back() == '\r') first.pop_back();
  return first == "sentence,label";
}

std::string dataset_name(const fs::path& path) { return path.stem().string(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explainable sentiment lexicon toolkit", "xlex"};
  app.set_version_flag("--version", std::string("xlex ") + XLEX_VERSION + " (lexicon format " +
                                        std::to_string(xlex::kLexiconFormatVersion) + ")");
  app.set_config("--config", "", "Read options from a TOML key = value file; flags override it");
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  std::string resource_dir = XLEX_DEFAULT_RESOURCE_DIR;
  if (const char* env = std::getenv("XLEX_RESOURCES")) resource_dir = env;
  unsigned threads = 0;
  std::string manifest_path;
  app.add_option("--resources", resource_dir,
                 "Directory with lemmas.tsv, english.txt, stopwords.txt (env XLEX_RESOURCES)")
      ->capture_default_str();
  app.add_option("--threads", threads, "Worker threads for evaluate/grid/classify (0 = all)")
      ->capture_default_str();
  app.add_option("--manifest", manifest_path, "Write a JSON run manifest to this path");

  // build
  auto* build = app.add_subcommand("build", "Build an XLex lexicon from attribution CSV files");
  std::vector<std::string> attribution_files;
  std::string build_out;
  std::string build_name;
  build->add_option("--attributions,attributions", attribution_files,
                    "Attribution CSV files (sentence_id,token,value)")
      ->required();
  build->add_option("--out", build_out, "Output XLex lexicon CSV")->required();
  build->add_option("--name", build_name, "Source dataset name recorded in the sidecar");

  // merge-lm
  auto* merge = app.add_subcommand("merge-lm", "Combine an XLex lexicon with LM word lists");
  std::string merge_xlex, lm_pos, lm_neg, out_prefix, merge_name;
  merge->add_option("--xlex", merge_xlex, "XLex lexicon CSV")->required();
  merge->add_option("--lm-pos", lm_pos, "LM positive word list")->required();
  merge->add_option("--lm-neg", lm_neg, "LM negative word list")->required();
  merge->add_option("--out-prefix", out_prefix, "Writes <prefix>.csv and <prefix>.norm.csv")
      ->required();
  merge->add_option("--name", merge_name, "Source dataset name (defaults to the XLex sidecar)");

  // classify
  auto* classify = app.add_subcommand("classify", "Score sentences");
  ModelFlags classify_model;
  std::string classify_input, classify_out;
  classify_model.add_to(*classify);
  classify->add_option("--input", classify_input,
                       "Sentences, one per line, or CSV sentence,label")
      ->required();
  classify->add_option("--out", classify_out, "Output CSV (default stdout)");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate on a labeled dataset");
  ModelFlags eval_model;
  std::string eval_input, eval_json, eval_report_out;
  bool lm_constrained = false;
  eval_model.add_to(*evaluate);
  evaluate->add_option("--input", eval_input, "CSV sentence,label")->required();
  evaluate->add_option("--json", eval_json, "Also write the report as JSON");
  evaluate->add_option("--out", eval_report_out, "Write the text report here (default stdout)");
  evaluate->add_flag("--lm-constrained", lm_constrained,
                     "Keep only sentences the LM-only model answers");

  // grid
  auto* grid = app.add_subcommand("grid", "Coefficient grid search");
  std::vector<std::string> grid_lexicons, grid_datasets, grid_excludes;
  std::string grid_values = "0.1,0.3,0.5,0.7,0.9";
  std::string grid_features = "avg";
  double grid_lmo = 0.5;
  std::string grid_out;
  grid->add_option("--lexicon", grid_lexicons,
                   "Lexicon files; variants sharing a source name are averaged together")
      ->required();
  grid->add_option("--dataset", grid_datasets, "Labeled CSV datasets")->required();
  grid->add_option("--values", grid_values, "Candidate coefficient values")
      ->capture_default_str();
  grid->add_option("--features", grid_features, "Decision features")->capture_default_str();
  grid->add_option("--lmo", grid_lmo, "Fixed c_lmo")->capture_default_str();
  grid->add_option("--exclude", grid_excludes,
                   "source=dataset pairs that are not evaluated together");
  grid->add_option("--out", grid_out, "Results CSV (default stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "Time classification of a sentence file");
  ModelFlags bench_model;
  std::string bench_input, bench_json;
  int reps = 10;
  bench_model.add_to(*bench);
  bench->add_option("--input", bench_input, "Sentences, one per line, or CSV sentence,label")
      ->required();
  bench->add_option("--reps", reps, "Repetitions")->capture_default_str()->check(
      CLI::PositiveNumber);
  bench->add_option("--json", bench_json, "Also write timings as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const auto started = std::chrono::steady_clock::now();
  Manifest manifest;
  try {
    auto resources = [&] {
      return xlex::LanguageResources::load(resource_dir);
    };

    if (*build) {
      manifest.command = "build";
      const auto res = resources();
      std::vector<xlex::AttributionRecord> records;
      for (const auto& f : attribution_files) {
        auto part = xlex::read_attribution_file(f);
        records.insert(records.end(), std::make_move_iterator(part.begin()),
                       std::make_move_iterator(part.end()));
        manifest.inputs.push_back(f);
      }
      if (records.empty()) std::cerr << "warning: no attribution records; lexicon is empty\n";
      const auto lexicon = xlex::build_xlex(records, res);
      {
        auto out = xlex::csv::open_output(build_out);
        xlex::write_lexicon_csv(out, lexicon);
      }
      xlex::LexiconMeta meta;
      meta.source_name = build_name.empty() ? fs::path(build_out).stem().string() : build_name;
      meta.built_at = xlex::utc_timestamp();
      xlex::write_meta(build_out, meta);
      manifest.outputs = {build_out, xlex::meta_path(build_out).string()};
      manifest.config = json{{"name", meta.source_name}, {"resources", resource_dir}};
      const auto counts = xlex::count_categories(lexicon);
      std::cout << "positive words: " << counts.positive << '\n'
                << "negative words: " << counts.negative << '\n'
                << "total words:    " << lexicon.size() << '\n';
    } else if (*merge) {
      manifest.command = "merge-lm";
      const auto res = resources();
      const auto xlex_lexicon = xlex::project(xlex::load_lexicon(merge_xlex), xlex::Side::xlex);
      const auto lm = xlex::prepare_lm(xlex::read_word_list_file(lm_pos),
                                       xlex::read_word_list_file(lm_neg), res);
      manifest.inputs = {merge_xlex, lm_pos, lm_neg};
      auto combined = xlex::combine(xlex_lexicon, lm);
      const auto normalized = xlex::normalize(combined);

      xlex::LexiconMeta meta;
      meta.source_name = merge_name;
      if (meta.source_name.empty()) {
        if (auto m = xlex::read_meta(merge_xlex)) meta.source_name = m->source_name;
      }
      if (meta.source_name.empty()) meta.source_name = fs::path(out_prefix).filename().string();
      meta.built_at = xlex::utc_timestamp();
      const std::string standard_path = out_prefix + ".csv";
      const std::string normalized_path = out_prefix + ".norm.csv";
      xlex::save_combined(standard_path, combined, meta);
      xlex::save_combined(normalized_path, normalized, meta);
      manifest.outputs = {standard_path, xlex::meta_path(standard_path).string(),
                          normalized_path, xlex::meta_path(normalized_path).string()};
      manifest.config = json{{"name", meta.source_name}, {"resources", resource_dir}};

      std::size_t both = 0;
      for (const auto& e : combined.entries()) {
        if (e.xlex.category != xlex::Category::none && e.lm.category != xlex::Category::none) {
          ++both;
        }
      }
      std::cout << "xlex words:     " << xlex_lexicon.size() << '\n'
                << "lm words:       " << lm.size() << '\n'
                << "shared words:   " << both << '\n'
                << "combined words: " << combined.size() << '\n';
    } else if (*classify) {
      manifest.command = "classify";
      const auto config = classify_model.config();
      const auto res = resources();
      const auto lexicon_path = classify_model.lexicon_path();
      const auto lexicon = xlex::load_lexicon(lexicon_path);
      std::vector<std::string> sentences;
      if (looks_labeled(classify_input)) {
        for (auto& s : xlex::read_labeled_file(classify_input)) sentences.push_back(s.text);
      } else {
        sentences = xlex::read_sentences_file(classify_input);
      }
      manifest.inputs = {lexicon_path.string(), classify_input};
      manifest.config = classify_model.snapshot();
      const xlex::SentimentModel model(lexicon, res, config);
      const auto verdicts = model.classify_all(sentences, threads);
      emit(classify_out, manifest, [&](std::ostream& out) {
        out << "sentence_index,value,polarity,matched_words\n";
        for (std::size_t i = 0; i < verdicts.size(); ++i) {
          xlex::csv::write_row(out, {std::to_string(i), xlex::csv::format_real(verdicts[i].value),
                                     xlex::to_string(verdicts[i].polarity),
                                     std::to_string(verdicts[i].matched_words)});
        }
      });
    } else if (*evaluate) {
      manifest.command = "evaluate";
      const auto config = eval_model.config();
      const auto res = resources();
      const auto lexicon_path = eval_model.lexicon_path();
      const auto lexicon = xlex::load_lexicon(lexicon_path);
      auto sentences = xlex::read_labeled_file(eval_input);
      manifest.inputs = {lexicon_path.string(), eval_input};
      manifest.config = eval_model.snapshot();
      manifest.config["lm_constrained"] = lm_constrained;
      if (lm_constrained) {
        auto lm_config = config;
        lm_config.selector = xlex::Selector::lm;
        const auto before = sentences.size();
        sentences = xlex::lm_constrained_subset(sentences, lm_config, lexicon, res);
        std::cerr << "lm-constrained subset: " << sentences.size() << " of " << before
                  << " sentences\n";
      }
      const auto report = xlex::evaluate(sentences, lexicon, config, res, threads);
      emit(eval_report_out, manifest,
           [&](std::ostream& out) { out << xlex::format_classification_report(report); });
      if (!eval_json.empty()) {
        auto out = xlex::csv::open_output(eval_json);
        out << xlex::report_to_json(report) << '\n';
        manifest.outputs.push_back(eval_json);
      }
    } else if (*grid) {
      manifest.command = "grid";
      xlex::GridOptions options;
      options.values.clear();
      {
        std::stringstream ss(grid_values);
        std::string item;
        while (std::getline(ss, item, ',')) {
          auto v = xlex::csv::parse_real(item);
          if (!v) throw xlex::InvalidConfig("bad grid value '" + item + "'");
          options.values.push_back(*v);
        }
      }
      options.features = xlex::FeatureSet::parse(grid_features);
      options.lmo = grid_lmo;
      options.threads = threads;
      const auto res = resources();

      std::vector<std::unique_ptr<xlex::CombinedLexicon>> lexicons;
      std::vector<xlex::GridSource> sources;
      std::map<std::string, std::size_t> source_index;
      for (const auto& path : grid_lexicons) {
        lexicons.push_back(std::make_unique<xlex::CombinedLexicon>(xlex::load_lexicon(path)));
        manifest.inputs.push_back(path);
        const auto& name = lexicons.back()->name();
        auto [it, inserted] = source_index.try_emplace(name, sources.size());
        if (inserted) sources.push_back(xlex::GridSource{name, {}, {}});
        sources[it->second].variants.push_back(lexicons.back().get());
      }
      for (const auto& pair : grid_excludes) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos) {
          throw xlex::InvalidConfig("--exclude expects source=dataset, got '" + pair + "'");
        }
        const auto src = pair.substr(0, eq);
        auto it = source_index.find(src);
        if (it == source_index.end()) {
          throw xlex::InvalidConfig("--exclude names unknown source '" + src + "'");
        }
        sources[it->second].excluded_datasets.insert(pair.substr(eq + 1));
      }
      std::vector<xlex::GridDataset> datasets;
      for (const auto& path : grid_datasets) {
        datasets.push_back({dataset_name(path), xlex::read_labeled_file(path)});
        manifest.inputs.push_back(path);
      }
      manifest.config = json{{"values", grid_values},
                             {"features", grid_features},
                             {"lmo", grid_lmo},
                             {"excludes", grid_excludes}};
      const auto result = xlex::grid_search(sources, datasets, res, options);
      emit(grid_out, manifest, [&](std::ostream& out) { xlex::write_grid_csv(out, result); });
      std::cerr << "evaluated " << result.table.size() << " coefficient combinations; best ("
                << result.best.xlp << ", " << result.best.xlo << ", " << result.best.lmp << ", "
                << result.best.lmo << ") aggregated average " << result.aggregated_average
                << '\n';
    } else if (*bench) {
      manifest.command = "bench";
      const auto config = bench_model.config();
      const auto res = resources();
      const auto lexicon_path = bench_model.lexicon_path();
      std::vector<std::string> sentences;
      if (looks_labeled(bench_input)) {
        for (auto& s : xlex::read_labeled_file(bench_input)) sentences.push_back(s.text);
      } else {
        sentences = xlex::read_sentences_file(bench_input);
      }
      if (!fs::exists(lexicon_path)) throw xlex::FileNotFound(lexicon_path.string());
      manifest.inputs = {lexicon_path.string(), bench_input};
      manifest.config = bench_model.snapshot();
      manifest.config["reps"] = reps;
      const auto report = xlex::benchmark(sentences, lexicon_path, config, res, reps);
      std::cout << xlex::format_bench_report(report);
      if (!bench_json.empty()) {
        json j;
        j["sentences"] = report.sentences;
        j["lexicon_words"] = report.lexicon_words;
        j["lexicon_bytes"] = report.lexicon_bytes;
        j["load_seconds"] = report.load_seconds;
        j["seconds"] = report.seconds;
        j["mean_seconds"] = report.mean_seconds;
        j["sentences_per_second"] = report.sentences_per_second;
        auto out = xlex::csv::open_output(bench_json);
        out << j.dump(2) << '\n';
        manifest.outputs.push_back(bench_json);
      }
    }
  } catch (const xlex::FileNotFound& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMissingFile;
  } catch (const xlex::InvalidConfig& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const xlex::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  try {
    write_manifest(manifest_path, manifest, wall);
  } catch (const xlex::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
