#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <fstream>
#include <sstream>

#include "xlex/attribution.hpp"
#include "xlex/combined.hpp"
#include "xlex/error.hpp"
#include "xlex/evaluation.hpp"
#include "xlex/lexicon.hpp"
#include "xlex/sentiment.hpp"
#include "xlex/textprep.hpp"

namespace py = pybind11;
using namespace xlex;

namespace {

py::dict stats_dict(const WordStats& s) {
  py::dict d;
  d["count"] = s.count;
  d["shap_sum"] = s.shap_sum;
  d["shap_avg"] = s.shap_avg;
  d["shap_max"] = s.shap_max;
  d["shap_min"] = s.shap_min;
  return d;
}

py::dict group_dict(const FeatureGroup& g) {
  py::dict d;
  d["category"] = std::string(to_string(g.category));
  d["src"] = std::string(to_string(g.src));
  for (std::size_t f = 0; f < kFieldCount; ++f) d[py::str(std::string(kFieldNames[f]))] = g.values[f];
  return d;
}

py::dict report_dict(const EvalReport& r) {
  auto cls = [](const ClassMetrics& m) {
    py::dict d;
    d["precision"] = m.precision;
    d["recall"] = m.recall;
    d["f1"] = m.f1;
    d["support"] = m.support;
    return d;
  };
  py::dict d;
  d["n"] = r.n;
  d["accuracy"] = r.accuracy;
  d["positive"] = cls(r.positive);
  d["negative"] = cls(r.negative);
  d["f1_macro"] = r.f1_macro;
  d["f1_weighted"] = r.f1_weighted;
  d["mcc"] = r.mcc;
  d["unanswered"] = r.unanswered;
  d["confusion"] = r.confusion;
  return d;
}

ModelConfig make_config(const std::string& selector, const std::string& features,
                        const std::vector<double>& coeffs) {
  if (coeffs.size() != 4) throw InvalidConfig("coeffs needs exactly four values");
  ModelConfig c;
  c.selector = parse_selector(selector);
  c.features = FeatureSet::parse(features);
  c.coeffs = {coeffs[0], coeffs[1], coeffs[2], coeffs[3]};
  c.validate();
  return c;
}

std::vector<LabeledSentence> labeled(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::vector<LabeledSentence> out;
  out.reserve(rows.size());
  for (const auto& [text, label] : rows) {
    const auto p = parse_polarity(label);
    if (p == Polarity::neutral) throw DataError("labels must be positive or negative");
    out.push_back({text, p});
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Explainable sentiment lexicon construction and scoring";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto data_error = py::register_exception<DataError>(m, "DataError", error.ptr());
  py::register_exception<InvalidConfig>(m, "InvalidConfig", error.ptr());
  py::register_exception<FileNotFound>(m, "FileNotFound", error.ptr());
  py::register_exception<DuplicateWord>(m, "DuplicateWord", data_error.ptr());
  py::register_exception<AlreadyNormalized>(m, "AlreadyNormalized", data_error.ptr());

  m.attr("LEXICON_FORMAT_VERSION") = kLexiconFormatVersion;

  py::class_<LanguageResources>(m, "LanguageResources")
      .def(py::init<const std::vector<std::pair<std::string, std::string>>&,
                    const std::vector<std::string>&, const std::vector<std::string>&>(),
           py::arg("lemmas"), py::arg("english_words"), py::arg("stopwords"))
      .def_static("load", py::overload_cast<const std::filesystem::path&>(&LanguageResources::load),
                  py::arg("directory"))
      .def("lemmatize", [](const LanguageResources& r, const std::string& w) {
        return std::string(r.lemmatize(w));
      })
      .def("is_valid_word", &LanguageResources::is_valid_word);

  m.def("tokenize", [](const std::string& text) {
    std::vector<std::string> out;
    for (const auto& t : tokenize(text)) out.push_back(t.surface);
    return out;
  });

  py::class_<LexiconEntry>(m, "LexiconEntry")
      .def_readonly("word", &LexiconEntry::word)
      .def_property_readonly("category", [](const LexiconEntry& e) { return std::string(to_string(e.category)); })
      .def_property_readonly("selected", [](const LexiconEntry& e) { return stats_dict(e.selected); })
      .def_property_readonly("opposite", [](const LexiconEntry& e) { return stats_dict(e.opposite); })
      .def_readonly("count_total", &LexiconEntry::count_total)
      .def_readonly("shap_ratio", &LexiconEntry::shap_ratio)
      .def_readonly("shap_ratio_opp", &LexiconEntry::shap_ratio_opp)
      .def_property_readonly("src", [](const LexiconEntry& e) { return std::string(to_string(e.src)); })
      .def("__repr__", [](const LexiconEntry& e) {
        return "<LexiconEntry " + e.word + " " + std::string(to_string(e.category)) + ">";
      });

  m.def(
      "read_attributions",
      [](const std::filesystem::path& path) {
        std::vector<std::tuple<std::int64_t, std::string, double>> out;
        for (const auto& r : read_attribution_file(path)) out.emplace_back(r.sentence_id, r.token, r.value);
        return out;
      },
      py::arg("path"), "Rows of an attribution CSV as (sentence_id, token, value) tuples.");

  m.def(
      "build_xlex",
      [](const std::vector<std::tuple<std::int64_t, std::string, double>>& rows,
         const LanguageResources& res) {
        std::vector<AttributionRecord> records;
        records.reserve(rows.size());
        for (const auto& [id, token, value] : rows) records.push_back({id, token, value});
        py::gil_scoped_release release;
        return build_xlex(records, res);
      },
      py::arg("records"), py::arg("resources"));

  m.def(
      "write_xlex",
      [](const Lexicon& lexicon, const std::filesystem::path& path) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write " + path.string());
        write_lexicon_csv(out, lexicon);
      },
      py::arg("lexicon"), py::arg("path"));

  m.def("prepare_lm", [](const std::vector<std::string>& pos, const std::vector<std::string>& neg,
                         const LanguageResources& res) { return prepare_lm(pos, neg, res); },
        py::arg("positive_words"), py::arg("negative_words"), py::arg("resources"));

  py::class_<CombinedLexicon>(m, "CombinedLexicon")
      .def("__len__", &CombinedLexicon::size)
      .def("__contains__", [](const CombinedLexicon& l, const std::string& w) { return l.find(w) != nullptr; })
      .def_property_readonly("normalized", &CombinedLexicon::normalized)
      .def_property_readonly("name", &CombinedLexicon::name)
      .def("words", [](const CombinedLexicon& l) {
        std::vector<std::string> out;
        for (const auto& e : l.entries()) out.push_back(e.word);
        return out;
      })
      .def("row", [](const CombinedLexicon& l, const std::string& w) -> py::object {
        const auto* e = l.find(w);
        if (!e) return py::none();
        py::dict d;
        d["word"] = e->word;
        d["xlex"] = group_dict(e->xlex);
        d["lm"] = group_dict(e->lm);
        return d;
      })
      .def("to_csv", [](const CombinedLexicon& l) {
        std::ostringstream out;
        write_combined_csv(out, l);
        return out.str();
      });

  m.def("combine", &combine, py::arg("xlex"), py::arg("lm"));
  m.def("normalize", &normalize, py::arg("lexicon"));
  m.def("load_lexicon", &load_lexicon, py::arg("path"));
  m.def(
      "save_lexicon",
      [](const CombinedLexicon& l, const std::filesystem::path& path, const std::string& name) {
        LexiconMeta meta;
        meta.normalized = l.normalized();
        meta.source_name = name.empty() ? l.name() : name;
        meta.built_at = utc_timestamp();
        save_combined(path, l, meta);
      },
      py::arg("lexicon"), py::arg("path"), py::arg("name") = "");

  py::class_<SentimentModel>(m, "SentimentModel")
      .def(py::init([](const CombinedLexicon& lexicon, const LanguageResources& res,
                       const std::string& selector, const std::string& features,
                       const std::vector<double>& coeffs) {
             return SentimentModel(lexicon, res, make_config(selector, features, coeffs));
           }),
           py::arg("lexicon"), py::arg("resources"), py::arg("selector") = "combined",
           py::arg("features") = "avg", py::arg("coeffs") = std::vector<double>{0.3, 0.1, 0.1, 0.5},
           py::keep_alive<1, 2>(), py::keep_alive<1, 3>())
      .def("classify", [](const SentimentModel& model, const std::string& text) {
        const auto v = model.classify(text);
        return py::make_tuple(v.value, std::string(to_string(v.polarity)), v.matched_words);
      })
      .def(
          "classify_all",
          [](const SentimentModel& model, const std::vector<std::string>& sentences, unsigned threads) {
            std::vector<SentenceVerdict> verdicts;
            {
              py::gil_scoped_release release;
              verdicts = model.classify_all(sentences, threads);
            }
            py::list out;
            for (const auto& v : verdicts) {
              out.append(py::make_tuple(v.value, std::string(to_string(v.polarity)), v.matched_words));
            }
            return out;
          },
          py::arg("sentences"), py::arg("threads") = 1);

  m.def(
      "evaluate",
      [](const std::vector<std::pair<std::string, std::string>>& rows, const CombinedLexicon& lexicon,
         const LanguageResources& res, const std::string& selector, const std::string& features,
         const std::vector<double>& coeffs, unsigned threads) {
        const auto data = labeled(rows);
        const auto config = make_config(selector, features, coeffs);
        EvalReport r;
        {
          py::gil_scoped_release release;
          r = evaluate(data, lexicon, config, res, threads);
        }
        return report_dict(r);
      },
      py::arg("sentences"), py::arg("lexicon"), py::arg("resources"),
      py::arg("selector") = "combined", py::arg("features") = "avg",
      py::arg("coeffs") = std::vector<double>{0.3, 0.1, 0.1, 0.5}, py::arg("threads") = 1,
      "Metrics over (text, label) pairs; labels are 'positive' or 'negative'.");

  m.def(
      "compute_report",
      [](const std::vector<std::string>& truth, const std::vector<std::string>& predicted) {
        std::vector<Polarity> t, p;
        for (const auto& s : truth) t.push_back(parse_polarity(s));
        for (const auto& s : predicted) p.push_back(parse_polarity(s));
        return report_dict(compute_report(t, p));
      },
      py::arg("truth"), py::arg("predicted"));

  m.def(
      "grid_search",
      [](const std::vector<std::pair<std::string, std::vector<const CombinedLexicon*>>>& sources,
         const std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>>& datasets,
         const LanguageResources& res, const std::vector<double>& values, const std::string& features,
         unsigned threads) {
        std::vector<GridSource> src;
        for (const auto& [name, variants] : sources) src.push_back({name, variants, {}});
        std::vector<GridDataset> data;
        for (const auto& [name, rows] : datasets) data.push_back({name, labeled(rows)});
        GridOptions opt;
        opt.values = values;
        opt.features = FeatureSet::parse(features);
        opt.threads = threads;
        GridResult r;
        {
          py::gil_scoped_release release;
          r = grid_search(src, data, res, opt);
        }
        py::list table;
        for (const auto& row : r.table) {
          table.append(py::make_tuple(
              py::make_tuple(row.coeffs.xlp, row.coeffs.xlo, row.coeffs.lmp, row.coeffs.lmo),
              row.aggregated_average, row.cells));
        }
        py::dict d;
        d["best"] = py::make_tuple(r.best.xlp, r.best.xlo, r.best.lmp, r.best.lmo);
        d["aggregated_average"] = r.aggregated_average;
        d["cells"] = r.cell_names;
        d["table"] = table;
        return d;
      },
      py::arg("sources"), py::arg("datasets"), py::arg("resources"),
      py::arg("values") = std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.9}, py::arg("features") = "avg",
      py::arg("threads") = 1,
      "sources: [(name, [lexicon, ...])]; datasets: [(name, [(text, label), ...])].");
}
