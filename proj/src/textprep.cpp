#include "xlex/textprep.hpp"

#include <fstream>

#include "xlex/csv.hpp"
#include "xlex/error.hpp"

namespace xlex {

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  for_each_token(text, [&](std::string_view t) {
    tokens.push_back(Token{std::string(t), to_lower(t)});
  });
  return tokens;
}

LanguageResources::LanguageResources(
    const std::vector<std::pair<std::string, std::string>>& lemmas,
    const std::vector<std::string>& english_words, const std::vector<std::string>& stopwords) {
  for (const auto& [surface, lemma] : lemmas) {
    auto key = to_lower(surface);
    auto value = to_lower(lemma);
    if (key != value) lemma_map_.insert_or_assign(std::move(key), std::move(value));
  }
  for (const auto& [surface, lemma] : lemma_map_) {
    if (auto it = lemma_map_.find(lemma); it != lemma_map_.end()) {
      throw DataError("lemma '" + lemma + "' (of '" + surface + "') is itself mapped to '" +
                      it->second + "'");
    }
  }
  for (const auto& w : english_words) english_words_.insert(to_lower(w));
  for (const auto& w : stopwords) stopwords_.insert(to_lower(w));
}

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> read_word_list(const std::filesystem::path& path) {
  auto in = csv::open_input(path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto w = trim(line);
    if (w.empty() || w.front() == '#') continue;
    words.push_back(std::move(w));
  }
  return words;
}

std::vector<std::pair<std::string, std::string>> read_lemma_table(
    const std::filesystem::path& path) {
  auto in = csv::open_input(path);
  std::vector<std::pair<std::string, std::string>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw MalformedRow(path.string(), lineno, "expected 'surface<TAB>lemma'");
    }
    auto surface = trim(std::string_view(line).substr(0, tab));
    auto lemma = trim(std::string_view(line).substr(tab + 1));
    if (surface.empty() || lemma.empty()) {
      throw MalformedRow(path.string(), lineno, "empty lemma table column");
    }
    rows.emplace_back(std::move(surface), std::move(lemma));
  }
  return rows;
}

}  // namespace

LanguageResources LanguageResources::load(const std::filesystem::path& dir) {
  return load(dir / "lemmas.tsv", dir / "english.txt", dir / "stopwords.txt");
}

LanguageResources LanguageResources::load(const std::filesystem::path& lemmas_tsv,
                                          const std::filesystem::path& english_txt,
                                          const std::filesystem::path& stopwords_txt) {
  return LanguageResources(read_lemma_table(lemmas_tsv), read_word_list(english_txt),
                           read_word_list(stopwords_txt));
}

std::string_view LanguageResources::lemmatize(std::string_view word) const {
  if (auto it = lemma_map_.find(word); it != lemma_map_.end()) return it->second;
  return word;
}

bool LanguageResources::is_valid_word(std::string_view word) const {
  std::size_t chars = 0;
  for (char c : word) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++chars;  // UTF-8 lead bytes
  }
  return chars >= 3 && english_words_.contains(word) && !stopwords_.contains(word);
}

}  // namespace xlex
