#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace xlex {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

template <class V>
using StringMap = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;
using StringSet = std::unordered_set<std::string, StringHash, std::equal_to<>>;

struct Token {
  std::string surface;
  std::string lower;

  friend bool operator==(const Token&, const Token&) = default;
};

// ASCII lowercasing; bytes outside ASCII pass through.
std::string to_lower(std::string_view text);

inline bool is_token_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || (u >= '0' && u <= '9') ||
         u >= 0x80;
}

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Calls `fn(std::string_view)` for each token of `text` in order. A token is a
// whitespace-delimited chunk with leading and trailing non-alphanumeric bytes
// stripped; hyphens and apostrophes inside the chunk are kept.
template <class Fn>
void for_each_token(std::string_view text, Fn&& fn) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && is_space(text[i])) ++i;
    std::size_t end = i;
    while (end < n && !is_space(text[end])) ++end;
    std::size_t first = i;
    std::size_t last = end;
    while (first < last && !is_token_char(text[first])) ++first;
    while (last > first && !is_token_char(text[last - 1])) --last;
    if (first < last) fn(text.substr(first, last - first));
    i = end;
  }
}

std::vector<Token> tokenize(std::string_view text);

// Lemma table, English word list and stopword list. Immutable once built.
class LanguageResources {
 public:
  LanguageResources() = default;

  // Keys and values are lowercased. Throws DataError when a lemma is itself
  // mapped to a different word.
  LanguageResources(const std::vector<std::pair<std::string, std::string>>& lemmas,
                    const std::vector<std::string>& english_words,
                    const std::vector<std::string>& stopwords);

  // Reads lemmas.tsv, english.txt and stopwords.txt from `dir`.
  static LanguageResources load(const std::filesystem::path& dir);
  static LanguageResources load(const std::filesystem::path& lemmas_tsv,
                                const std::filesystem::path& english_txt,
                                const std::filesystem::path& stopwords_txt);

  // Returns the lemma of a lowercase word, or the word itself when unmapped.
  // The result views either `word` or storage owned by this object.
  std::string_view lemmatize(std::string_view word) const;

  bool is_valid_word(std::string_view word) const;

  const StringMap<std::string>& lemma_map() const { return lemma_map_; }
  const StringSet& english_words() const { return english_words_; }
  const StringSet& stopwords() const { return stopwords_; }

 private:
  StringMap<std::string> lemma_map_;
  StringSet english_words_;
  StringSet stopwords_;
};

inline std::string lemmatize(std::string_view word, const LanguageResources& res) {
  return std::string(res.lemmatize(word));
}

inline bool is_valid_word(std::string_view word, const LanguageResources& res) {
  return res.is_valid_word(word);
}

}  // namespace xlex
