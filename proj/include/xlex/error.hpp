#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xlex {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad contents of an otherwise readable input. The CLI maps these to exit 65.
class DataError : public Error {
 public:
  using Error::Error;
};

// A value that cannot be parsed at a known location.
class ParseError : public DataError {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : DataError(source + ":" + std::to_string(line) + ": " + what),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

class MalformedRow : public ParseError {
 public:
  using ParseError::ParseError;
};

class ValueOutOfRange : public ParseError {
 public:
  using ParseError::ParseError;
};

class DuplicateWord : public DataError {
 public:
  explicit DuplicateWord(std::string word)
      : DataError("duplicate word in lexicon: " + word), word_(std::move(word)) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

class DuplicateAcrossPolarity : public DataError {
 public:
  DuplicateAcrossPolarity(std::string word, const std::string& positive_surface,
                          const std::string& negative_surface)
      : DataError("lemma '" + word + "' occurs in both LM lists (positive: '" +
                  positive_surface + "', negative: '" + negative_surface + "')"),
        word_(std::move(word)) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

class AlreadyNormalized : public DataError {
 public:
  AlreadyNormalized() : DataError("lexicon is already normalized") {}
};

class EmptyDataset : public DataError {
 public:
  EmptyDataset() : DataError("dataset is empty") {}
};

// Rejected configuration (selector, features, coefficients). CLI exit 64.
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

// CLI exit 2.
class FileNotFound : public Error {
 public:
  explicit FileNotFound(const std::string& path)
      : Error("no such file: " + path), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace xlex
