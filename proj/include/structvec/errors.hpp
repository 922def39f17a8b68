#pragma once

#include <stdexcept>
#include <string>

namespace structvec {

// Malformed input text (bad CoNLL line, bad model file, bad TSV row).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, long line_number)
        : std::runtime_error(what + " (line " + std::to_string(line_number) + ")"),
          line_number_(line_number) {}
    long line_number() const { return line_number_; }

private:
    long line_number_;
};

// Well-formed input that violates a structural requirement, e.g. a
// dependency graph with a head cycle.
class StructuralError : public std::runtime_error {
public:
    StructuralError(const std::string& what, long sentence_index)
        : std::runtime_error(what + " (sentence " + std::to_string(sentence_index) + ")"),
          sentence_index_(sentence_index) {}
    long sentence_index() const { return sentence_index_; }

private:
    long sentence_index_;
};

// Invalid configuration (empty feature selection, bad ratios, ...).
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unknown word / feature queries and other data-dependent failures.
class LookupError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace structvec
