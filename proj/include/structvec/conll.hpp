#pragma once

#include <algorithm>
#include <cctype>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "structvec/errors.hpp"

namespace structvec {

// One token of a dependency-parsed sentence.  `head` is 1-based; 0 means the
// token hangs off the artificial root.
struct Token {
    std::string surface;    // lowercased at ingestion
    int head = 0;
    std::string arc_label;  // e.g. "nsubj", "prep", "pobj", "mwe"
};

struct ParsedSentence {
    std::vector<Token> tokens;

    std::size_t size() const { return tokens.size(); }
    // 1-based accessor matching CoNLL head numbering.
    const Token& at1(int position) const { return tokens[static_cast<std::size_t>(position) - 1]; }
    const std::string& word1(int position) const { return at1(position).surface; }
};

// Sentences dropped during parsing (head cycles, out-of-range heads) are
// reported here rather than aborting the whole file.
struct ConllDiagnostic {
    long sentence_index;  // 0-based over the file, counting dropped sentences
    std::string message;
};

namespace detail {

inline std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return out;
}

inline std::vector<std::string_view> split_columns(std::string_view line) {
    std::vector<std::string_view> cols;
    if (line.find('\t') != std::string_view::npos) {
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            if (tab == std::string_view::npos) {
                cols.push_back(line.substr(start));
                break;
            }
            cols.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
    } else {
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            std::size_t start = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            if (i > start) cols.push_back(line.substr(start, i - start));
        }
    }
    return cols;
}

inline bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    long value = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9') return false;
        value = value * 10 + (ch - '0');
        if (value > 1'000'000) return false;
    }
    out = static_cast<int>(value);
    return true;
}

// True for CoNLL-U multiword-token ranges ("4-5") and empty nodes ("5.1"),
// which carry no head of their own and are skipped.
inline bool is_range_or_empty_id(std::string_view id) {
    return id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos;
}

// Validates that heads form a forest rooted at 0.  Returns a non-empty
// message on the first violation found.
inline std::string check_forest(const ParsedSentence& sentence) {
    const int n = static_cast<int>(sentence.size());
    for (int i = 1; i <= n; ++i) {
        const Token& tok = sentence.at1(i);
        if (tok.head == i) return "token " + std::to_string(i) + " is its own head";
        if (tok.head < 0 || tok.head > n)
            return "token " + std::to_string(i) + " has out-of-range head " + std::to_string(tok.head);
    }
    // Walk each parent chain; a chain longer than n tokens must loop.
    for (int i = 1; i <= n; ++i) {
        int cursor = i;
        int steps = 0;
        while (cursor != 0) {
            cursor = sentence.at1(cursor).head;
            if (++steps > n) return "head cycle through token " + std::to_string(i);
        }
    }
    return {};
}

}  // namespace detail

// Reads CoNLL-X / CoNLL-U text: one token per line, blank line between
// sentences, '#' comment lines ignored.  Column layout is detected from the
// column count per line: 10 or 8 columns use (head, deprel) = columns 7, 8;
// a bare 4-column (id, form, head, deprel) layout is also accepted.
// Malformed lines abort with the offending line number; sentences whose
// heads do not form a forest are dropped and reported via `diagnostics`.
inline std::vector<ParsedSentence> parse_conll(std::istream& in,
                                               std::vector<ConllDiagnostic>* diagnostics = nullptr) {
    std::vector<ParsedSentence> sentences;
    ParsedSentence current;
    std::string line;
    long line_number = 0;
    long sentence_index = 0;

    auto flush_sentence = [&]() {
        if (current.tokens.empty()) return;
        std::string problem = detail::check_forest(current);
        if (problem.empty()) {
            sentences.push_back(std::move(current));
        } else if (diagnostics) {
            diagnostics->push_back({sentence_index, problem});
        }
        current = ParsedSentence{};
        ++sentence_index;
    };

    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            flush_sentence();
            continue;
        }
        if (line[0] == '#') continue;

        std::vector<std::string_view> cols = detail::split_columns(line);
        std::size_t head_col, deprel_col;
        if (cols.size() >= 8) {
            head_col = 6;
            deprel_col = 7;
        } else if (cols.size() == 4) {
            head_col = 2;
            deprel_col = 3;
        } else {
            throw ParseError("unsupported column count " + std::to_string(cols.size()), line_number);
        }

        if (detail::is_range_or_empty_id(cols[0])) continue;

        int id = 0;
        if (!detail::parse_int(cols[0], id) || id <= 0)
            throw ParseError("bad token id '" + std::string(cols[0]) + "'", line_number);
        int head = 0;
        if (!detail::parse_int(cols[head_col], head))
            throw ParseError("bad head '" + std::string(cols[head_col]) + "'", line_number);
        if (cols[deprel_col].empty())
            throw ParseError("empty dependency label", line_number);

        Token tok;
        tok.surface = detail::lowercase(cols[1]);
        tok.head = head;
        tok.arc_label = std::string(cols[deprel_col]);
        current.tokens.push_back(std::move(tok));
    }
    flush_sentence();
    return sentences;
}

}  // namespace structvec
