#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "structvec/conll.hpp"
#include "structvec/errors.hpp"

namespace structvec {

// Frequency-filtered dictionary.  Ids are dense 0..V-1, assigned in
// descending count order with lexicographic tie-break, so a vocabulary is a
// pure function of the multiset of words it was built from.
class Vocabulary {
public:
    Vocabulary() = default;

    // `counts` are raw occurrence counts; words below `min_count` are dropped.
    static Vocabulary from_counts(const std::unordered_map<std::string, std::int64_t>& counts,
                                  std::int64_t min_count) {
        if (min_count < 1) throw ConfigError("min_count must be >= 1");
        std::vector<std::pair<std::string, std::int64_t>> kept;
        for (const auto& [word, count] : counts)
            if (count >= min_count) kept.emplace_back(word, count);
        if (kept.empty()) throw DataError("no word survives the frequency filter");
        std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        Vocabulary vocab;
        vocab.words_.reserve(kept.size());
        vocab.counts_.reserve(kept.size());
        for (auto& [word, count] : kept) {
            vocab.ids_.emplace(word, static_cast<int>(vocab.words_.size()));
            vocab.words_.push_back(std::move(word));
            vocab.counts_.push_back(count);
            vocab.total_tokens_ += count;
        }
        return vocab;
    }

    std::optional<int> id(const std::string& word) const {
        auto it = ids_.find(word);
        if (it == ids_.end()) return std::nullopt;
        return it->second;
    }

    bool contains(const std::string& word) const { return ids_.count(word) != 0; }

    const std::string& word(int id) const { return words_.at(static_cast<std::size_t>(id)); }
    std::int64_t count(int id) const { return counts_.at(static_cast<std::size_t>(id)); }

    int size() const { return static_cast<int>(words_.size()); }
    std::int64_t total_tokens() const { return total_tokens_; }

    const std::vector<std::int64_t>& counts() const { return counts_; }
    const std::vector<std::string>& words() const { return words_; }

    // Format: header "V=<int> T=<int>", then one "word<TAB>count" line per
    // entry in id order.
    void save(std::ostream& out) const {
        out << "V=" << size() << " T=" << total_tokens_ << "\n";
        for (int i = 0; i < size(); ++i) out << words_[static_cast<std::size_t>(i)] << '\t' << counts_[static_cast<std::size_t>(i)] << "\n";
    }

    static Vocabulary load(std::istream& in) {
        std::string header;
        if (!std::getline(in, header)) throw ParseError("empty vocabulary file", 1);
        long v = 0;
        long long t = 0;
        if (std::sscanf(header.c_str(), "V=%ld T=%lld", &v, &t) != 2 || v <= 0)
            throw ParseError("bad vocabulary header '" + header + "'", 1);
        Vocabulary vocab;
        std::string line;
        long line_number = 1;
        while (std::getline(in, line)) {
            ++line_number;
            if (line.empty()) continue;
            std::size_t tab = line.find('\t');
            if (tab == std::string::npos) throw ParseError("missing tab in vocabulary entry", line_number);
            std::string word = line.substr(0, tab);
            std::int64_t count = 0;
            try {
                count = std::stoll(line.substr(tab + 1));
            } catch (const std::exception&) {
                throw ParseError("bad count in vocabulary entry", line_number);
            }
            if (count < 1) throw ParseError("nonpositive count in vocabulary entry", line_number);
            vocab.ids_.emplace(word, static_cast<int>(vocab.words_.size()));
            vocab.words_.push_back(std::move(word));
            vocab.counts_.push_back(count);
            vocab.total_tokens_ += count;
        }
        if (static_cast<long>(vocab.words_.size()) != v)
            throw ParseError("vocabulary header V=" + std::to_string(v) + " does not match " +
                                 std::to_string(vocab.words_.size()) + " entries",
                             line_number);
        if (vocab.total_tokens_ != t)
            throw ParseError("vocabulary header T does not match sum of counts", line_number);
        return vocab;
    }

private:
    std::unordered_map<std::string, int> ids_;
    std::vector<std::string> words_;
    std::vector<std::int64_t> counts_;
    std::int64_t total_tokens_ = 0;
};

// Counts surface forms over the corpus and keeps those with count >= min_count.
inline Vocabulary build_vocabulary(const std::vector<ParsedSentence>& sentences,
                                   std::int64_t min_count) {
    std::unordered_map<std::string, std::int64_t> counts;
    for (const ParsedSentence& sentence : sentences)
        for (const Token& tok : sentence.tokens) ++counts[tok.surface];
    return Vocabulary::from_counts(counts, min_count);
}

}  // namespace structvec
