#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "structvec/embedding_store.hpp"
#include "structvec/errors.hpp"
#include "structvec/rng.hpp"

namespace structvec {

struct PairItem {
    std::string a;
    std::string b;
    bool match;

    bool operator==(const PairItem& rhs) const = default;
};

struct PairDataset {
    std::vector<PairItem> items;
    std::string provenance;  // wordnet | ppdb | synthetic | ...

    std::size_t size() const { return items.size(); }
};

// TSV rows "a<TAB>b" or "a<TAB>b<TAB>0|1"; a two-column row is a positive.
inline PairDataset load_pairs(std::istream& in, std::string provenance = {}) {
    PairDataset data;
    data.provenance = std::move(provenance);
    std::string line;
    long line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::size_t tab1 = line.find('\t');
        if (tab1 == std::string::npos) throw ParseError("pair row needs at least two columns", line_number);
        std::size_t tab2 = line.find('\t', tab1 + 1);
        PairItem item;
        item.a = line.substr(0, tab1);
        if (tab2 == std::string::npos) {
            item.b = line.substr(tab1 + 1);
            item.match = true;
        } else {
            item.b = line.substr(tab1 + 1, tab2 - tab1 - 1);
            std::string label = line.substr(tab2 + 1);
            if (label == "1")
                item.match = true;
            else if (label == "0")
                item.match = false;
            else
                throw ParseError("pair label must be 0 or 1, got '" + label + "'", line_number);
        }
        if (item.a.empty() || item.b.empty()) throw ParseError("empty word in pair row", line_number);
        data.items.push_back(std::move(item));
    }
    return data;
}

inline PairDataset load_pairs_file(const std::string& path, std::string provenance = {}) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open pair file: " + path);
    return load_pairs(in, std::move(provenance));
}

inline void save_pairs(std::ostream& out, const PairDataset& data) {
    for (const PairItem& item : data.items)
        out << item.a << '\t' << item.b << '\t' << (item.match ? '1' : '0') << "\n";
}

struct CoverageReport {
    std::size_t kept = 0;
    std::size_t dropped = 0;
};

// Drops items with any word missing from the store.
inline PairDataset filter_by_coverage(const PairDataset& data, const EmbeddingStore& store,
                                      CoverageReport* report = nullptr) {
    PairDataset out;
    out.provenance = data.provenance;
    for (const PairItem& item : data.items) {
        if (store.contains(item.a) && store.contains(item.b))
            out.items.push_back(item);
        else if (report)
            ++report->dropped;
    }
    if (report) report->kept = out.items.size();
    return out;
}

// Negative examples by random shuffling: first elements paired against a
// shuffled copy of the second elements.  A candidate is rejected when it
// repeats an already produced negative, collides with a positive in either
// order, or pairs a word with itself.  Produces floor(ratio * |positives|)
// negatives; gives up after 100x that many candidate draws.
inline std::vector<PairItem> generate_negatives(const std::vector<PairItem>& positives,
                                                double ratio, Rng rng) {
    if (positives.size() < 2) throw DataError("need at least two positive pairs to shuffle");
    if (ratio <= 0.0) throw ConfigError("negative ratio must be positive");

    auto ordered = [](const std::string& a, const std::string& b) {
        return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
    };
    std::set<std::pair<std::string, std::string>> forbidden;
    for (const PairItem& item : positives) forbidden.insert(ordered(item.a, item.b));

    std::vector<std::string> lefts, rights;
    lefts.reserve(positives.size());
    rights.reserve(positives.size());
    for (const PairItem& item : positives) {
        lefts.push_back(item.a);
        rights.push_back(item.b);
    }

    const std::size_t needed =
        static_cast<std::size_t>(ratio * static_cast<double>(positives.size()));
    const std::size_t max_attempts = 100 * needed;
    std::set<std::pair<std::string, std::string>> produced;
    std::vector<PairItem> negatives;
    negatives.reserve(needed);

    std::size_t attempts = 0;
    std::vector<std::string> shuffled = rights;
    std::size_t cursor = shuffled.size();
    while (negatives.size() < needed) {
        if (attempts >= max_attempts)
            throw DataError("cannot generate enough distinct negatives (rejection starvation)");
        if (cursor == shuffled.size()) {
            shuffle_range(shuffled.begin(), shuffled.end(), rng);
            cursor = 0;
        }
        const std::string& a = lefts[cursor];
        const std::string& b = shuffled[cursor];
        ++cursor;
        ++attempts;
        if (a == b) continue;
        auto key = ordered(a, b);
        if (forbidden.count(key) || produced.count(key)) continue;
        produced.insert(key);
        negatives.push_back({a, b, false});
    }
    return negatives;
}

// Seeded shuffle then contiguous cut.  Sizes: floor(r_train * n),
// floor(r_dev * n), remainder to test.
struct SplitRatios {
    double train;
    double dev;
    double test;

    void validate() const {
        if (train < 0 || dev < 0 || test < 0) throw ConfigError("split ratios must be nonnegative");
        double sum = train + dev + test;
        if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("split ratios must sum to 1");
    }
};

struct SplitDataset {
    PairDataset train;
    PairDataset dev;
    PairDataset test;
};

inline SplitDataset split_dataset(const PairDataset& data, SplitRatios ratios, Rng rng) {
    ratios.validate();
    if (data.items.empty()) throw DataError("cannot split an empty dataset");
    std::vector<std::size_t> order(data.items.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    shuffle_range(order.begin(), order.end(), rng);

    const std::size_t n = data.items.size();
    const std::size_t n_train = static_cast<std::size_t>(ratios.train * static_cast<double>(n));
    const std::size_t n_dev = static_cast<std::size_t>(ratios.dev * static_cast<double>(n));

    SplitDataset out;
    out.train.provenance = out.dev.provenance = out.test.provenance = data.provenance;
    for (std::size_t i = 0; i < n; ++i) {
        const PairItem& item = data.items[order[i]];
        if (i < n_train)
            out.train.items.push_back(item);
        else if (i < n_train + n_dev)
            out.dev.items.push_back(item);
        else
            out.test.items.push_back(item);
    }
    return out;
}

}  // namespace structvec
