#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "structvec/errors.hpp"

namespace structvec {

// Text embedding format: header "V d", then one "name v1 ... vd" row per
// entry.  Values are written with 17 significant digits, which round-trips
// doubles exactly.
inline void write_embeddings(std::ostream& out, const std::vector<std::string>& names,
                             const std::vector<double>& matrix, int dim) {
    out << names.size() << ' ' << dim << "\n";
    char buf[64];
    for (std::size_t r = 0; r < names.size(); ++r) {
        out << names[r];
        for (int j = 0; j < dim; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", matrix[r * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)]);
            out << ' ' << buf;
        }
        out << "\n";
    }
}

// Queryable set of vectors: cosine similarity and exact nearest-neighbor
// scans.  Immutable once loaded.
class EmbeddingStore {
public:
    EmbeddingStore() = default;
    EmbeddingStore(std::vector<std::string> words, std::vector<double> matrix, int dim)
        : words_(std::move(words)), matrix_(std::move(matrix)), dim_(dim) {
        if (matrix_.size() != words_.size() * static_cast<std::size_t>(dim_))
            throw DataError("embedding matrix shape does not match word list");
        for (std::size_t i = 0; i < words_.size(); ++i) ids_.emplace(words_[i], static_cast<int>(i));
        compute_norms();
    }

    static EmbeddingStore load(std::istream& in) {
        std::string header;
        if (!std::getline(in, header)) throw ParseError("empty embedding file", 1);
        long v = 0;
        int dim = 0;
        if (std::sscanf(header.c_str(), "%ld %d", &v, &dim) != 2 || v <= 0 || dim <= 0)
            throw ParseError("bad embedding header '" + header + "'", 1);
        std::vector<std::string> words;
        words.reserve(static_cast<std::size_t>(v));
        std::vector<double> matrix;
        matrix.reserve(static_cast<std::size_t>(v) * static_cast<std::size_t>(dim));
        std::string line;
        long line_number = 1;
        while (std::getline(in, line)) {
            ++line_number;
            if (line.empty()) continue;
            std::size_t pos = line.find(' ');
            if (pos == std::string::npos) throw ParseError("embedding row without values", line_number);
            words.push_back(line.substr(0, pos));
            int got = 0;
            const char* cursor = line.c_str() + pos;
            char* end = nullptr;
            while (got < dim) {
                double value = std::strtod(cursor, &end);
                if (end == cursor) break;
                matrix.push_back(value);
                cursor = end;
                ++got;
            }
            while (*cursor == ' ') ++cursor;
            if (got != dim || *cursor != '\0')
                throw ParseError("embedding row has wrong number of values", line_number);
        }
        if (static_cast<long>(words.size()) != v)
            throw ParseError("embedding header declares " + std::to_string(v) + " rows, file has " +
                                 std::to_string(words.size()),
                             line_number);
        return EmbeddingStore(std::move(words), std::move(matrix), dim);
    }

    static EmbeddingStore load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open embedding file: " + path);
        return load(in);
    }

    void save(std::ostream& out) const { write_embeddings(out, words_, matrix_, dim_); }

    void save_file(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw DataError("cannot write embedding file: " + path);
        save(out);
    }

    int size() const { return static_cast<int>(words_.size()); }
    int dim() const { return dim_; }
    const std::vector<std::string>& words() const { return words_; }
    const std::vector<double>& matrix() const { return matrix_; }

    bool contains(const std::string& word) const { return ids_.count(word) != 0; }

    int id(const std::string& word) const {
        auto it = ids_.find(word);
        if (it == ids_.end()) throw LookupError("unknown word: " + word);
        return it->second;
    }

    std::span<const double> row(int id) const {
        return {matrix_.data() + static_cast<std::size_t>(id) * static_cast<std::size_t>(dim_),
                static_cast<std::size_t>(dim_)};
    }

    std::span<const double> vector_of(const std::string& word) const { return row(id(word)); }

    double cosine(const std::string& a, const std::string& b) const {
        return cosine_ids(id(a), id(b));
    }

    double cosine_ids(int a, int b) const {
        const double na = norms_[static_cast<std::size_t>(a)];
        const double nb = norms_[static_cast<std::size_t>(b)];
        if (na == 0.0 || nb == 0.0) throw DataError("cosine undefined for a zero vector");
        std::span<const double> ra = row(a);
        std::span<const double> rb = row(b);
        double sum = 0.0;
        for (int j = 0; j < dim_; ++j) sum += ra[static_cast<std::size_t>(j)] * rb[static_cast<std::size_t>(j)];
        return sum / (na * nb);
    }

    // Top-k by cosine, excluding the query itself.  Zero-vector rows are
    // skipped (their similarity is undefined).  Ties break toward the lower
    // id for determinism.
    std::vector<std::pair<std::string, double>> nearest(const std::string& query, int k) const {
        if (k < 1) throw ConfigError("k must be positive");
        if (k >= size()) throw ConfigError("k must be smaller than the vocabulary");
        const int q = id(query);
        if (norms_[static_cast<std::size_t>(q)] == 0.0)
            throw DataError("cosine undefined for a zero vector");
        std::vector<std::pair<double, int>> scored;  // (-similarity, id) for stable ordering
        scored.reserve(static_cast<std::size_t>(size()) - 1);
        for (int i = 0; i < size(); ++i) {
            if (i == q || norms_[static_cast<std::size_t>(i)] == 0.0) continue;
            scored.emplace_back(-cosine_ids(q, i), i);
        }
        const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), scored.size());
        std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end());
        std::vector<std::pair<std::string, double>> out;
        out.reserve(take);
        for (std::size_t i = 0; i < take; ++i)
            out.emplace_back(words_[static_cast<std::size_t>(scored[i].second)], -scored[i].first);
        return out;
    }

private:
    void compute_norms() {
        norms_.resize(words_.size());
        for (std::size_t r = 0; r < words_.size(); ++r) {
            double sum = 0.0;
            for (int j = 0; j < dim_; ++j) {
                double x = matrix_[r * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(j)];
                sum += x * x;
            }
            norms_[r] = std::sqrt(sum);
        }
    }

    std::vector<std::string> words_;
    std::vector<double> matrix_;
    std::vector<double> norms_;
    std::unordered_map<std::string, int> ids_;
    int dim_ = 0;
};

}  // namespace structvec
