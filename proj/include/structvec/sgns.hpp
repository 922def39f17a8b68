#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "structvec/errors.hpp"
#include "structvec/rng.hpp"
#include "structvec/vocab.hpp"

namespace structvec {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(sigmoid(x)) computed without overflow for large negative x.
inline double log_sigmoid(double x) {
    if (x >= 0.0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

// Negative-sampling loss for one (center, positive) event with k sampled
// noise contexts:
//   -log sigmoid(center . positive) - sum_n log sigmoid(-center . negative_n)
inline double sgns_pair_loss(std::span<const double> center, std::span<const double> positive,
                             std::span<const std::span<const double>> negatives) {
    if (center.size() != positive.size())
        throw std::invalid_argument("sgns_pair_loss: dimension mismatch");
    double loss = -log_sigmoid(dot(center, positive));
    for (std::span<const double> negative : negatives) {
        if (negative.size() != center.size())
            throw std::invalid_argument("sgns_pair_loss: dimension mismatch");
        loss -= log_sigmoid(-dot(center, negative));
    }
    return loss;
}

// Draws context ids proportional to count^exponent.  Inverse-CDF sampling on
// the cumulative table keeps the distribution exact for any vocabulary size.
class NegativeSampler {
public:
    NegativeSampler(const Vocabulary& vocab, double exponent) {
        if (exponent < 0.0) throw ConfigError("sampling exponent must be >= 0");
        if (vocab.size() == 0) throw DataError("cannot sample from an empty vocabulary");
        cdf_.resize(static_cast<std::size_t>(vocab.size()));
        double running = 0.0;
        for (int i = 0; i < vocab.size(); ++i) {
            running += std::pow(static_cast<double>(vocab.count(i)), exponent);
            cdf_[static_cast<std::size_t>(i)] = running;
        }
        total_ = running;
    }

    int sample(Rng& rng) const {
        double u = rng.uniform() * total_;
        std::size_t lo = 0, hi = cdf_.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (cdf_[mid] <= u)
                lo = mid + 1;
            else
                hi = mid;
        }
        return static_cast<int>(lo);
    }

    double probability(int id) const {
        double prev = id == 0 ? 0.0 : cdf_[static_cast<std::size_t>(id) - 1];
        return (cdf_[static_cast<std::size_t>(id)] - prev) / total_;
    }

    int size() const { return static_cast<int>(cdf_.size()); }

private:
    std::vector<double> cdf_;
    double total_ = 0.0;
};

inline NegativeSampler make_sampler(const Vocabulary& vocab, double exponent) {
    return NegativeSampler(vocab, exponent);
}

}  // namespace structvec
