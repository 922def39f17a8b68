#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "structvec/errors.hpp"
#include "structvec/rng.hpp"

namespace structvec {

enum class TrainMode { Text, Features, Joint, Sequential };

inline const char* to_string(TrainMode mode) {
    switch (mode) {
        case TrainMode::Text: return "text";
        case TrainMode::Features: return "features";
        case TrainMode::Joint: return "joint";
        case TrainMode::Sequential: return "sequential";
    }
    return "?";
}

struct TrainConfig {
    int dim = 100;
    int window = 5;
    int negatives = 5;
    double alpha = 1.0;          // weight of the feature term relative to the text term
    double lr_start = 0.025;
    double lr_min = 1e-4;
    int epochs = 5;
    int feature_epochs = -1;     // sequential refinement epochs; -1 means same as epochs
    TrainMode mode = TrainMode::Text;
    std::uint64_t seed = 1;
    int threads = 1;
    double subsample = 0.0;      // frequent-word subsampling threshold, 0 = off
    double sampler_exponent = 0.75;

    void validate() const {
        if (dim < 1) throw ConfigError("dim must be positive");
        if (window < 1) throw ConfigError("window must be positive");
        if (negatives < 0) throw ConfigError("negatives must be >= 0");
        if (alpha < 0.0) throw ConfigError("alpha must be >= 0");
        if (lr_start <= 0.0 || lr_min <= 0.0) throw ConfigError("learning rates must be positive");
        if (lr_min > lr_start) throw ConfigError("lr_min must not exceed lr_start");
        if (epochs < 1) throw ConfigError("epochs must be positive");
        if (threads < 1) throw ConfigError("threads must be positive");
        if (subsample < 0.0) throw ConfigError("subsample must be >= 0");
        if (sampler_exponent < 0.0) throw ConfigError("sampler exponent must be >= 0");
    }

    int effective_feature_epochs() const { return feature_epochs < 0 ? epochs : feature_epochs; }
};

// Input vectors are the published embeddings; the two context matrices are
// internal to training.  Word contexts serve window prediction, feature
// contexts serve structural-feature prediction.
class EmbeddingModel {
public:
    EmbeddingModel() = default;
    EmbeddingModel(int vocab_size, int feature_vocab_size, int dim)
        : vocab_size_(vocab_size),
          feature_vocab_size_(feature_vocab_size),
          dim_(dim),
          input_(static_cast<std::size_t>(vocab_size) * static_cast<std::size_t>(dim), 0.0),
          word_context_(static_cast<std::size_t>(vocab_size) * static_cast<std::size_t>(dim), 0.0),
          feature_context_(static_cast<std::size_t>(feature_vocab_size) * static_cast<std::size_t>(dim),
                           0.0) {}

    // Input rows uniform in [-0.5/dim, +0.5/dim]; context rows zero.
    void init(Rng init_rng) {
        for (double& x : input_) x = (init_rng.uniform() - 0.5) / static_cast<double>(dim_);
        std::fill(word_context_.begin(), word_context_.end(), 0.0);
        std::fill(feature_context_.begin(), feature_context_.end(), 0.0);
    }

    void reset_feature_context() {
        std::fill(feature_context_.begin(), feature_context_.end(), 0.0);
    }

    int vocab_size() const { return vocab_size_; }
    int feature_vocab_size() const { return feature_vocab_size_; }
    int dim() const { return dim_; }

    std::span<double> input_row(int id) { return row(input_, id); }
    std::span<double> word_context_row(int id) { return row(word_context_, id); }
    std::span<double> feature_context_row(int id) { return row(feature_context_, id); }
    std::span<const double> input_row(int id) const { return row(input_, id); }
    std::span<const double> word_context_row(int id) const { return row(word_context_, id); }
    std::span<const double> feature_context_row(int id) const { return row(feature_context_, id); }

    std::vector<double>& input_matrix() { return input_; }
    const std::vector<double>& input_matrix() const { return input_; }
    const std::vector<double>& word_context_matrix() const { return word_context_; }
    const std::vector<double>& feature_context_matrix() const { return feature_context_; }

    bool all_finite() const {
        auto ok = [](const std::vector<double>& m) {
            for (double x : m)
                if (!std::isfinite(x)) return false;
            return true;
        };
        return ok(input_) && ok(word_context_) && ok(feature_context_);
    }

private:
    std::span<double> row(std::vector<double>& m, int id) {
        return {m.data() + static_cast<std::size_t>(id) * static_cast<std::size_t>(dim_),
                static_cast<std::size_t>(dim_)};
    }
    std::span<const double> row(const std::vector<double>& m, int id) const {
        return {m.data() + static_cast<std::size_t>(id) * static_cast<std::size_t>(dim_),
                static_cast<std::size_t>(dim_)};
    }

    int vocab_size_ = 0;
    int feature_vocab_size_ = 0;
    int dim_ = 0;
    std::vector<double> input_;
    std::vector<double> word_context_;
    std::vector<double> feature_context_;
};

struct EpochStat {
    int epoch;            // 1-based within its term's curve
    std::string term;     // "text" or "feat"
    double mean_loss;
    std::int64_t events;
};

struct TrainReport {
    std::vector<EpochStat> epochs;

    void write(std::ostream& out) const {
        char buf[64];
        for (const EpochStat& stat : epochs) {
            std::snprintf(buf, sizeof(buf), "%.17g", stat.mean_loss);
            out << "epoch=" << stat.epoch << " term=" << stat.term << " mean_loss=" << buf
                << " events=" << stat.events << "\n";
        }
    }
};

}  // namespace structvec
