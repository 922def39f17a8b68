#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "structvec/conll.hpp"
#include "structvec/errors.hpp"
#include "structvec/features.hpp"
#include "structvec/model.hpp"
#include "structvec/rng.hpp"
#include "structvec/sgns.hpp"
#include "structvec/vocab.hpp"

namespace structvec {

// Corpus as id sequences.  Out-of-vocabulary tokens are removed, so windows
// close over them rather than leaving holes.
using EncodedCorpus = std::vector<std::vector<int>>;

inline EncodedCorpus encode_corpus(const std::vector<ParsedSentence>& sentences,
                                   const Vocabulary& vocab) {
    EncodedCorpus encoded;
    encoded.reserve(sentences.size());
    for (const ParsedSentence& sentence : sentences) {
        std::vector<int> ids;
        ids.reserve(sentence.size());
        for (const Token& tok : sentence.tokens)
            if (auto id = vocab.id(tok.surface)) ids.push_back(*id);
        if (!ids.empty()) encoded.push_back(std::move(ids));
    }
    return encoded;
}

// (word id, feature id) training events.  Pairs whose feature fell below the
// feature-vocabulary threshold are dropped here.
using EncodedPairs = std::vector<std::pair<int, int>>;

inline EncodedPairs encode_pairs(const FeaturePairSet& set, const Vocabulary& word_vocab,
                                 const Vocabulary& feature_vocab) {
    EncodedPairs encoded;
    encoded.reserve(set.pairs.size());
    for (const FeaturePair& pair : set.pairs) {
        auto word_id = word_vocab.id(pair.word);
        if (!word_id) continue;
        auto feature_id = feature_vocab.id(pair.feature.encode());
        if (!feature_id) continue;
        encoded.emplace_back(*word_id, *feature_id);
    }
    return encoded;
}

enum class ContextFamily { Word, Feature };

// One SGD step on the negative-sampling pair loss.  Gradients are evaluated
// at the pre-update parameter values; the returned loss is pre-update too.
inline double sgns_update(EmbeddingModel& model, int center_id, int positive_id,
                          ContextFamily family, const NegativeSampler& sampler, Rng& rng,
                          int negatives, double lr) {
    const int dim = model.dim();
    std::span<double> center = model.input_row(center_id);
    auto context_row = [&model, family](int id) {
        return family == ContextFamily::Word ? model.word_context_row(id)
                                             : model.feature_context_row(id);
    };
    std::span<double> positive = context_row(positive_id);

    // Draws colliding with the positive id are skipped, so an update may see
    // fewer than `negatives` noise contexts.
    static thread_local std::vector<int> negative_ids;
    negative_ids.clear();
    for (int i = 0; i < negatives; ++i) {
        int id = sampler.sample(rng);
        if (id == positive_id) continue;
        negative_ids.push_back(id);
    }

    const double pos_dot = dot(center, positive);
    static thread_local std::vector<double> neg_dots;
    neg_dots.assign(negative_ids.size(), 0.0);
    for (std::size_t i = 0; i < negative_ids.size(); ++i)
        neg_dots[i] = dot(center, context_row(negative_ids[i]));

    double loss = -log_sigmoid(pos_dot);
    for (double nd : neg_dots) loss -= log_sigmoid(-nd);

    // d loss / d (center . positive) = sigmoid(x) - 1; for negatives, sigmoid(x).
    const double g_pos = sigmoid(pos_dot) - 1.0;
    static thread_local std::vector<double> center_grad;
    center_grad.assign(static_cast<std::size_t>(dim), 0.0);
    for (int j = 0; j < dim; ++j) center_grad[static_cast<std::size_t>(j)] = g_pos * positive[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < negative_ids.size(); ++i) {
        const double g_neg = sigmoid(neg_dots[i]);
        std::span<double> negative = context_row(negative_ids[i]);
        for (int j = 0; j < dim; ++j) {
            center_grad[static_cast<std::size_t>(j)] += g_neg * negative[static_cast<std::size_t>(j)];
            negative[static_cast<std::size_t>(j)] -= lr * g_neg * center[static_cast<std::size_t>(j)];
        }
    }
    for (int j = 0; j < dim; ++j) {
        positive[static_cast<std::size_t>(j)] -= lr * g_pos * center[static_cast<std::size_t>(j)];
        center[static_cast<std::size_t>(j)] -= lr * center_grad[static_cast<std::size_t>(j)];
    }
    return loss;
}

namespace detail {

// Window events for one encoded sentence: every (t, t+j) with |j| <= window,
// j != 0, inside sentence bounds.
inline std::int64_t window_events(const std::vector<int>& sentence, int window) {
    const std::int64_t n = static_cast<std::int64_t>(sentence.size());
    std::int64_t events = 0;
    for (std::int64_t t = 0; t < n; ++t) {
        std::int64_t lo = std::max<std::int64_t>(0, t - window);
        std::int64_t hi = std::min<std::int64_t>(n - 1, t + window);
        events += hi - lo;  // excludes j = 0
    }
    return events;
}

inline std::int64_t window_events(const EncodedCorpus& corpus, int window) {
    std::int64_t total = 0;
    for (const std::vector<int>& sentence : corpus) total += window_events(sentence, window);
    return total;
}

// Linear decay from lr_start to lr_min over `total` scheduled updates.
struct LrSchedule {
    double lr_start;
    double lr_min;
    std::int64_t total;

    double at(std::int64_t done) const {
        if (total <= 0) return lr_start;
        double lr = lr_start * (1.0 - static_cast<double>(done) / static_cast<double>(total));
        return lr < lr_min ? lr_min : lr;
    }
};

// Keep-probability for frequent-word subsampling; > 1 means always keep.
inline double keep_probability(std::int64_t count, std::int64_t total, double threshold) {
    const double frequency = static_cast<double>(count) / static_cast<double>(total);
    const double ratio = threshold / frequency;
    return std::sqrt(ratio) + ratio;
}

// Shuffled cyclic queue over the encoded pairs; reshuffled on each wrap.
class PairQueue {
public:
    PairQueue(const EncodedPairs& pairs, Rng rng) : pairs_(&pairs), rng_(rng) {
        order_.resize(pairs.size());
        std::iota(order_.begin(), order_.end(), 0);
        shuffle_range(order_.begin(), order_.end(), rng_);
    }

    const std::pair<int, int>& next() {
        if (cursor_ == order_.size()) {
            shuffle_range(order_.begin(), order_.end(), rng_);
            cursor_ = 0;
        }
        return (*pairs_)[order_[cursor_++]];
    }

private:
    const EncodedPairs* pairs_;
    Rng rng_;
    std::vector<std::size_t> order_;
    std::size_t cursor_ = 0;
};

struct EpochTotals {
    double text_loss = 0.0;
    std::int64_t text_events = 0;
    double feat_loss = 0.0;
    std::int64_t feat_events = 0;
};

}  // namespace detail

// Invoked after each completed epoch (single-thread runs only); the model is
// in its end-of-epoch state when the callback fires.
using EpochObserver = std::function<void(int epoch)>;

// Text-window training, and the joint regime when `pairs` is non-null: after
// each sentence the feature queue advances by
//   alpha * (window events in the sentence) * |P| / (window events per epoch)
// accumulated fractionally, so each epoch spends about alpha * |P| feature
// updates against its W window updates, realizing the alpha-weighted second
// objective term.
namespace detail {

struct JointInputs {
    const EncodedCorpus* corpus;
    const EncodedPairs* pairs;             // may be null (pure text)
    const Vocabulary* word_vocab;
    const NegativeSampler* word_sampler;
    const NegativeSampler* feature_sampler;  // null iff pairs null
};

inline TrainReport run_text_like(const JointInputs& in, EmbeddingModel& model,
                                 const TrainConfig& config, Rng master,
                                 const EpochObserver& on_epoch = {}) {
    const bool joint = in.pairs != nullptr;
    const std::int64_t events_per_epoch = window_events(*in.corpus, config.window);
    // Single-token sentences produce no window events; that is a valid (if
    // vacuous) text run, but the joint schedule needs window mass to pace
    // the feature queue.
    if (joint && events_per_epoch == 0)
        throw DataError("corpus has no window events to pace joint training");
    const std::int64_t pair_count = joint ? static_cast<std::int64_t>(in.pairs->size()) : 0;
    if (joint && pair_count == 0) throw DataError("feature pair set is empty");

    const std::int64_t scheduled_feature =
        joint ? static_cast<std::int64_t>(std::llround(config.alpha * static_cast<double>(pair_count))) : 0;
    const detail::LrSchedule schedule{config.lr_start, config.lr_min,
                                      (events_per_epoch + scheduled_feature) * config.epochs};

    TrainReport report;
    const double pair_rate =
        joint ? config.alpha * static_cast<double>(pair_count) / static_cast<double>(events_per_epoch)
              : 0.0;

    if (config.threads <= 1) {
        Rng text_rng = master.derive("text-negatives");
        Rng feat_rng = master.derive("feature-negatives");
        Rng subsample_rng = master.derive("subsample");
        std::optional<detail::PairQueue> queue;
        if (joint) queue.emplace(*in.pairs, master.derive("pair-queue"));
        std::int64_t done = 0;
        double pending = 0.0;

        for (int epoch = 1; epoch <= config.epochs; ++epoch) {
            detail::EpochTotals totals;
            for (const std::vector<int>& sentence : *in.corpus) {
                static thread_local std::vector<int> kept;
                const std::vector<int>* active = &sentence;
                if (config.subsample > 0.0) {
                    kept.clear();
                    for (int id : sentence) {
                        double keep = detail::keep_probability(in.word_vocab->count(id),
                                                               in.word_vocab->total_tokens(),
                                                               config.subsample);
                        if (keep >= 1.0 || subsample_rng.uniform() < keep) kept.push_back(id);
                    }
                    active = &kept;
                }
                const int n = static_cast<int>(active->size());
                for (int t = 0; t < n; ++t) {
                    for (int j = -config.window; j <= config.window; ++j) {
                        if (j == 0) continue;
                        const int ctx = t + j;
                        if (ctx < 0 || ctx >= n) continue;
                        double lr = schedule.at(done);
                        totals.text_loss +=
                            sgns_update(model, (*active)[static_cast<std::size_t>(t)],
                                        (*active)[static_cast<std::size_t>(ctx)], ContextFamily::Word,
                                        *in.word_sampler, text_rng, config.negatives, lr);
                        ++totals.text_events;
                        ++done;
                    }
                }
                if (joint) {
                    pending += pair_rate * static_cast<double>(window_events(sentence, config.window));
                    while (pending >= 1.0) {
                        pending -= 1.0;
                        const auto& [word_id, feature_id] = queue->next();
                        double lr = schedule.at(done);
                        totals.feat_loss +=
                            sgns_update(model, word_id, feature_id, ContextFamily::Feature,
                                        *in.feature_sampler, feat_rng, config.negatives, lr);
                        ++totals.feat_events;
                        ++done;
                    }
                }
            }
            report.epochs.push_back({epoch, "text",
                                     totals.text_events ? totals.text_loss / static_cast<double>(totals.text_events) : 0.0,
                                     totals.text_events});
            if (joint)
                report.epochs.push_back({epoch, "feat",
                                         totals.feat_events ? totals.feat_loss / static_cast<double>(totals.feat_events) : 0.0,
                                         totals.feat_events});
            if (on_epoch) on_epoch(epoch);
        }
        return report;
    }

    // Parallel mode: sentences (and the pair list, in the joint regime) are
    // sharded across workers that update the shared matrices without
    // synchronization.  Results are nondeterministic but finite.
    const int thread_count = config.threads;
    std::vector<std::vector<const std::vector<int>*>> sentence_shards(static_cast<std::size_t>(thread_count));
    for (std::size_t s = 0; s < in.corpus->size(); ++s)
        sentence_shards[s % static_cast<std::size_t>(thread_count)].push_back(&(*in.corpus)[s]);
    std::vector<EncodedPairs> pair_shards(static_cast<std::size_t>(thread_count));
    if (joint)
        for (std::size_t p = 0; p < in.pairs->size(); ++p)
            pair_shards[p % static_cast<std::size_t>(thread_count)].push_back((*in.pairs)[p]);

    std::atomic<std::int64_t> done{0};
    std::vector<detail::EpochTotals> totals_by_epoch(static_cast<std::size_t>(config.epochs));
    std::vector<std::mutex> totals_guard(static_cast<std::size_t>(config.epochs));

    auto worker = [&](int widx) {
        Rng text_rng = master.derive("text-negatives", static_cast<std::uint64_t>(widx));
        Rng feat_rng = master.derive("feature-negatives", static_cast<std::uint64_t>(widx));
        Rng subsample_rng = master.derive("subsample", static_cast<std::uint64_t>(widx));
        const auto& shard = sentence_shards[static_cast<std::size_t>(widx)];
        const EncodedPairs& pair_shard = pair_shards[static_cast<std::size_t>(widx)];
        std::int64_t shard_events = 0;
        for (const auto* sentence : shard) shard_events += window_events(*sentence, config.window);
        const double shard_rate = shard_events > 0 && joint && !pair_shard.empty()
                                      ? config.alpha * static_cast<double>(pair_shard.size()) /
                                            static_cast<double>(shard_events)
                                      : 0.0;
        detail::PairQueue queue(pair_shard, master.derive("pair-queue", static_cast<std::uint64_t>(widx)));
        double pending = 0.0;
        for (int epoch = 1; epoch <= config.epochs; ++epoch) {
            detail::EpochTotals totals;
            std::vector<int> kept;
            for (const auto* sentence_ptr : shard) {
                const std::vector<int>* active = sentence_ptr;
                if (config.subsample > 0.0) {
                    kept.clear();
                    for (int id : *sentence_ptr) {
                        double keep = detail::keep_probability(in.word_vocab->count(id),
                                                               in.word_vocab->total_tokens(),
                                                               config.subsample);
                        if (keep >= 1.0 || subsample_rng.uniform() < keep) kept.push_back(id);
                    }
                    active = &kept;
                }
                const int n = static_cast<int>(active->size());
                for (int t = 0; t < n; ++t) {
                    for (int j = -config.window; j <= config.window; ++j) {
                        if (j == 0) continue;
                        const int ctx = t + j;
                        if (ctx < 0 || ctx >= n) continue;
                        double lr = schedule.at(done.fetch_add(1, std::memory_order_relaxed));
                        totals.text_loss += sgns_update(model, (*active)[static_cast<std::size_t>(t)],
                                                        (*active)[static_cast<std::size_t>(ctx)],
                                                        ContextFamily::Word, *in.word_sampler,
                                                        text_rng, config.negatives, lr);
                        ++totals.text_events;
                    }
                }
                if (joint && !pair_shard.empty()) {
                    pending += shard_rate * static_cast<double>(window_events(*sentence_ptr, config.window));
                    while (pending >= 1.0) {
                        pending -= 1.0;
                        const auto& [word_id, feature_id] = queue.next();
                        double lr = schedule.at(done.fetch_add(1, std::memory_order_relaxed));
                        totals.feat_loss +=
                            sgns_update(model, word_id, feature_id, ContextFamily::Feature,
                                        *in.feature_sampler, feat_rng, config.negatives, lr);
                        ++totals.feat_events;
                    }
                }
            }
            std::lock_guard<std::mutex> lock(totals_guard[static_cast<std::size_t>(epoch - 1)]);
            detail::EpochTotals& agg = totals_by_epoch[static_cast<std::size_t>(epoch - 1)];
            agg.text_loss += totals.text_loss;
            agg.text_events += totals.text_events;
            agg.feat_loss += totals.feat_loss;
            agg.feat_events += totals.feat_events;
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(thread_count));
    for (int widx = 0; widx < thread_count; ++widx) pool.emplace_back(worker, widx);
    for (std::thread& th : pool) th.join();

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        const detail::EpochTotals& agg = totals_by_epoch[static_cast<std::size_t>(epoch - 1)];
        report.epochs.push_back({epoch, "text",
                                 agg.text_events ? agg.text_loss / static_cast<double>(agg.text_events) : 0.0,
                                 agg.text_events});
        if (joint)
            report.epochs.push_back({epoch, "feat",
                                     agg.feat_events ? agg.feat_loss / static_cast<double>(agg.feat_events) : 0.0,
                                     agg.feat_events});
    }
    return report;
}

inline TrainReport run_features_only(const EncodedPairs& pairs, const NegativeSampler& feature_sampler,
                                     EmbeddingModel& model, const TrainConfig& config, Rng master,
                                     int epochs, const EpochObserver& on_epoch = {}) {
    if (pairs.empty()) throw DataError("feature pair set is empty");
    const detail::LrSchedule schedule{config.lr_start, config.lr_min,
                                      static_cast<std::int64_t>(pairs.size()) * epochs};
    TrainReport report;
    if (config.threads <= 1) {
        Rng feat_rng = master.derive("feature-negatives");
        std::int64_t done = 0;
        for (int epoch = 1; epoch <= epochs; ++epoch) {
            double loss_sum = 0.0;
            for (const auto& [word_id, feature_id] : pairs) {
                double lr = schedule.at(done++);
                loss_sum += sgns_update(model, word_id, feature_id, ContextFamily::Feature,
                                        feature_sampler, feat_rng, config.negatives, lr);
            }
            report.epochs.push_back({epoch, "feat", loss_sum / static_cast<double>(pairs.size()),
                                     static_cast<std::int64_t>(pairs.size())});
            if (on_epoch) on_epoch(epoch);
        }
        return report;
    }

    const int thread_count = config.threads;
    std::atomic<std::int64_t> done{0};
    std::vector<double> loss_by_epoch(static_cast<std::size_t>(epochs), 0.0);
    std::vector<std::int64_t> events_by_epoch(static_cast<std::size_t>(epochs), 0);
    std::mutex guard;
    auto worker = [&](int widx) {
        Rng feat_rng = master.derive("feature-negatives", static_cast<std::uint64_t>(widx));
        for (int epoch = 1; epoch <= epochs; ++epoch) {
            double loss_sum = 0.0;
            std::int64_t events = 0;
            for (std::size_t p = static_cast<std::size_t>(widx); p < pairs.size();
                 p += static_cast<std::size_t>(thread_count)) {
                double lr = schedule.at(done.fetch_add(1, std::memory_order_relaxed));
                loss_sum += sgns_update(model, pairs[p].first, pairs[p].second,
                                        ContextFamily::Feature, feature_sampler, feat_rng,
                                        config.negatives, lr);
                ++events;
            }
            std::lock_guard<std::mutex> lock(guard);
            loss_by_epoch[static_cast<std::size_t>(epoch - 1)] += loss_sum;
            events_by_epoch[static_cast<std::size_t>(epoch - 1)] += events;
        }
    };
    std::vector<std::thread> pool;
    for (int widx = 0; widx < thread_count; ++widx) pool.emplace_back(worker, widx);
    for (std::thread& th : pool) th.join();
    for (int epoch = 1; epoch <= epochs; ++epoch)
        report.epochs.push_back({epoch, "feat",
                                 events_by_epoch[static_cast<std::size_t>(epoch - 1)]
                                     ? loss_by_epoch[static_cast<std::size_t>(epoch - 1)] /
                                           static_cast<double>(events_by_epoch[static_cast<std::size_t>(epoch - 1)])
                                     : 0.0,
                                 events_by_epoch[static_cast<std::size_t>(epoch - 1)]});
    return report;
}

}  // namespace detail

inline TrainReport train_text(const EncodedCorpus& corpus, const Vocabulary& word_vocab,
                              EmbeddingModel& model, const TrainConfig& config,
                              const EpochObserver& on_epoch = {}) {
    config.validate();
    if (corpus.empty()) throw DataError("empty corpus");
    NegativeSampler word_sampler(word_vocab, config.sampler_exponent);
    detail::JointInputs in{&corpus, nullptr, &word_vocab, &word_sampler, nullptr};
    return detail::run_text_like(in, model, config, Rng(config.seed), on_epoch);
}

inline TrainReport train_features(const EncodedPairs& pairs, const Vocabulary& feature_vocab,
                                  EmbeddingModel& model, const TrainConfig& config,
                                  const EpochObserver& on_epoch = {}) {
    config.validate();
    if (pairs.empty()) throw DataError("feature pair set is empty");
    NegativeSampler feature_sampler(feature_vocab, config.sampler_exponent);
    return detail::run_features_only(pairs, feature_sampler, model, config, Rng(config.seed),
                                     config.epochs, on_epoch);
}

inline TrainReport train_joint(const EncodedCorpus& corpus, const EncodedPairs& pairs,
                               const Vocabulary& word_vocab, const Vocabulary& feature_vocab,
                               EmbeddingModel& model, const TrainConfig& config,
                               const EpochObserver& on_epoch = {}) {
    config.validate();
    if (corpus.empty()) throw DataError("empty corpus");
    if (pairs.empty()) throw DataError("feature pair set is empty");
    NegativeSampler word_sampler(word_vocab, config.sampler_exponent);
    NegativeSampler feature_sampler(feature_vocab, config.sampler_exponent);
    detail::JointInputs in{&corpus, &pairs, &word_vocab, &word_sampler, &feature_sampler};
    return detail::run_text_like(in, model, config, Rng(config.seed), on_epoch);
}

// Window-context training first, then refinement on the feature pairs
// starting from the phase-1 vectors.  Feature context vectors start fresh
// and the learning-rate schedule restarts for phase 2.
inline TrainReport train_sequential(const EncodedCorpus& corpus, const EncodedPairs& pairs,
                                    const Vocabulary& word_vocab, const Vocabulary& feature_vocab,
                                    EmbeddingModel& model, const TrainConfig& config) {
    config.validate();
    if (corpus.empty()) throw DataError("empty corpus");
    const int refine_epochs = config.effective_feature_epochs();
    if (pairs.empty() && refine_epochs > 0) throw DataError("feature pair set is empty");

    NegativeSampler word_sampler(word_vocab, config.sampler_exponent);
    detail::JointInputs in{&corpus, nullptr, &word_vocab, &word_sampler, nullptr};
    TrainReport report = detail::run_text_like(in, model, config, Rng(config.seed));
    if (refine_epochs == 0) return report;

    model.reset_feature_context();
    NegativeSampler feature_sampler(feature_vocab, config.sampler_exponent);
    TrainReport refine = detail::run_features_only(pairs, feature_sampler, model, config,
                                                   Rng(config.seed).derive("sequential-refine"),
                                                   refine_epochs);
    for (EpochStat& stat : refine.epochs) report.epochs.push_back(std::move(stat));
    return report;
}

// Exact value of the combined objective with full softmax conditionals, for
// monitoring and tests on toy vocabularies:
//   (1/T) sum_t sum_{j != 0, |j| <= window} log p(w_{t+j} | w_t)
//   + (alpha/|P|) sum_{(w,f)} log p(f | w)
inline double joint_objective(const EmbeddingModel& model, const EncodedCorpus& corpus,
                              const EncodedPairs& pairs, const TrainConfig& config) {
    const std::int64_t v = model.vocab_size();
    const std::int64_t fv = model.feature_vocab_size();
    if (v * v > 1'000'000 || v * fv > 1'000'000)
        throw ConfigError("vocabulary too large for exact softmax evaluation");

    std::int64_t total_tokens = 0;
    for (const std::vector<int>& sentence : corpus) total_tokens += static_cast<std::int64_t>(sentence.size());
    if (total_tokens == 0) throw DataError("empty corpus");

    const int dim = model.dim();
    // log-denominators per center word, over each context family
    std::vector<double> word_denom(static_cast<std::size_t>(v));
    std::vector<double> feat_denom(static_cast<std::size_t>(v));
    std::vector<double> scores;
    for (int w = 0; w < v; ++w) {
        std::span<const double> center = model.input_row(w);
        scores.assign(static_cast<std::size_t>(v), 0.0);
        for (int y = 0; y < v; ++y) scores[static_cast<std::size_t>(y)] = dot(center, model.word_context_row(y));
        double m = *std::max_element(scores.begin(), scores.end());
        double sum = 0.0;
        for (double s : scores) sum += std::exp(s - m);
        word_denom[static_cast<std::size_t>(w)] = m + std::log(sum);

        if (fv > 0 && !pairs.empty()) {
            scores.assign(static_cast<std::size_t>(fv), 0.0);
            for (int y = 0; y < fv; ++y)
                scores[static_cast<std::size_t>(y)] = dot(center, model.feature_context_row(y));
            m = *std::max_element(scores.begin(), scores.end());
            sum = 0.0;
            for (double s : scores) sum += std::exp(s - m);
            feat_denom[static_cast<std::size_t>(w)] = m + std::log(sum);
        }
    }

    double text_term = 0.0;
    for (const std::vector<int>& sentence : corpus) {
        const int n = static_cast<int>(sentence.size());
        for (int t = 0; t < n; ++t) {
            std::span<const double> center = model.input_row(sentence[static_cast<std::size_t>(t)]);
            for (int j = -config.window; j <= config.window; ++j) {
                if (j == 0) continue;
                const int ctx = t + j;
                if (ctx < 0 || ctx >= n) continue;
                text_term += dot(center, model.word_context_row(sentence[static_cast<std::size_t>(ctx)])) -
                             word_denom[static_cast<std::size_t>(sentence[static_cast<std::size_t>(t)])];
            }
        }
    }
    double objective = text_term / static_cast<double>(total_tokens);

    if (!pairs.empty() && config.alpha > 0.0) {
        double feat_term = 0.0;
        for (const auto& [word_id, feature_id] : pairs)
            feat_term += dot(model.input_row(word_id), model.feature_context_row(feature_id)) -
                         feat_denom[static_cast<std::size_t>(word_id)];
        objective += config.alpha * feat_term / static_cast<double>(pairs.size());
    }
    return objective;
}

}  // namespace structvec
