#pragma once

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "structvec/conll.hpp"
#include "structvec/embedding_store.hpp"
#include "structvec/errors.hpp"
#include "structvec/experiment.hpp"
#include "structvec/features.hpp"
#include "structvec/train.hpp"
#include "structvec/vocab.hpp"

namespace structvec {
namespace cli {

struct GlobalOptions {
    std::uint64_t seed = 1;
    int threads = 1;
    std::string log_level = "info";

    bool info() const { return log_level != "quiet"; }
};

namespace detail {

inline std::vector<ParsedSentence> read_corpus(const std::string& path, const GlobalOptions& global,
                                               std::ostream& err) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open corpus file: " + path);
    std::vector<ConllDiagnostic> diagnostics;
    std::vector<ParsedSentence> sentences = parse_conll(in, &diagnostics);
    if (global.info()) {
        err << "read " << sentences.size() << " sentences from " << path;
        if (!diagnostics.empty()) err << " (" << diagnostics.size() << " dropped)";
        err << "\n";
        if (global.log_level == "debug")
            for (const ConllDiagnostic& diag : diagnostics)
                err << "  dropped sentence " << diag.sentence_index << ": " << diag.message << "\n";
    }
    return sentences;
}

inline Vocabulary load_vocab_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open vocabulary file: " + path);
    return Vocabulary::load(in);
}

inline ExtractConfig parse_feature_selection(const std::string& families,
                                             const std::vector<std::string>& label_overrides) {
    ExtractConfig config;
    config.arc = config.flat_prep = config.pattern = config.subj_obj = false;
    std::stringstream ss(families);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "arc")
            config.arc = true;
        else if (item == "prepf")
            config.flat_prep = true;
        else if (item == "pat")
            config.pattern = true;
        else if (item == "so")
            config.subj_obj = true;
        else if (!item.empty())
            throw ConfigError("unknown feature family '" + item + "' (use arc,prepf,pat,so)");
    }
    if (!config.any_family()) throw ConfigError("no feature family selected");
    for (const std::string& override_entry : label_overrides) {
        std::size_t eq = override_entry.find('=');
        if (eq == std::string::npos) throw ConfigError("--label expects role=name");
        std::string role = override_entry.substr(0, eq);
        std::string name = override_entry.substr(eq + 1);
        if (role == "prep")
            config.prep_label = name;
        else if (role == "pobj")
            config.pobj_label = name;
        else if (role == "mwe")
            config.mwe_label = name;
        else if (role == "nsubj")
            config.nsubj_label = name;
        else if (role == "nsubjpass")
            config.nsubjpass_label = name;
        else if (role == "dobj")
            config.dobj_label = name;
        else
            throw ConfigError("unknown label role '" + role + "'");
    }
    return config;
}

// Pair dump rows: word<TAB>feature-string.
inline std::vector<std::pair<std::string, std::string>> load_pair_dump(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open pair dump: " + path);
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    long line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
            throw ParseError("pair dump row needs word<TAB>feature", line_number);
        pairs.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    return pairs;
}

inline Vocabulary feature_vocab_from_dump(
    const std::vector<std::pair<std::string, std::string>>& pairs, std::int64_t min_count) {
    std::unordered_map<std::string, std::int64_t> counts;
    for (const auto& [word, feature] : pairs) ++counts[feature];
    return Vocabulary::from_counts(counts, min_count);
}

inline EncodedPairs encode_dump(const std::vector<std::pair<std::string, std::string>>& pairs,
                                const Vocabulary& word_vocab, const Vocabulary& feature_vocab) {
    EncodedPairs encoded;
    encoded.reserve(pairs.size());
    for (const auto& [word, feature] : pairs) {
        auto word_id = word_vocab.id(word);
        if (!word_id) continue;
        auto feature_id = feature_vocab.id(feature);
        if (!feature_id) continue;
        encoded.emplace_back(*word_id, *feature_id);
    }
    return encoded;
}

inline void save_model_file(const std::string& path, const Vocabulary& vocab,
                            const EmbeddingModel& model, bool with_context,
                            const Vocabulary* feature_vocab) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file: " + path);
    write_embeddings(out, vocab.words(), model.input_matrix(), model.dim());
    if (with_context) {
        std::ofstream wctx(path + ".wctx");
        if (!wctx) throw DataError("cannot write model file: " + path + ".wctx");
        write_embeddings(wctx, vocab.words(), model.word_context_matrix(), model.dim());
        if (feature_vocab && feature_vocab->size() > 0) {
            std::ofstream fctx(path + ".fctx");
            if (!fctx) throw DataError("cannot write model file: " + path + ".fctx");
            write_embeddings(fctx, feature_vocab->words(), model.feature_context_matrix(), model.dim());
        }
    }
}

}  // namespace detail

// Runs the toolkit CLI.  Returns 0 on success, 1 on usage errors (usage text
// on `err`), 2 on data or format errors.
inline int run_cli(std::vector<std::string> args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"word embeddings from sentence windows and dependency-structure features",
                 "structvec"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--seed", global.seed, "master random seed")->capture_default_str();
    app.add_option("--threads", global.threads, "worker threads for training and experiments")
        ->capture_default_str();
    app.add_option("--log-level", global.log_level, "quiet|info|debug")
        ->check(CLI::IsMember({"quiet", "info", "debug"}))
        ->capture_default_str();

    // --- build-vocab ---
    auto* cmd_vocab = app.add_subcommand("build-vocab", "count words in a parsed corpus");
    struct {
        std::string input, output;
        std::int64_t min_count = 5;
    } vocab_args;
    cmd_vocab->add_option("--input", vocab_args.input, "CoNLL corpus file")->required();
    cmd_vocab->add_option("--output", vocab_args.output, "vocabulary file to write")->required();
    cmd_vocab->add_option("--min-count", vocab_args.min_count, "minimum word frequency")
        ->capture_default_str();

    // --- extract-features ---
    auto* cmd_extract = app.add_subcommand("extract-features",
                                           "extract structural features from dependency parses");
    struct {
        std::string input, vocab, pairs_out, feature_vocab_out;
        std::string families = "arc,prepf,pat,so";
        std::int64_t feature_min_count = 5;
        std::vector<std::string> labels;
    } extract_args;
    cmd_extract->add_option("--input", extract_args.input, "CoNLL corpus file")->required();
    cmd_extract->add_option("--vocab", extract_args.vocab, "word vocabulary file")->required();
    cmd_extract->add_option("--feat", extract_args.families, "feature families: arc,prepf,pat,so")
        ->capture_default_str();
    cmd_extract->add_option("--pairs-out", extract_args.pairs_out, "pair dump to write")->required();
    cmd_extract->add_option("--feature-vocab-out", extract_args.feature_vocab_out,
                            "feature vocabulary file to write");
    cmd_extract
        ->add_option("--feature-min-count", extract_args.feature_min_count,
                     "minimum feature frequency for the feature vocabulary")
        ->capture_default_str();
    cmd_extract->add_option("--label", extract_args.labels,
                            "remap a dependency label, e.g. --label dobj=obj (repeatable)");

    // --- train ---
    auto* cmd_train = app.add_subcommand("train", "train embedding vectors");
    struct {
        std::string input, vocab, pairs, feature_vocab, output, report;
        std::string mode = "text";
        TrainConfig config;
        std::int64_t min_count = 5;
        std::int64_t feature_min_count = 5;
        bool save_context = false;
    } train_args;
    cmd_train->add_option("--input", train_args.input, "CoNLL corpus file")->required();
    cmd_train->add_option("--vocab", train_args.vocab, "word vocabulary file (built from corpus when absent)");
    cmd_train->add_option("--min-count", train_args.min_count,
                          "minimum word frequency when building the vocabulary here")
        ->capture_default_str();
    cmd_train->add_option("--pairs", train_args.pairs,
                          "structural-feature pair dump (features/joint/sequential modes)");
    cmd_train->add_option("--feature-vocab", train_args.feature_vocab,
                          "feature vocabulary file (built from the dump when absent)");
    cmd_train->add_option("--feature-min-count", train_args.feature_min_count,
                          "minimum feature frequency when building the feature vocabulary here")
        ->capture_default_str();
    cmd_train->add_option("--mode", train_args.mode, "text|features|joint|sequential")
        ->check(CLI::IsMember({"text", "features", "joint", "sequential"}))
        ->capture_default_str();
    cmd_train->add_option("--dim", train_args.config.dim, "vector dimension")->capture_default_str();
    cmd_train->add_option("--window", train_args.config.window, "context window size")
        ->capture_default_str();
    cmd_train->add_option("--negatives", train_args.config.negatives, "negative samples per event")
        ->capture_default_str();
    cmd_train->add_option("--alpha", train_args.config.alpha, "weight of the feature term")
        ->capture_default_str();
    cmd_train->add_option("--lr", train_args.config.lr_start, "starting learning rate")
        ->capture_default_str();
    cmd_train->add_option("--lr-min", train_args.config.lr_min, "learning-rate floor")
        ->capture_default_str();
    cmd_train->add_option("--epochs", train_args.config.epochs, "training epochs")
        ->capture_default_str();
    cmd_train->add_option("--feat-epochs", train_args.config.feature_epochs,
                          "sequential refinement epochs (-1 = same as --epochs)")
        ->capture_default_str();
    cmd_train->add_option("--subsample", train_args.config.subsample,
                          "frequent-word subsampling threshold (0 = off)")
        ->capture_default_str();
    cmd_train->add_option("--output", train_args.output, "model file to write")->required();
    cmd_train->add_flag("--save-context", train_args.save_context,
                        "also write context matrices as sidecar files");
    cmd_train->add_option("--report", train_args.report,
                          "write the training report here instead of stdout");

    // --- nearest ---
    auto* cmd_nearest = app.add_subcommand("nearest", "nearest neighbors by cosine similarity");
    struct {
        std::string model, word;
        int k = 5;
    } nearest_args;
    cmd_nearest->add_option("--model", nearest_args.model, "embedding file")->required();
    cmd_nearest->add_option("--word", nearest_args.word, "query word")->required();
    cmd_nearest->add_option("--k", nearest_args.k, "number of neighbors")->capture_default_str();

    // --- classify-train ---
    auto* cmd_ctrain = app.add_subcommand("classify-train", "train a term-matching classifier");
    struct {
        std::string arch = "mlp";
        std::string model, pairs, dev_pairs, output;
        ClassifierOptions options;
        bool skip_uncovered = false;
    } ctrain_args;
    cmd_ctrain->add_option("--arch", ctrain_args.arch, "mlp|shared-mlp|shared-cos")
        ->check(CLI::IsMember({"mlp", "shared-mlp", "shared-cos"}))
        ->capture_default_str();
    cmd_ctrain->add_option("--model", ctrain_args.model, "embedding file")->required();
    cmd_ctrain->add_option("--pairs", ctrain_args.pairs, "labeled pair TSV (training set)")->required();
    cmd_ctrain->add_option("--dev-pairs", ctrain_args.dev_pairs,
                           "labeled pair TSV used for early stopping");
    cmd_ctrain->add_option("--output", ctrain_args.output, "checkpoint file to write")->required();
    cmd_ctrain->add_option("--hidden", ctrain_args.options.hidden, "hidden layer size")
        ->capture_default_str();
    cmd_ctrain->add_option("--leak", ctrain_args.options.leak, "leaky-rectifier slope")
        ->capture_default_str();
    cmd_ctrain->add_option("--batch", ctrain_args.options.batch, "mini-batch size")
        ->capture_default_str();
    cmd_ctrain->add_option("--lr", ctrain_args.options.lr, "learning rate")->capture_default_str();
    cmd_ctrain->add_option("--epochs", ctrain_args.options.epochs, "training epochs")
        ->capture_default_str();
    cmd_ctrain->add_option("--patience", ctrain_args.options.patience,
                           "early-stop patience (epochs without dev improvement)")
        ->capture_default_str();
    cmd_ctrain->add_flag("--skip-uncovered", ctrain_args.skip_uncovered,
                         "drop pairs with out-of-vocabulary words instead of failing");

    // --- classify-eval ---
    auto* cmd_ceval = app.add_subcommand("classify-eval", "evaluate a term-matching classifier");
    struct {
        std::string checkpoint, model, pairs;
        bool skip_uncovered = false;
    } ceval_args;
    cmd_ceval->add_option("--checkpoint", ceval_args.checkpoint, "classifier checkpoint")->required();
    cmd_ceval->add_option("--model", ceval_args.model, "embedding file")->required();
    cmd_ceval->add_option("--pairs", ceval_args.pairs, "labeled pair TSV")->required();
    cmd_ceval->add_flag("--skip-uncovered", ceval_args.skip_uncovered,
                        "drop pairs with out-of-vocabulary words instead of failing");

    // --- experiment ---
    auto* cmd_experiment =
        app.add_subcommand("experiment", "accuracy grid across vector sets and architectures");
    struct {
        std::string spec, output;
        bool quiet_table = false;
    } experiment_args;
    cmd_experiment->add_option("--spec", experiment_args.spec, "experiment spec file")->required();
    cmd_experiment->add_option("--output", experiment_args.output, "report TSV to write");
    cmd_experiment->add_flag("--no-table", experiment_args.quiet_table,
                             "do not print the rendered table");

    app.set_help_all_flag("--help-all", "help for every subcommand");
    app.failure_message(CLI::FailureMessage::help);
    try {
        std::vector<const char*> argv;
        argv.reserve(args.size());
        for (const std::string& arg : args) argv.push_back(arg.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 1;
    }

    try {
        if (cmd_vocab->parsed()) {
            std::vector<ParsedSentence> sentences = detail::read_corpus(vocab_args.input, global, err);
            Vocabulary vocab = build_vocabulary(sentences, vocab_args.min_count);
            std::ofstream vout(vocab_args.output);
            if (!vout) throw DataError("cannot write vocabulary file: " + vocab_args.output);
            vocab.save(vout);
            if (global.info())
                err << "vocabulary: " << vocab.size() << " words, " << vocab.total_tokens()
                    << " tokens\n";
        } else if (cmd_extract->parsed()) {
            ExtractConfig config =
                detail::parse_feature_selection(extract_args.families, extract_args.labels);
            std::vector<ParsedSentence> sentences =
                detail::read_corpus(extract_args.input, global, err);
            Vocabulary vocab = detail::load_vocab_file(extract_args.vocab);
            FeaturePairSet set = extract_all(sentences, config, vocab);
            std::ofstream pout(extract_args.pairs_out);
            if (!pout) throw DataError("cannot write pair dump: " + extract_args.pairs_out);
            for (const FeaturePair& pair : set.pairs)
                pout << pair.word << '\t' << pair.feature.encode() << "\n";
            if (global.info()) err << "extracted " << set.size() << " pairs\n";
            if (!extract_args.feature_vocab_out.empty()) {
                Vocabulary fvocab = build_feature_vocabulary(set, extract_args.feature_min_count);
                std::ofstream fout(extract_args.feature_vocab_out);
                if (!fout)
                    throw DataError("cannot write feature vocabulary: " + extract_args.feature_vocab_out);
                fvocab.save(fout);
                if (global.info()) err << "feature vocabulary: " << fvocab.size() << " features\n";
            }
        } else if (cmd_train->parsed()) {
            TrainConfig config = train_args.config;
            config.seed = global.seed;
            config.threads = global.threads;
            if (train_args.mode == "text")
                config.mode = TrainMode::Text;
            else if (train_args.mode == "features")
                config.mode = TrainMode::Features;
            else if (train_args.mode == "joint")
                config.mode = TrainMode::Joint;
            else
                config.mode = TrainMode::Sequential;

            std::vector<ParsedSentence> sentences = detail::read_corpus(train_args.input, global, err);
            Vocabulary vocab = train_args.vocab.empty()
                                   ? build_vocabulary(sentences, train_args.min_count)
                                   : detail::load_vocab_file(train_args.vocab);
            EncodedCorpus corpus = encode_corpus(sentences, vocab);

            const bool needs_pairs = config.mode != TrainMode::Text;
            Vocabulary feature_vocab;
            EncodedPairs pairs;
            if (needs_pairs) {
                if (train_args.pairs.empty())
                    throw ConfigError("--pairs is required for mode " + train_args.mode);
                auto dump = detail::load_pair_dump(train_args.pairs);
                feature_vocab = train_args.feature_vocab.empty()
                                    ? detail::feature_vocab_from_dump(dump, train_args.feature_min_count)
                                    : detail::load_vocab_file(train_args.feature_vocab);
                pairs = detail::encode_dump(dump, vocab, feature_vocab);
            }

            EmbeddingModel model(vocab.size(), feature_vocab.size(), config.dim);
            model.init(Rng(config.seed).derive("init"));

            TrainReport report;
            switch (config.mode) {
                case TrainMode::Text:
                    report = train_text(corpus, vocab, model, config);
                    break;
                case TrainMode::Features:
                    report = train_features(pairs, feature_vocab, model, config);
                    break;
                case TrainMode::Joint:
                    report = train_joint(corpus, pairs, vocab, feature_vocab, model, config);
                    break;
                case TrainMode::Sequential:
                    report = train_sequential(corpus, pairs, vocab, feature_vocab, model, config);
                    break;
            }

            detail::save_model_file(train_args.output, vocab, model, train_args.save_context,
                                    needs_pairs ? &feature_vocab : nullptr);
            if (train_args.report.empty()) {
                report.write(out);
            } else {
                std::ofstream rout(train_args.report);
                if (!rout) throw DataError("cannot write report file: " + train_args.report);
                report.write(rout);
            }
            if (global.info()) err << "model written to " << train_args.output << "\n";
        } else if (cmd_nearest->parsed()) {
            EmbeddingStore store = EmbeddingStore::load_file(nearest_args.model);
            auto neighbors = store.nearest(nearest_args.word, nearest_args.k);
            char buf[32];
            for (const auto& [word, similarity] : neighbors) {
                std::snprintf(buf, sizeof(buf), "%.6f", similarity);
                out << word << '\t' << buf << "\n";
            }
        } else if (cmd_ctrain->parsed()) {
            EmbeddingStore store = EmbeddingStore::load_file(ctrain_args.model);
            PairDataset train_set = load_pairs_file(ctrain_args.pairs);
            PairDataset dev_set;
            if (!ctrain_args.dev_pairs.empty()) dev_set = load_pairs_file(ctrain_args.dev_pairs);
            if (ctrain_args.skip_uncovered) {
                CoverageReport cov;
                train_set = filter_by_coverage(train_set, store, &cov);
                if (global.info()) err << "coverage: dropped " << cov.dropped << " training pairs\n";
                dev_set = filter_by_coverage(dev_set, store);
            }
            ClassifierOptions options = ctrain_args.options;
            options.seed = global.seed;
            PairClassifier clf(arch_from_string(ctrain_args.arch), store.dim(), options.hidden,
                               options.leak);
            clf.init(Rng(global.seed).derive("classifier-init"));
            TrainClassifierResult result = train_classifier(clf, train_set, dev_set, store, options);
            clf.save_file(ctrain_args.output);
            for (std::size_t e = 0; e < result.dev_accuracy.size(); ++e) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.6f", result.dev_accuracy[e]);
                out << "epoch=" << e + 1 << " dev_acc=" << buf << "\n";
            }
            if (global.info()) err << "checkpoint written to " << ctrain_args.output << "\n";
        } else if (cmd_ceval->parsed()) {
            EmbeddingStore store = EmbeddingStore::load_file(ceval_args.model);
            PairClassifier clf = PairClassifier::load_file(ceval_args.checkpoint);
            PairDataset data = load_pairs_file(ceval_args.pairs);
            if (ceval_args.skip_uncovered) data = filter_by_coverage(data, store);
            EvalResult result = evaluate(clf, data, store);
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.6f", result.accuracy);
            out << "accuracy=" << buf << " true_match=" << result.true_match
                << " false_match=" << result.false_match << " true_nonmatch=" << result.true_nonmatch
                << " false_nonmatch=" << result.false_nonmatch << "\n";
        } else if (cmd_experiment->parsed()) {
            ExperimentSpec spec = parse_experiment_spec_file(experiment_args.spec);
            ExperimentReport report =
                run_experiment(spec, global.threads, global.info() ? &err : nullptr);
            if (!experiment_args.output.empty()) {
                std::ofstream rout(experiment_args.output);
                if (!rout) throw DataError("cannot write report: " + experiment_args.output);
                report.to_tsv(rout);
            }
            if (!experiment_args.quiet_table) report.render(out);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    return run_cli(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace cli
}  // namespace structvec
