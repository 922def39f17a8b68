// Acceptance suite: one pass/fail line per criterion.  Exit code is the
// number of failed criteria.  An optional argv[1] substring filters which
// criteria run; `--record-golden` refreshes the pinned experiment report
// instead of comparing against it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "structvec/classify.hpp"
#include "structvec/cli.hpp"
#include "structvec/conll.hpp"
#include "structvec/embedding_store.hpp"
#include "structvec/experiment.hpp"
#include "structvec/features.hpp"
#include "structvec/train.hpp"
#include "structvec/vocab.hpp"

#include "acceptance_corpora.hpp"
#include "support/synthetic.hpp"
#include "support/temp_dir.hpp"

using namespace structvec;
using testsupport::TempDir;

namespace {

bool g_record_golden = false;

std::string fixture(const std::string& name) {
    return std::string(STRUCTVEC_FIXTURE_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int run_tool(std::vector<std::string> args, std::ostream& log) {
    args.insert(args.begin(), "structvec");
    std::ostringstream out;
    return structvec::cli::run_cli(args, out, log);
}

// ---------------------------------------------------------------------------
// 1. Extraction oracle: golden fixture vs hand-labeled gold pairs.
// ---------------------------------------------------------------------------
bool extraction_oracle(std::ostream& log) {
    std::ifstream in(fixture("golden.conll"));
    auto sentences = parse_conll(in);
    if (sentences.size() != 20) {
        log << "  expected 20 sentences, got " << sentences.size() << "\n";
        return false;
    }
    Vocabulary vocab = build_vocabulary(sentences, 1);
    FeaturePairSet set = extract_all(sentences, ExtractConfig{}, vocab);

    std::multiset<std::string> got;
    for (const FeaturePair& pair : set.pairs) got.insert(pair.word + "\t" + pair.feature.encode());

    std::multiset<std::string> gold;
    std::ifstream gold_in(fixture("golden_pairs.tsv"));
    std::string line;
    while (std::getline(gold_in, line))
        if (!line.empty()) gold.insert(line);

    log << "  " << got.size() << " extracted pairs, " << gold.size() << " gold pairs\n";
    return !gold.empty() && got == gold;
}

// ---------------------------------------------------------------------------
// 2. Gradient suites: the negative-sampling update path and all three
//    classifiers, central differences h=1e-5, relative error < 1e-4,
//    100 instances each.
// ---------------------------------------------------------------------------
double fd_relative_error(PairClassifier& clf, std::span<const double> va,
                         std::span<const double> vb, bool match) {
    std::vector<double> grad(clf.parameters().size(), 0.0);
    clf.loss_and_grad(va, vb, match, grad);
    const double h = 1e-5;
    double worst = 0.0;
    std::vector<double>& theta = clf.parameters();
    for (std::size_t p = 0; p < theta.size(); ++p) {
        const double saved = theta[p];
        theta[p] = saved + h;
        const double up = clf.loss_only(va, vb, match);
        theta[p] = saved - h;
        const double down = clf.loss_only(va, vb, match);
        theta[p] = saved;
        const double fd = (up - down) / (2 * h);
        const double denom = std::max(std::abs(fd) + std::abs(grad[p]), 1e-6);
        worst = std::max(worst, std::abs(fd - grad[p]) / denom);
    }
    return worst;
}

bool gradient_suites(std::ostream& log) {
    bool ok = true;

    // (a) negative-sampling update path: recover the applied gradient from
    // the parameter delta at tiny lr and compare to finite differences of
    // the pair loss over the pre-update rows.
    {
        const int dim = 10;
        Vocabulary vocab = Vocabulary::from_counts(
            {{"a", 32}, {"b", 16}, {"c", 8}, {"d", 4}, {"e", 2}, {"f", 1}}, 1);
        NegativeSampler sampler(vocab, 0.75);
        Rng setup(4242);
        double worst = 0.0;
        int checked = 0;
        for (int trial = 0; trial < 100; ++trial) {
            EmbeddingModel model(vocab.size(), 0, dim);
            for (int w = 0; w < vocab.size(); ++w)
                for (int j = 0; j < dim; ++j) {
                    model.input_row(w)[j] = setup.uniform() * 2 - 1;
                    model.word_context_row(w)[j] = setup.uniform() * 2 - 1;
                }
            const int center = static_cast<int>(setup.below(static_cast<std::uint64_t>(vocab.size())));
            const int positive = static_cast<int>(setup.below(static_cast<std::uint64_t>(vocab.size())));
            Rng draw(777 + static_cast<std::uint64_t>(trial));
            Rng replay = draw;
            std::vector<int> negatives;
            for (int i = 0; i < 5; ++i) {
                int id = sampler.sample(replay);
                if (id == positive) continue;
                negatives.push_back(id);
            }
            // Repeated draws of one id are fine: the loss counts the row once
            // per occurrence and the update applies the matching summed step.
            ++checked;

            EmbeddingModel before = model;
            const double lr = 1e-6;
            sgns_update(model, center, positive, ContextFamily::Word, sampler, draw, 5, lr);
            auto loss_of = [&](EmbeddingModel& m) {
                std::vector<std::span<const double>> rows;
                for (int id : negatives) rows.push_back(m.word_context_row(id));
                return sgns_pair_loss(m.input_row(center), m.word_context_row(positive), rows);
            };
            const double h = 1e-5;
            auto check_row = [&](auto row_of, int id) {
                for (int j = 0; j < dim; ++j) {
                    EmbeddingModel plus = before;
                    row_of(plus, id)[j] += h;
                    EmbeddingModel minus = before;
                    row_of(minus, id)[j] -= h;
                    const double fd = (loss_of(plus) - loss_of(minus)) / (2 * h);
                    const double applied = (row_of(before, id)[j] - row_of(model, id)[j]) / lr;
                    const double denom = std::max(std::abs(fd) + std::abs(applied), 1e-6);
                    worst = std::max(worst, std::abs(fd - applied) / denom);
                }
            };
            check_row([](EmbeddingModel& m, int id) { return m.input_row(id); }, center);
            check_row([](EmbeddingModel& m, int id) { return m.word_context_row(id); }, positive);
            for (int id : negatives)
                check_row([](EmbeddingModel& m, int id2) { return m.word_context_row(id2); }, id);
        }
        log << "  sgns update: " << checked << " instances, worst relative error " << worst << "\n";
        ok = ok && checked >= 100 && worst < 1e-4;
    }

    // (b) classifier architectures
    for (Arch arch : {Arch::Mlp, Arch::SharedMlp, Arch::SharedCosine}) {
        Rng rng(2025);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            PairClassifier clf(arch, 8, 5);
            clf.init(rng.derive("init", static_cast<std::uint64_t>(trial)));
            std::vector<double> va(8), vb(8);
            for (auto& x : va) x = rng.uniform() * 2 - 1;
            for (auto& x : vb) x = rng.uniform() * 2 - 1;
            worst = std::max(worst, fd_relative_error(clf, va, vb, rng.uniform() < 0.5));
        }
        log << "  " << to_string(arch) << ": 100 instances, worst relative error " << worst << "\n";
        ok = ok && worst < 1e-4;
    }
    return ok;
}

// ---------------------------------------------------------------------------
// 3. Combined-objective degeneracy: alpha=0 joint equals text bitwise on a
//    100KB corpus, seed 42, one thread.
// ---------------------------------------------------------------------------
bool alpha_zero_equivalence(std::ostream& log) {
    testsupport::ChainCorpusOptions opt;
    opt.topics = 8;
    opt.words_per_topic = 15;
    opt.sentences = 500;
    opt.sentence_length = 8;
    auto sentences = testsupport::make_chain_corpus(opt, Rng(314));

    TempDir dir("accept3");
    {
        std::ofstream out(dir.file("corpus.conll"));
        testsupport::write_conll(out, sentences);
    }
    const auto corpus_bytes = std::filesystem::file_size(dir.file("corpus.conll"));
    log << "  corpus size: " << corpus_bytes / 1024 << " KB\n";
    if (corpus_bytes < 80 * 1024 || corpus_bytes > 160 * 1024) return false;

    Vocabulary vocab = build_vocabulary(sentences, 1);
    EncodedCorpus corpus = encode_corpus(sentences, vocab);
    FeaturePairSet set = extract_all(sentences, ExtractConfig{}, vocab);
    Vocabulary feature_vocab = build_feature_vocabulary(set, 1);
    EncodedPairs pairs = encode_pairs(set, vocab, feature_vocab);

    TrainConfig config;
    config.dim = 32;
    config.window = 3;
    config.epochs = 3;
    config.seed = 42;
    config.threads = 1;
    config.alpha = 0.0;

    EmbeddingModel joint_model(vocab.size(), feature_vocab.size(), config.dim);
    joint_model.init(Rng(config.seed).derive("init"));
    train_joint(corpus, pairs, vocab, feature_vocab, joint_model, config);

    EmbeddingModel text_model(vocab.size(), 0, config.dim);
    text_model.init(Rng(config.seed).derive("init"));
    train_text(corpus, vocab, text_model, config);

    const bool identical = joint_model.input_matrix() == text_model.input_matrix();
    log << "  input vectors bitwise identical: " << (identical ? "yes" : "no") << "\n";
    return identical;
}

// ---------------------------------------------------------------------------
// 4. Objective monotonicity: exact combined objective non-decreasing over
//    five epochs of joint training on a toy vocabulary.
// ---------------------------------------------------------------------------
bool objective_monotonicity(std::ostream& log) {
    testsupport::ChainCorpusOptions opt;
    opt.topics = 5;
    opt.words_per_topic = 8;
    opt.sentences = 150;
    opt.sentence_length = 7;
    auto sentences = testsupport::make_chain_corpus(opt, Rng(2718));
    Vocabulary vocab = build_vocabulary(sentences, 1);
    log << "  toy vocabulary: " << vocab.size() << " words\n";
    if (vocab.size() > 200) return false;
    EncodedCorpus corpus = encode_corpus(sentences, vocab);
    auto pairs_data = testsupport::make_topic_pairs(sentences, vocab, Rng(2718).derive("pairs"));
    EncodedPairs pairs = encode_pairs(pairs_data.set, vocab, pairs_data.feature_vocab);

    TrainConfig config;
    config.dim = 16;
    config.window = 2;
    config.negatives = 5;
    config.alpha = 0.5;
    config.lr_start = 0.05;
    config.epochs = 5;
    config.seed = 1;

    EmbeddingModel model(vocab.size(), pairs_data.feature_vocab.size(), config.dim);
    model.init(Rng(config.seed).derive("init"));

    // one value per completed epoch; the pre-training baseline is logged
    // for context but the monotonicity claim is about the epoch sequence
    const double baseline = joint_objective(model, corpus, pairs, config);
    std::vector<double> objective;
    train_joint(corpus, pairs, vocab, pairs_data.feature_vocab, model, config,
                [&](int) { objective.push_back(joint_objective(model, corpus, pairs, config)); });

    log << "  objective at init: " << baseline << "\n";
    if (objective.size() != 5) return false;
    bool ok = true;
    for (std::size_t e = 0; e < objective.size(); ++e) {
        log << "  objective after epoch " << e + 1 << ": " << objective[e] << "\n";
        if (e > 0 && objective[e] < objective[e - 1] - 1e-9) ok = false;
    }
    return ok;
}

// ---------------------------------------------------------------------------
// 5. Sampler law: empirical frequencies over 1e6 draws match count^0.75
//    normalization within 0.005 absolute on a 20-word vocabulary.
// ---------------------------------------------------------------------------
bool sampler_law(std::ostream& log) {
    std::unordered_map<std::string, std::int64_t> counts;
    for (int i = 0; i < 20; ++i) counts["w" + std::to_string(i)] = (i + 1) * (i + 1) + 3;
    Vocabulary vocab = Vocabulary::from_counts(counts, 1);
    NegativeSampler sampler(vocab, 0.75);

    std::vector<double> expected(20);
    double total = 0.0;
    for (int i = 0; i < 20; ++i) {
        expected[static_cast<std::size_t>(i)] = std::pow(static_cast<double>(vocab.count(i)), 0.75);
        total += expected[static_cast<std::size_t>(i)];
    }
    for (double& p : expected) p /= total;

    Rng rng(99);
    std::vector<std::int64_t> hits(20, 0);
    const int draws = 1'000'000;
    for (int i = 0; i < draws; ++i) ++hits[static_cast<std::size_t>(sampler.sample(rng))];

    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double freq = static_cast<double>(hits[static_cast<std::size_t>(i)]) / draws;
        worst = std::max(worst, std::abs(freq - expected[static_cast<std::size_t>(i)]));
    }
    log << "  worst absolute deviation over 20 words: " << worst << "\n";

    // exact two-word case: counts 81 and 16 give 27/35
    Vocabulary two = Vocabulary::from_counts({{"a", 81}, {"b", 16}}, 1);
    NegativeSampler two_sampler(two, 0.75);
    const double p_a = two_sampler.probability(*two.id("a"));
    log << "  two-word case P(a) = " << p_a << " (exact " << 27.0 / 35.0 << ")\n";
    return worst < 0.005 && std::abs(p_a - 27.0 / 35.0) < 1e-12;
}

// ---------------------------------------------------------------------------
// 6. Planted-synonym retrieval after joint training.
// ---------------------------------------------------------------------------
bool planted_synonyms(std::ostream& log) {
    auto sentences = acceptance::make_synonym_corpus({}, Rng(606));
    Vocabulary vocab = build_vocabulary(sentences, 1);
    EncodedCorpus corpus = encode_corpus(sentences, vocab);
    FeaturePairSet set = extract_all(sentences, ExtractConfig{}, vocab);
    Vocabulary feature_vocab = build_feature_vocabulary(set, 1);
    EncodedPairs pairs = encode_pairs(set, vocab, feature_vocab);

    TrainConfig config;
    config.dim = 25;
    config.window = 2;
    config.negatives = 5;
    config.alpha = 1.0;
    config.lr_start = 0.05;
    config.epochs = 12;
    config.seed = 9;

    EmbeddingModel model(vocab.size(), feature_vocab.size(), config.dim);
    model.init(Rng(config.seed).derive("init"));
    train_joint(corpus, pairs, vocab, feature_vocab, model, config);

    EmbeddingStore store(vocab.words(), model.input_matrix(), config.dim);
    auto top_a = store.nearest("syna", 1);
    auto top_b = store.nearest("synb", 1);
    const double similarity = store.cosine("syna", "synb");
    log << "  top-1 of syna: " << top_a[0].first << ", top-1 of synb: " << top_b[0].first
        << ", cosine " << similarity << "\n";
    return top_a[0].first == "synb" && top_b[0].first == "syna" && similarity > 0.6;
}

// ---------------------------------------------------------------------------
// 7. Classifier separability: every architecture reaches 99% train accuracy
//    within 50 epochs on the identical-vs-orthogonal construction.
// ---------------------------------------------------------------------------
bool classifier_separability(std::ostream& log) {
    const int dim = 16;
    std::vector<std::string> words;
    std::vector<double> matrix;
    for (int i = 0; i < dim; ++i) {
        for (const char* suffix : {"a", "b"}) {
            words.push_back("p" + std::to_string(i) + suffix);
            for (int j = 0; j < dim; ++j) matrix.push_back(i == j ? 1.0 : 0.0);
        }
    }
    EmbeddingStore store(words, matrix, dim);
    PairDataset data;
    for (int i = 0; i < dim; ++i)
        data.items.push_back({"p" + std::to_string(i) + "a", "p" + std::to_string(i) + "b", true});
    for (int i = 0; i < dim; ++i)
        for (int offset : {1, 2})
            data.items.push_back({"p" + std::to_string(i) + "a",
                                  "p" + std::to_string((i + offset) % dim) + "b", false});

    bool ok = true;
    for (Arch arch : {Arch::Mlp, Arch::SharedMlp, Arch::SharedCosine}) {
        PairClassifier clf(arch, dim, 200);
        clf.init(Rng(42).derive("init"));
        ClassifierOptions options;
        options.hidden = 200;
        options.epochs = 50;
        options.batch = 8;
        options.lr = 0.5;
        options.seed = 42;
        train_classifier(clf, data, {}, store, options);
        const double accuracy = evaluate(clf, data, store).accuracy;
        log << "  " << to_string(arch) << " train accuracy: " << accuracy << "\n";
        ok = ok && accuracy >= 0.99;
    }
    return ok;
}

// ---------------------------------------------------------------------------
// 8. Directional replication at desk scale: on the function-cluster corpus,
//    features-only and joint vectors beat text-only by >= 2 points in every
//    architecture column; cells match the pinned golden report within 0.5.
// ---------------------------------------------------------------------------
bool directional_replication(std::ostream& log) {
    TempDir dir("accept8");
    auto corpus = acceptance::make_function_cluster_corpus({}, Rng(51));
    {
        std::ofstream out(dir.file("corpus.conll"));
        testsupport::write_conll(out, corpus.sentences);
    }
    {
        std::ofstream out(dir.file("positives.tsv"));
        for (const PairItem& item : corpus.positives) out << item.a << '\t' << item.b << "\n";
    }
    const double corpus_mb =
        static_cast<double>(std::filesystem::file_size(dir.file("corpus.conll"))) /
        (1024.0 * 1024.0);
    log << "  corpus: " << corpus.sentences.size() << " sentences, " << corpus_mb << " MB, "
        << corpus.positives.size() << " positive pairs\n";

    std::ostringstream tool_log;
    auto run = [&](std::vector<std::string> args) {
        const int code = run_tool(std::move(args), tool_log);
        if (code != 0) {
            log << "  tool failure (exit " << code << "):\n" << tool_log.str() << "\n";
            throw DataError("pipeline step failed");
        }
    };

    run({"--log-level", "quiet", "build-vocab", "--input", dir.file("corpus.conll"), "--output",
         dir.file("words.vocab"), "--min-count", "5"});
    run({"--log-level", "quiet", "extract-features", "--input", dir.file("corpus.conll"),
         "--vocab", dir.file("words.vocab"), "--pairs-out", dir.file("pairs.tsv"),
         "--feature-vocab-out", dir.file("features.vocab"), "--feature-min-count", "5"});

    const std::vector<std::string> train_common = {
        "--input", dir.file("corpus.conll"), "--vocab",    dir.file("words.vocab"),
        "--dim",   "50",                     "--window",   "3",
        "--negatives", "5",                  "--epochs",   "10",
        "--lr",    "0.05"};
    {
        std::vector<std::string> args = {"--seed", "42", "--log-level", "quiet", "train"};
        args.insert(args.end(), train_common.begin(), train_common.end());
        args.insert(args.end(), {"--mode", "text", "--output", dir.file("text.vec")});
        run(args);
    }
    {
        std::vector<std::string> args = {"--seed", "42", "--log-level", "quiet", "train"};
        args.insert(args.end(), train_common.begin(), train_common.end());
        args.insert(args.end(), {"--mode", "features", "--pairs", dir.file("pairs.tsv"),
                                 "--feature-vocab", dir.file("features.vocab"), "--output",
                                 dir.file("feat.vec")});
        run(args);
    }
    {
        std::vector<std::string> args = {"--seed", "42", "--log-level", "quiet", "train"};
        args.insert(args.end(), train_common.begin(), train_common.end());
        args.insert(args.end(), {"--mode", "joint", "--alpha", "1.0", "--pairs",
                                 dir.file("pairs.tsv"), "--feature-vocab",
                                 dir.file("features.vocab"), "--output", dir.file("joint.vec")});
        run(args);
    }

    dir.write("spec.txt", "pairs = " + dir.file("positives.tsv") + "\n" +
                              "vectors = text:" + dir.file("text.vec") + ", feat:" +
                              dir.file("feat.vec") + ", joint:" + dir.file("joint.vec") + "\n" +
                              "archs = mlp, shared-mlp, shared-cos\n"
                              "split = 0.7,0.15,0.15\n"
                              "negative_ratio = 1\n"
                              "seed = 42\n"
                              "hidden = 200\n"
                              "batch = 32\n"
                              "lr = 0.05\n"
                              "epochs = 50\n"
                              "patience = 5\n");
    run({"--threads", "2", "--log-level", "quiet", "experiment", "--spec", dir.file("spec.txt"),
         "--output", dir.file("report.tsv"), "--no-table"});

    const std::string report_text = slurp(dir.file("report.tsv"));
    log << "  report:\n";
    {
        std::istringstream lines(report_text);
        std::string line;
        while (std::getline(lines, line)) log << "    " << line << "\n";
    }

    std::map<std::string, std::vector<double>> rows;
    {
        std::istringstream parse(report_text);
        std::string line;
        std::getline(parse, line);  // header
        while (std::getline(parse, line)) {
            std::istringstream cells(line);
            std::string name, cell;
            std::getline(cells, name, '\t');
            while (std::getline(cells, cell, '\t')) rows[name].push_back(std::stod(cell));
        }
    }
    if (rows.size() != 3) {
        log << "  expected 3 report rows\n";
        return false;
    }

    bool ok = true;
    for (std::size_t col = 0; col < 3; ++col) {
        const double text_acc = rows["text"][col];
        const double feat_acc = rows["feat"][col];
        const double joint_acc = rows["joint"][col];
        if (feat_acc < text_acc + 2.0 || joint_acc < text_acc + 2.0) {
            log << "  margin violated in column " << col << ": text " << text_acc << ", feat "
                << feat_acc << ", joint " << joint_acc << "\n";
            ok = false;
        }
    }

    const std::string golden_path = fixture("golden_report.tsv");
    if (g_record_golden) {
        std::ofstream golden(golden_path);
        golden << report_text;
        log << "  golden report recorded to " << golden_path << "\n";
        return ok;
    }
    if (!std::filesystem::exists(golden_path)) {
        log << "  missing golden report fixture (" << golden_path << ")\n";
        return false;
    }
    std::map<std::string, std::vector<double>> golden_rows;
    {
        std::istringstream golden_stream(slurp(golden_path));
        std::string line;
        std::getline(golden_stream, line);
        while (std::getline(golden_stream, line)) {
            std::istringstream cells(line);
            std::string name, cell;
            std::getline(cells, name, '\t');
            while (std::getline(cells, cell, '\t')) golden_rows[name].push_back(std::stod(cell));
        }
    }
    for (const auto& [name, cells] : golden_rows) {
        for (std::size_t col = 0; col < cells.size(); ++col) {
            const double drift = std::abs(rows[name][col] - cells[col]);
            if (drift > 0.5) {
                log << "  regression: cell " << name << "[" << col << "] moved " << drift
                    << " points\n";
                ok = false;
            }
        }
    }
    return ok;
}

// ---------------------------------------------------------------------------
// 9. Determinism and round-trips.
// ---------------------------------------------------------------------------
bool determinism_roundtrips(std::ostream& log) {
    TempDir dir("accept9");
    std::ostringstream tool_log;
    bool ok = true;

    // identical seeds give identical model files end to end
    for (const char* name : {"m1.vec", "m2.vec"}) {
        int code = run_tool({"--seed", "5", "--log-level", "quiet", "train", "--input",
                             fixture("golden.conll"), "--min-count", "1", "--mode", "text",
                             "--dim", "12", "--window", "2", "--epochs", "2", "--output",
                             dir.file(name)},
                            tool_log);
        if (code != 0) {
            log << "  train failed\n" << tool_log.str();
            return false;
        }
    }
    if (slurp(dir.file("m1.vec")) != slurp(dir.file("m2.vec"))) {
        log << "  model files differ across identical runs\n";
        ok = false;
    }

    // model save/load round-trip is exact
    EmbeddingStore store = EmbeddingStore::load_file(dir.file("m1.vec"));
    store.save_file(dir.file("m1.roundtrip.vec"));
    if (slurp(dir.file("m1.vec")) != slurp(dir.file("m1.roundtrip.vec"))) {
        log << "  model round-trip not byte-identical\n";
        ok = false;
    }

    // vocabulary round-trip is exact
    {
        std::ifstream in(fixture("golden.conll"));
        Vocabulary vocab = build_vocabulary(parse_conll(in), 1);
        std::ostringstream first;
        vocab.save(first);
        std::istringstream back(first.str());
        Vocabulary reloaded = Vocabulary::load(back);
        std::ostringstream second;
        reloaded.save(second);
        if (first.str() != second.str()) {
            log << "  vocabulary round-trip not byte-identical\n";
            ok = false;
        }
    }

    // splits and negative generation reproduce under the seed
    {
        PairDataset data;
        for (int i = 0; i < 40; ++i)
            data.items.push_back({"a" + std::to_string(i), "b" + std::to_string(i), true});
        SplitDataset s1 = split_dataset(data, {0.7, 0.15, 0.15}, Rng(3));
        SplitDataset s2 = split_dataset(data, {0.7, 0.15, 0.15}, Rng(3));
        if (!(s1.train.items == s2.train.items && s1.dev.items == s2.dev.items &&
              s1.test.items == s2.test.items)) {
            log << "  splits differ across identical seeds\n";
            ok = false;
        }
        auto n1 = generate_negatives(data.items, 1.0, Rng(4));
        auto n2 = generate_negatives(data.items, 1.0, Rng(4));
        if (!(n1 == n2)) {
            log << "  negatives differ across identical seeds\n";
            ok = false;
        }
    }
    if (ok) log << "  model files, round-trips, splits, negatives all reproduce\n";
    return ok;
}

struct Criterion {
    int id;
    std::string name;
    double time_limit_seconds;
    std::function<bool(std::ostream&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    std::string filter;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--record-golden")
            g_record_golden = true;
        else
            filter = arg;
    }

    const std::vector<Criterion> criteria = {
        {1, "extraction oracle on the golden fixture", 1.0, extraction_oracle},
        {2, "finite-difference gradient suites", 30.0, gradient_suites},
        {3, "alpha=0 joint equals text bitwise", 60.0, alpha_zero_equivalence},
        {4, "exact objective non-decreasing over epochs", 60.0, objective_monotonicity},
        {5, "negative-sampling distribution law", 10.0, sampler_law},
        {6, "planted-synonym retrieval", 120.0, planted_synonyms},
        {7, "classifier separability", 60.0, classifier_separability},
        {8, "directional replication at desk scale", 900.0, directional_replication},
        {9, "determinism and round-trips", 60.0, determinism_roundtrips},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        if (!filter.empty() && criterion.name.find(filter) == std::string::npos &&
            std::to_string(criterion.id) != filter)
            continue;
        std::ostringstream detail;
        bool passed = false;
        const auto start = std::chrono::steady_clock::now();
        try {
            passed = criterion.run(detail);
        } catch (const std::exception& e) {
            detail << "  exception: " << e.what() << "\n";
            passed = false;
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > criterion.time_limit_seconds) {
            detail << "  exceeded time limit (" << elapsed << "s > "
                   << criterion.time_limit_seconds << "s)\n";
            passed = false;
        }
        if (!passed) ++failures;
        std::printf("%s criterion %d: %s [%.2fs]\n", passed ? "PASS" : "FAIL", criterion.id,
                    criterion.name.c_str(), elapsed);
        std::fputs(detail.str().c_str(), stdout);
    }
    return failures;
}
